#!/usr/bin/env python3
"""The induced choice rule is not substitutable, and no tie-break saves it.

Running the selection rule on a patient subset X defines a choice rule
C(X).  Substitutability demands C(X) keep every patient it chose from a
larger pool; here removing p6 makes the rule drop a previously chosen
patient.  Enumerating every optimal matching on the subset shows the
failure is structural: no admissible tie-breaking avoids it.
"""

from reserve_frontier import (
    Problem,
    audit_path_independence,
    audit_substitutability,
    expand_to_seats,
    gen_named,
    induce_choice,
    matchings_at_point,
    restrict_patients,
    select_approx_on_frontier,
)

pr = gen_named("path-independence")
full = frozenset(pr.instance.patients)
x = frozenset({"p1", "p2", "p3", "p4", "p5"})

cp = induce_choice(pr, full).chosen
cx = induce_choice(pr, x).chosen
print("C(P)          =", sorted(cp))
print("C(X), no p6   =", sorted(cx))
kept = cp & x
print("C(P) cap X    =", sorted(kept), " contained in C(X)?", kept <= cx)

subs = audit_substitutability(pr)
pi = audit_path_independence(pr)
print(f"\naudits: {len(subs)} substitutability and {len(pi)} "
      f"path-independence violation(s)")
worst = next(v for v in subs if v.x == full and v.x_prime == x)
print("example: chose", sorted(worst.lhs), "from the full pool but only",
      sorted(worst.rhs), "from the subset")

# every optimal matching on X is an admissible C(X); none keeps all of kept
sub = restrict_patients(pr.instance, x)
_, pt = select_approx_on_frontier(Problem(instance=sub, beta_star=pr.beta_star))
options = {m.matched_patients for m in matchings_at_point(expand_to_seats(sub), pt)}
print(f"\nadmissible C(X) tie-breaks at {tuple(pt)}:")
for s in sorted(options, key=sorted):
    print("  ", sorted(s), "misses", sorted(kept - s))
assert all(not kept <= s for s in options)
