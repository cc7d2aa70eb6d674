"""Cross-checks between the fast algorithms and the exhaustive oracle.

Each suite takes one instance and returns CheckResult rows.  The suites
never share code with the algorithms they audit beyond the core data
types, so a bug has to appear on both routes to slip through.

Setting RESERVE_FRONTIER_INJECT_CORRUPTION=1 deliberately corrupts the
computed frontier before the checks run.  That is the negative control:
a verifier that cannot fail is not verifying anything.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .core import Instance, MatchPoint, Problem, dominates, match_point
from .cycles import apply_cycle, beneficiary_loss, find_minimal_cycle, frontier_walk
from .frontier import (
    Frontier,
    check_frontier_invariants,
    compute_frontier,
    frontier_iteration,
    half_bound_ratio,
)
from .generator import gen_random
from .mechanism import (
    NoNonEmptyMatchingError,
    PriorityOrder,
    ProblemWithOrder,
    dominates_exact_share_matchings,
    rank_sum,
    repair_priority,
    respects_priority,
    select_approx_on_frontier,
)
from .oracle import (
    EnumerationBudget,
    budget_from_env,
    check_disjoint_cycles,
    check_matched_preservation,
    oracle_frontier,
    oracle_min_cycle_loss,
    sample_matchings_at_points,
)
from .core import expand_to_seats

CORRUPTION_ENV = "RESERVE_FRONTIER_INJECT_CORRUPTION"

SUITES = ("frontier", "cycles", "lemmas", "mechanism")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f"  {self.detail}" if self.detail else ""
        return f"{status} {self.suite}:{self.check}{tail}"


def _instance_of(obj: Instance | Problem | ProblemWithOrder) -> Instance:
    if isinstance(obj, ProblemWithOrder):
        return obj.problem.instance
    if isinstance(obj, Problem):
        return obj.instance
    return obj


def _maybe_corrupt(f: Frontier) -> Frontier:
    if os.environ.get(CORRUPTION_ENV) != "1":
        return f
    pts = list(f.points)
    if len(pts) >= 2:
        # lift the second point's b up to the first's: it now dominates
        pts[1] = MatchPoint(pts[1].e, pts[0].b)
    else:
        pts.append(MatchPoint(pts[0].e + 1, pts[0].b))
    keep = set(pts)
    return Frontier(
        points=tuple(pts),
        kinks=frozenset(k for k in f.kinks if k in keep),
        witnesses={p: m for p, m in f.witnesses.items() if p in keep},
    )


def verify_frontier(obj, budget: EnumerationBudget | None = None) -> list[CheckResult]:
    """Computed frontier == enumerated frontier, plus its shape invariants."""
    budget = budget or budget_from_env()
    si = expand_to_seats(_instance_of(obj))
    results: list[CheckResult] = []
    f = _maybe_corrupt(compute_frontier(si))

    bad = [
        (p, q)
        for i, p in enumerate(f.points)
        for q in f.points[i + 1 :]
        if dominates(p, q) or dominates(q, p)
    ]
    results.append(
        CheckResult(
            "frontier",
            "mutual-non-domination",
            not bad,
            "" if not bad else f"{bad[0][1]} dominates {bad[0][0]}",
        )
    )

    try:
        check_frontier_invariants(f)
        results.append(CheckResult("frontier", "shape-invariants", True))
    except Exception as exc:  # report, do not abort the suite
        results.append(CheckResult("frontier", "shape-invariants", False, str(exc)))

    oracle = oracle_frontier(si, budget)
    same = f.points == oracle.points
    results.append(
        CheckResult(
            "frontier",
            "matches-exhaustive-enumeration",
            same,
            "" if same else f"fast={list(f.points)} oracle={list(oracle.points)}",
        )
    )
    same_kinks = f.kinks == oracle.kinks
    results.append(
        CheckResult(
            "frontier",
            "kinks-match",
            same_kinks,
            "" if same_kinks else f"fast={list(f.kinks)} oracle={list(oracle.kinks)}",
        )
    )

    wit_ok = all(match_point(si, m) == pt for pt, m in f.witnesses.items())
    results.append(CheckResult("frontier", "witnesses-score-their-points", wit_ok))

    if f.e_max:
        ratio = half_bound_ratio(f)
        results.append(
            CheckResult(
                "frontier",
                "range-at-most-half",
                ratio <= Fraction(1, 2),
                f"ratio={ratio}",
            )
        )
    return results


def verify_cycles(obj, budget: EnumerationBudget | None = None) -> list[CheckResult]:
    """Minimal reassignment cycles agree with exhaustive cycle search."""
    budget = budget or budget_from_env()
    si = expand_to_seats(_instance_of(obj))
    results: list[CheckResult] = []
    f = compute_frontier(si)

    if si.source.total_quota == 0 or f.e_max == 0:
        results.append(CheckResult("cycles", "walk-covers-frontier", True, "empty frontier"))
        return results

    start_pt = f.points[0]
    walk = frontier_walk(si, f.witnesses[start_pt])
    walk_pts = [pt for pt, _ in walk]
    covered = walk_pts == list(f.points)
    results.append(
        CheckResult(
            "cycles",
            "walk-covers-frontier",
            covered,
            "" if covered else f"walk={walk_pts} frontier={list(f.points)}",
        )
    )

    samples, mode = sample_matchings_at_points(si, f.points, budget)
    min_ok = True
    detail = f"mode={mode}"
    for pt in f.points:
        for m in samples.get(pt, ()):
            cyc = find_minimal_cycle(si, m)
            want = oracle_min_cycle_loss(si, m, budget)
            if cyc is None:
                if want is not None:
                    min_ok, detail = False, f"missed a cycle at {pt}"
                    break
                if pt != f.points[-1]:
                    min_ok, detail = False, f"no cycle before the max-size point {pt}"
                    break
                continue
            got = beneficiary_loss(si, m, cyc)
            if want is None or got != want:
                min_ok, detail = False, f"loss {got} vs exhaustive {want} at {pt}"
                break
            nxt = match_point(si, apply_cycle(si, m, cyc))
            if nxt not in set(f.points):
                min_ok, detail = False, f"cheapest cycle from {pt} landed off the frontier at {nxt}"
                break
        if not min_ok:
            break
    results.append(CheckResult("cycles", "minimal-loss-matches-exhaustive", min_ok, detail))
    return results


def verify_lemmas(obj, budget: EnumerationBudget | None = None) -> list[CheckResult]:
    """Structural facts: disjoint cycle families, matched-set preservation, kink sweep."""
    budget = budget or budget_from_env()
    si = expand_to_seats(_instance_of(obj))
    results: list[CheckResult] = []

    rep = check_disjoint_cycles(si, budget)
    results.append(
        CheckResult(
            "lemmas",
            "gaps-split-into-disjoint-cycles",
            rep.ok,
            f"pairs={rep.pairs_checked} witnesses={rep.witnesses_checked} mode={rep.mode}"
            + ("" if rep.ok else f" first failure: {rep.failures[0]}"),
        )
    )

    rep2 = check_matched_preservation(si, budget)
    results.append(
        CheckResult(
            "lemmas",
            "matched-sets-extend-along-frontier",
            rep2.ok,
            f"pairs={rep2.pairs_checked} mode={rep2.mode}"
            + ("" if rep2.ok else f" first failure: {rep2.failures[0]}"),
        )
    )

    f = compute_frontier(si)
    ok = True
    detail = ""
    if f.e_max:
        n = max(len(si.patients), len(si.seats))
        pts = list(f.points)
        for i, pt in enumerate(pts):
            if pt not in f.kinks:
                continue
            if i + 1 < len(pts):
                k = pts[i].b - pts[i + 1].b if i else 1
                k = max(k, 1)
            else:
                k = n
            got, _ = frontier_iteration(si, min(k, n))
            if got != pt:
                ok, detail = False, f"sweep weight {k} gave {got}, expected {pt}"
                break
    results.append(CheckResult("lemmas", "kinks-surface-at-their-tradeoff-weight", ok, detail))
    return results


def _targets_for(problem: Problem | None, f: Frontier, seed: int) -> list[Fraction]:
    targets = [problem.beta_star] if problem is not None else []
    rng = Random(seed)
    for _ in range(5):
        targets.append(Fraction(rng.randrange(0, 11), 10))
    # hit exact frontier shares too: those exercise the equality branch
    for pt in f.points[:3]:
        if pt.e:
            targets.append(Fraction(pt.b, pt.e))
    return targets


def verify_mechanism(obj, budget: EnumerationBudget | None = None, seed: int = 0) -> list[CheckResult]:
    """Selection rule, share guarantee, domination of exact-share rivals, repair."""
    budget = budget or budget_from_env()
    inst = _instance_of(obj)
    given = obj.problem if isinstance(obj, ProblemWithOrder) else (obj if isinstance(obj, Problem) else None)
    si = expand_to_seats(inst)
    f = compute_frontier(si)
    results: list[CheckResult] = []

    if f.e_max == 0:
        ok = True
        try:
            select_approx_on_frontier(Problem(instance=inst, beta_star=Fraction(1, 2)))
            ok = False
        except NoNonEmptyMatchingError:
            pass
        results.append(CheckResult("mechanism", "empty-instance-refused", ok))
        return results

    shares = [Fraction(pt.b, pt.e) for pt in f.points]
    mono = all(a > b for a, b in zip(shares, shares[1:]))
    results.append(CheckResult("mechanism", "share-falls-strictly-along-frontier", mono))

    sel_ok = True
    detail = ""
    for beta in _targets_for(given, f, seed):
        pr = Problem(instance=inst, beta_star=beta)
        m, pt = select_approx_on_frontier(pr)
        if match_point(si, m) != pt or pt not in f.points:
            sel_ok, detail = False, f"witness off the frontier at target {beta}"
            break
        qualifying = [p for p in f.points if Fraction(p.b, p.e) >= beta]
        want = qualifying[-1] if qualifying else f.points[0]
        if pt != want:
            sel_ok, detail = False, f"picked {pt}, expected {want} at target {beta}"
            break
        if Fraction(pt.b, pt.e) != beta:
            rep = dominates_exact_share_matchings(pr, pt, budget)
            if not rep.ok:
                sel_ok, detail = False, f"exact-share rival undominated: {rep.failures[0]}"
                break
    results.append(CheckResult("mechanism", "selection-rule-and-exact-share-domination", sel_ok, detail))

    prio = obj.priority if isinstance(obj, ProblemWithOrder) else PriorityOrder.from_tiers(inst)
    pr = given or Problem(instance=inst, beta_star=Fraction(1, 2))
    pwo = ProblemWithOrder(problem=pr, priority=prio)
    m, pt = select_approx_on_frontier(pr)
    fixed = repair_priority(pwo, m)
    rep_ok = (
        match_point(si, fixed) == pt
        and not respects_priority(pwo, fixed)
        and rank_sum(pwo, fixed) <= rank_sum(pwo, m)
    )
    results.append(
        CheckResult(
            "mechanism",
            "priority-repair-keeps-the-point",
            rep_ok,
            f"violations before={len(respects_priority(pwo, m))}",
        )
    )
    return results


SUITE_FUNCS = {
    "frontier": verify_frontier,
    "cycles": verify_cycles,
    "lemmas": verify_lemmas,
    "mechanism": verify_mechanism,
}


def run_suites(obj, suites: tuple[str, ...], budget: EnumerationBudget | None = None) -> list[CheckResult]:
    out: list[CheckResult] = []
    for name in suites:
        out.extend(SUITE_FUNCS[name](obj, budget))
    return out


def random_inputs(params: dict[str, str]) -> list[Instance]:
    """Instances from key=value tokens: patients= categories= seed= count= quota= elig= bene=."""
    from .generator import GenConfig

    patients = int(params.get("patients", "6"))
    categories = int(params.get("categories", "5"))
    seed = int(params.get("seed", "0"))
    count = int(params.get("count", "1"))
    lo, _, hi = params.get("quota", "1:1").partition(":")
    quota_range = (int(lo), int(hi or lo))
    elig = float(params.get("elig", "0.5"))
    bene = float(params.get("bene", "0.5"))
    return [
        gen_random(
            GenConfig(
                patients=patients,
                categories=categories,
                quota_range=quota_range,
                eligibility_density=elig,
                beneficiary_density=bene,
                seed=seed + i,
            )
        )
        for i in range(count)
    ]
