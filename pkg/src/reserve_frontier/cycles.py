"""Trade-off cycles between total and beneficiary matches.

For a matching m, the associated graph has an edge p -> s when p is
eligible for s and not already seated there, and an edge s -> p when s is
m's seat for p, or when s and p are both unmatched.  An applicable cycle
(p1, s1, ..., pk, sk) starts at an unmatched patient, ends at an unmatched
seat, and passes only through matched pairs in between; applying it seats
every p_i at s_i, raising the total match count by exactly one at some
beneficiary-match cost.  The cheapest applicable cycle steps from one
frontier point to the next, so walking cheapest cycles from the
max-beneficiary endpoint materializes a witness matching at every frontier
point.

Cheapest-cycle search runs Bellman-Ford over (cost, hops) pairs, where an
alternating path's cost is exactly the beneficiary loss of the cycle it
closes.  Costs can be negative on a dominated input; a negative-cost cycle
is reported as such rather than looped over (lexicographic (cost, hops)
relaxation converges in V-1 rounds otherwise, since zero-cost loops only
add hops).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Matching, MatchPoint, SeatInstance, match_point

INF = 10**9


class CycleError(ValueError):
    """A cycle is not applicable in the given matching's associated graph."""


class DominatedInputError(ValueError):
    """The input matching is detectably dominated (non-positive-loss cycle)."""


@dataclass(frozen=True)
class AssociatedGraph:
    """Directed bipartite graph over patients and seats for one matching."""

    patient_edges: dict[str, tuple[str, ...]]
    seat_edges: dict[str, tuple[str, ...]]


def build_associated_graph(si: SeatInstance, m: Matching) -> AssociatedGraph:
    unmatched_patients = tuple(p for p in si.patients if m.seat_of(p) is None)
    patient_edges = {
        p: tuple(s for s in si.seats if p in si.eligible_of(s) and m.seat_of(p) != s)
        for p in si.patients
    }
    seat_edges: dict[str, tuple[str, ...]] = {}
    for s in si.seats:
        holder = m.patient_of(s)
        seat_edges[s] = (holder,) if holder is not None else unmatched_patients
    return AssociatedGraph(patient_edges=patient_edges, seat_edges=seat_edges)


@dataclass(frozen=True)
class Cycle:
    """Alternating sequence (p1, s1, ..., pk, sk) closing back to p1."""

    patients: tuple[str, ...]
    seats: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "patients", tuple(self.patients))
        object.__setattr__(self, "seats", tuple(self.seats))
        if len(self.patients) != len(self.seats) or not self.patients:
            raise CycleError("cycle must alternate equal numbers of patients and seats")
        if len(set(self.patients)) != len(self.patients) or len(set(self.seats)) != len(self.seats):
            raise CycleError("cycle vertices must be distinct")

    def __len__(self) -> int:
        return len(self.patients)


def check_applicable(si: SeatInstance, m: Matching, c: Cycle) -> None:
    """Raise CycleError unless c is an applicable cycle in the graph of m."""
    p1, last_seat = c.patients[0], c.seats[-1]
    if m.seat_of(p1) is not None:
        raise CycleError(f"cycle not applicable: patient {p1} is matched")
    if m.patient_of(last_seat) is not None:
        raise CycleError(f"cycle not applicable: seat {last_seat} is filled")
    for p, s in zip(c.patients, c.seats):
        if s not in si.seat_index:
            raise CycleError(f"cycle not applicable: unknown seat {s}")
        if p not in si.eligible_of(s):
            raise CycleError(f"cycle not applicable: {p} not eligible for {s}")
        if m.seat_of(p) == s:
            raise CycleError(f"cycle not applicable: {p} already seated at {s}")
    for k in range(len(c) - 1):
        holder = m.patient_of(c.seats[k])
        if holder != c.patients[k + 1]:
            raise CycleError(
                f"cycle not applicable: seat {c.seats[k]} does not hold {c.patients[k + 1]}"
            )


def apply_cycle(si: SeatInstance, m: Matching, c: Cycle) -> Matching:
    """Seat every cycle patient at its cycle seat; everyone else stays put."""
    check_applicable(si, m, c)
    assignment = dict(m.by_patient)
    for p, s in zip(c.patients, c.seats):
        assignment[p] = s
    out = Matching.from_assignment(assignment)
    if len(out) != len(m) + 1:
        raise CycleError("cycle application must add exactly one match")
    return out


def beneficiary_loss(si: SeatInstance, m: Matching, c: Cycle) -> int:
    """Drop in beneficiary matches caused by applying c to m."""
    return match_point(si, m).b - match_point(si, apply_cycle(si, m, c)).b


def find_minimal_cycle(si: SeatInstance, m: Matching) -> Cycle | None:
    """Applicable cycle of minimum beneficiary loss, or None if none exists.

    Ties break by unmatched-patient order, then unmatched-seat order, then
    path length, so the result is deterministic.  Raises DominatedInputError
    when the cheapest loss is not positive or a negative-cost loop exists;
    either certifies the input matching is dominated.
    """
    n_p, n_s = len(si.patients), len(si.seats)
    seat_of = [-1] * n_p
    patient_of = [-1] * n_s
    for p, s in m.pairs:
        i, j = si.patient_index[p], si.seat_index[s]
        seat_of[i] = j
        patient_of[j] = i
    elig = si.eligible_seats
    bene = si.beneficiary_seat_sets
    # Cost of moving patient i to seat j: loses their current beneficiary
    # match (if any), gains one if j makes them a beneficiary.
    cur_bene = [
        1 if seat_of[i] != -1 and seat_of[i] in bene[i] else 0 for i in range(n_p)
    ]
    starts = [i for i in range(n_p) if seat_of[i] == -1 and elig[i]]
    targets = [j for j in range(n_s) if patient_of[j] == -1]
    if not starts or not targets:
        return None

    n_nodes = n_p + n_s  # patient i -> node i, seat j -> node n_p + j
    best_key: tuple[int, int, int, int] | None = None
    best_path: list[int] | None = None

    for start_rank, start in enumerate(starts):
        cost = [INF] * n_nodes
        hops = [INF] * n_nodes
        cost[start] = 0
        hops[start] = 0
        rounds = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            if rounds > n_nodes:
                raise DominatedInputError(
                    "dominated input: negative-loss reassignment loop detected"
                )
            for i in range(n_p):
                if cost[i] == INF:
                    continue
                for j in elig[i]:
                    if j == seat_of[i]:
                        continue
                    w = cur_bene[i] - (1 if j in bene[i] else 0)
                    cand = (cost[i] + w, hops[i] + 1)
                    if cand < (cost[n_p + j], hops[n_p + j]):
                        cost[n_p + j], hops[n_p + j] = cand
                        changed = True
            for j in range(n_s):
                u = n_p + j
                if cost[u] == INF or patient_of[j] == -1:
                    continue
                v = patient_of[j]
                cand = (cost[u], hops[u] + 1)
                if cand < (cost[v], hops[v]):
                    cost[v], hops[v] = cand
                    changed = True

        for seat_rank, t in enumerate(targets):
            u = n_p + t
            if cost[u] == INF:
                continue
            key = (cost[u], start_rank, seat_rank, hops[u])
            if best_key is None or key < best_key:
                best_key = key
                best_path = _trace_back(
                    start, u, cost, hops, n_p, elig, bene, seat_of, patient_of, cur_bene
                )

    if best_path is None:
        return None
    cycle = Cycle(patients=tuple(si.patients[i] for i in best_path[0::2]),
                  seats=tuple(si.seats[j - n_p] for j in best_path[1::2]))
    delta = beneficiary_loss(si, m, cycle)
    if delta != best_key[0]:
        raise RuntimeError("cycle cost disagrees with its beneficiary loss")
    if delta <= 0:
        raise DominatedInputError(
            f"dominated input: applicable cycle with beneficiary loss {delta}"
        )
    return cycle


def _trace_back(start, target, cost, hops, n_p, elig, bene, seat_of, patient_of, cur_bene):
    """Walk predecessors from target back to start by decrementing hop layers."""
    path = [target]
    node = target
    while node != start:
        if node >= n_p:
            j = node - n_p
            found = None
            for i in range(n_p):
                if cost[i] == INF or j == seat_of[i] or j not in elig[i]:
                    continue
                w = cur_bene[i] - (1 if j in bene[i] else 0)
                if cost[i] + w == cost[node] and hops[i] + 1 == hops[node]:
                    found = i
                    break
            if found is None:
                raise RuntimeError("path reconstruction lost its predecessor")
            node = found
        else:
            j = seat_of[node]
            u = n_p + j
            if j == -1 or not (cost[u] == cost[node] and hops[u] + 1 == hops[node]):
                raise RuntimeError("path reconstruction lost its predecessor")
            node = u
        path.append(node)
    path.reverse()
    return path


def frontier_walk(si: SeatInstance, start: Matching) -> list[tuple[MatchPoint, Matching]]:
    """Apply cheapest cycles until none remain, recording every stop.

    Started from a max-beneficiary-then-max-total matching this visits every
    frontier point in order.  Raises DominatedInputError if the walk betrays
    a dominated input (non-positive loss, or losses that shrink along the
    way, which a frontier matching can never produce).
    """
    out = [(match_point(si, start), start)]
    current = start
    prev_loss = None
    while True:
        cycle = find_minimal_cycle(si, current)
        if cycle is None:
            return out
        loss = beneficiary_loss(si, current, cycle)
        if prev_loss is not None and loss < prev_loss:
            raise DominatedInputError(
                "dominated input: beneficiary loss decreased along the walk"
            )
        prev_loss = loss
        current = apply_cycle(si, current, cycle)
        out.append((match_point(si, current), current))
