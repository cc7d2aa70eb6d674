from __future__ import annotations

from random import Random

import pytest

from reserve_frontier import (
    BudgetExceededError,
    EnumerationBudget,
    GenConfig,
    Matching,
    MatchPoint,
    count_matchings,
    dominates,
    enumerate_matchings,
    expand_to_seats,
    gen_named,
    gen_random,
    match_point,
    matchings_at_point,
    oracle_frontier,
    oracle_min_cycle_loss,
    sample_matchings_at_points,
    validate_matching,
)
from reserve_frontier.oracle import budget_from_env


def count_by_seats(si) -> int:
    # independent route: recurse over seats instead of patients
    seats = list(si.seats)

    def rec(j: int, used: frozenset) -> int:
        if j == len(seats):
            return 1
        total = rec(j + 1, used)
        for p in si.eligible_of(seats[j]):
            if p not in used:
                total += rec(j + 1, used | {p})
        return total

    return rec(0, frozenset())


def test_conflict_has_five_matchings():
    si = expand_to_seats(gen_named("conflict"))
    assert count_matchings(si) == 5
    ms = list(enumerate_matchings(si))
    assert len(ms) == 5
    assert len(set(ms)) == 5
    assert Matching.empty() in ms
    for m in ms:
        validate_matching(si, m)


def test_count_agrees_with_seat_axis_recursion():
    rng = Random(23)
    for _ in range(25):
        inst = gen_random(
            GenConfig(
                patients=rng.randint(0, 6),
                categories=rng.randint(1, 4),
                quota_range=(1, 2),
                eligibility_density=rng.choice([0.3, 0.6, 0.9]),
                seed=rng.randint(0, 10_000),
            )
        )
        si = expand_to_seats(inst)
        assert count_matchings(si) == count_by_seats(si)


def test_oracle_frontier_on_named_instances():
    assert list(oracle_frontier(expand_to_seats(gen_named("conflict"))).points) == [
        MatchPoint(1, 1),
        MatchPoint(2, 0),
    ]
    assert list(oracle_frontier(expand_to_seats(gen_named("figure1"))).points) == [MatchPoint(3, 0)]
    pi = gen_named("path-independence").instance
    assert list(oracle_frontier(expand_to_seats(pi)).points) == [MatchPoint(4, 2), MatchPoint(5, 1)]


def test_oracle_frontier_points_dominate_everything():
    inst = gen_random(GenConfig(patients=5, categories=3, quota_range=(1, 2), seed=99))
    si = expand_to_seats(inst)
    f = oracle_frontier(si)
    pts = set(f.points)
    for m in enumerate_matchings(si):
        pt = match_point(si, m)
        assert pt in pts or any(dominates(q, pt) for q in pts)


def test_empty_instance_oracle():
    inst = gen_random(GenConfig(patients=0, categories=2, seed=0))
    si = expand_to_seats(inst)
    f = oracle_frontier(si)
    assert list(f.points) == [MatchPoint(0, 0)]
    assert count_matchings(si) == 1


def test_budget_rejects_large_instances():
    inst = gen_random(GenConfig(patients=8, categories=3, seed=1))
    si = expand_to_seats(inst)
    with pytest.raises(BudgetExceededError):
        count_matchings(si)  # default allows at most 7 patients
    small = expand_to_seats(gen_random(GenConfig(patients=5, categories=5, eligibility_density=1.0, seed=1)))
    with pytest.raises(BudgetExceededError):
        count_matchings(small, EnumerationBudget(max_states=10))


def test_budget_env_override(monkeypatch):
    monkeypatch.delenv("RESERVE_FRONTIER_ORACLE_BUDGET", raising=False)
    assert budget_from_env() == EnumerationBudget()
    monkeypatch.setenv("RESERVE_FRONTIER_ORACLE_BUDGET", "3,4,100")
    assert budget_from_env() == EnumerationBudget(3, 4, 100)
    monkeypatch.setenv("RESERVE_FRONTIER_ORACLE_BUDGET", "3,4")
    with pytest.raises(ValueError):
        budget_from_env()


def test_matchings_at_point_and_sampling():
    si = expand_to_seats(gen_named("conflict"))
    at_11 = matchings_at_point(si, MatchPoint(1, 1))
    assert at_11 == [Matching(pairs=(("p1", "c2#0"),))]
    f = oracle_frontier(si)
    samples, mode = sample_matchings_at_points(si, f.points)
    assert mode == "exhaustive"
    for pt, ms in samples.items():
        assert ms
        for m in ms:
            validate_matching(si, m)
            assert match_point(si, m) == pt


def test_sampling_caps_and_stays_deterministic():
    inst = gen_random(GenConfig(patients=6, categories=6, eligibility_density=0.9, seed=4))
    si = expand_to_seats(inst)
    f = oracle_frontier(si)
    a, mode_a = sample_matchings_at_points(si, f.points, cap=3, seed=9)
    b, mode_b = sample_matchings_at_points(si, f.points, cap=3, seed=9)
    assert a == b and mode_a == mode_b
    assert all(len(ms) <= 3 for ms in a.values())


def test_min_cycle_loss_on_conflict():
    si = expand_to_seats(gen_named("conflict"))
    best = Matching(pairs=(("p1", "c2#0"),))  # the (1,1) matching
    assert oracle_min_cycle_loss(si, best) == 1
    full = Matching(pairs=(("p1", "c1#0"), ("p2", "c2#0")))  # (2,0): nothing larger
    assert oracle_min_cycle_loss(si, full) is None
