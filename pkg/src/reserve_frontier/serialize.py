"""Instance files and frontier reports.

Instance schema (JSON):

    {
      "categories": [
        {"id": "c1", "quota": 1, "eligible": ["p1"], "beneficiary": []}
      ],
      "patients": ["p1", "p2"],
      "beta_star": "7/10",                # optional; "0.7" and 0.7 also accepted
      "priority": {"c1": ["p1", "p2"]}    # optional; requires beta_star
    }

Shares stay exact end to end: "num/den" strings are the canonical output
form, decimal inputs are converted through their decimal literal (0.7
becomes 7/10, never the nearest binary float).  Matchings serialize at the
category level (patient -> category); unit seats are an internal device.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from typing import IO, Any, Mapping

from .core import (
    Instance,
    Matching,
    MatchPoint,
    Problem,
    SeatInstance,
    beneficiary_share,
    match_point,
    validate_instance,
)
from .frontier import Frontier
from .mechanism import PriorityOrder, ProblemWithOrder, validate_priority

ParsedInput = Instance | Problem | ProblemWithOrder


def parse_share(value: Any) -> Fraction:
    """Exact fraction from "num/den", decimal string, int, or float literal."""
    if isinstance(value, bool):
        raise ValueError("beta_star must be a number or fraction string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot parse share from {value!r}")


def share_str(beta: Fraction) -> str:
    return f"{beta.numerator}/{beta.denominator}"


def parse_instance(data: Mapping[str, Any]) -> ParsedInput:
    """Validated Instance, Problem, or ProblemWithOrder from a JSON document."""
    for field in ("categories", "patients"):
        if field not in data:
            raise ValueError(f"instance file is missing the '{field}' field")
    categories = []
    quota: dict[str, int] = {}
    eligible: dict[str, frozenset[str]] = {}
    beneficiary: dict[str, frozenset[str]] = {}
    for entry in data["categories"]:
        if "id" not in entry or "quota" not in entry:
            raise ValueError("each category needs an 'id' and a 'quota'")
        c = entry["id"]
        categories.append(c)
        quota[c] = entry["quota"]
        eligible[c] = frozenset(entry.get("eligible", ()))
        beneficiary[c] = frozenset(entry.get("beneficiary", ()))
    inst = validate_instance(
        Instance(
            categories=tuple(categories),
            patients=tuple(data["patients"]),
            quota=quota,
            eligible=eligible,
            beneficiary=beneficiary,
        )
    )
    beta = data.get("beta_star")
    priority = data.get("priority")
    if beta is None:
        if priority is not None:
            raise ValueError("a priority block requires beta_star")
        return inst
    problem = Problem(instance=inst, beta_star=parse_share(beta))
    if priority is None:
        return problem
    po = validate_priority(
        inst, PriorityOrder(order={c: tuple(ps) for c, ps in priority.items()})
    )
    return ProblemWithOrder(problem=problem, priority=po)


def parse_instance_file(path: str) -> ParsedInput:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_instance(json.load(fp))


def emit_instance(obj: ParsedInput) -> dict[str, Any]:
    """JSON-ready document; parse_instance(emit_instance(x)) == x."""
    if isinstance(obj, ProblemWithOrder):
        inst = obj.problem.instance
    elif isinstance(obj, Problem):
        inst = obj.instance
    else:
        inst = obj
    doc: dict[str, Any] = {
        "categories": [
            {
                "id": c,
                "quota": inst.quota[c],
                "eligible": sorted(inst.eligible_of(c)),
                "beneficiary": sorted(inst.beneficiary_of(c)),
            }
            for c in inst.categories
        ],
        "patients": list(inst.patients),
    }
    if isinstance(obj, (Problem, ProblemWithOrder)):
        problem = obj.problem if isinstance(obj, ProblemWithOrder) else obj
        doc["beta_star"] = share_str(problem.beta_star)
    if isinstance(obj, ProblemWithOrder):
        doc["priority"] = {c: list(ps) for c, ps in sorted(obj.priority.order.items())}
    return doc


def instance_to_json(obj: ParsedInput) -> str:
    return json.dumps(emit_instance(obj), indent=2, sort_keys=True) + "\n"


def matching_to_assignment(si: SeatInstance, m: Matching) -> dict[str, str]:
    """Category-level view of a matching (seats are internal)."""
    return {p: si.category_of(s) for p, s in m.pairs}


def matching_to_dict(si: SeatInstance, m: Matching) -> dict[str, Any]:
    pt = match_point(si, m)
    return {
        "assignment": dict(sorted(matching_to_assignment(si, m).items())),
        "e": pt.e,
        "b": pt.b,
        "beta": share_str(beneficiary_share(pt)) if pt.e else None,
    }


def write_frontier_csv(f: Frontier, fp: IO[str]) -> None:
    """Rows e,b,beta_num,beta_den,is_kink ascending in e; beta blank at e=0."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["e", "b", "beta_num", "beta_den", "is_kink"])
    for pt in f.points:
        if pt.e:
            beta = beneficiary_share(pt)
            num, den = beta.numerator, beta.denominator
        else:
            num = den = ""
        writer.writerow([pt.e, pt.b, num, den, 1 if pt in f.kinks else 0])


def frontier_to_dict(
    f: Frontier, si: SeatInstance | None = None, witnesses: bool = False
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "points": [
            {
                "e": pt.e,
                "b": pt.b,
                "beta": share_str(beneficiary_share(pt)) if pt.e else None,
                "is_kink": pt in f.kinks,
            }
            for pt in f.points
        ]
    }
    if witnesses:
        if si is None:
            raise ValueError("witness output needs the seat instance")
        doc["witnesses"] = [
            {"e": pt.e, "b": pt.b, **matching_to_dict(si, f.witnesses[pt])}
            for pt in f.points
            if pt in f.witnesses
        ]
    return doc


def frontier_to_json(f: Frontier, si: SeatInstance | None = None, witnesses: bool = False) -> str:
    return json.dumps(frontier_to_dict(f, si, witnesses), indent=2, sort_keys=True) + "\n"
