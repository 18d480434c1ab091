"""Neighbourhood link heuristics and their relation to zero-one labeled 1-WL."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .graph import Graph
from .labeling import zero_one
from .wl import ColorInterner, refine_batch


class HeuristicDomainError(ValueError):
    """Raised when a heuristic is undefined for the given pair."""


@dataclass(frozen=True)
class HeuristicScore:
    name: str
    value: float

    def __float__(self):
        return float(self.value)


def _check_pair(g: Graph, i: int, j: int) -> None:
    if i == j:
        raise HeuristicDomainError("heuristics need two distinct nodes")
    for v in (i, j):
        if not 1 <= v <= g.n:
            raise HeuristicDomainError(f"node {v} is not in the graph")


def _common(g: Graph, i: int, j: int) -> set:
    return set(g.neighbors(i)) & set(g.neighbors(j))


def common_neighbors(g: Graph, i: int, j: int) -> int:
    """``|N(i) ∩ N(j)|``, using out-neighbourhoods on directed graphs."""
    _check_pair(g, i, j)
    return len(_common(g, i, j))


def resource_allocation(g: Graph, i: int, j: int) -> HeuristicScore:
    _check_pair(g, i, j)
    value = sum((Fraction(1, g.degree(v)) for v in _common(g, i, j)), Fraction(0))
    return HeuristicScore("ra", value)


def adamic_adar(g: Graph, i: int, j: int) -> HeuristicScore:
    """Sum of ``1 / ln(deg v)`` over common neighbours; degree-1 neighbours are a domain error."""
    _check_pair(g, i, j)
    total = 0.0
    for v in sorted(_common(g, i, j)):
        d = g.degree(v)
        if d < 2:
            raise HeuristicDomainError(f"common neighbour {v} has degree {d}; log({d}) is not positive")
        total += 1.0 / math.log(d)
    return HeuristicScore("aa", total)


def scores(g: Graph, i: int, j: int) -> dict:
    """CN, AA and RA for one pair (AA is ``nan`` when undefined)."""
    try:
        aa = adamic_adar(g, i, j).value
    except HeuristicDomainError:
        aa = math.nan
    return {"cn": common_neighbors(g, i, j), "aa": aa,
            "ra": resource_allocation(g, i, j).value}


@dataclass
class RefinementCheckReport:
    pairs: int
    pair_pairs: int
    labeled_equal: int = 0
    violations: list = field(default_factory=list)
    failure_witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"pairs": self.pairs, "pair_pairs": self.pair_pairs,
                "labeled_equal": self.labeled_equal, "violations": self.violations[:20],
                "failure_witnesses": self.failure_witnesses[:20]}


def _close(a: float, b: float) -> bool:
    if isinstance(a, float) and math.isnan(a):
        return isinstance(b, float) and math.isnan(b)
    return math.isclose(float(a), float(b), rel_tol=1e-12, abs_tol=1e-12)


def heuristic_refinement_check(g: Graph, pairs: Iterable[Sequence[int]], h: int = 3,
                               max_witnesses: int = 20) -> RefinementCheckReport:
    """Check that zero-one labeled WL colours determine CN, AA and RA.

    Every pair is labeled and refined for ``h`` rounds with one shared colour
    table; the representation of a pair is the multiset of its two colours.
    Pairs with equal representations must have equal heuristics.  Pairs
    whose unlabeled node colours agree but whose CN differs are collected as
    witnesses that plain aggregation cannot express CN.
    """
    if h < 2:
        raise ValueError("labeled WL needs at least two rounds to see common neighbours")
    pairs = [tuple(p) for p in pairs]
    interner = ColorInterner()
    reps = {}
    for i, j in pairs:
        hist = interner.refine(g, zero_one({i, j}, g), rounds=h)
        reps[(i, j)] = tuple(sorted((hist[-1][i - 1], hist[-1][j - 1])))
    plain = refine_batch([g], None, h)[0]
    report = RefinementCheckReport(len(pairs), len(pairs) * (len(pairs) - 1) // 2)
    heur = {p: scores(g, *p) for p in pairs}
    groups = defaultdict(list)
    for p in pairs:
        groups[reps[p]].append(p)
    for members in groups.values():
        report.labeled_equal += len(members) * (len(members) - 1) // 2
        for a, b in combinations(members, 2):
            for key in ("cn", "aa", "ra"):
                if not _close(heur[a][key], heur[b][key]):
                    report.violations.append({"pair_a": a, "pair_b": b, "heuristic": key,
                                              "values": [float(heur[a][key]), float(heur[b][key])]})
    plain_groups = defaultdict(list)
    for p in pairs:
        plain_groups[tuple(sorted((plain.color(p[0]), plain.color(p[1]))))].append(p)
    for members in plain_groups.values():
        for a, b in combinations(members, 2):
            if heur[a]["cn"] != heur[b]["cn"] and len(report.failure_witnesses) < max_witnesses:
                report.failure_witnesses.append({"pair_a": a, "pair_b": b,
                                                 "cn": [heur[a]["cn"], heur[b]["cn"]]})
    return report
