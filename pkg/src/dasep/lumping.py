"""Lumping maps between chains, their verification, and pushforwards.

A lumping map sends source states onto target states.  It is a *strong
lumping* when, for every source state x0 and every target state y1, the sum
of transition rates from x0 into the fiber over y1 depends only on the image
of x0 — and then equals the target chain's rate.  verify_lumping checks that
condition exactly, fiber sum against target rate, including the implicit
diagonals; a stationary vector of the source then pushes forward to one of
the target by summing over fibers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

from .algebra import BivarPoly
from .chains import TransitionSystem, build_cbp, build_dasep, build_rrg
from .combinatorics import decompose
from .errors import IndexMismatch
from .stationary import StationaryVector


@dataclass(frozen=True)
class LumpingMap:
    """assignment[i] is the target index of source state i."""

    source: TransitionSystem
    target: TransitionSystem
    assignment: Tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.source.size:
            raise IndexMismatch("assignment length differs from source size")
        if any(not (0 <= j < self.target.size) for j in self.assignment):
            raise IndexMismatch("assignment hits indices outside the target")

    @classmethod
    def from_function(
        cls,
        source: TransitionSystem,
        target: TransitionSystem,
        fn: Callable,
    ) -> "LumpingMap":
        assignment = tuple(target.index[fn(s)] for s in source.states)
        return cls(source, target, assignment)

    def fibers(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.target.size)]
        for i, j in enumerate(self.assignment):
            out[j].append(i)
        return out


def dasep_to_cbp(n: int, p: int, q: int) -> LumpingMap:
    """Forget the species arrangement: word state -> (occupation, shape)."""
    source = build_dasep(n, p, q)
    target = build_cbp(n, p, q)
    return LumpingMap.from_function(source, target, decompose)


def cbp_to_rrg(n: int, p: int, q: int) -> LumpingMap:
    """Forget the word: (occupation, shape) -> shape."""
    source = build_cbp(n, p, q)
    target = build_rrg(n, p, q)
    return LumpingMap.from_function(source, target, lambda s: s.shape)


@dataclass(frozen=True)
class LumpingReport:
    passed: bool
    sources_checked: int
    violations: tuple  # dicts: {source, image, target, expected, found}

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "sources_checked": self.sources_checked,
            "violations": list(self.violations),
        }


def verify_lumping(lump: LumpingMap) -> LumpingReport:
    """Exact check of the strong-lumping condition, with witnesses.

    For each source state x0 with image y0, the fiber sums of its outgoing
    rates must match the target row of y0 — both where the target has an
    edge and where it has none.  The scaled diagonals must agree too, which
    reduces to row_sum(x0) - (flow into y0's own fiber) == row_sum(y0).
    Unreached target states are reported as violations as well.
    """
    source, target = lump.source, lump.target
    if source.scale != target.scale:
        raise IndexMismatch("source and target scales differ")
    violations = []
    reached = set(lump.assignment)
    for y in range(target.size):
        if y not in reached:
            violations.append(
                {
                    "source": None,
                    "image": None,
                    "target": target.state_str(y),
                    "expected": "a nonempty fiber",
                    "found": "no source state maps here",
                }
            )

    zero = BivarPoly()
    for x0 in range(source.size):
        if len(violations) >= 10:
            break
        y0 = lump.assignment[x0]
        sums = {}
        for x1, rate in source.out_edges(x0):
            y1 = lump.assignment[x1]
            sums[y1] = sums.get(y1, zero) + rate
        row = {y1: rate for y1, rate in target.out_edges(y0)}
        for y1 in sorted(set(sums) | set(row)):
            if y1 == y0:
                continue
            expected = row.get(y1, zero)
            found = sums.get(y1, zero)
            if expected != found:
                violations.append(
                    {
                        "source": source.state_str(x0),
                        "image": target.state_str(y0),
                        "target": target.state_str(y1),
                        "expected": str(expected),
                        "found": str(found),
                    }
                )
                if len(violations) >= 10:
                    break
        # diagonal: scale - row_sum(x0) + flow into own fiber must equal
        # scale - row_sum(y0)
        own = sums.get(y0, zero)
        if source.row_sum(x0) - own != target.row_sum(y0):
            violations.append(
                {
                    "source": source.state_str(x0),
                    "image": target.state_str(y0),
                    "target": target.state_str(y0),
                    "expected": str(target.row_sum(y0)),
                    "found": str(source.row_sum(x0) - own),
                }
            )
    return LumpingReport(not violations, source.size, tuple(violations[:10]))


def push_distribution(lump: LumpingMap, pi: StationaryVector) -> StationaryVector:
    """Sum a symbolic stationary vector over fibers.

    If the lumping condition holds and pi is stationary for the source, the
    result is stationary for the target (same scale, no renormalization).
    """
    if pi.system.states != lump.source.states:
        raise IndexMismatch("vector is not indexed by the lumping's source")
    if pi.mode != "symbolic":
        raise ValueError("push_distribution expects a symbolic vector")
    totals = [BivarPoly() for _ in range(lump.target.size)]
    for i, j in enumerate(lump.assignment):
        totals[j] = totals[j] + pi.entries[i]
    return StationaryVector(lump.target, tuple(totals), "symbolic")
