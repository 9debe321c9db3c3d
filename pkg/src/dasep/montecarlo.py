"""Monte Carlo simulation of the chains, the package's one approximate corner.

Exact rationals stop at this module's boundary: transition rows are converted
to floating cumulative thresholds once, and a counter-based generator (Philox)
makes runs bit-reproducible for a given seed regardless of how draws are
blocked.  Each step consumes exactly one uniform draw, compared against the
row's cumulative thresholds with the self-loop as the tail.  Comparisons with
exact distributions happen in floating point via total-variation distance.
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping

import numpy as np

from .chains import TransitionSystem, check_stochastic
from .errors import IndexMismatch


@dataclass(frozen=True)
class SimConfig:
    u0: Fraction
    t0: Fraction
    steps: int
    burn_in: int = 0
    thinning: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "u0", Fraction(self.u0))
        object.__setattr__(self, "t0", Fraction(self.t0))
        if not (0 <= self.u0 <= 1 and 0 <= self.t0 <= 1):
            raise ValueError("u0 and t0 must lie in [0, 1]")
        if self.steps <= 0:
            raise ValueError("steps must be positive")
        if not 0 <= self.burn_in < self.steps:
            raise ValueError("need 0 <= burn_in < steps")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")


@dataclass(frozen=True)
class EmpiricalDistribution:
    config: SimConfig
    counts: Dict[str, int]
    samples: int

    def frequencies(self) -> Dict[str, float]:
        return {s: c / self.samples for s, c in self.counts.items()}

    def to_csv(self) -> str:
        # partition-valued states contain commas, so emit real (quoted) CSV
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["state", "count", "frequency"])
        for s in sorted(self.counts):
            c = self.counts[s]
            writer.writerow([s, c, repr(c / self.samples)])
        return buf.getvalue()


def simulate(system: TransitionSystem, cfg: SimConfig) -> EmpiricalDistribution:
    """Run the chain from its lexicographically first state.

    Counts are collected after burn_in, every `thinning` steps.
    """
    check_stochastic(system, cfg.u0, cfg.t0)
    scale = float(system.scale)
    cums: List[List[float]] = []
    targets: List[List[int]] = []
    for i in range(system.size):
        acc = 0.0
        row_c: List[float] = []
        row_t: List[int] = []
        for j, rate in system.out_edges(i):
            v = float(rate.eval(cfg.u0, cfg.t0)) / scale
            if v == 0.0:
                continue
            acc += v
            row_c.append(acc)
            row_t.append(j)
        cums.append(row_c)
        targets.append(row_t)

    rng = np.random.Generator(np.random.Philox(cfg.seed))
    counts = [0] * system.size
    current = 0
    collected = 0
    step = 0
    block_size = 65536
    remaining = cfg.steps
    while remaining > 0:
        draws = rng.random(min(block_size, remaining))
        remaining -= len(draws)
        for r in draws.tolist():
            row = cums[current]
            idx = bisect_right(row, r)
            if idx < len(row):
                current = targets[current][idx]
            step += 1
            if step > cfg.burn_in and (step - cfg.burn_in - 1) % cfg.thinning == 0:
                counts[current] += 1
                collected += 1

    by_state = {system.state_str(i): c for i, c in enumerate(counts)}
    return EmpiricalDistribution(cfg, by_state, collected)


def tv_distance(a: Mapping[str, object], b: Mapping[str, object]) -> float:
    """Half the L1 distance between two distributions over the same states."""
    if set(a) != set(b):
        raise IndexMismatch("distributions are indexed by different state sets")
    return 0.5 * sum(abs(float(a[k]) - float(b[k])) for k in a)
