"""Construction of the three Markov chains as exact transition systems.

Rates are stored *scaled*: every off-diagonal one-step probability has the
common denominator 3n, so the stored value is the numerator polynomial (a
small integer-coefficient polynomial in u and t) and the diagonal is implied
by `1 - row_sum/scale`.  Keeping the scale out of the entries keeps every
matrix entry a polynomial rather than a rational function.

The three state spaces:

* ``dasep``  — length-n words over {0,..,p} with q nonzero letters.  Moves:
  every cyclically adjacent unequal pair swaps (scaled rate t when the left
  letter is larger, 1 otherwise — this single rule covers both the interior
  swaps and the boundary-wrapping swap); a letter in 1..p-1 steps up at
  scaled rate u; a letter >= 2 steps down at scaled rate 1.  Parallel moves
  to the same target add.  At n=2 the two swap directions act on the same
  pair of letters, so each direction between the two arrangements carries
  1 + t; outputs flag this.
* ``cbp``    — pairs (binary word, shape).  The word component moves by the
  same cyclic swap rule restricted to 0/1; each part of size i with i >= 2
  steps down at scaled rate m_i, each part of size i < p steps up at m_i*u.
* ``rrg``    — shapes alone with the part moves above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import ONE, U, BivarPoly, _add
from .combinatorics import (
    CbpState,
    Partition,
    canonical_rotation,
    enumerate_chi,
    enumerate_gamma,
    enumerate_words,
    rotate,
    word_str,
)
from .errors import InvalidParams, NotStochastic


def state_label(state) -> str:
    if isinstance(state, CbpState):
        return str(state)
    if isinstance(state, Partition):
        return str(state)
    return word_str(state)


@dataclass(eq=False)
class TransitionSystem:
    """A finite Markov chain with exact scaled transition rates.

    ``scaled_rates[(i, j)]`` is 3n * P(states[i] -> states[j]) for i != j,
    always a nonzero polynomial; diagonal entries are implicit.  Treat
    instances as immutable.
    """

    kind: str
    n: int
    p: int
    q: int
    states: tuple
    scaled_rates: Dict[Tuple[int, int], BivarPoly]
    index: Dict[object, int] = field(repr=False, default=None)
    _out: List[List[Tuple[int, BivarPoly]]] = field(repr=False, default=None)
    _row_sums: List[BivarPoly] = field(repr=False, default=None)

    def __post_init__(self):
        if self.index is None:
            self.index = {s: i for i, s in enumerate(self.states)}
        out: List[List[Tuple[int, BivarPoly]]] = [[] for _ in self.states]
        for (i, j), rate in sorted(self.scaled_rates.items()):
            out[i].append((j, rate))
        self._out = out
        sums = []
        for row in out:
            total: BivarPoly = BivarPoly()
            for _, r in row:
                total = total + r
            sums.append(total)
        self._row_sums = sums

    @property
    def scale(self) -> int:
        return 3 * self.n

    @property
    def params(self) -> Tuple[int, int, int]:
        return (self.n, self.p, self.q)

    @property
    def size(self) -> int:
        return len(self.states)

    def out_edges(self, i: int) -> List[Tuple[int, BivarPoly]]:
        return self._out[i]

    def row_sum(self, i: int) -> BivarPoly:
        return self._row_sums[i]

    def state_str(self, i: int) -> str:
        return state_label(self.states[i])

    @property
    def doubled_pair_note(self) -> Optional[str]:
        if self.kind in ("dasep", "cbp") and self.n == 2:
            return (
                "n=2: the two cyclically adjacent pairs coincide, so both "
                "swap directions carry the summed rate 1+t"
            )
        return None


def _add_edge(edges: Dict[Tuple[int, int], dict], i: int, j: int, rate: dict):
    if i == j:
        return
    key = (i, j)
    if key in edges:
        edges[key] = _add(edges[key], rate)
    else:
        edges[key] = rate


_RATE_ONE = {(0, 0): 1}
_RATE_T = {(0, 1): 1}
_RATE_U = {(1, 0): 1}


def _swap_moves(w, n):
    """Cyclic adjacent swaps: yields (new_word, raw_rate) pairs."""
    for k in range(n):
        k2 = (k + 1) % n
        a, b = w[k], w[k2]
        if a == b:
            continue
        v = list(w)
        v[k], v[k2] = b, a
        yield tuple(v), (_RATE_T if a > b else _RATE_ONE)


def build_dasep(n: int, p: int, q: int) -> TransitionSystem:
    """The multispecies chain on length-n words with q particles of p species."""
    states = enumerate_gamma(n, p, q)
    index = {s: i for i, s in enumerate(states)}
    edges: Dict[Tuple[int, int], dict] = {}
    for i, mu in enumerate(states):
        for nu, rate in _swap_moves(mu, n):
            _add_edge(edges, i, index[nu], rate)
        for k, letter in enumerate(mu):
            if 1 <= letter <= p - 1:
                up = mu[:k] + (letter + 1,) + mu[k + 1:]
                _add_edge(edges, i, index[up], _RATE_U)
            if letter >= 2:
                down = mu[:k] + (letter - 1,) + mu[k + 1:]
                _add_edge(edges, i, index[down], _RATE_ONE)
    rates = {key: BivarPoly(r) for key, r in edges.items()}
    return TransitionSystem("dasep", n, p, q, tuple(states), rates, index)


def _part_moves(shape: Partition, p: int):
    """Raise/lower one part: yields (new_shape, raw_rate) with multiplicities."""
    for i in sorted(set(shape.parts)):
        m = shape.multiplicity(i)
        if i < p:
            parts = list(shape.parts)
            parts.remove(i)
            yield Partition.of(parts + [i + 1]), {(1, 0): m}
        if i >= 2:
            parts = list(shape.parts)
            parts.remove(i)
            yield Partition.of(parts + [i - 1]), {(0, 0): m}


def build_cbp(n: int, p: int, q: int) -> TransitionSystem:
    """The colored Boolean process on (binary word, shape) pairs."""
    words = enumerate_words(n, q)
    shapes = enumerate_chi(p, q)
    states = [CbpState(w, lam) for w in words for lam in shapes]
    index = {s: i for i, s in enumerate(states)}
    edges: Dict[Tuple[int, int], dict] = {}
    for i, (w, lam) in enumerate(states):
        for w2, rate in _swap_moves(w, n):
            _add_edge(edges, i, index[CbpState(w2, lam)], rate)
        for lam2, rate in _part_moves(lam, p):
            _add_edge(edges, i, index[CbpState(w, lam2)], rate)
    rates = {key: BivarPoly(r) for key, r in edges.items()}
    return TransitionSystem("cbp", n, p, q, tuple(states), rates, index)


def build_rrg(n: int, p: int, q: int) -> TransitionSystem:
    """The restricted growth chain on shapes alone (n only sets the scale)."""
    states = enumerate_chi(p, q)
    if n <= q:
        raise InvalidParams(f"need n > q, got n={n}, q={q}")
    index = {s: i for i, s in enumerate(states)}
    edges: Dict[Tuple[int, int], dict] = {}
    for i, lam in enumerate(states):
        for lam2, rate in _part_moves(lam, p):
            _add_edge(edges, i, index[lam2], rate)
    rates = {key: BivarPoly(r) for key, r in edges.items()}
    return TransitionSystem("rrg", n, p, q, tuple(states), rates, index)


BUILDERS = {"dasep": build_dasep, "cbp": build_cbp, "rrg": build_rrg}


@dataclass(frozen=True)
class StochasticReport:
    point: Tuple[Fraction, Fraction]
    states_checked: int
    min_diagonal: Fraction


def check_stochastic(system: TransitionSystem, u0, t0) -> StochasticReport:
    """Confirm every row of P(u0, t0) is a probability distribution.

    Raises NotStochastic with the offending state on any violation.
    """
    u0 = Fraction(u0)
    t0 = Fraction(t0)
    if not (0 <= u0 <= 1 and 0 <= t0 <= 1):
        raise ValueError(f"parameters must lie in [0,1]: u={u0}, t={t0}")
    scale = system.scale
    min_diag = Fraction(1)
    for i in range(system.size):
        total = Fraction(0)
        for j, rate in system.out_edges(i):
            v = rate.eval(u0, t0)
            if v < 0:
                raise NotStochastic(
                    f"negative rate {v} on {system.state_str(i)} -> {system.state_str(j)}"
                )
            total += v
        if total > scale:
            raise NotStochastic(
                f"row {system.state_str(i)} sums to {total}/{scale} > 1 off the diagonal"
            )
        diag = 1 - Fraction(total, scale)
        if diag < min_diag:
            min_diag = diag
    return StochasticReport((u0, t0), system.size, min_diag)


def check_irreducible(system: TransitionSystem) -> bool:
    """Strong connectivity of the transition graph (rates are nonzero polys)."""
    size = system.size
    if size == 0:
        return False
    fwd = [[] for _ in range(size)]
    bwd = [[] for _ in range(size)]
    for (i, j) in system.scaled_rates:
        fwd[i].append(j)
        bwd[j].append(i)

    def reaches_all(adj):
        seen = [False] * size
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == size

    return reaches_all(fwd) and reaches_all(bwd)


def export_dot(system: TransitionSystem) -> str:
    """Deterministic Graphviz rendering with exact rate labels."""
    name = f"{system.kind}_{system.n}_{system.p}_{system.q}"
    lines = [f"digraph {name} {{"]
    note = system.doubled_pair_note
    if note:
        lines.append(f"  // {note}")
    lines.append("  rankdir=LR;")
    for i in range(system.size):
        lines.append(f'  "{system.state_str(i)}";')
    scale = system.scale
    for (i, j) in sorted(system.scaled_rates):
        rate = str(system.scaled_rates[(i, j)])
        if " " in rate:
            rate = f"({rate})"
        lines.append(
            f'  "{system.state_str(i)}" -> "{system.state_str(j)}" [label="{rate}/{scale}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def matrix_json(system: TransitionSystem) -> dict:
    """JSON-ready description: states plus sparse scaled entries."""
    entries = [
        [system.state_str(i), system.state_str(j), str(system.scaled_rates[(i, j)]), system.scale]
        for (i, j) in sorted(system.scaled_rates)
    ]
    out = {
        "kind": system.kind,
        "n": system.n,
        "p": system.p,
        "q": system.q,
        "scale": system.scale,
        "states": [system.state_str(i) for i in range(system.size)],
        "entries": entries,
    }
    if system.doubled_pair_note:
        out["note"] = system.doubled_pair_note
    return out


def rotate_state(system: TransitionSystem, state, shift: int):
    """The cyclic site-rotation action on a state (identity for rrg)."""
    if system.kind == "dasep":
        return rotate(state, shift)
    if system.kind == "cbp":
        return CbpState(rotate(state.word, shift), state.shape)
    return state


def cyclic_orbits(system: TransitionSystem) -> Optional[List[List[int]]]:
    """Orbits of the site rotation, ordered by smallest member; None for rrg."""
    if system.kind not in ("dasep", "cbp"):
        return None
    seen = [False] * system.size
    orbits = []
    for i in range(system.size):
        if seen[i]:
            continue
        orbit = []
        state = system.states[i]
        for s in range(system.n):
            j = system.index[rotate_state(system, state, s)]
            if not seen[j]:
                seen[j] = True
                orbit.append(j)
        orbits.append(sorted(orbit))
    return orbits
