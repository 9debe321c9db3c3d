"""Exact stationary distributions of the transition systems.

Two independent solvers:

* :func:`solve_stationary_symbolic` finds the one-dimensional kernel of the
  scaled balance equations over ZZ[u,t] by fraction-free elimination on
  sparse integer-coefficient term maps, stripping the polynomial content of
  every row as it goes.  For the translation-invariant chains it first lumps
  states into cyclic-rotation orbits (an exact reduction), solves the orbit
  chain, and lifts.  The result is normalized so the entries' collective gcd
  is 1 and every entry is positive at u = t = 1.

* :func:`solve_stationary_at_point` evaluates the rates at one rational
  point and solves the resulting integer system directly — no orbit
  reduction, no polynomial machinery — so it serves as a genuinely
  independent cross-check on the symbolic route.

Neither solver's internal strategy needs to be trusted: every returned
vector is certified before return by an exact residual check (global balance
must hold identically), and irreducibility guarantees uniqueness up to scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import config
from .algebra import (
    BivarPoly,
    _cross,
    _exact_div,
    _gcd_many,
    _mul,
    _scale,
    _sub,
    _total_degree,
)
from .chains import TransitionSystem, check_irreducible, cyclic_orbits, rotate_state
from .errors import (
    DegreeCapExceeded,
    IndexMismatch,
    KernelDimensionNotOne,
    StateCapExceeded,
)


@dataclass(frozen=True)
class StationaryVector:
    """A stationary vector indexed by a system's states.

    mode "symbolic": entries are BivarPoly, unnormalized (collective gcd 1,
    every entry positive at u = t = 1).  mode "point": entries are Fractions
    summing to 1 at the stored point.
    """

    system: TransitionSystem
    entries: tuple
    mode: str
    point: Optional[Tuple[Fraction, Fraction]] = None

    def __getitem__(self, state):
        return self.entries[self.system.index[state]]

    def as_dict(self) -> dict:
        return {self.system.state_str(i): str(v) for i, v in enumerate(self.entries)}

    def evaluated(self, u0, t0) -> Dict[str, Fraction]:
        """Evaluate a symbolic vector at a point, normalized to total mass 1."""
        if self.mode != "symbolic":
            raise ValueError("evaluated() applies to symbolic vectors")
        vals = [e.eval(u0, t0) for e in self.entries]
        total = sum(vals)
        if total == 0:
            raise ZeroDivisionError("vector sums to zero at this point")
        return {self.system.state_str(i): v / total for i, v in enumerate(vals)}


# ---------------------------------------------------------------------------
# fraction-free sparse elimination, generic over the coefficient ring


class _PolyOps:
    """Integer-coefficient term maps as elimination values."""

    zero: dict = {}
    one = {(0, 0): 1}

    def __init__(self, degree_cap: int):
        self.cap = degree_cap

    @staticmethod
    def is_zero(v) -> bool:
        return not v

    def cross(self, piv, x, a, y):
        """piv*x - a*y, guarded by the degree cap."""
        r = _cross(piv, x, a, y)
        if r:
            d = _total_degree(r)
            if d > self.cap:
                raise DegreeCapExceeded(f"intermediate degree {d} exceeds cap {self.cap}")
        return r

    @staticmethod
    def mul(a, b):
        return _mul(a, b)

    @staticmethod
    def neg(v):
        return {k: -c for k, c in v.items()}

    @staticmethod
    def add(a, b):
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return out

    @staticmethod
    def content(values):
        return _gcd_many(values)

    @staticmethod
    def is_unit_content(g) -> bool:
        return g == {(0, 0): 1}

    @staticmethod
    def divide(v, g):
        return _exact_div(v, g)

    @staticmethod
    def size(v) -> int:
        return len(v)


class _IntOps:
    """Plain integers as elimination values."""

    zero = 0
    one = 1
    cap = None

    @staticmethod
    def is_zero(v) -> bool:
        return v == 0

    @staticmethod
    def cross(piv, x, a, y):
        return piv * x - a * y

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(v):
        return -v

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def content(values):
        g = 0
        for v in values:
            g = math.gcd(g, v)
            if g == 1:
                return 1
        return g

    @staticmethod
    def is_unit_content(g) -> bool:
        return g == 1

    @staticmethod
    def divide(v, g):
        return v // g

    @staticmethod
    def size(v) -> int:
        return abs(v).bit_length()


def _strip_row(row: dict, ops):
    if not row:
        return
    if len(row) == 1:
        # c*x = 0 and x = 0 cut out the same set; normalize to the unit
        for k in row:
            row[k] = ops.one
        return
    g = ops.content(row.values())
    if not ops.is_unit_content(g):
        for k in row:
            row[k] = ops.divide(row[k], g)


def _kernel_vector(n_cols: int, in_rows: Sequence[dict], ops) -> list:
    """One kernel vector of the system {sum_j row[j]*x_j = 0 for each row}.

    Sparse fraction-free elimination with per-row content stripping and a
    deterministic min-degree pivot rule.  Raises KernelDimensionNotOne unless
    the kernel is exactly one-dimensional.
    """
    rows = [dict(r) for r in in_rows if r]
    for row in rows:
        _strip_row(row, ops)
    col_rows: Dict[int, set] = {c: set() for c in range(n_cols)}
    for ri, row in enumerate(rows):
        for c in row:
            col_rows[c].add(ri)
    live_cols = set(range(n_cols))
    pivots: List[Tuple[int, int]] = []

    while True:
        best_col = None
        best_count = None
        for c in sorted(live_cols):
            count = len(col_rows[c])
            if count == 0:
                continue
            if best_count is None or count < best_count:
                best_count = count
                best_col = c
                if count == 1:
                    break
        if best_col is None:
            break
        c0 = best_col
        r0 = min(col_rows[c0], key=lambda r: (len(rows[r]), ops.size(rows[r][c0]), r))
        piv_row = rows[r0]
        piv = piv_row[c0]

        for r in sorted(col_rows[c0]):
            if r == r0:
                continue
            row = rows[r]
            a = row.pop(c0)
            # columns the pivot row doesn't touch just scale by piv
            for j in row:
                if j not in piv_row:
                    row[j] = ops.mul(piv, row[j])
            # shared columns (and new ones) get the full cross combination
            for j, v in piv_row.items():
                if j == c0:
                    continue
                cur = row.get(j)
                if cur is None:
                    nv = ops.neg(ops.mul(a, v))
                    row[j] = nv
                    col_rows[j].add(r)
                else:
                    nv = ops.cross(piv, cur, a, v)
                    if ops.is_zero(nv):
                        del row[j]
                        col_rows[j].discard(r)
                    else:
                        row[j] = nv
            _strip_row(row, ops)

        col_rows[c0] = set()
        for j in piv_row:
            if j != c0:
                col_rows[j].discard(r0)
        live_cols.discard(c0)
        pivots.append((r0, c0))

    free = sorted(live_cols)
    if len(free) != 1:
        raise KernelDimensionNotOne(
            f"balance equations have a {len(free)}-dimensional solution space"
        )
    free_col = free[0]

    # back-substitute in reverse pivot order; each pivot row only touches its
    # own column, later pivot columns, and the free column, all already set
    x: Dict[int, object] = {free_col: ops.one}
    assigned = [free_col]
    for r0, c0 in reversed(pivots):
        row = rows[r0]
        piv = row[c0]
        s = None
        for j, v in row.items():
            if j == c0:
                continue
            xj = x[j]
            if ops.is_zero(xj):
                continue
            term = ops.mul(v, xj)
            s = term if s is None else ops.add(s, term)
        if s is None or ops.is_zero(s):
            x[c0] = ops.zero
        else:
            for k in assigned:
                if not ops.is_zero(x[k]):
                    x[k] = ops.mul(x[k], piv)
            x[c0] = ops.neg(s)
            nonzero = [v for v in x.values() if not ops.is_zero(v)]
            g = ops.content(nonzero)
            if not ops.is_unit_content(g):
                for k in x:
                    if not ops.is_zero(x[k]):
                        x[k] = ops.divide(x[k], g)
        assigned.append(c0)
    return [x.get(c, ops.zero) for c in range(n_cols)]


# ---------------------------------------------------------------------------
# balance-equation assembly


def _balance_rows_full(system: TransitionSystem) -> List[dict]:
    """Transposed scaled generator: one row per state nu,
    {mu: rate(mu->nu)} union {nu: -row_sum(nu)}, as raw term maps."""
    rows: List[dict] = [dict() for _ in range(system.size)]
    for (i, j), rate in system.scaled_rates.items():
        rows[j][i] = dict(rate.terms)
    for i in range(system.size):
        rs = system.row_sum(i)
        if not rs.is_zero:
            rows[i][i] = {k: -c for k, c in rs.terms.items()}
    return rows


def _balance_rows_orbits(system: TransitionSystem, orbits: List[List[int]]):
    """Balance rows of the rotation-lumped chain (exact: rotation commutes
    with the dynamics, so fiberwise rate sums are constant along orbits)."""
    orbit_of = [0] * system.size
    for oi, orbit in enumerate(orbits):
        for s in orbit:
            orbit_of[s] = oi
    n_orbits = len(orbits)
    rows: List[dict] = [dict() for _ in range(n_orbits)]
    for oi, orbit in enumerate(orbits):
        rep = orbit[0]
        row_sum: dict = {}
        for j, rate in system.out_edges(rep):
            oj = orbit_of[j]
            raw = dict(rate.terms)
            tgt = rows[oj]
            tgt[oi] = _add_raw(tgt[oi], raw) if oi in tgt else raw
            row_sum = _add_raw(row_sum, raw)
        if row_sum:
            diag = rows[oi]
            neg = {k: -c for k, c in row_sum.items()}
            diag[oi] = _add_raw(diag[oi], neg) if oi in diag else neg
            if not diag[oi]:
                del diag[oi]
    return rows, orbit_of


def _add_raw(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def _clear_row_denominators(rows: List[dict]) -> List[dict]:
    """Scale each balance row to integer coefficients (kernel unchanged)."""
    out = []
    for row in rows:
        den = 1
        for poly in row.values():
            for c in poly.values():
                if isinstance(c, Fraction):
                    den = den * c.denominator // math.gcd(den, c.denominator)
        if den == 1:
            out.append(row)
        else:
            out.append({col: {k: int(c * den) for k, c in poly.items()} for col, poly in row.items()})
    return out


# ---------------------------------------------------------------------------
# public solvers


def solve_stationary_symbolic(
    system: TransitionSystem,
    *,
    state_cap: Optional[int] = None,
    degree_cap: Optional[int] = None,
    use_symmetry: Optional[bool] = None,
) -> StationaryVector:
    """Unnormalized stationary vector as exact polynomials in u and t.

    use_symmetry: None picks the rotation-orbit reduction automatically for
    the translation-invariant chains; False forces plain elimination.
    """
    cap = state_cap if state_cap is not None else config.symbolic_state_cap()
    if system.size > cap:
        raise StateCapExceeded(f"{system.size} states exceeds symbolic cap {cap}")
    if not check_irreducible(system):
        raise KernelDimensionNotOne("system is not irreducible")
    dcap = degree_cap if degree_cap is not None else config.degree_cap()
    for rate in system.scaled_rates.values():
        if rate.total_degree() > dcap:
            raise DegreeCapExceeded("a transition rate already exceeds the degree cap")
    ops = _PolyOps(dcap)

    orbits = None
    if use_symmetry is not False:
        orbits = cyclic_orbits(system)
        if orbits is not None and len(orbits) == system.size:
            orbits = None

    if orbits is None:
        rows = _clear_row_denominators(_balance_rows_full(system))
        raw = _kernel_vector(system.size, rows, ops)
    else:
        rows, orbit_of = _balance_rows_orbits(system, orbits)
        y = _kernel_vector(len(orbits), _clear_row_denominators(rows), ops)
        sizes = [len(o) for o in orbits]
        lcm = 1
        for s in sizes:
            lcm = lcm * s // math.gcd(lcm, s)
        raw = [
            _scale(y[orbit_of[i]], lcm // sizes[orbit_of[i]])
            for i in range(system.size)
        ]

    entries = _normalize_symbolic(raw)
    vec = StationaryVector(system, entries, "symbolic")
    report = verify_balance(system, vec)
    if not report.passed:
        raise KernelDimensionNotOne(
            "internal error: candidate vector fails exact balance"
        )
    return vec


def _normalize_symbolic(raw: List[dict]) -> tuple:
    """Divide out the collective content and fix signs via u = t = 1."""
    nonzero = [m for m in raw if m]
    if not nonzero:
        raise KernelDimensionNotOne("internal error: zero kernel vector")
    g = _gcd_many(nonzero)
    if g != {(0, 0): 1}:
        raw = [_exact_div(m, g) if m else {} for m in raw]
    polys = [BivarPoly(m) for m in raw]
    signs = {1 if p.eval(1, 1) > 0 else (-1 if p.eval(1, 1) < 0 else 0) for p in polys}
    if signs == {-1}:
        polys = [-p for p in polys]
    elif signs != {1}:
        raise KernelDimensionNotOne(
            "internal error: kernel vector not positive at u = t = 1"
        )
    return tuple(polys)


def solve_stationary_at_point(
    system: TransitionSystem,
    u0,
    t0,
    *,
    state_cap: Optional[int] = None,
) -> StationaryVector:
    """Exact stationary probabilities at one rational point, summing to 1."""
    cap = state_cap if state_cap is not None else config.point_state_cap()
    if system.size > cap:
        raise StateCapExceeded(f"{system.size} states exceeds point cap {cap}")
    if not check_irreducible(system):
        raise KernelDimensionNotOne("system is not irreducible")
    u0 = Fraction(u0)
    t0 = Fraction(t0)

    evaluated: Dict[Tuple[int, int], Fraction] = {
        key: rate.eval(u0, t0) for key, rate in system.scaled_rates.items()
    }
    rows: List[Dict[int, Fraction]] = [dict() for _ in range(system.size)]
    row_sums = [Fraction(0)] * system.size
    for (i, j), v in evaluated.items():
        if v == 0:
            # a rate can vanish at the point (u0 = 0 kills upgrades); the
            # chain may then be reducible at the point even though the
            # polynomial system is irreducible — elimination will notice
            continue
        rows[j][i] = rows[j].get(i, Fraction(0)) + v
        row_sums[i] += v
    for i in range(system.size):
        if row_sums[i]:
            rows[i][i] = rows[i].get(i, Fraction(0)) - row_sums[i]
            if not rows[i][i]:
                del rows[i][i]

    int_rows: List[Dict[int, int]] = []
    for row in rows:
        if not row:
            continue
        den = 1
        for v in row.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        int_rows.append({c: int(v * den) for c, v in row.items()})

    raw = _kernel_vector(system.size, int_rows, _IntOps)
    if any(v == 0 for v in raw):
        raise KernelDimensionNotOne(
            "stationary vector vanishes on some state at this point"
        )
    if all(v < 0 for v in raw):
        raw = [-v for v in raw]
    if any(v < 0 for v in raw):
        raise KernelDimensionNotOne("internal error: mixed-sign kernel vector")
    total = sum(raw)
    entries = tuple(Fraction(v, total) for v in raw)
    vec = StationaryVector(system, entries, "point", point=(u0, t0))
    # certify: exact balance at the point
    in_flow = [Fraction(0)] * system.size
    out_rate = [Fraction(0)] * system.size
    for (i, j), v in evaluated.items():
        in_flow[j] += entries[i] * v
        out_rate[i] += v
    for nu in range(system.size):
        if in_flow[nu] != entries[nu] * out_rate[nu]:
            raise KernelDimensionNotOne("internal error: point solution fails balance")
    return vec


# ---------------------------------------------------------------------------
# checks on candidate vectors


@dataclass(frozen=True)
class BalanceReport:
    passed: bool
    states_checked: int
    violations: tuple  # (state string, residual string), at most 10

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "states_checked": self.states_checked,
            "violations": [list(v) for v in self.violations],
        }


def verify_balance(system: TransitionSystem, candidate: StationaryVector) -> BalanceReport:
    """Exact global-balance residual of a symbolic candidate vector.

    residual(nu) = sum_{mu -> nu} x_mu * rate(mu, nu) - x_nu * row_sum(nu);
    the common 1/(3n) scale cancels, so this is zero iff x P = x.
    """
    if candidate.system.states != system.states:
        raise IndexMismatch("candidate vector is indexed by a different state set")
    if candidate.mode != "symbolic":
        raise ValueError("verify_balance expects a symbolic vector")
    entries = candidate.entries
    residuals: List[BivarPoly] = [
        -(entries[i] * system.row_sum(i)) for i in range(system.size)
    ]
    for (i, j), rate in system.scaled_rates.items():
        residuals[j] = residuals[j] + entries[i] * rate
    violations = []
    for i, r in enumerate(residuals):
        if not r.is_zero:
            violations.append((system.state_str(i), str(r)))
            if len(violations) == 10:
                break
    return BalanceReport(not violations, system.size, tuple(violations))


def check_cyclic_invariance(pi: StationaryVector) -> bool:
    """Whether a symbolic vector is constant along site-rotation orbits."""
    system = pi.system
    if system.kind not in ("dasep", "cbp"):
        raise ValueError("cyclic invariance applies to the word-indexed chains")
    for i, state in enumerate(system.states):
        for s in range(1, system.n):
            j = system.index[rotate_state(system, state, s)]
            if pi.entries[i] != pi.entries[j]:
                return False
    return True
