"""Exact bivariate polynomial arithmetic in the variables u and t.

A polynomial is a sparse term map: ``{(e_u, e_t): coefficient}`` with no zero
coefficients stored.  Coefficients are exact rationals; integer values are
kept as ``int`` (cheaper than ``Fraction`` and exact anyway), so a polynomial
with integer coefficients round-trips as pure-int dicts.  Term order, where
one is needed (rendering, division), is lexicographic with u before t, highest
first: u^2 > u*t > u > t^2 > t > 1.

Two layers live here.  The module-level underscore functions operate on raw
term maps and are what the elimination code in :mod:`dasep.stationary` uses
directly; :class:`BivarPoly` is a thin immutable wrapper giving operators,
parsing and rendering for everything user-facing.

The gcd works over ZZ[u,t] viewed as (ZZ[u])[t]: integer contents split off,
then a primitive pseudo-remainder sequence in t with univariate subresultant
steps in u.  The convention is content-inclusive: gcd(2u, 4u^2) = 2u, and the
normalized gcd has a positive coefficient on its lexicographically greatest
term.  That is exactly the convention under which "divide the stationary
vector by the gcd of its entries" reproduces the published tables.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import NotDivisible, ParseError

Rational = Fraction
Coeff = Union[int, Fraction]
Key = Tuple[int, int]
TermMap = Dict[Key, Coeff]


# ---------------------------------------------------------------------------
# raw term-map layer


def _norm_coeff(c):
    """Collapse integral Fractions to int; leave everything else alone."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _canon(terms) -> TermMap:
    out: TermMap = {}
    for key, c in terms.items():
        c = _norm_coeff(c)
        if c:
            eu, et = key
            out[(int(eu), int(et))] = c
    return out


def _add(a: TermMap, b: TermMap) -> TermMap:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def _neg(a: TermMap) -> TermMap:
    return {k: -c for k, c in a.items()}


def _sub(a: TermMap, b: TermMap) -> TermMap:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) - c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


# The multiplication/division hot loops pack an exponent pair into one int,
# (eu << _PACK_BITS) | et: int keys hash and compare much faster than tuples,
# packed keys add componentwise (t-degrees stay far below 2^_PACK_BITS, so
# there is no carry), and packed ordering coincides with (eu, et) lex order.
_PACK_BITS = 24
_PACK_MASK = (1 << _PACK_BITS) - 1


def _pack(a: TermMap):
    bits = _PACK_BITS
    return [((eu << bits) | et, c) for (eu, et), c in a.items()]


def _unpack(out) -> TermMap:
    bits = _PACK_BITS
    mask = _PACK_MASK
    return {(k >> bits, k & mask): c for k, c in out.items()}


def _mul_packed(pa, pb, out, sign):
    get = out.get
    if sign > 0:
        for ka, ca in pa:
            for kb, cb in pb:
                k = ka + kb
                s = get(k, 0) + ca * cb
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
    else:
        for ka, ca in pa:
            for kb, cb in pb:
                k = ka + kb
                s = get(k, 0) - ca * cb
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]


def _mul(a: TermMap, b: TermMap) -> TermMap:
    if not a or not b:
        return {}
    if len(b) > len(a):
        a, b = b, a
    if len(b) == 1:
        ((bu, bt), bc), = b.items()
        if bc == 1:
            if bu == 0 and bt == 0:
                return dict(a)
            return {(eu + bu, et + bt): c for (eu, et), c in a.items()}
        return {(eu + bu, et + bt): _norm_coeff(c * bc) for (eu, et), c in a.items()}
    out: dict = {}
    _mul_packed(_pack(a), _pack(b), out, 1)
    return _unpack(out)


def _cross(p: TermMap, x: TermMap, a: TermMap, y: TermMap) -> TermMap:
    """p*x - a*y in one accumulation pass."""
    out: dict = {}
    if p and x:
        _mul_packed(_pack(p), _pack(x), out, 1)
    if a and y:
        _mul_packed(_pack(a), _pack(y), out, -1)
    return _unpack(out)


def _scale(a: TermMap, c: Coeff) -> TermMap:
    if not c:
        return {}
    return {k: _norm_coeff(v * c) for k, v in a.items()}


def _shift(a: TermMap, du: int, dt: int) -> TermMap:
    """Multiply by the monomial u^du * t^dt (negative shifts must stay legal)."""
    if du == 0 and dt == 0:
        return dict(a)
    return {(eu + du, et + dt): c for (eu, et), c in a.items()}


def _eval(a: TermMap, u0: Coeff, t0: Coeff) -> Fraction:
    total = Fraction(0)
    u0 = Fraction(u0)
    t0 = Fraction(t0)
    upow: Dict[int, Fraction] = {}
    tpow: Dict[int, Fraction] = {}
    for (eu, et), c in a.items():
        if eu not in upow:
            upow[eu] = u0 ** eu
        if et not in tpow:
            tpow[et] = t0 ** et
        total += c * upow[eu] * tpow[et]
    return total


def _total_degree(a: TermMap) -> int:
    """Total degree; -1 for the zero polynomial."""
    if not a:
        return -1
    return max(eu + et for eu, et in a)


def _lead(a: TermMap) -> Key:
    return max(a)


def _min_exponents(a: TermMap) -> Key:
    mu = min(eu for eu, _ in a)
    mt = min(et for _, et in a)
    return mu, mt


def _icontent(a: TermMap) -> int:
    """gcd of the (integer) coefficients; 0 for the zero polynomial."""
    g = 0
    for c in a.values():
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def _rat_content(a: TermMap) -> Fraction:
    """Positive rational content: gcd of numerators over lcm of denominators."""
    num = 0
    den = 1
    for c in a.values():
        f = Fraction(c)
        num = math.gcd(num, f.numerator)
        den = den * f.denominator // math.gcd(den, f.denominator)
    return Fraction(num, den)


def _exact_div(a: TermMap, b: TermMap) -> TermMap:
    """Quotient a/b in Q[u,t]; raises NotDivisible if the division is inexact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    if len(b) == 1:
        ((bu, bt), bc) = next(iter(b.items()))
        out: TermMap = {}
        if bc == 1:
            for (au, at), ac in a.items():
                if au < bu or at < bt:
                    raise NotDivisible("monomial does not divide a term")
                out[(au - bu, at - bt)] = ac
            return out
        ints = type(bc) is int
        for (au, at), ac in a.items():
            if au < bu or at < bt:
                raise NotDivisible("monomial does not divide a term")
            if ints and type(ac) is int:
                w, rem = divmod(ac, bc)
                c = w if rem == 0 else Fraction(ac, bc)
            else:
                c = _norm_coeff(Fraction(ac) / Fraction(bc))
            out[(au - bu, at - bt)] = c
        return out
    pb = sorted(_pack(b))
    kb0, lc_b = pb[-1]
    lc_int = type(lc_b) is int
    tail_b = pb[:-1]
    mask = _PACK_MASK
    q: dict = {}
    # long division with an in-place packed remainder: each step cancels the
    # lead and folds the scaled divisor tail into the same dict
    r = {k: c for k, c in _pack(a)}
    get = r.get
    while r:
        kr = max(r)
        kq = kr - kb0
        if kq < 0 or (kr & mask) < (kb0 & mask):
            raise NotDivisible("leading term not divisible")
        cr = r.pop(kr)
        if lc_int and type(cr) is int:
            w, rem = divmod(cr, lc_b)
            c = w if rem == 0 else Fraction(cr, lc_b)
        else:
            c = _norm_coeff(Fraction(cr) / Fraction(lc_b))
        q[kq] = c
        for kb, bc in tail_b:
            k = kb + kq
            s = get(k, 0) - c * bc
            if s:
                r[k] = s if type(s) is int else _norm_coeff(s)
            elif k in r:
                del r[k]
    return _unpack(q)


def _divides(d: TermMap, a: TermMap) -> bool:
    """Does d divide a over the integers?  Bails at the first inexact step.

    Both maps must have integer coefficients (callers strip contents first);
    anything else conservatively reports False and lets the caller take the
    general path.
    """
    if len(d) > len(a):
        return False
    pd = sorted(_pack(d))
    kd0, lc = pd[-1]
    if type(lc) is not int:
        return False
    tail = pd[:-1]
    mask = _PACK_MASK
    r = {}
    for k, c in _pack(a):
        if type(c) is not int:
            return False
        r[k] = c
    get = r.get
    while r:
        kr = max(r)
        kq = kr - kd0
        if kq < 0 or (kr & mask) < (kd0 & mask):
            return False
        w, rem = divmod(r.pop(kr), lc)
        if rem:
            return False
        for kd, dc in tail:
            k = kd + kq
            s = get(k, 0) - w * dc
            if s:
                r[k] = s
            elif k in r:
                del r[k]
    return True


# -- univariate (dense int lists, index = u-exponent) helpers for the gcd ----


def _ustrip(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _ucontent(f) -> int:
    g = 0
    for c in f:
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def _uprem(f, g):
    """Pseudo-remainder of f by g over ZZ (g nonzero, deg f >= deg g)."""
    r = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while r and len(r) - 1 >= dg:
        lr = r[-1]
        d = len(r) - 1 - dg
        r = [lg * c for c in r]
        for i, gc in enumerate(g):
            r[i + d] -= lr * gc
        _ustrip(r)
    return r


def _ugcd(f, g):
    """Content-inclusive gcd in ZZ[u] on dense lists, positive leading coeff."""
    f = _ustrip(list(f))
    g = _ustrip(list(g))
    if not f:
        f, g = g, f
    if not g:
        if not f:
            return []
        if f[-1] < 0:
            f = [-c for c in f]
        return f
    cf, cg = _ucontent(f), _ucontent(g)
    c = math.gcd(cf, cg)
    f = [x // cf for x in f]
    g = [x // cg for x in g]
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _uprem(f, g)
        cr = _ucontent(r)
        f, g = g, ([x // cr for x in r] if cr > 1 else r)
    if f[-1] < 0:
        f = [-x for x in f]
    return [c * x for x in f]


def _by_t(a: TermMap) -> Dict[int, list]:
    """Split a term map into dense u-coefficient lists keyed by t-exponent."""
    cols: Dict[int, Dict[int, int]] = {}
    for (eu, et), c in a.items():
        cols.setdefault(et, {})[eu] = c
    out = {}
    for et, col in cols.items():
        top = max(col)
        out[et] = [col.get(i, 0) for i in range(top + 1)]
    return out


def _from_u(f, et: int = 0) -> TermMap:
    return {(i, et): c for i, c in enumerate(f) if c}


def _deg_t(a: TermMap) -> int:
    return max(et for _, et in a)


def _t_lead(a: TermMap) -> TermMap:
    d = _deg_t(a)
    return {(eu, 0): c for (eu, et), c in a.items() if et == d}


def _content_u(a: TermMap):
    """u-content of a in (ZZ[u])[t]: gcd of its t-coefficients, as a u-list."""
    g: list = []
    for et, f in sorted(_by_t(a).items()):
        g = _ugcd(g, f)
        if g == [1]:
            return g
    return g


def _udivide_map(a: TermMap, g) -> TermMap:
    """Divide every t-coefficient of a by the univariate u-poly g (exact)."""
    if g == [1]:
        return dict(a)
    gm = _from_u(g)
    out: TermMap = {}
    for et, f in _by_t(a).items():
        q = _exact_div(_from_u(f), gm)
        for (eu, _), c in q.items():
            out[(eu, et)] = c
    return out


def _primitive_t(a: TermMap) -> TermMap:
    if not a:
        return {}
    return _udivide_map(a, _content_u(a))


def _prem_t(a: TermMap, b: TermMap) -> TermMap:
    """Pseudo-remainder of a by b in (ZZ[u])[t], up to a lc(b)^k scale.

    Each step multiplies the running remainder by lc_t(b), which is fine
    because the caller re-primitivizes anyway.
    """
    db = _deg_t(b)
    lb = _t_lead(b)
    r = dict(a)
    while r and _deg_t(r) >= db:
        d = _deg_t(r) - db
        lr = _t_lead(r)
        r = _sub(_mul(lb, r), _mul(_shift(lr, 0, d), b))
    return r


def _normalize_sign(a: TermMap) -> TermMap:
    if a and a[_lead(a)] < 0:
        return _neg(a)
    return dict(a)


# -- heuristic gcd: evaluate at a big integer, rebuild from balanced digits,
#    certify by trial division; falls back to the remainder sequences -------


def _divides(g: TermMap, a: TermMap) -> bool:
    try:
        _exact_div(a, g)
    except NotDivisible:
        return False
    return True


def _balanced_digits(value: int, xi: int):
    digits = []
    while value:
        r = value % xi
        if r > xi // 2:
            r -= xi
        digits.append(r)
        value = (value - r) // xi
    return digits


def _heu_gcd_uni(fa: Dict[int, int], fb: Dict[int, int]):
    """Heuristic common divisor of univariate (exponent -> int) polynomials.

    Used as the inner level of the bivariate lift, so the result is NOT made
    primitive — the caller needs the raw digit structure intact (it strips
    the integer content of the full bivariate candidate once, then certifies
    by trial division, so an integer multiple here is harmless).
    """

    def inf(m):
        return max(abs(c) for c in m.values())

    def ev(m, x):
        # Horner with exponent gaps, highest power first
        total = 0
        prev = 0
        for e in sorted(m, reverse=True):
            if total:
                total *= x ** (prev - e)
            total += m[e]
            prev = e
        if total and prev:
            total *= x ** prev
        return total

    xi = 2 * min(inf(fa), inf(fb)) + 29
    for _ in range(6):
        va, vb = ev(fa, xi), ev(fb, xi)
        if va and vb:
            d = math.gcd(va, vb)
            if d == 1:
                return {0: 1}
            digits = _balanced_digits(d, xi)
            cand = {e: c for e, c in enumerate(digits) if c}
            if cand:
                # no certification here: the bivariate caller certifies its
                # final candidate, which subsumes this level; a bad inner
                # reconstruction just costs one outer retry
                return cand
        xi = xi * 73 // 27 + 29
    return None


def _tpoly_divide(num: Dict[int, int], den: Dict[int, int]):
    """Exact division in Z[t] of exponent->int maps; None if inexact.

    A fractional quotient coefficient means the division cannot lift to an
    integer cofactor, so it counts as inexact and bails immediately.
    """
    dn, dd = max(num), max(den)
    if dn < dd:
        return None
    rem = [0] * (dn + 1)
    for e, c in num.items():
        rem[e] = c
    dv = [0] * (dd + 1)
    for e, c in den.items():
        dv[e] = c
    lc = dv[dd]
    quo = [0] * (dn - dd + 1)
    for i in range(dn - dd, -1, -1):
        c = rem[i + dd]
        if c:
            c, r = divmod(c, lc)
            if r:
                return None
            quo[i] = c
            for j in range(dd + 1):
                if dv[j]:
                    rem[i + j] -= c * dv[j]
    if any(rem[j] for j in range(dd)):
        return None
    return quo


def _reconstruct_cofactor(f_t: Dict[int, int], g_t: Dict[int, int], xi: int):
    """Lift the t-coefficient quotient f_t/g_t to a bivariate candidate.

    Returns None when the quotient is inexact or has non-integer
    coefficients (either way the candidate divisor is wrong at this xi).
    """
    quo = _tpoly_divide(f_t, g_t)
    if quo is None:
        return None
    cof: TermMap = {}
    for et, value in enumerate(quo):
        if value:
            for eu, digit in enumerate(_balanced_digits(value, xi)):
                if digit:
                    cof[(eu, et)] = digit
    return cof


def _heu_gcd(a: TermMap, b: TermMap):
    """Heuristic gcd of primitive integer term maps; None if it gives up.

    Candidates are certified before being returned: the cofactor is
    reconstructed from the same evaluation and checked by multiplying back,
    which is an exact divisibility proof at a fraction of the cost of trial
    division.
    """

    def inf(m):
        return max(abs(c) for c in m.values())

    # xi must bound the digits of the *cofactors*, not just the gcd: the
    # certification below reconstructs b/g for the larger operand too, so
    # size by the larger coefficient bound
    xi = 2 * max(inf(a), inf(b)) + 29
    for _ in range(6):
        # substitute u = xi, leaving polynomials in t
        pows: Dict[int, int] = {0: 1, 1: xi}
        power = pows.get
        fa: Dict[int, int] = {}
        fb: Dict[int, int] = {}
        for (eu, et), c in a.items():
            w = power(eu)
            if w is None:
                w = pows[eu] = xi ** eu
            fa[et] = fa.get(et, 0) + c * w
        for (eu, et), c in b.items():
            w = power(eu)
            if w is None:
                w = pows[eu] = xi ** eu
            fb[et] = fb.get(et, 0) + c * w
        fa = {e: c for e, c in fa.items() if c}
        fb = {e: c for e, c in fb.items() if c}
        if fa and fb:
            g_t = _heu_gcd_uni(fa, fb)
            if g_t is not None:
                cand: TermMap = {}
                for et, value in g_t.items():
                    for eu, digit in enumerate(_balanced_digits(value, xi)):
                        if digit:
                            cand[(eu, et)] = digit
                content = _icontent(cand)
                if content > 1:
                    cand = {k: c // content for k, c in cand.items()}
                if cand:
                    if cand == {(0, 0): 1}:
                        return cand
                    # re-evaluate the stripped candidate at u = xi
                    c_t: Dict[int, int] = {}
                    for (eu, et), c in cand.items():
                        w = power(eu)
                        if w is None:
                            w = pows[eu] = xi ** eu
                        c_t[et] = c_t.get(et, 0) + c * w
                    c_t = {e: c for e, c in c_t.items() if c}
                    if c_t:
                        cof_a = _reconstruct_cofactor(fa, c_t, xi)
                        if cof_a is not None and _mul(cand, cof_a) == a:
                            cof_b = _reconstruct_cofactor(fb, c_t, xi)
                            if cof_b is not None and _mul(cand, cof_b) == b:
                                return _normalize_sign(cand)
        xi = xi * 73 // 27 + 29
    return None


def _gcd(a: TermMap, b: TermMap) -> TermMap:
    """Content-inclusive gcd in ZZ[u,t] (integer coefficients expected)."""
    if not a:
        return _normalize_sign(b)
    if not b:
        return _normalize_sign(a)
    au, at = _min_exponents(a)
    bu, bt = _min_exponents(b)
    mu, mt = min(au, bu), min(at, bt)
    a0 = _shift(a, -au, -at)
    b0 = _shift(b, -bu, -bt)
    ca, cb = _icontent(a0), _icontent(b0)
    c = math.gcd(ca, cb)
    if len(a0) == 1 or len(b0) == 1:
        # after stripping its monomial a single-term poly is a constant
        return {(mu, mt): c}
    a0 = {k: v // ca for k, v in a0.items()} if ca > 1 else a0
    b0 = {k: v // cb for k, v in b0.items()} if cb > 1 else b0
    if a0 == b0:
        g = _normalize_sign(a0)
        if c != 1:
            g = _scale(g, c)
        return _shift(g, mu, mt)
    # content folds hit gcd(g, v) with g | v constantly; a bail-early
    # division is far cheaper than the evaluation heuristic there
    small, big = (a0, b0) if len(a0) <= len(b0) else (b0, a0)
    if _divides(small, big):
        g = _normalize_sign(small)
        if c != 1:
            g = _scale(g, c)
        return _shift(g, mu, mt)
    heuristic = _heu_gcd(a0, b0)
    if heuristic is not None:
        if c != 1:
            heuristic = _scale(heuristic, c)
        return _shift(heuristic, mu, mt)
    da, db = _deg_t(a0), _deg_t(b0)
    if da == 0 and db == 0:
        g = _from_u(_ugcd(next(iter(_by_t(a0).values())), next(iter(_by_t(b0).values()))))
    elif da == 0:
        g = _from_u(_ugcd(_by_t(a0)[0], _content_u(b0)))
    elif db == 0:
        g = _from_u(_ugcd(_by_t(b0)[0], _content_u(a0)))
    else:
        cu_a, cu_b = _content_u(a0), _content_u(b0)
        cg = _ugcd(cu_a, cu_b)
        f = _udivide_map(a0, cu_a)
        h = _udivide_map(b0, cu_b)
        if _deg_t(f) < _deg_t(h):
            f, h = h, f
        while h:
            r = _prem_t(f, h)
            f, h = h, _primitive_t(r)
        g = _mul(_from_u(cg), _normalize_sign(_primitive_t(f)))
    g = _normalize_sign(g)
    if c != 1:
        g = _scale(g, c)
    return _shift(g, mu, mt)


def _gcd_many(maps: Iterable[TermMap]) -> TermMap:
    g: TermMap = {}
    # fold smallest-first: the running gcd shrinks to 1 fastest that way
    for m in sorted(maps, key=len):
        g = _gcd(g, m)
        if g == {(0, 0): 1}:
            break
    return g


# ---------------------------------------------------------------------------
# rendering and parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([ut])|(\^)|(\*)|(/)|(\+)|(-))")


def _render_coeff(c: Coeff) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _render_term(key: Key, c: Coeff) -> str:
    eu, et = key
    parts = []
    mag = -c if c < 0 else c
    if mag != 1 or (eu == 0 and et == 0):
        parts.append(_render_coeff(mag))
    if eu:
        parts.append("u" if eu == 1 else f"u^{eu}")
    if et:
        parts.append("t" if et == 1 else f"t^{et}")
    return "*".join(parts)


def render_terms(a: TermMap) -> str:
    if not a:
        return "0"
    pieces = []
    for key in sorted(a, reverse=True):
        c = a[key]
        term = _render_term(key, c)
        if not pieces:
            pieces.append(f"-{term}" if c < 0 else term)
        else:
            pieces.append(f" - {term}" if c < 0 else f" + {term}")
    return "".join(pieces)


def parse_terms(text: str) -> TermMap:
    """Parse the grammar emitted by render_terms.

    poly  := [sign] term (sign term)*
    term  := atom ('*' atom)*
    atom  := INT ['/' INT] | 'u' ['^' INT] | 't' ['^' INT]
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character at {pos}: {text[pos:]!r}")
            break
        pos = m.end()
        tokens.append(m)
    # reduce to simple (kind, value) pairs
    flat = []
    for m in tokens:
        if m.group(1):
            flat.append(("int", int(m.group(1))))
        elif m.group(2):
            flat.append(("var", m.group(2)))
        elif m.group(3):
            flat.append(("pow", None))
        elif m.group(4):
            flat.append(("mul", None))
        elif m.group(5):
            flat.append(("div", None))
        elif m.group(6):
            flat.append(("plus", None))
        else:
            flat.append(("minus", None))

    result: TermMap = {}
    i = 0
    n = len(flat)
    if n == 0:
        raise ParseError("empty polynomial string")

    while i < n:
        sign = 1
        saw_sign = False
        while i < n and flat[i][0] in ("plus", "minus"):
            if saw_sign:
                raise ParseError("doubled sign")
            if flat[i][0] == "minus":
                sign = -sign
            saw_sign = True
            i += 1
        if i >= n:
            raise ParseError("dangling sign")
        coeff: Coeff = sign
        eu = et = 0
        while True:
            kind, value = flat[i]
            if kind == "int":
                num = value
                i += 1
                if i < n and flat[i][0] == "div":
                    i += 1
                    if i >= n or flat[i][0] != "int":
                        raise ParseError("fraction needs an integer denominator")
                    den = flat[i][1]
                    if den == 0:
                        raise ParseError("zero denominator")
                    i += 1
                    coeff = _norm_coeff(coeff * Fraction(num, den))
                else:
                    coeff = _norm_coeff(coeff * num)
            elif kind == "var":
                var = value
                i += 1
                e = 1
                if i < n and flat[i][0] == "pow":
                    i += 1
                    if i >= n or flat[i][0] != "int":
                        raise ParseError("power needs an integer exponent")
                    e = flat[i][1]
                    i += 1
                if var == "u":
                    eu += e
                else:
                    et += e
            else:
                raise ParseError(f"expected a term atom, got {kind}")
            if i < n and flat[i][0] == "mul":
                i += 1
                if i >= n:
                    raise ParseError("dangling '*'")
                continue
            break
        key = (eu, et)
        s = result.get(key, 0) + coeff
        if s:
            result[key] = s
        elif key in result:
            del result[key]
        if i < n and flat[i][0] not in ("plus", "minus"):
            raise ParseError("terms must be joined by '+' or '-'")
    return _canon(result)


# ---------------------------------------------------------------------------
# public wrapper


class BivarPoly:
    """Immutable exact polynomial in u and t."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, Coeff] | None = None):
        object.__setattr__(self, "_terms", _canon(terms or {}))

    def __setattr__(self, name, value):
        raise AttributeError("BivarPoly is immutable")

    @classmethod
    def _raw(cls, terms: TermMap) -> "BivarPoly":
        """Wrap an already-canonical term map without copying (internal)."""
        self = object.__new__(cls)
        object.__setattr__(self, "_terms", terms)
        return self

    @classmethod
    def constant(cls, c: Coeff) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: Coeff, e_u: int, e_t: int) -> "BivarPoly":
        return cls({(e_u, e_t): c})

    @property
    def terms(self) -> Mapping[Key, Coeff]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        return _total_degree(self._terms)

    def eval(self, u0: Coeff, t0: Coeff) -> Fraction:
        return Fraction(_eval(self._terms, u0, t0))

    def exact_div(self, other: "BivarPoly") -> "BivarPoly":
        return BivarPoly._raw(_exact_div(self._terms, _coerce(other)._terms))

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return BivarPoly._raw(_add(self._terms, o._terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return BivarPoly._raw(_sub(self._terms, o._terms))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return BivarPoly._raw(_sub(o._terms, self._terms))

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return BivarPoly._raw(_mul(self._terms, o._terms))

    __rmul__ = __mul__

    def __neg__(self):
        return BivarPoly._raw(_neg(self._terms))

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = {(0, 0): 1}
        base = self._terms
        while e:
            if e & 1:
                result = _mul(result, base)
            e >>= 1
            if e:
                base = _mul(base, base)
        return BivarPoly._raw(result)

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        return hash(frozenset((k, Fraction(c)) for k, c in self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        return render_terms(self._terms)

    def __repr__(self):
        return f"BivarPoly({render_terms(self._terms)!r})"


def _coerce(value):
    if isinstance(value, BivarPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return BivarPoly.constant(value)
    return NotImplemented


ZERO = BivarPoly()
ONE = BivarPoly.constant(1)
U = BivarPoly.monomial(1, 1, 0)
T = BivarPoly.monomial(1, 0, 1)


def parse_poly(text: str) -> BivarPoly:
    return BivarPoly._raw(parse_terms(text))


def content_gcd(polys: Iterable[BivarPoly]) -> BivarPoly:
    """Content-inclusive gcd of a collection of polynomials.

    The rational contents are folded separately from the integer-primitive
    parts, so gcd(u/2, u/3) = u/6 and gcd(2u, 4u^2) = 2u.  The result's
    lexicographically greatest term has a positive coefficient.
    """
    maps = [p._terms for p in polys]
    if not maps:
        raise ValueError("content_gcd needs at least one polynomial")
    nonzero = [m for m in maps if m]
    if not nonzero:
        raise ValueError("content_gcd of all-zero input is undefined")
    g_rat = Fraction(0)
    primitive = []
    for m in nonzero:
        rc = _rat_content(m)
        num = math.gcd(g_rat.numerator, rc.numerator)
        den = g_rat.denominator * rc.denominator // math.gcd(g_rat.denominator, rc.denominator)
        g_rat = Fraction(num, den)
        primitive.append({k: int(v / rc) for k, v in m.items()})
    g = _gcd_many(primitive)
    return BivarPoly._raw(_canon(_scale(g, g_rat)))
