"""Partitions, occupation words, and counting helpers.

States of the three chains are built from two ingredients: *words* (tuples of
small ints: binary words for the colored Boolean process, species words over
{0, 1, .., p} for the multispecies chain) and *partitions* (weakly decreasing
positive parts, no trailing zeros stored).  Words are plain tuples — they get
rotated, sliced and hashed constantly and a bare tuple is the cheapest honest
representation.  Partitions get a tiny frozen class because they carry
semantics (multiplicities, weight) that a bare tuple keeps getting wrong at
call sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, List, NamedTuple, Tuple

from .errors import AllZerosOrAllOnes, InvalidParams, ParseError

Word = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Partition:
    """An integer partition; parts weakly decreasing, all positive."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(x <= 0 for x in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {self.parts}")

    @classmethod
    def of(cls, parts: Iterable[int]) -> "Partition":
        """Build from any iterable, sorting and dropping zeros."""
        kept = sorted((x for x in parts if x != 0), reverse=True)
        return cls(tuple(kept))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicity(self, i: int) -> int:
        return sum(1 for x in self.parts if x == i)

    def multiplicities(self, p: int) -> Tuple[int, ...]:
        """(m_1, .., m_p): how many parts equal each value in 1..p."""
        m = [0] * p
        for x in self.parts:
            if x > p:
                raise ValueError(f"part {x} exceeds bound {p}")
            m[x - 1] += 1
        return tuple(m)

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.parts) + ")"


class CbpState(NamedTuple):
    """A colored Boolean process state: binary word plus shape."""

    word: Word
    shape: Partition

    def __str__(self):
        return f"{word_str(self.word)}:{self.shape}"


def word_str(w: Word) -> str:
    return "".join(str(x) for x in w)


def parse_word(text: str) -> Word:
    if not text or not text.isdigit():
        raise ParseError(f"not a word: {text!r}")
    return tuple(int(ch) for ch in text)


def _check_params(n: int, p: int, q: int):
    if not (isinstance(n, int) and isinstance(p, int) and isinstance(q, int)):
        raise InvalidParams(f"parameters must be integers: n={n}, p={p}, q={q}")
    if q < 1 or p < 1 or n <= q:
        raise InvalidParams(f"need n > q >= 1 and p >= 1, got n={n}, p={p}, q={q}")


def enumerate_words(n: int, q: int) -> List[Word]:
    """All binary words of length n with exactly q ones, lexicographic."""
    _check_params(n, 1, q)
    out = []
    for ones in combinations(range(n), q):
        w = [0] * n
        for i in ones:
            w[i] = 1
        out.append(tuple(w))
    return sorted(out)


def enumerate_chi(p: int, q: int) -> List[Partition]:
    """All partitions with exactly q parts, each in 1..p, lex on part tuples."""
    if p < 1 or q < 1:
        raise InvalidParams(f"need p >= 1 and q >= 1, got p={p}, q={q}")
    out = []
    for parts in product(range(p, 0, -1), repeat=q):
        if all(parts[i] >= parts[i + 1] for i in range(q - 1)):
            out.append(Partition(parts))
    return sorted(out)


def enumerate_gamma(n: int, p: int, q: int) -> List[Word]:
    """All length-n words over {0,..,p} with exactly q nonzero letters."""
    _check_params(n, p, q)
    out = []
    for positions in combinations(range(n), q):
        for species in product(range(1, p + 1), repeat=q):
            w = [0] * n
            for i, s in zip(positions, species):
                w[i] = s
            out.append(tuple(w))
    return sorted(out)


def decompose(mu: Word) -> CbpState:
    """Split a species word into its binary occupation word and sorted shape."""
    w = tuple(1 if x else 0 for x in mu)
    shape = Partition.of(x for x in mu if x)
    return CbpState(w, shape)


def count_arrangements(lam: Partition, n: int, mode: str = "all") -> int:
    """Number of species words with shape lam.

    mode "all": words of length n whose nonzero letters have shape lam.
    mode "aligned": arrangements on a fixed set of q occupied positions.
    """
    q = lam.length
    if mode not in ("all", "aligned"):
        raise ValueError(f"unknown mode {mode!r}")
    if n <= q:
        raise InvalidParams(f"need n > q, got n={n}, q={q}")
    denom = 1
    for i in set(lam.parts):
        denom *= math.factorial(lam.multiplicity(i))
    aligned = math.factorial(q) // denom
    if mode == "aligned":
        return aligned
    return math.comb(n, q) * aligned


def rotate(w: Word, shift: int) -> Word:
    """Cyclic left rotation by shift positions."""
    n = len(w)
    s = shift % n
    return w[s:] + w[:s]


def canonical_rotation(w: Word) -> Tuple[Word, int]:
    """Lexicographically smallest rotation and the smallest shift achieving it."""
    best = w
    best_shift = 0
    for s in range(1, len(w)):
        cand = w[s:] + w[:s]
        if cand < best:
            best = cand
            best_shift = s
    return best, best_shift


def block_count(w: Word) -> int:
    """Number of cyclic maximal blocks of ones in a binary word."""
    ones = sum(1 for x in w if x)
    if ones == 0 or ones == len(w):
        raise AllZerosOrAllOnes(f"block count undefined for {word_str(w)}")
    # rotate so position 0 sits just after a 1->0 boundary, then count runs
    start = 0
    n = len(w)
    for i in range(n):
        if w[i - 1] and not w[i]:
            start = i
            break
    r = rotate(w, start)
    blocks = 0
    in_block = False
    for x in r:
        if x and not in_block:
            blocks += 1
        in_block = bool(x)
    return blocks
