"""Prime periodic orbits of the step graph.

An orbit is coded as a cyclic word over ``{1, 2}``; each symbol is one round
trip on that bond (vertex -> wall -> vertex).  Consecutive symbols that agree
mean a reflection at the step, different ones a transmission.  Prime orbits
are the binary Lyndon words.

Words of length ``q`` are held internally as integer codes, most significant
bit first, with symbol ``1`` -> bit 0 and ``2`` -> bit 1, so that ascending
codes are lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import EnumerationCapError
from .graph_model import StepGraph

ENUMERATION_CAP = 28
_CHUNK = 1 << 22


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for positive integers")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    return list(_divisors(n))


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple[int, ...]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return tuple(sorted(set(small + [n // d for d in small])))


def necklace_count(q: int) -> int:
    """Number of binary Lyndon words of length ``q``."""
    return sum(mobius(d) * 2 ** (q // d) for d in divisors(q)) // q


def lyndon_codes(q: int) -> np.ndarray:
    """Integer codes of all binary Lyndon words of length ``q``, ascending."""
    if q < 1:
        raise ValueError("word length must be positive")
    if q > ENUMERATION_CAP:
        raise EnumerationCapError(
            f"q = {q} exceeds the enumeration cap {ENUMERATION_CAP}; use orbit_classes"
        )
    if q == 1:
        return np.array([0, 1], dtype=np.uint64)
    mask = np.uint64((1 << q) - 1)
    # a Lyndon word of length >= 2 starts with 1 and ends with 2: leading bit 0,
    # trailing bit 1; enumerate the q - 2 free bits in between
    free = 1 << (q - 2)
    out = []
    for start in range(0, free, _CHUNK):
        mid = np.arange(start, min(start + _CHUNK, free), dtype=np.uint64)
        x = (mid << np.uint64(1)) | np.uint64(1)
        for s in range(1, q):
            rot = ((x << np.uint64(s)) | (x >> np.uint64(q - s))) & mask
            x = x[x < rot]
        out.append(x)
    return np.concatenate(out)


def code_to_word(code: int, q: int) -> str:
    return format(int(code), f"0{q}b").translate(str.maketrans("01", "12"))


def word_to_code(word: str) -> int:
    return int(word.translate(str.maketrans("12", "01")), 2)


def lyndon_words(q_max: int) -> Iterator[str]:
    """Every binary Lyndon word of length ``1..q_max``, by length then lexicographically."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    if q_max > ENUMERATION_CAP:
        raise EnumerationCapError(
            f"q_max = {q_max} exceeds the enumeration cap {ENUMERATION_CAP}; use orbit_classes"
        )
    for q in range(1, q_max + 1):
        for code in lyndon_codes(q):
            yield code_to_word(code, q)


def is_lyndon(word: str) -> bool:
    return len(word) > 0 and all(word < word[i:] + word[:i] for i in range(1, len(word)))


@dataclass(frozen=True)
class PrimeOrbit:
    word: str
    n1: int
    n2: int
    c11: int
    c22: int
    c12: int
    c21: int
    action: float
    omega: float
    amplitude: float

    @property
    def q(self) -> int:
        return len(self.word)

    @property
    def sigma(self) -> int:
        return self.c11 + self.c22

    @property
    def tau(self) -> int:
        return self.c12 + self.c21

    @property
    def chi(self) -> int:
        return (self.q + self.c22) % 2


def amplitude(q: int, c22: int, sigma: int, tau: int, r: float) -> float:
    """``(-1)**(q + c22) * r**sigma * (1 - r**2)**(tau/2)``."""
    sign = -1.0 if (q + c22) % 2 else 1.0
    return sign * r**sigma * (1.0 - r * r) ** (tau // 2)


def orbit_stats(word: str, graph: StepGraph) -> PrimeOrbit:
    if not is_lyndon(word) or set(word) - {"1", "2"}:
        raise ValueError(f"{word!r} is not a binary Lyndon word")
    q = len(word)
    pairs = [word[i] + word[(i + 1) % q] for i in range(q)]
    c11, c22 = pairs.count("11"), pairs.count("22")
    c12, c21 = pairs.count("12"), pairs.count("21")
    n1, n2 = word.count("1"), word.count("2")
    action = 2.0 * (n1 * graph.S1 + n2 * graph.S2)
    amp = amplitude(q, c22, c11 + c22, c12 + c21, graph.r)
    return PrimeOrbit(word, n1, n2, c11, c22, c12, c21, action, action / graph.S0, amp)


@dataclass(frozen=True)
class OrbitBatch:
    """All prime orbits of one length, in the arrays the expansion consumes.

    ``weight`` is 1 per enumerated word, or the class multiplicity for
    grouped rows.  ``j`` is the number of maximal blocks of each symbol.
    """

    q: int
    n1: np.ndarray
    n2: np.ndarray
    j: np.ndarray
    weight: np.ndarray

    def __len__(self):
        return len(self.n1)

    def amplitudes(self, r: float) -> np.ndarray:
        sigma = self.q - 2 * self.j
        c22 = self.n2 - self.j
        sign = np.where((self.q + c22) % 2 == 1, -1.0, 1.0)
        return sign * r**sigma * (1.0 - r * r) ** self.j

    def actions(self, graph: StepGraph) -> np.ndarray:
        return 2.0 * (self.n1 * graph.S1 + self.n2 * graph.S2)


_BATCH_CACHE_MAX_Q = 20


def enumerated_batch(q: int) -> OrbitBatch:
    """Per-word arrays for all Lyndon words of length ``q`` (cached for short words)."""
    if q <= _BATCH_CACHE_MAX_Q:
        return _cached_batch(q)
    return _enumerate(q)


@lru_cache(maxsize=None)
def _cached_batch(q: int) -> OrbitBatch:
    batch = _enumerate(q)
    for arr in (batch.n1, batch.n2, batch.j, batch.weight):
        arr.flags.writeable = False
    return batch


def _enumerate(q: int) -> OrbitBatch:
    codes = lyndon_codes(q)
    if q == 1:
        n2 = np.array([0, 1], dtype=np.int64)
        return OrbitBatch(1, 1 - n2, n2, np.zeros(2, dtype=np.int64), np.ones(2))
    mask = np.uint64((1 << q) - 1)
    rot = ((codes << np.uint64(1)) | (codes >> np.uint64(q - 1))) & mask
    n2 = np.bitwise_count(codes).astype(np.int64)
    tau = np.bitwise_count(codes ^ rot).astype(np.int64)
    return OrbitBatch(q, q - n2, n2, tau // 2, np.ones(len(codes)))


@dataclass(frozen=True)
class OrbitClass:
    """Prime orbits of one length sharing symbol counts and block count."""

    n1: int
    n2: int
    j: int
    multiplicity: int

    @property
    def q(self) -> int:
        return self.n1 + self.n2

    @property
    def sigma(self) -> int:
        return self.q - 2 * self.j

    @property
    def tau(self) -> int:
        return 2 * self.j

    @property
    def c22(self) -> int:
        return self.n2 - self.j

    @property
    def chi(self) -> int:
        return (self.q + self.c22) % 2

    def action(self, graph: StepGraph) -> float:
        return 2.0 * (self.n1 * graph.S1 + self.n2 * graph.S2)

    def omega(self, graph: StepGraph) -> float:
        return self.action(graph) / graph.S0

    def amplitude(self, graph: StepGraph) -> float:
        return amplitude(self.q, self.c22, self.sigma, self.tau, graph.r)


@lru_cache(maxsize=None)
def _binomials(n: int) -> tuple[int, ...]:
    return tuple(math.comb(n, k) for k in range(n + 1))


@lru_cache(maxsize=None)
def _class_tuples(q: int) -> tuple[tuple[int, int, int, int], ...]:
    if q == 1:
        return ((1, 0, 0, 1), (0, 1, 0, 1))
    rows = []
    for n1 in range(1, q):
        n2 = q - n1
        for j in range(1, min(n1, n2) + 1):
            # j blocks of each symbol around a circle: strings counted with
            # their rotations number q/j * C(n1-1, j-1) * C(n2-1, j-1); Mobius
            # inversion over common periods keeps the primitive ones
            g = math.gcd(n1, n2, j)
            if g == 1:
                total = _binomials(n1 - 1)[j - 1] * _binomials(n2 - 1)[j - 1]
            else:
                total = sum(
                    mobius(m) * _binomials(n1 // m - 1)[j // m - 1] * _binomials(n2 // m - 1)[j // m - 1]
                    for m in _divisors(g)
                )
            mult, rem = divmod(total, j)
            assert rem == 0
            if mult:
                rows.append((n1, n2, j, mult))
    return tuple(rows)


def orbit_classes(q: int) -> list[OrbitClass]:
    """Partition of the prime orbits of length ``q`` into (n1, n2, j) classes."""
    if q < 1:
        raise ValueError("word length must be positive")
    return [OrbitClass(*row) for row in _class_tuples(q)]


def grouped_batch(q: int) -> OrbitBatch:
    rows = _class_tuples(q)
    n1, n2, j = (np.array([row[i] for row in rows], dtype=np.int64) for i in range(3))
    weight = np.array([float(row[3]) for row in rows])
    return OrbitBatch(q, n1, n2, j, weight)
