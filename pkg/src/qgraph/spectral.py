"""Secular trigonometric polynomials, regularity, separators and root zones.

The secular function of a scaling graph has the form::

    f(k) = cos(S0 k - pi g0) - sum_i a_i cos(S_i k - pi g_i)

with every ``S_i < S0``.  When ``alpha = sum |a_i| < 1`` the graph is
regular: the points ``kbar_n = pi (n + gamma) / S0`` never carry roots,
each is surrounded by a root-free band of half-width
``u = arccos(alpha) / S0``, and the allowed zone between two bands holds
exactly one root.  Bisection on that zone is the reference root finder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotRegularError, NumericalFailure

Phase = Fraction | float

_TWO_PI = np.longdouble("6.28318530717958647692528676655900576839")
_PI = _TWO_PI / 2
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TrigTerm:
    a: float
    S: float
    gamma: Phase


@dataclass(frozen=True)
class TrigPolynomial:
    S0: float
    gamma0: Phase
    terms: tuple[TrigTerm, ...] = ()

    def __post_init__(self):
        if not self.S0 > 0:
            raise ValueError("S0 must be positive")
        for t in self.terms:
            if not (0 <= t.S < self.S0):
                raise ValueError(f"secondary action {t.S} must lie in [0, S0={self.S0})")

    @property
    def alpha(self) -> float:
        return math.fsum(abs(t.a) for t in self.terms)

    def __call__(self, k):
        return evaluate(self, k)


def _cos_reduced(S: float, gamma: Phase, k) -> np.ndarray:
    # S*k and the phase offset are reduced mod 2*pi in extended precision
    kk = np.asarray(k, dtype=np.longdouble)
    arg = np.longdouble(S) * kk
    arg = np.fmod(arg, _TWO_PI)
    off = _PI * np.longdouble(float(gamma) % 2.0)
    return np.cos((arg - off).astype(np.float64))


def evaluate(trig: TrigPolynomial, k):
    """Value of the secular polynomial at ``k`` (scalar or array)."""
    val = _cos_reduced(trig.S0, trig.gamma0, k)
    for t in trig.terms:
        val = val - t.a * _cos_reduced(t.S, t.gamma, k)
    if np.ndim(val) == 0:
        return float(val)
    return val


@dataclass(frozen=True)
class RegularityReport:
    S0: float
    alpha: float
    regular: bool
    u: float | None = None
    gamma: Phase | None = None
    mu: int | None = None

    def require_regular(self):
        if not self.regular:
            raise NotRegularError(
                f"alpha = {self.alpha:.6g} >= 1: the root-zone geometry does not exist"
            )
        if self.gamma != _HALF:
            raise NotRegularError(
                f"separator offset gamma = {self.gamma} differs from 1/2; "
                "only Dirichlet chains without vertex sources are supported"
            )


def regularity(trig: TrigPolynomial) -> RegularityReport:
    alpha = trig.alpha
    if alpha >= 1.0:
        return RegularityReport(trig.S0, alpha, False)
    u = math.acos(alpha) / trig.S0
    mu = _resolve_mu(trig)
    gamma0 = trig.gamma0
    gamma = gamma0 + mu if isinstance(gamma0, Fraction) else float(gamma0) + mu
    return RegularityReport(trig.S0, alpha, True, u, gamma, mu)


def _resolve_mu(trig: TrigPolynomial) -> int:
    # the first positive root must carry index 1; k = 0 itself is the trivial
    # zero of the Dirichlet problem and is skipped
    k1 = first_positive_root(trig)
    return round(k1 * trig.S0 / math.pi - float(trig.gamma0) - 0.5)


def first_positive_root(trig: TrigPolynomial, start: float = 0.0, points_per_level: int = 1000) -> float:
    step = math.pi / (points_per_level * trig.S0)
    lo = start if start > 0 else step
    # one mean level spacing per block keeps memory flat
    while True:
        grid = lo + step * np.arange(points_per_level + 1)
        vals = evaluate(trig, grid)
        idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)
        if idx.size:
            i = idx[0]
            if vals[i] == 0.0:
                return float(grid[i])
            return bisect(trig, float(grid[i]), float(grid[i + 1]))
        lo = float(grid[-1])


def separator(report: RegularityReport, n: int) -> float:
    """``kbar_n = pi (n + gamma) / S0``."""
    report.require_regular()
    return math.pi * (n + float(report.gamma)) / report.S0


@dataclass(frozen=True)
class RootZone:
    n: int
    sep_lo: float
    sep_hi: float
    u: float

    @property
    def lo(self) -> float:
        return self.sep_lo + self.u

    @property
    def hi(self) -> float:
        return self.sep_hi - self.u


def root_zone(report: RegularityReport, n: int) -> RootZone:
    if n < 1:
        raise ValueError("root indices start at 1")
    report.require_regular()
    return RootZone(n, separator(report, n - 1), separator(report, n), report.u)


def bisect(trig: TrigPolynomial, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    flo = evaluate(trig, lo)
    fhi = evaluate(trig, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NumericalFailure(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * abs(mid) or mid in (lo, hi):
            break
        fmid = evaluate(trig, mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_root_in_zone(
    trig: TrigPolynomial, report: RegularityReport, n: int, tol: float = 1e-12
) -> float:
    """The unique root ``k_n`` inside the allowed zone ``Z_n``."""
    zone = root_zone(report, n)
    lo, hi = zone.lo, zone.hi
    if hi - lo <= tol * hi:
        # alpha == 0: the zone collapses onto the root
        return 0.5 * (lo + hi)
    flo, fhi = evaluate(trig, lo), evaluate(trig, hi)
    if not flo * fhi < 0:
        # rounding at a zone edge where |Phi| touches alpha; the separators
        # bracket the same single root with a wide margin
        lo, hi = zone.sep_lo, zone.sep_hi
    k = bisect(trig, lo, hi, tol)
    slack = 4 * tol * k
    if not (zone.lo - slack <= k <= zone.hi + slack):
        raise NumericalFailure(f"root {k!r} of index {n} lies outside its allowed zone")
    return k


def staircase_count(trig: TrigPolynomial, report: RegularityReport, k: float) -> int:
    """Number of roots ``k_n <= k`` (the trivial zero at 0 is not counted)."""
    report.require_regular()
    m = math.floor(k * report.S0 / math.pi - float(report.gamma))
    if m < 0:
        return 0
    # roots 1..m lie below kbar_m <= k; check the root of zone m + 1
    zone = root_zone(report, m + 1)
    if k < zone.lo:
        return m
    if k >= zone.hi:
        return m + 1
    f_here = evaluate(trig, k)
    f_sep = evaluate(trig, zone.sep_lo)
    crossed = f_here == 0.0 or np.sign(f_here) != np.sign(f_sep)
    return m + int(crossed)


def scan_roots(trig: TrigPolynomial, k_max: float, points_per_level: int = 1000) -> np.ndarray:
    """Roots in ``(0, k_max]`` from a dense sign scan refined by bisection.

    Works for non-regular polynomials as well; roots closer together than the
    grid spacing ``pi / (points_per_level * S0)`` can be missed.
    """
    step = math.pi / (points_per_level * trig.S0)
    grid = step * np.arange(1, int(math.ceil(k_max / step)) + 1)
    vals = evaluate(trig, grid)
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        roots.append(bisect(trig, float(grid[i]), float(grid[i + 1])))
    roots.extend(float(g) for g in grid[vals == 0.0])
    return np.array(sorted(roots))
