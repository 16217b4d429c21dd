"""Explicit periodic-orbit expansion of individual eigenvalues.

For a regular step graph the ``n``-th root is::

    k_n = pi n / S0 - (2/pi) sum_p (1/S_p) sum_nu A_p**nu / nu**2
                       * sin(pi nu w_p / 2) * sin(pi nu w_p n)

with ``w_p = S_p / S0``.  The orbit sum is only conditionally convergent, so
the truncation rule is part of the result.  Two rules are provided:

``"total"`` (default)
    keep a repetition ``p**nu`` when its binary length ``nu * q_p`` is at most
    ``q_max``.  Partial sums then track the trace of powers of the unitary
    round-trip map, and the error falls like ``q**-2``.
``"prime"``
    keep every prime orbit with ``q_p <= q_max`` and all repetitions up to
    ``nu_max``.  This converges more slowly, roughly like ``1/q``.

Phases never go through ``S_p`` directly.  With ``f1 = S1/S0`` and
``d = nu (n1 - n2)``, ``pi nu w_p / 2 = pi nu n2 + pi d f1`` and
``pi nu w_p n = 2 pi (n nu n2) + 2 pi n d f1``, so only the fractional parts of
integer multiples of ``f1`` are needed.  Those are formed in extended precision.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EnumerationCapError, NotRegularError
from .graph_model import StepGraph, chain_to_trig_polynomial
from .orbits import ENUMERATION_CAP, OrbitBatch, enumerated_batch, grouped_batch
from .spectral import find_root_in_zone, regularity

ORDERS = ("total", "prime")


@dataclass(frozen=True)
class ExpansionConfig:
    q_max: int
    nu_max: int = 50
    nu_tail_tol: float = 0.0
    use_grouped: bool = False
    order: str = "total"

    def __post_init__(self):
        if self.q_max < 1:
            raise ValueError("q_max must be at least 1")
        if self.nu_max < 1:
            raise ValueError("nu_max must be at least 1")
        if self.nu_tail_tol < 0:
            raise ValueError("nu_tail_tol must be non-negative")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}, got {self.order!r}")
        if not self.use_grouped and self.q_max > ENUMERATION_CAP:
            raise EnumerationCapError(
                f"q_max = {self.q_max} exceeds the enumeration cap {ENUMERATION_CAP}; "
                "set use_grouped"
            )


@dataclass(frozen=True)
class EigenvalueRecord:
    n: int
    q: int
    k_explicit: float
    k_oracle: float

    @property
    def eps(self) -> float:
        return abs(self.k_explicit - self.k_oracle) / self.k_oracle


def _check_regular(graph: StepGraph):
    if not graph.r < 1.0:
        raise NotRegularError("step graph is not regular")


_CELLS = 1 << 21  # phase-matrix elements per chunk


def _two_sum_tree(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise sum along the last axis, keeping each rounding error.

    Returns ``(hi, lo)``; ``hi + lo`` is the sum with an error of order
    ``eps**2 * log2(m) * sum|x|`` on top of the final rounding.
    """
    x = np.asarray(x, dtype=np.float64)
    m = x.shape[-1]
    if m == 0:
        zero = np.zeros(x.shape[:-1])
        return zero, zero.copy()
    # zero padding to a power of two keeps the pairing fixed and exact
    s = np.zeros(x.shape[:-1] + (1 << (m - 1).bit_length(),))
    s[..., :m] = x
    c = np.zeros_like(s)
    while s.shape[-1] > 1:
        a, b = s[..., 0::2], s[..., 1::2]
        t = a + b
        bv = t - a
        err = (a - (t - bv)) + (b - bv)
        c = c[..., 0::2] + c[..., 1::2] + err
        s = t
    return s[..., 0], c[..., 0]


def compensated_sum(x: np.ndarray) -> np.ndarray:
    """Sum along the last axis in fixed pairwise order with error compensation."""
    hi, lo = _two_sum_tree(x)
    return hi + lo


def _turns(m: np.ndarray, f1: np.longdouble) -> np.ndarray:
    """``m * f1`` modulo 1 for integer ``m``, as a value in ``[-1, 1]``.

    ``f1`` is split into a head short enough that ``m * head`` is exact in
    double precision, plus a tail whose product carries only a small error.
    Multipliers beyond ``2**40`` take the extended-precision route.
    """
    top = int(np.max(np.abs(m))) if m.size else 0
    if top >= 1 << 40:
        return np.fmod(m.astype(np.longdouble) * f1, 1).astype(np.float64)
    bits = 53 - max(1, top.bit_length())
    head = math.ldexp(math.floor(math.ldexp(float(f1), bits)), -bits)
    tail = float(f1 - np.longdouble(head))
    mf = m.astype(np.float64)
    x = mf * head
    y = mf * tail
    # removing the nearest integer is exact in double precision
    return (x - np.rint(x)) + (y - np.rint(y))


def _batch_partials(batch: OrbitBatch, graph: StepGraph, n_arr: np.ndarray, cfg: ExpansionConfig):
    """Orbit-sum contributions of one batch, reduced per level.

    Returns ``{level: [(hi, lo), ...]}`` with one entry per repetition index
    entering at that level; ``hi`` and ``lo`` have one value per ``n``.
    """
    q = batch.q
    amp = batch.amplitudes(graph.r)
    abs_amp = np.abs(amp)
    action = batch.actions(graph)
    f1 = np.longdouble(graph.S1) / np.longdouble(graph.S0)
    diff = batch.n1 - batch.n2
    nu_top = cfg.nu_max if cfg.order == "prime" else min(cfg.nu_max, cfg.q_max // q)

    out: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}
    for nu in range(1, nu_top + 1):
        d = nu * diff
        base = batch.weight * amp**nu / (nu * nu) / action
        n2_odd = (nu * batch.n2) % 2 == 1
        if cfg.nu_tail_tol > 0:
            keep = abs_amp**nu / nu**2 >= cfg.nu_tail_tol
            if not keep.any():
                break
            d, base, n2_odd = d[keep], base[keep], n2_odd[keep]
        half = np.fmod(d.astype(np.longdouble) * f1, 2).astype(np.float64)
        base = base * np.where(n2_odd, -1.0, 1.0) * np.sin(np.pi * half)
        rows = max(1, _CELLS // max(1, len(d)))
        hi = np.empty(len(n_arr))
        lo = np.empty(len(n_arr))
        for i in range(0, len(n_arr), rows):
            turns = _turns(n_arr[i : i + rows, None] * d, f1)
            hi[i : i + rows], lo[i : i + rows] = _two_sum_tree(base * np.sin(2 * np.pi * turns))
        level = q if cfg.order == "prime" else nu * q
        out.setdefault(level, []).append((hi, lo))
    return out


def orbit_level_sums(
    graph: StepGraph, n_list: Sequence[int], cfg: ExpansionConfig, threads: int = 1
) -> np.ndarray:
    """Compensated orbit-sum contribution per truncation level.

    Row ``i`` belongs to ``n_list[i]``; column ``L`` (``0..q_max``) holds the
    sum of all terms entering at level ``L``.  Lengths are processed
    independently and reduced in fixed order, so the result does not depend
    on ``threads``.
    """
    _check_regular(graph)
    n_arr = np.asarray(list(n_list), dtype=np.int64)
    sums = np.zeros((len(n_arr), cfg.q_max + 1))
    make = grouped_batch if cfg.use_grouped else enumerated_batch

    def work(q):
        return _batch_partials(make(q), graph, n_arr, cfg)

    qs = range(1, cfg.q_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, qs))
    else:
        parts = [work(q) for q in qs]

    collected: dict[int, list[np.ndarray]] = {}
    for part in parts:
        for level, pairs in part.items():
            slot = collected.setdefault(level, [])
            for hi, lo in pairs:
                slot += [hi, lo]
    for level, columns in collected.items():
        sums[:, level] = compensated_sum(np.column_stack(columns))
    return sums


def _assemble(graph: StepGraph, n: int, level_sums: np.ndarray, q: int) -> float:
    correction = math.fsum(level_sums[: q + 1])
    return math.pi * n / graph.S0 - 2.0 / math.pi * correction


def explicit_eigenvalue(graph: StepGraph, n: int, cfg: ExpansionConfig, threads: int = 1) -> float:
    """``k_n`` from the periodic-orbit expansion truncated per ``cfg``."""
    if n < 1:
        raise ValueError("root indices start at 1")
    sums = orbit_level_sums(graph, [n], cfg, threads)
    return _assemble(graph, n, sums[0], cfg.q_max)


def oracle_eigenvalue(graph: StepGraph, n: int, tol: float = 1e-12) -> float:
    trig = chain_to_trig_polynomial(graph.chain())
    return find_root_in_zone(trig, regularity(trig), n, tol)


def convergence_scan(
    graph: StepGraph,
    n_list: Sequence[int],
    q_list: Sequence[int],
    cfg: ExpansionConfig,
    tol: float = 1e-12,
    threads: int = 1,
) -> list[EigenvalueRecord]:
    """Truncated expansion against the bisection root, one record per (n, q).

    ``cfg.q_max`` is replaced by ``max(q_list)``; records are ordered n-major,
    q-minor.  ``q = 0`` is allowed and gives the bare mean-level estimate.
    """
    if not q_list:
        raise ValueError("q_list is empty")
    if not n_list:
        raise ValueError("n_list is empty")
    if min(q_list) < 0 or min(n_list) < 1:
        raise ValueError("need q >= 0 and n >= 1")
    trig = chain_to_trig_polynomial(graph.chain())
    report = regularity(trig)
    report.require_regular()
    run_cfg = ExpansionConfig(
        max(1, max(q_list)), cfg.nu_max, cfg.nu_tail_tol, cfg.use_grouped, cfg.order
    )
    sums = orbit_level_sums(graph, list(n_list), run_cfg, threads)
    records = []
    for i, n in enumerate(n_list):
        k_ref = find_root_in_zone(trig, report, n, tol)
        for q in q_list:
            records.append(EigenvalueRecord(n, q, _assemble(graph, n, sums[i], q), k_ref))
    return records


def power_law_fit(
    records: Sequence[EigenvalueRecord],
    q_min: int = 5,
    q_max: int | None = None,
    min_points: int = 10,
    min_span: float = 4.0,
) -> float:
    """Least-squares slope of ``log eps`` against ``log q`` on ``[q_min, q_max]``."""
    rows = [r for r in records if r.q >= q_min and (q_max is None or r.q <= q_max)]
    if len({r.n for r in rows}) > 1:
        raise ValueError("fit records of a single n at a time")
    if len(rows) < min_points:
        raise ValueError(f"need at least {min_points} records in the window, got {len(rows)}")
    q = np.array([r.q for r in rows], dtype=float)
    eps = np.array([r.eps for r in rows])
    if q.max() / q.min() < min_span:
        raise ValueError(f"window spans a factor {q.max() / q.min():.3g} in q, need {min_span}")
    if np.any(eps <= 0):
        raise ValueError("relative errors must be positive for a log-log fit")
    slope, _ = np.polyfit(np.log(q), np.log(eps), 1)
    return float(slope)


def window_median(records: Sequence[EigenvalueRecord], q_lo: int, q_hi: int) -> float:
    return float(np.median([r.eps for r in records if q_lo <= r.q <= q_hi]))
