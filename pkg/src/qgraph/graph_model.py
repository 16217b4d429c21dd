"""Scaling step-chain quantum graphs and their secular trigonometric polynomial.

A chain is a sequence of regions between two hard walls. Region ``i`` has a
geometric length and a scaling constant ``lambda_i`` (bond potential
``lambda_i * k**2``), so inside it the wavenumber is ``beta_i * k`` with
``beta_i = sqrt(1 - lambda_i)`` and the phase accumulated across it is
``S_i * k`` with action length ``S_i = beta_i * length_i``.

The secular function is the ``(0, 1)`` entry of the product of real transfer
matrices acting on ``(psi, psi'/k)``.  Each transfer matrix splits into two
rank-one pieces ``exp(+-i S_i k) u v^T / 2``, so the product expands into
``2**N`` phasor terms whose amplitudes are products of one factor
``1 +- beta_i / beta_{i+1}`` per interior vertex (transmission vs reflection).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .spectral import TrigPolynomial, TrigTerm


@dataclass(frozen=True)
class Region:
    length: float
    lam: float

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - self.lam)

    @property
    def action(self) -> float:
        return self.beta * self.length


@dataclass(frozen=True)
class ScalingChain:
    """Linear chain of scaling regions with Dirichlet walls at both ends."""

    regions: tuple[Region, ...]

    def __post_init__(self):
        if len(self.regions) == 0:
            raise ValueError("a chain needs at least one region")
        for i, reg in enumerate(self.regions):
            if not (reg.length > 0 and math.isfinite(reg.length)):
                raise ValueError(f"region {i}: length must be positive, got {reg.length}")
            if not (0.0 <= reg.lam < 1.0):
                raise ValueError(
                    f"region {i}: scaling constant must lie in [0, 1), got {reg.lam} "
                    "(lambda >= 1 produces turning points)"
                )

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "ScalingChain":
        return cls(tuple(Region(float(l), float(lam)) for l, lam in pairs))

    @property
    def betas(self) -> tuple[float, ...]:
        return tuple(r.beta for r in self.regions)

    @property
    def actions(self) -> tuple[float, ...]:
        return tuple(r.action for r in self.regions)

    @property
    def total_action(self) -> float:
        return math.fsum(self.actions)

    def as_step_graph(self) -> "StepGraph":
        """Return the equivalent StepGraph, if this chain is one."""
        if len(self.regions) != 2:
            raise ValueError("only two-region chains map onto a step graph")
        left, right = self.regions
        total = left.length + right.length
        if left.lam != 0.0 or abs(total - 1.0) > 1e-12:
            raise ValueError(
                "a step graph has a free left region and unit total length"
            )
        return StepGraph(left.length, right.lam)


@dataclass(frozen=True)
class StepGraph:
    """Unit well with a scaling step of strength ``lam`` on ``[b, 1]``."""

    b: float
    lam: float

    def __post_init__(self):
        if not (0.0 < self.b < 1.0):
            raise ValueError(f"step position b must lie in (0, 1), got {self.b}")
        if not (0.0 <= self.lam < 1.0):
            raise ValueError(
                f"lambda must lie in [0, 1), got {self.lam} (turning points unsupported)"
            )

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - self.lam)

    @property
    def S1(self) -> float:
        return self.b

    @property
    def S2(self) -> float:
        return self.beta * (1.0 - self.b)

    @property
    def S0(self) -> float:
        return self.S1 + self.S2

    @property
    def r(self) -> float:
        """Reflection coefficient at the step, seen from the free side."""
        beta = self.beta
        return (1.0 - beta) / (1.0 + beta)

    def chain(self) -> ScalingChain:
        return ScalingChain((Region(self.b, 0.0), Region(1.0 - self.b, self.lam)))


def build_step_graph(b: float, lam: float) -> StepGraph:
    return StepGraph(float(b), float(lam))


@dataclass(frozen=True)
class PhasorTerm:
    """``amplitude * sin(action * k)``; phase offsets are folded in later."""

    amplitude: float
    action: float


def expand_phasors(chain: ScalingChain) -> list[PhasorTerm]:
    """Expand the transfer-matrix product into signed-frequency sine terms.

    Only sign patterns with ``s_1 = +1`` are listed; their mirror images are
    the complex conjugates and have been folded in.  Amplitudes are not yet
    normalised.
    """
    betas = chain.betas
    actions = chain.actions
    terms = []
    for tail in itertools.product((1, -1), repeat=len(betas) - 1):
        signs = (1,) + tail
        amp = 1.0
        for i in range(len(betas) - 1):
            ratio = betas[i] / betas[i + 1]
            amp *= 1.0 + ratio if signs[i] == signs[i + 1] else 1.0 - ratio
        freq = math.fsum(s * a for s, a in zip(signs, actions))
        terms.append(PhasorTerm(amp, freq))
    return terms


def secular_scale(chain: ScalingChain) -> float:
    """Factor relating the raw transfer-matrix entry to the normalised form.

    ``M[0, 1](k) == secular_scale(chain) * trig(k)`` with ``trig`` from
    :func:`chain_to_trig_polynomial`.
    """
    betas = chain.betas
    lead = math.prod(1.0 + betas[i] / betas[i + 1] for i in range(len(betas) - 1))
    return lead / (2 ** (len(betas) - 1) * betas[0])


def chain_to_trig_polynomial(chain: ScalingChain, merge_tol: float = 1e-12) -> TrigPolynomial:
    """Secular function of ``chain`` as a normalised trigonometric polynomial.

    The result reads ``cos(S0 k - pi/2) - sum_i a_i cos(S_i k - pi g_i)`` with
    ``a_i >= 0`` and ``g_i`` in ``{1/2, -1/2}``.  Frequencies equal within
    ``merge_tol * S0`` are merged; the zero frequency drops out because every
    term is a sine.
    """
    phasors = expand_phasors(chain)
    lead = phasors[0]
    s0 = chain.total_action
    if any(a <= 0 for a in chain.actions):
        raise ValueError("degenerate chain: zero action length")

    # secondary terms keyed by |frequency|: c * sin(|w| k)
    merged: list[list[float]] = []
    for ph in phasors[1:]:
        coeff = ph.amplitude / lead.amplitude
        w = ph.action
        if w < 0:
            w, coeff = -w, -coeff
        for slot in merged:
            if abs(slot[0] - w) <= merge_tol * s0:
                slot[1] += coeff
                break
        else:
            merged.append([w, coeff])

    terms = []
    for w, c in sorted(merged, key=lambda t: -t[0]):
        if w <= merge_tol * s0:
            continue
        # sin(S0 k) + c sin(w k) = cos(S0 k - pi/2) - a cos(w k - pi g)
        if c <= 0:
            terms.append(TrigTerm(-c, w, Fraction(1, 2)))
        else:
            terms.append(TrigTerm(c, w, Fraction(-1, 2)))
    return TrigPolynomial(s0, Fraction(1, 2), tuple(terms))


def system_from_json(doc: Mapping[str, Any]) -> ScalingChain | StepGraph | TrigPolynomial:
    """Build a system from its JSON description.

    Accepted shapes::

        {"regions": [{"length": 0.3, "lambda": 0.0}, ...]}
        {"step": {"b": 0.3, "lambda": 0.5}}
        {"trig": {"S0": 1.0, "gamma0": 0.5,
                  "terms": [{"a": 0.6, "S": 0.3, "gamma": 0.5}, ...]}}
    """
    if "step" in doc:
        step = doc["step"]
        return build_step_graph(step["b"], step["lambda"])
    if "regions" in doc:
        return ScalingChain.from_pairs([(reg["length"], reg["lambda"]) for reg in doc["regions"]])
    if "trig" in doc:
        t = doc["trig"]
        terms = tuple(
            TrigTerm(float(term["a"]), float(term["S"]), _as_phase(term.get("gamma", 0.5)))
            for term in t.get("terms", [])
        )
        return TrigPolynomial(float(t["S0"]), _as_phase(t.get("gamma0", 0.5)), terms)
    raise ValueError("system needs one of 'step', 'regions' or 'trig'")


def _as_phase(x) -> Fraction | float:
    if isinstance(x, str):
        return Fraction(x)
    frac = Fraction(x).limit_denominator(1000)
    return frac if float(frac) == x else float(x)


def to_trig(system: ScalingChain | StepGraph | TrigPolynomial) -> TrigPolynomial:
    if isinstance(system, TrigPolynomial):
        return system
    if isinstance(system, StepGraph):
        system = system.chain()
    return chain_to_trig_polynomial(system)
