"""Rho invariants: the finite-image fixed-point formula, lens spaces,
flat-cobordism steps, connected sums, and chained pipelines."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .errors import ComputationError, InvalidParameters, NoRationalFound
from .quaternions import rationalize
from .signatures import FixedPointDatum, IsolatedFixedPoint, local_g_signature


@dataclass(frozen=True)
class RhoValue:
    """A rho invariant: float value plus, when recognized, its exact rational."""

    value: float
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.exact is not None and abs(self.value - float(self.exact)) >= 1e-9:
            raise ComputationError(
                f"exact value {self.exact} is {abs(self.value - float(self.exact)):.2e} "
                "away from the float value"
            )

    @staticmethod
    def from_exact(x) -> "RhoValue":
        fr = Fraction(x)
        return RhoValue(float(fr), fr)

    @staticmethod
    def from_float(x: float) -> "RhoValue":
        return RhoValue(float(x), None)

    def shift(self, delta: Fraction) -> "RhoValue":
        return RhoValue(
            self.value + float(delta),
            None if self.exact is None else self.exact + delta,
        )

    def __add__(self, other: "RhoValue") -> "RhoValue":
        exact = (
            self.exact + other.exact
            if self.exact is not None and other.exact is not None
            else None
        )
        return RhoValue(self.value + other.value, exact)


def _rationalized(value: float, max_den: int) -> RhoValue:
    try:
        return RhoValue(value, rationalize(value, max_den, 1e-9))
    except NoRationalFound:
        warnings.warn(
            f"rho value {value!r} not recognized as rational with denominator "
            f"<= {max_den}; reporting float only",
            stacklevel=3,
        )
        return RhoValue(value, None)


@dataclass(frozen=True)
class CoverData:
    """Data of a finite cyclic cover: group order m, the image turns k/m of
    the deck generator in the circle subgroup, and per nonidentity power
    either a signature defect or the fixed-point data it derives from."""

    m: int
    generator_turns: Fraction
    fixed_points: Mapping[int, Sequence[FixedPointDatum]] = field(default_factory=dict)
    defects: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameters("cover order must be at least 2")
        for n in list(self.fixed_points) + list(self.defects):
            if not 1 <= n <= self.m - 1:
                raise InvalidParameters(f"power {n} outside [1, {self.m - 1}]")
        overlap = set(self.fixed_points) & set(self.defects)
        if overlap:
            raise InvalidParameters(f"powers {overlap} given twice")

    def defect(self, n: int) -> float:
        """sigma(g^n); powers with no fixed points contribute zero."""
        if n in self.defects:
            return float(self.defects[n])
        if n in self.fixed_points:
            return local_g_signature(self.fixed_points[n])
        return 0.0


def _trace_term(turns: Fraction) -> float:
    return 2.0 * (math.cos(4.0 * math.pi * float(turns)) - 1.0)


def rho_finite_image(cover: CoverData) -> RhoValue:
    """rho = (1/m) sum_{n=1}^{m-1} sigma(g^n) (Tr Ad alpha(g^n) - 3),
    rationalized with denominator bound 4 m^2."""
    m = cover.m
    total = sum(
        cover.defect(n) * _trace_term(n * cover.generator_turns) for n in range(1, m)
    )
    return _rationalized(total / m, 4 * m * m)


def rho_finite_image_by_order(cover: CoverData) -> dict[int, RhoValue]:
    """Subtotals of the finite-image sum grouped by the order of g^n;
    only orders whose powers carry fixed-point data appear."""
    m = cover.m
    with_data = set(cover.fixed_points) | set(cover.defects)
    by_order: dict[int, float] = {}
    for n in sorted(with_data):
        order = m // math.gcd(n, m)
        term = cover.defect(n) * _trace_term(n * cover.generator_turns) / m
        by_order[order] = by_order.get(order, 0.0) + term
    return {
        order: _rationalized(v, 4 * m * m) for order, v in sorted(by_order.items())
    }


def rho_lens_space(p: int, q: int, k: int) -> RhoValue:
    """Rho of the circle representation sending the deck generator of
    L(p, q) to exp(2 pi i k/p): the n-th power fixes one point with
    rotation turns (n/p, n q/p), so the defect is a cotangent product."""
    if p < 2 or math.gcd(p, q % p if q % p else p) != 1:
        raise InvalidParameters(f"L({p},{q}) needs p >= 2 and gcd(p, q) = 1")
    if not 1 <= k <= p - 1:
        raise InvalidParameters(f"holonomy index k={k} outside [1, {p - 1}]")
    cover = CoverData(
        m=p,
        generator_turns=Fraction(k, p),
        fixed_points={
            n: [IsolatedFixedPoint(Fraction(n, p), Fraction(n * q, p) % 1)]
            for n in range(1, p)
        },
    )
    m = cover.m
    total = sum(cover.defect(n) * _trace_term(Fraction(n * k, p)) for n in range(1, p))
    return _rationalized(total / m, 4 * p * p)


@dataclass(frozen=True)
class CobordismStep:
    """One flat cobordism: rho(new boundary) - rho(old boundary)
    = 3 Sign W - Sign Q."""

    label: str
    sign_w: int
    sign_q: int
    sign_complex: Optional[int] = None

    def __post_init__(self):
        if self.sign_complex is not None and self.sign_q != self.sign_w + self.sign_complex:
            raise InvalidParameters(
                f"step {self.label!r}: Sign Q = {self.sign_q} must equal "
                f"Sign W + Sign^C = {self.sign_w} + {self.sign_complex}"
            )

    @property
    def delta(self) -> Fraction:
        return Fraction(3 * self.sign_w - self.sign_q)


RhoLike = Union[RhoValue, Fraction, int]


def _as_rho(x: RhoLike) -> RhoValue:
    if isinstance(x, RhoValue):
        return x
    return RhoValue.from_exact(Fraction(x))


def cobordism_step(rho_in: RhoLike, step: CobordismStep, direction: str = "forward") -> RhoValue:
    """Apply one flat-cobordism step.

    forward: rho(new) = rho(old) + (3 Sign W - Sign Q);
    backward: recover rho(old) from rho(new).
    """
    rho = _as_rho(rho_in)
    if direction == "forward":
        return rho.shift(step.delta)
    if direction == "backward":
        return rho.shift(-step.delta)
    raise InvalidParameters(f"direction must be forward or backward, got {direction!r}")


def rho_chain(rho_terminal: RhoLike, steps: Sequence[CobordismStep]) -> RhoValue:
    """Walk a chain of cobordisms backward from the terminal manifold:
    rho(initial) = rho(terminal) - sum of step deltas."""
    rho = _as_rho(rho_terminal)
    for step in steps:
        rho = rho.shift(-step.delta)
    return rho


def connected_sum_rho(a: RhoLike, b: RhoLike) -> RhoValue:
    """Rho of a connected sum is the sum of the summands' rho."""
    return _as_rho(a) + _as_rho(b)
