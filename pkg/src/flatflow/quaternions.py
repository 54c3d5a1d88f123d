"""Quaternion and SU(2) arithmetic.

SU(2) is identified with the unit quaternions; the adjoint action on the
imaginary part su(2) = span{i, j, k} gives the 3x3 rotation matrices used
by the twisted-cohomology machinery.  Elements of circle subgroups are kept
exact as (axis, rational turns) pairs so that finite-order images and their
products never accumulate floating error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import InvalidParameters, NoRationalFound

UNIT_TOL = 1e-12
RENORM_CHAIN = 32  # renormalize products after this many chained multiplications


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + x i + y j + z k with Hamilton multiplication."""

    w: float
    x: float
    y: float
    z: float

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a, b = self, other
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __neg__(self) -> "Quaternion":
        return type(self)(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return type(self)(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def components(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def imag(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def distance(self, other: "Quaternion") -> float:
        return math.sqrt(
            (self.w - other.w) ** 2
            + (self.x - other.x) ** 2
            + (self.y - other.y) ** 2
            + (self.z - other.z) ** 2
        )

    def isclose(self, other: "Quaternion", tol: float = 1e-9) -> bool:
        return self.distance(other) < tol


@dataclass(frozen=True)
class UnitQuaternion(Quaternion):
    """A quaternion of norm 1 (checked at construction to 1e-12).

    Chained products renormalize every RENORM_CHAIN multiplications, which
    bounds drift when evaluating long relator words.
    """

    _chain: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        n = self.norm()
        if abs(n - 1.0) > UNIT_TOL:
            raise InvalidParameters(f"not a unit quaternion: |q| = {n!r}")

    @staticmethod
    def of(w, x, y, z) -> "UnitQuaternion":
        return UnitQuaternion(float(w), float(x), float(y), float(z))

    @staticmethod
    def normalized(w, x, y, z) -> "UnitQuaternion":
        n = math.sqrt(w * w + x * x + y * y + z * z)
        return UnitQuaternion(w / n, x / n, y / n, z / n)

    def __mul__(self, other: Quaternion) -> Quaternion:
        p = Quaternion.__mul__(self, other)
        if not isinstance(other, UnitQuaternion):
            return p
        chain = max(self._chain, other._chain) + 1
        if chain >= RENORM_CHAIN:
            n = p.norm()
            return UnitQuaternion(p.w / n, p.x / n, p.y / n, p.z / n, _chain=0)
        return UnitQuaternion(p.w, p.x, p.y, p.z, _chain=chain)

    def inverse(self) -> "UnitQuaternion":
        return UnitQuaternion(self.w, -self.x, -self.y, -self.z, _chain=self._chain)


ONE = UnitQuaternion(1.0, 0.0, 0.0, 0.0)
MINUS_ONE = UnitQuaternion(-1.0, 0.0, 0.0, 0.0)

_AXES = {
    "i": np.array([1.0, 0.0, 0.0]),
    "j": np.array([0.0, 1.0, 0.0]),
    "k": np.array([0.0, 0.0, 1.0]),
}


def _axis_vector(axis) -> np.ndarray:
    if isinstance(axis, str):
        try:
            return _AXES[axis]
        except KeyError:
            raise InvalidParameters(f"axis must be 'i', 'j' or 'k', got {axis!r}")
    if isinstance(axis, Quaternion):
        if abs(axis.w) > UNIT_TOL or abs(axis.norm() - 1.0) > UNIT_TOL:
            raise InvalidParameters("axis must be a unit imaginary quaternion")
        return axis.imag()
    raise InvalidParameters(f"bad axis {axis!r}")


@dataclass(frozen=True)
class ExactCircleElement:
    """exp(2*pi*turns*axis) with rational turns, multiplied exactly on a
    common axis.

    Central values (turns 0 or 1/2, i.e. +-1) are compatible with every
    axis, so products involving them stay exact.
    """

    axis: Union[str, Quaternion]
    turns: Fraction

    def __post_init__(self):
        _axis_vector(self.axis)
        object.__setattr__(self, "turns", Fraction(self.turns))

    @property
    def is_central(self) -> bool:
        return (2 * self.turns).denominator == 1

    def quaternion(self) -> UnitQuaternion:
        ang = 2.0 * math.pi * float(self.turns)
        v = _axis_vector(self.axis) * math.sin(ang)
        return UnitQuaternion.normalized(math.cos(ang), v[0], v[1], v[2])

    def inverse(self) -> "ExactCircleElement":
        return ExactCircleElement(self.axis, -self.turns)

    def same_axis(self, other: "ExactCircleElement") -> bool:
        if self.is_central or other.is_central:
            return True
        va, vb = _axis_vector(self.axis), _axis_vector(other.axis)
        return bool(np.allclose(va, vb, atol=1e-14))

    def __mul__(self, other):
        if isinstance(other, ExactCircleElement) and self.same_axis(other):
            axis = other.axis if self.is_central else self.axis
            return ExactCircleElement(axis, self.turns + other.turns)
        q = other.quaternion() if isinstance(other, ExactCircleElement) else other
        return self.quaternion() * q

    def __rmul__(self, other):
        if isinstance(other, (UnitQuaternion, Quaternion)):
            return other * self.quaternion()
        return NotImplemented


GroupElement = Union[UnitQuaternion, ExactCircleElement]


def as_quaternion(g: GroupElement) -> UnitQuaternion:
    return g.quaternion() if isinstance(g, ExactCircleElement) else g


def quat_mul(a: GroupElement, b: GroupElement):
    """Hamilton product, exact when both factors live on one circle."""
    if isinstance(a, ExactCircleElement):
        return a * b
    if isinstance(b, ExactCircleElement):
        b = b.quaternion()
    return a * b


def ad(q: GroupElement) -> np.ndarray:
    """3x3 matrix of v -> q v q^-1 on su(2) = span{i, j, k}.

    Orthogonal with determinant +1; a homomorphism killing the center.
    """
    q = as_quaternion(q)
    w, x, y, z = q.w, q.x, q.y, q.z
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def trace_ad_minus_3(q: GroupElement) -> float:
    """trace(ad(q)) - 3 = 2(cos 2t - 1) for q conjugate to exp(i t).

    Always in [-4, 0]; zero exactly at q = +-1.  Exact circle elements are
    evaluated from their rational turns.
    """
    if isinstance(q, ExactCircleElement):
        return 2.0 * (math.cos(4.0 * math.pi * float(q.turns)) - 1.0)
    t = float(np.trace(ad(q))) - 3.0
    return min(0.0, max(-4.0, t))


def rationalize(x: float, max_denominator: int, tol: float) -> Fraction:
    """Best rational approximation p/q, q <= max_denominator, |x - p/q| < tol.

    Continued-fraction based (via Fraction.limit_denominator), hence
    deterministic and O(log max_denominator).  Raises NoRationalFound when
    nothing within the bound meets the tolerance.
    """
    if max_denominator < 1 or tol <= 0:
        raise InvalidParameters("need max_denominator >= 1 and tol > 0")
    cand = Fraction(x).limit_denominator(max_denominator)
    if abs(float(cand) - x) >= tol:
        raise NoRationalFound(
            f"{x!r} has no rational approximation with denominator <= "
            f"{max_denominator} within {tol}"
        )
    return cand
