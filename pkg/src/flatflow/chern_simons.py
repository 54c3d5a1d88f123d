"""Chern-Simons invariants along abelian boundary paths.

Each link component carries a meridian path a_j(t) and a longitude path
b_j(t) (rotation amounts in full turns; holonomy exp(2 pi i a_j(t))).
The change of the Chern-Simons invariant along the path is

    Delta CS = - sum_j  integral_0^1  2 b_j(t) a_j'(t) dt   (mod 1),

integrated exactly over Q for piecewise-polynomial paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import InvalidParameters, MissingComponent


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with rational coefficients, ascending order."""

    coeffs: tuple[Fraction, ...] = (Fraction(0),)

    @staticmethod
    def of(*coeffs) -> "RationalPoly":
        c = tuple(Fraction(x) for x in coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        return RationalPoly(c or (Fraction(0),))

    def __call__(self, t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return RationalPoly.of(*(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "RationalPoly":
        c = Fraction(c)
        return RationalPoly.of(*(c * x for x in self.coeffs))

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly.of(*out)

    def derivative(self) -> "RationalPoly":
        if len(self.coeffs) == 1:
            return RationalPoly.of(0)
        return RationalPoly.of(
            *(k * c for k, c in enumerate(self.coeffs) if k > 0)
        )

    def integral(self, lo: Fraction, hi: Fraction) -> Fraction:
        anti = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        ev = lambda t: sum(c * t**k for k, c in enumerate(anti))
        return ev(Fraction(hi)) - ev(Fraction(lo))

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        acc = RationalPoly.of(0)
        for c in reversed(self.coeffs):
            acc = acc * inner + RationalPoly.of(c)
        return acc


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial on [0, 1]: pieces (lo, hi, poly) in order."""

    pieces: tuple[tuple[Fraction, Fraction, RationalPoly], ...]

    @staticmethod
    def single(poly: RationalPoly) -> "PiecewisePoly":
        return PiecewisePoly(((Fraction(0), Fraction(1), poly),))

    def __post_init__(self):
        if not self.pieces:
            raise InvalidParameters("need at least one piece")
        if self.pieces[0][0] != 0 or self.pieces[-1][1] != 1:
            raise InvalidParameters("pieces must cover [0, 1]")
        for (l0, h0, p0), (l1, h1, p1) in zip(self.pieces, self.pieces[1:]):
            if h0 != l1:
                raise InvalidParameters("pieces must be contiguous")
            if p0(h0) != p1(l1):
                raise InvalidParameters("path is discontinuous at a breakpoint")

    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(p[0] for p in self.pieces) + (Fraction(1),)

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        for lo, hi, poly in self.pieces:
            if lo <= t <= hi:
                return poly(t)
        raise InvalidParameters(f"t={t} outside [0, 1]")

    def refine(self, breakpoints: Sequence[Fraction]) -> "PiecewisePoly":
        cuts = sorted(set(self.breakpoints()) | set(Fraction(b) for b in breakpoints))
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            poly = next(p for (l, h, p) in self.pieces if l <= lo and hi <= h)
            out.append((lo, hi, poly))
        return PiecewisePoly(tuple(out))

    def map_binary(self, other: "PiecewisePoly", fn) -> "PiecewisePoly":
        a = self.refine(other.breakpoints())
        b = other.refine(self.breakpoints())
        return PiecewisePoly(
            tuple(
                (lo, hi, fn(pa, pb))
                for (lo, hi, pa), (_, _, pb) in zip(a.pieces, b.pieces)
            )
        )

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self.map_binary(other, lambda p, q: p + q)

    def scale(self, c) -> "PiecewisePoly":
        return PiecewisePoly(tuple((lo, hi, p.scale(c)) for lo, hi, p in self.pieces))

    def reparametrize(self, inner: RationalPoly) -> "PiecewisePoly":
        """Precompose with a monotone polynomial map of [0,1] onto itself.

        Multi-piece paths only admit degree-1 reparametrizations (otherwise
        the new breakpoints would not be exact rationals).
        """
        if inner(Fraction(0)) != 0 or inner(Fraction(1)) != 1:
            raise InvalidParameters("reparametrization must fix 0 and 1")
        if len(self.pieces) == 1:
            return PiecewisePoly.single(self.pieces[0][2].compose(inner))
        if len(inner.coeffs) > 2:
            raise InvalidParameters(
                "nonlinear reparametrization of a multi-piece path"
            )
        a, b = inner.coeffs[0], inner.coeffs[1] if len(inner.coeffs) > 1 else Fraction(0)
        if b == 0:
            raise InvalidParameters("reparametrization must be monotone")
        out = []
        for lo, hi, poly in self.pieces:
            out.append(((lo - a) / b, (hi - a) / b, poly.compose(inner)))
        out.sort(key=lambda p: p[0])
        return PiecewisePoly(tuple(out))


def as_path(spec) -> PiecewisePoly:
    """Coerce a RationalPoly or coefficient list to a single-piece path."""
    if isinstance(spec, PiecewisePoly):
        return spec
    if isinstance(spec, RationalPoly):
        return PiecewisePoly.single(spec)
    return PiecewisePoly.single(RationalPoly.of(*spec))


@dataclass(frozen=True)
class BoundaryPath:
    """Per component: meridian turn path a_j and longitude turn path b_j,
    with shared breakpoints."""

    components: Mapping[str, tuple[PiecewisePoly, PiecewisePoly]]

    def __post_init__(self):
        for name, (a, b) in self.components.items():
            if a.breakpoints() != b.breakpoints():
                raise InvalidParameters(
                    f"component {name!r}: meridian and longitude paths must "
                    "share breakpoints"
                )


def longitude_path(
    surgery_rows: Mapping[str, Mapping[str, int]],
    meridian_paths: Mapping[str, PiecewisePoly],
) -> dict[str, PiecewisePoly]:
    """b_j = sum_c (exponent of c in the j-th longitude) a_c, exactly."""
    paths = {k: as_path(v) for k, v in meridian_paths.items()}
    out = {}
    for j, row in surgery_rows.items():
        missing = [c for c in row if c not in paths]
        if missing:
            raise MissingComponent(
                f"longitude of {j!r} references unknown components {missing}"
            )
        b: Optional[PiecewisePoly] = None
        for c, exp in row.items():
            term = paths[c].scale(exp)
            b = term if b is None else b + term
        out[j] = b if b is not None else PiecewisePoly.single(RationalPoly.of(0))
    return out


@dataclass(frozen=True)
class CSValue:
    """A Chern-Simons invariant: mod-1 exact rational, the raw path integral,
    and an optional integer lift fixing a real representative."""

    mod1: Fraction
    raw: Optional[Fraction] = None
    lift: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "mod1", Fraction(self.mod1) % 1)

    @property
    def lifted(self) -> Fraction:
        return cs_lift(self, self.lift or 0)


def kirk_klassen_cs(paths: BoundaryPath) -> CSValue:
    """Delta CS = - sum_j integral 2 b_j a_j' dt, exact over Q, mod 1."""
    total = Fraction(0)
    for name, (a, b) in paths.components.items():
        aa = a.refine(b.breakpoints())
        bb = b.refine(a.breakpoints())
        for (lo, hi, pa), (_, _, pb) in zip(aa.pieces, bb.pieces):
            total += (pb * pa.derivative()).scale(2).integral(lo, hi)
    return CSValue(mod1=(-total) % 1, raw=-total)


def cs_lift(value: CSValue, lift: int) -> Fraction:
    """The real representative mod1 + lift of a mod-1 Chern-Simons value."""
    return value.mod1 + lift
