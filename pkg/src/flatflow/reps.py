"""SU(2) representations of presented groups and t-parametrized families.

Generator images are either floating unit quaternions or exact circle
elements; families are built from small image expressions (circle cores
with polynomial turns, conjugations, products) so that fixture paths like
"core exp(2 pi i p(t)) conjugated by a solved g_t" evaluate exactly at
rational t wherever possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import InvalidParameters, NoSolution, UndefinedGenerator
from .quaternions import (
    ONE,
    ExactCircleElement,
    GroupElement,
    UnitQuaternion,
    as_quaternion,
    quat_mul,
)
from .words import GroupPresentation, Word, parse_word

DEFAULT_VALIDATE_TOL = 1e-9
ABELIAN_TOL = 1e-8  # commutator deviation separating abelian from irreducible
SOLVE_TOL = 1e-10


class RepClass(Enum):
    CENTRAL = "central"
    ABELIAN = "abelian-noncentral"
    IRREDUCIBLE = "irreducible"

    @property
    def dim_h0(self) -> int:
        return {"central": 3, "abelian-noncentral": 1, "irreducible": 0}[self.value]


@dataclass(frozen=True)
class Representation:
    """Map generator -> SU(2) image."""

    images: Mapping[str, GroupElement]

    def image(self, gen: str) -> GroupElement:
        try:
            return self.images[gen]
        except KeyError:
            raise UndefinedGenerator(f"representation has no image for {gen!r}")

    def conjugated_by(self, q: UnitQuaternion) -> "Representation":
        qi = q.inverse()
        return Representation(
            {g: q * (as_quaternion(v) * qi) for g, v in self.images.items()}
        )

    def circle_turns(self) -> Optional[dict[str, Fraction]]:
        """If every image is an exact circle element on one common axis,
        return the rational turns per generator; otherwise None."""
        turns: dict[str, Fraction] = {}
        axis_vec = None
        for g, v in self.images.items():
            if not isinstance(v, ExactCircleElement):
                return None
            if not v.is_central:
                from .quaternions import _axis_vector

                vec = _axis_vector(v.axis)
                if axis_vec is None:
                    axis_vec = vec
                elif not np.allclose(axis_vec, vec, atol=1e-14):
                    return None
            turns[g] = v.turns
        return turns


def evaluate_word(rep: Representation, w: Word) -> GroupElement:
    """Image of a word; exact while all factors stay on one circle."""
    acc: GroupElement = ExactCircleElement("i", Fraction(0))
    for g, e in w.letters:
        img = rep.image(g)
        if e == -1:
            img = img.inverse()
        acc = quat_mul(acc, img)
    return acc


def _deviation(rep: Representation, w: Word) -> float:
    return as_quaternion(evaluate_word(rep, w)).distance(ONE)


@dataclass(frozen=True)
class ValidationReport:
    deviations: dict[str, float]
    tol: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol


def validate(
    pres: GroupPresentation, rep: Representation, tol: float = DEFAULT_VALIDATE_TOL
) -> ValidationReport:
    """Per-relator deviation |rho(r) - 1|; passes iff all below tol."""
    if tol <= 0:
        raise InvalidParameters("tol must be positive")
    devs = {str(r) or "1": _deviation(rep, r) for r in pres.relators}
    return ValidationReport(devs, tol)


def classify(rep: Representation, tol: float = ABELIAN_TOL) -> RepClass:
    """Central / abelian-noncentral / irreducible, by commutator deviation."""
    imgs = [as_quaternion(v) for v in rep.images.values()]
    if all(min(q.distance(ONE), q.distance(-ONE)) < tol for q in imgs):
        return RepClass.CENTRAL
    for a in imgs:
        ai = a.inverse()
        for b in imgs:
            comm = a * (b * (ai * b.inverse()))
            if comm.distance(ONE) >= tol:
                return RepClass.IRREDUCIBLE
    return RepClass.ABELIAN


# --------------------------------------------------------- image expressions

def _poly_eval(coeffs: Sequence[Fraction], t):
    """Evaluate sum coeffs[k] t^k, exactly when t is a Fraction."""
    acc = Fraction(0) if isinstance(t, Fraction) else 0.0
    for c in reversed(coeffs):
        acc = acc * t + (c if isinstance(t, Fraction) else float(c))
    return acc


@dataclass(frozen=True)
class CircleExpr:
    """exp(2 pi axis * p(t)) with rational polynomial turns p."""

    axis: str
    coeffs: tuple[Fraction, ...]  # ascending; constant element if degree 0

    def at(self, t, conjugators) -> GroupElement:
        turns = _poly_eval(self.coeffs, t)
        if isinstance(turns, Fraction):
            return ExactCircleElement(self.axis, turns)
        return _float_circle(self.axis, turns)


def _float_circle(axis: str, turns: float) -> UnitQuaternion:
    ang = 2.0 * math.pi * turns
    w = math.cos(ang)
    s = math.sin(ang)
    comps = {"i": (s, 0.0, 0.0), "j": (0.0, s, 0.0), "k": (0.0, 0.0, s)}[axis]
    return UnitQuaternion.normalized(w, *comps)


@dataclass(frozen=True)
class LiteralExpr:
    value: UnitQuaternion

    def at(self, t, conjugators) -> GroupElement:
        return self.value


@dataclass(frozen=True)
class ConjugateExpr:
    """inner conjugated by a named (shared) or inline conjugator."""

    inner: "ImageExpr"
    by: Union[str, "ImageExpr"]

    def at(self, t, conjugators) -> GroupElement:
        core = self.inner.at(t, conjugators)
        if isinstance(self.by, str):
            try:
                g = conjugators[self.by]
            except KeyError:
                raise UndefinedGenerator(f"unknown conjugator {self.by!r}")
        else:
            g = self.by.at(t, conjugators)
        if isinstance(g, ExactCircleElement):
            if g.turns == 0:
                return core
            g = g.quaternion()
        return g * (as_quaternion(core) * g.inverse())


@dataclass(frozen=True)
class ProductExpr:
    factors: tuple["ImageExpr", ...]

    def at(self, t, conjugators) -> GroupElement:
        acc: GroupElement = ExactCircleElement("i", Fraction(0))
        for f in self.factors:
            acc = quat_mul(acc, f.at(t, conjugators))
        return acc


ImageExpr = Union[CircleExpr, LiteralExpr, ConjugateExpr, ProductExpr]


@dataclass(frozen=True)
class SolvedConjugator:
    """g_t = exp(2 pi s(t) * axis) found per sample so that a designated
    relator (or the whole presentation) maps to 1."""

    axis: str
    relator: Optional[str] = None  # word text; None = all relators
    tol: float = SOLVE_TOL


@dataclass(frozen=True)
class RepresentationPath:
    """A t-family of representations on [0, 1]."""

    presentation: GroupPresentation
    images: Mapping[str, ImageExpr]
    conjugators: Mapping[str, Union[SolvedConjugator, ImageExpr]] = field(
        default_factory=dict
    )

    def at(self, t) -> Representation:
        solved: dict[str, GroupElement] = {}
        for name, spec in self.conjugators.items():
            if isinstance(spec, SolvedConjugator):
                solved[name] = _solve_one_conjugator(self, name, spec, t, solved)
            else:
                solved[name] = spec.at(t, solved)
        return Representation(
            {g: expr.at(t, solved) for g, expr in self.images.items()}
        )


def _build_with_conjugator(
    path: RepresentationPath, name: str, g: GroupElement, t, solved
) -> Representation:
    conj = dict(solved)
    conj[name] = g
    return Representation({k: e.at(t, conj) for k, e in path.images.items()})


def _solve_one_conjugator(
    path: RepresentationPath,
    name: str,
    spec: SolvedConjugator,
    t,
    solved: dict[str, GroupElement],
) -> GroupElement:
    if spec.relator is not None:
        rel = parse_word(spec.relator, path.presentation)
        targets = (rel,)
    else:
        targets = path.presentation.relators

    def dev(g: GroupElement) -> float:
        rep = _build_with_conjugator(path, name, g, t, solved)
        return max(_deviation(rep, r) for r in targets)

    ident = ExactCircleElement(spec.axis, Fraction(0))
    if dev(ident) < spec.tol:
        return ident

    def dev_s(s: float) -> float:
        return dev(_float_circle(spec.axis, s))

    # conjugation by exp(2 pi s axis) has period 1/2 in s
    grid = np.linspace(0.0, 0.5, 721)
    best = min(grid, key=dev_s)
    step = 0.5 / 720
    a, b = best - step, best + step
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = dev_s(c), dev_s(d)
    for _ in range(200):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = dev_s(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = dev_s(d)
    s = 0.5 * (a + b)
    if dev_s(s) >= spec.tol:
        raise NoSolution(
            f"no conjugator on the exp(2 pi s {spec.axis}) family solves the "
            f"relation at t={t} (best deviation {dev_s(s):.3e})"
        )
    return _float_circle(spec.axis, s)


def solve_conjugator(
    pres: GroupPresentation,
    path: RepresentationPath,
    t,
    name: Optional[str] = None,
) -> GroupElement:
    """Solve the (single) conjugator family of a path at parameter t.

    Returns the identity exactly when the relation already holds there.
    """
    specs = {
        n: s for n, s in path.conjugators.items() if isinstance(s, SolvedConjugator)
    }
    if name is None:
        if len(specs) != 1:
            raise InvalidParameters(
                "path must have exactly one solved conjugator, or pass name="
            )
        name = next(iter(specs))
    solved: dict[str, GroupElement] = {}
    for n, spec in path.conjugators.items():
        if n == name:
            return _solve_one_conjugator(path, n, specs[name], t, solved)
        if isinstance(spec, SolvedConjugator):
            solved[n] = _solve_one_conjugator(path, n, spec, t, solved)
        else:
            solved[n] = spec.at(t, solved)
    raise InvalidParameters(f"no conjugator named {name!r}")
