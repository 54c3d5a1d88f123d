from fractions import Fraction

import pytest

from flatflow.cli import fixture_text
from flatflow.plan import parse_plan
from flatflow.quaternions import ExactCircleElement, UnitQuaternion
from flatflow.reps import Representation
from flatflow.words import GroupPresentation


@pytest.fixture(scope="session")
def poincare_plan():
    return parse_plan(fixture_text("poincare"))


@pytest.fixture(scope="session")
def hyperbolic_plan():
    return parse_plan(fixture_text("hyperbolic"))


@pytest.fixture(scope="session")
def sigma235(poincare_plan):
    return poincare_plan.presentations["sigma235"]


@pytest.fixture(scope="session")
def sigma235_extended(poincare_plan):
    return poincare_plan.presentations["sigma235_extended"]


@pytest.fixture(scope="session")
def fundamental_rep(poincare_plan):
    """The irreducible representation of the Poincare sphere group, with the
    conjugator solved."""
    return poincare_plan.representations["fundamental"].at(Fraction(1))


@pytest.fixture(scope="session")
def trivial_rep(poincare_plan):
    return poincare_plan.representations["trivial"].at(Fraction(0))


@pytest.fixture(scope="session")
def extended_path(poincare_plan):
    return poincare_plan.paths["deformation"]


def circle(axis: str, turns) -> ExactCircleElement:
    return ExactCircleElement(axis, Fraction(turns))


@pytest.fixture(scope="session")
def surgery_words():
    """The two verbatim surgery relators of the hyperbolic example, on the
    meridian generators V, W, X, Y, Z (word container only; the remaining
    relators of that group are not determined by printable data)."""
    return GroupPresentation.parse(
        ["V", "W", "X", "Y", "Z"],
        ["V^2 Z Y X", "W^4 X V^-1 X V X^-1 Z^-1 V^-1 Z Y Z^-1 V"],
        name="hyperbolic_surgery_words",
    )


@pytest.fixture(scope="session")
def hyperbolic_alpha():
    """V, W -> -1, X -> i exp(-5 pi k/3), Y -> i, Z -> exp(2 pi k/3)."""
    from flatflow.quaternions import quat_mul

    x = quat_mul(circle("i", "1/4"), circle("k", "-5/6"))
    return Representation(
        {
            "V": circle("i", "1/2"),
            "W": circle("i", "1/2"),
            "X": x,
            "Y": circle("i", "1/4"),
            "Z": circle("k", "1/3"),
        }
    )
