"""Spectral flow from Chern-Simons, rho, and twisted-kernel inputs:

    SF(a0, a1) = 8 (CS(a1) - CS(a0)) + (rho(a1) - rho(a0) - h(a1) - h(a0)) / 2.

Zero modes are counted with the Fintushel-Stern convention: zero eigenvalues
at the start of the path count as positive, at the end as negative.  The
mod-8 reduction uses only the mod-1 Chern-Simons difference, so it is
independent of the chosen integer lifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import InvalidParameters, NonIntegerSpectralFlow
from .rho import RhoValue

INTEGER_TOL = 1e-6

ZERO_MODE_CONVENTION = (
    "zero modes at the start of the path count as positive eigenvalues, "
    "at the end as negative (Fintushel-Stern)"
)

Rational = Union[Fraction, int]


def _rho_parts(x) -> tuple[float, Optional[Fraction]]:
    if isinstance(x, RhoValue):
        return x.value, x.exact
    fr = Fraction(x)
    return float(fr), fr


@dataclass(frozen=True)
class SpectralFlowInput:
    cs0: Rational
    cs1: Rational
    rho0: Union[RhoValue, Rational]
    rho1: Union[RhoValue, Rational]
    h0: int
    h1: int

    def __post_init__(self):
        if self.h0 < 0 or self.h1 < 0:
            raise InvalidParameters("kernel dimensions must be nonnegative")


@dataclass(frozen=True)
class SpectralFlowResult:
    sf: int
    sf_mod8: int
    residual: float
    zero_mode_convention: str = ZERO_MODE_CONVENTION


def spectral_flow(inp: SpectralFlowInput) -> SpectralFlowResult:
    """Evaluate the formula, exactly over Q when all inputs are exact; the
    result must be an integer or the inputs are inconsistent."""
    cs0, cs1 = Fraction(inp.cs0), Fraction(inp.cs1)
    rho0_f, rho0_e = _rho_parts(inp.rho0)
    rho1_f, rho1_e = _rho_parts(inp.rho1)

    if rho0_e is not None and rho1_e is not None:
        value = 8 * (cs1 - cs0) + Fraction(rho1_e - rho0_e - inp.h1 - inp.h0, 2)
        if value.denominator != 1:
            raise NonIntegerSpectralFlow(
                f"formula value {value} is not an integer; check the CS lift, "
                "rho, and kernel dimensions"
            )
        sf = int(value)
        residual = 0.0
    else:
        value = float(8 * (cs1 - cs0)) + (rho1_f - rho0_f - inp.h1 - inp.h0) / 2.0
        sf = round(value)
        residual = abs(value - sf)
        if residual >= INTEGER_TOL:
            raise NonIntegerSpectralFlow(
                f"formula value {value!r} is {residual:.2e} from an integer"
            )
    # mod-8 part from the mod-1 CS difference alone (lift independent)
    if rho0_e is not None and rho1_e is not None:
        mod8 = (
            8 * ((cs1 - cs0) % 1) + Fraction(rho1_e - rho0_e - inp.h1 - inp.h0, 2)
        ) % 8
        if mod8.denominator != 1:
            raise NonIntegerSpectralFlow(f"mod-8 value {mod8} is not an integer")
        sf_mod8 = int(mod8)
    else:
        sf_mod8 = sf % 8
    return SpectralFlowResult(sf=sf, sf_mod8=sf_mod8, residual=residual)
