"""Exception types shared across the library and the CLI."""


class FlatflowError(Exception):
    """Base class for all errors raised by this package."""


class PlanError(FlatflowError):
    """A computation plan is malformed (CLI exit code 2)."""


class SchemaError(PlanError):
    """Plan document violates the schema; message lists the offending paths."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnresolvedReference(PlanError):
    pass


class CyclicPlan(PlanError):
    pass


class ComputationError(FlatflowError):
    """A well-formed computation failed (CLI exit code 3)."""


class NoRationalFound(ComputationError):
    """No rational p/q within the denominator bound approximates the value."""


class UnknownGenerator(ComputationError):
    pass


class MalformedExponent(ComputationError):
    pass


class UndefinedGenerator(ComputationError):
    pass


class NoSolution(ComputationError):
    """A root/solve step found no solution (relator deviation has no zero,
    or a homology class is not null-homologous)."""


class IllConditioned(ComputationError):
    """Numerical rank is ambiguous at the documented cutoff band."""


class DimensionMismatch(ComputationError):
    pass


class BorderlineEigenvalue(ComputationError):
    """An eigenvalue lies in the (tol, 10*tol) band, too close to call."""


class NonRealResult(ComputationError):
    """An averaged signature came out with a non-negligible imaginary part."""


class SingularAngle(ComputationError):
    """A fixed-point rotation angle is an integer number of turns."""


class InvalidParameters(ComputationError):
    pass


class RangeError(ComputationError):
    """An eigenspace index lies outside [1, m-1]."""


class MissingComponent(ComputationError):
    pass


class NonIntegerSpectralFlow(ComputationError):
    """The spectral-flow formula did not produce an integer; inputs are
    inconsistent (wrong lift, wrong rho, or wrong kernel count)."""


class InvalidInclusion(ComputationError):
    pass
