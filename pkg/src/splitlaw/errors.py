"""Error types with stable string identifiers.

Every failure mode the solvers can report maps to one identifier; the CLI
turns validation errors into exit code 2 and runtime solver errors into 3.
"""


class SplitlawError(Exception):
    ident = "error"

    def __init__(self, message=""):
        self.message = message
        super().__init__(f"{self.ident}: {message}" if message else self.ident)


class ValidationError(SplitlawError):
    """Bad arguments or inadmissible problem setup, detectable up front."""


class SolverError(SplitlawError):
    """Failure during a run."""


class InvalidArgument(ValidationError):
    ident = "invalid-argument"


class UnsupportedFlux(ValidationError):
    ident = "unsupported-flux"


class InvalidFlux(ValidationError):
    ident = "invalid-flux"


class InvalidEntropy(ValidationError):
    ident = "invalid-entropy"


class UnresolvedScale(ValidationError):
    ident = "unresolved-scale"


class NumericalBlowup(SolverError):
    ident = "numerical-blowup"

    def __init__(self, step, message=""):
        self.step = step
        super().__init__(message or f"NaN at step {step}")


class DegenerateDensity(SolverError):
    ident = "degenerate-density"


class OutOfDomain(SolverError):
    ident = "out-of-domain"


class HypothesisViolation(SolverError):
    ident = "hypothesis-violation"


class ConstructionBug(SolverError):
    ident = "construction-bug"
