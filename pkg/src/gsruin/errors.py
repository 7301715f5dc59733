"""Exception hierarchy.

Three families map onto the CLI exit codes: ``ModelError`` (invalid model, 2),
``SpecFileError`` (unparseable model file, 3) and ``NumericalError``
(root finding / linear algebra failures, 4).
"""


class GSRuinError(Exception):
    """Base class for every error raised by this package."""


class ModelError(GSRuinError, ValueError):
    """A model component violates its admissibility conditions."""


class NonStochasticAlpha(ModelError):
    pass


class NotSubIntensity(ModelError):
    pass


class SingularB(ModelError):
    pass


class InvalidClaim(ModelError):
    pass


class InvalidPenalty(ModelError):
    pass


class NonpositiveLoading(ModelError):
    pass


class ZeroVolatility(ModelError):
    pass


class ModelNotInSpecialForm(ModelError):
    """The closed-form ruin probability shortcut does not apply to this model."""


class SpecFileError(GSRuinError, ValueError):
    """The model file could not be parsed into a model."""


class NumericalError(GSRuinError, ArithmeticError):
    pass


class PoleError(NumericalError):
    """A transform or rational function was evaluated at one of its poles."""


class DivergentTail(NumericalError):
    pass


class DegenerateRoots(NumericalError):
    """Two nodes or roots that must be distinct are closer than the separation tolerance."""


class RootCountMismatch(NumericalError):
    pass


class ImaginaryAxisRoot(NumericalError):
    pass


class SingularDividedDifference(NumericalError):
    pass


class ConsistencyFailure(NumericalError):
    pass
