"""Exceptions raised by the library.  All derive from :class:`FFGSError`."""


class FFGSError(Exception):
    """Base class for every error the package raises on purpose."""


class NotFlat(FFGSError):
    """A quotient module has torsion over the base ring."""

    def __init__(self, message, divisors=()):
        super().__init__(message)
        self.divisors = tuple(divisors)


class RankMismatch(FFGSError):
    """A computed module has the wrong rank (bad input or too small a degree bound)."""


class ImageNotHopf(FFGSError):
    """The image of a morphism is not a Hopf subalgebra."""


class NotHopfIdeal(FFGSError):
    """An ideal is not stable under comultiplication, counit or antipode."""


class ModelMismatch(FFGSError):
    """A supplied model does not reproduce the given generic fiber."""


class NotNormal(FFGSError):
    """A subgroup is not stable under the conjugation coaction."""


class WitnessFailure(FFGSError):
    """A supplied compatibility witness does not check."""


class IsoUndecided(FFGSError):
    """The isomorphism search cannot decide the question for these inputs."""


class StepBudgetExceeded(FFGSError):
    """A search ran out of its step budget."""


class SchemaError(FFGSError):
    """An input document is malformed; ``pointer`` is a JSON pointer to the culprit."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
