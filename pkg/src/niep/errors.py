"""Exception hierarchy.

Exceptions deriving from :class:`InvalidInput` describe malformed problems
(CLI exit code 2). :class:`Infeasible` carries the violated conditions of a
well-formed but unrealisable problem (exit code 1), and
:class:`InternalContradiction` flags numerical breakdown or a bug (exit 3).
"""


class NiepError(Exception):
    pass


class InvalidInput(NiepError, ValueError):
    pass


class NonRealResult(InvalidInput):
    """A quantity that should be real carries a non-negligible imaginary part."""


class NoPerron(InvalidInput):
    """No maximal-modulus entry is real and nonnegative."""


class NotSelfConjugate(InvalidInput):
    """The list cannot be split into conjugate pairs and real entries."""


class DimensionError(InvalidInput):
    pass


class PreconditionViolated(NiepError):
    pass


class NotRealisable(NiepError):
    pass


class InternalContradiction(NiepError):
    pass


class Infeasible(NiepError):
    """Raised when a realisation is impossible.

    ``violations`` is a list of :class:`niep.realize.Violation`. Diagnostic
    paths may also attach the offending ``b`` vector, ``matrix`` and
    ``certificate``.
    """

    def __init__(self, violations, *, b=None, matrix=None, certificate=None):
        self.violations = list(violations)
        self.b = b
        self.matrix = matrix
        self.certificate = certificate
        super().__init__("; ".join(str(v) for v in self.violations))
