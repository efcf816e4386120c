"""Exception hierarchy shared by all urlab modules."""


class UrlabError(Exception):
    """Base class for all errors raised by urlab."""


class InvalidDimensionError(UrlabError):
    """A dimension argument is out of range (e.g. dim < 2)."""


class InvalidOperandError(UrlabError):
    """An operand fails a structural precondition (shape, hermiticity, ...)."""


class SingularStateError(UrlabError):
    """A state eigenvalue fell below the strict-positivity floor."""


class SingularModelError(UrlabError):
    """A statistical model has a vanishing probability on a non-trivial effect."""


class NoUnbiasedEstimatorError(UrlabError):
    """The requested gradient has a component in the kernel of the Fisher operator."""
