"""Exception hierarchy shared by every module."""


class GaugeLieError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 2


class MalformedInput(GaugeLieError):
    pass


class MalformedPermutation(MalformedInput):
    pass


class ShapeMismatch(MalformedInput):
    pass


class DegreeMismatch(MalformedInput):
    pass


class TruncationMismatch(MalformedInput):
    pass


class InvalidStructure(GaugeLieError):
    exit_code = 1


class InvalidContraction(InvalidStructure):
    pass


class InvalidCoalgebra(InvalidStructure):
    pass


class NotAMorphism(InvalidStructure):
    pass


class UnsupportedStructure(GaugeLieError):
    pass


class NonNilpotent(GaugeLieError):
    exit_code = 1


class SingularLinearPart(GaugeLieError):
    exit_code = 1


class NotAnEmbedding(GaugeLieError):
    exit_code = 1


class NotQuasiIso(GaugeLieError):
    exit_code = 1


class BadContraction(GaugeLieError):
    exit_code = 1


class TDegreeTooSmall(GaugeLieError):
    pass


class NotHomotopic(GaugeLieError):
    """No gauge exists at the reported arity (relative to the truncation)."""

    exit_code = 1

    def __init__(self, arity, message=None):
        self.arity = arity
        super().__init__(message or f"no homotopy: obstruction at arity {arity}")


class CertificateNotFound(GaugeLieError):
    exit_code = 1

    def __init__(self, arity, message=None):
        self.arity = arity
        super().__init__(message or f"certificate search failed at arity {arity}")
