"""Exception types raised across the package."""


class CohochError(Exception):
    """Base class for all package errors."""


class DegreeOutOfRange(CohochError):
    pass


class NotAChainMap(CohochError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MalformedDocument(CohochError):
    pass


class SimplicialIdentityViolation(CohochError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotReduced(CohochError):
    pass


class TwistingAxiomViolation(CohochError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotConnected(CohochError):
    pass


class InfiniteLevel(CohochError):
    pass


class NotABimodule(CohochError):
    pass


class NotABicomodule(CohochError):
    pass


class PerturbationNotLowering(CohochError):
    pass


class SquareNotZero(CohochError):
    pass


class NoLocalFiniteness(CohochError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IncoherentFamily(CohochError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class StructureNotRespected(CohochError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
