"""Exception hierarchy shared by all modules."""


class ZpcpError(Exception):
    """Base class for every error raised by this package."""


class PrimeMismatch(ZpcpError):
    pass


class NotPLocal(ZpcpError):
    """A value with p in its denominator where an element of Z_(p) is required."""


class NotInR(ZpcpError):
    """A pair (s, t) of S + T that violates the congruence defining R."""


class DimensionMismatch(ZpcpError):
    pass


class DegenerateForm(ZpcpError):
    pass


class NotSublattice(ZpcpError):
    pass


class NotSigmaInvariant(ZpcpError):
    pass


class InconsistentType(ZpcpError):
    pass


class NotFree(ZpcpError):
    pass


class InRadical(ZpcpError):
    pass


class PreconditionViolated(ZpcpError):
    pass


class UnsupportedPrime(ZpcpError):
    pass


class NotElementary(ZpcpError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotUnimodularSummand(ZpcpError):
    pass


class InternalContradiction(ZpcpError):
    """A state that the underlying theorems rule out. Never expected."""


class Cancelled(ZpcpError):
    pass
