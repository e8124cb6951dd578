"""Exception hierarchy shared by all modules."""


class MouldCalcError(Exception):
    """Base class for all library errors."""


class ConstantTermError(MouldCalcError, ValueError):
    """A series that must lie in xC[[x]] (or z^{-1}C[[z^{-1}]]) has a
    nonzero constant term."""


class IllPosedError(MouldCalcError, ValueError):
    """The shifted Euler equation (x^2 d/dx + mu)V = b is ill-posed:
    mu = 0 but b has a nonzero x^1 coefficient."""


class FieldValidationError(MouldCalcError, ValueError):
    """The input field violates one of the prepared-form conditions.

    `condition` names the violated condition ("A(0, y) = y" or
    "d2A/dxdy(0, 0) = 0").
    """

    def __init__(self, condition, detail=""):
        self.condition = condition
        msg = f"field validation failed: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NonInvertibleMouldError(MouldCalcError, ValueError):
    """Multiplicative inversion requested for a mould whose value on the
    empty word is not invertible in C[[x]]."""


class ComouldDomainError(MouldCalcError, ValueError):
    """A comould application produced a surviving negative power of y."""


class CacheError(MouldCalcError, ValueError):
    """A mould cache file is malformed or does not match the request."""
