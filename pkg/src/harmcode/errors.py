"""Exception types shared across the package."""


class NotPrimeError(ValueError):
    """Modulus is not a prime in the supported range."""


class FieldMismatchError(ValueError):
    """Operands are bound to prime fields with different moduli."""


class ZeroInversionError(ZeroDivisionError):
    """Multiplicative inverse of zero was requested."""


class DimensionMismatchError(ValueError):
    """Vector lengths, dataset sizes, or output counts do not line up."""


class DegreeMismatchError(ValueError):
    """Polynomial degree is outside what the operation supports."""


class ConstantPolynomialError(ValueError):
    """Constant maps carry no gradient structure; schemes reject them."""


class FieldTooSmallError(ValueError):
    """The prime field has no room for the required scheme parameters."""


class InvalidParamsError(ValueError):
    """Supplied scheme parameters violate their constraints."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class ParameterCorruptionError(ValueError):
    """Decoder hit a zero denominator that valid parameters rule out."""


class BudgetExceededError(ValueError):
    """Exhaustive enumeration would exceed the configured state budget."""


class SchemaViolationError(ValueError):
    """JSON document does not match the expected schema."""


class ResidueRangeError(ValueError):
    """Integer in a JSON document is outside the residue range [0, p)."""


class CountMismatchError(ValueError):
    """Row or vector counts in a JSON document disagree with the declared sizes."""
