"""Exception types shared across the package."""


class SupercongError(Exception):
    """Base class for all errors raised by supercong."""


class NegativeValuation(SupercongError, ValueError):
    """A rational was expected to be a p-adic integer but p divides its denominator."""

    def __init__(self, value, p):
        self.value = value
        self.p = p
        super().__init__(f"{value} is not a {p}-adic integer")


class UnitRequired(SupercongError, ValueError):
    """The argument must be a p-adic unit (p must not divide it)."""


class DenominatorZero(SupercongError, ZeroDivisionError):
    """A lower Pochhammer symbol vanished inside the truncation range."""

    def __init__(self, k, parameter):
        self.k = k
        self.parameter = parameter
        super().__init__(f"lower parameter {parameter} gives a zero denominator at term k={k}")


class PoleEncountered(SupercongError, ZeroDivisionError):
    """A Gamma-quotient rewritten as Pochhammer products hit a zero factor."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"pole encountered at factor {factor}")


class PreconditionUnmet(SupercongError):
    """The inputs fall outside the hypotheses of the claim being checked.

    This is reported, never counted as a failure.
    """


class PrecisionError(SupercongError, ArithmeticError):
    """Residues from different contexts (or incompatible precision) were combined."""


class ConfigError(SupercongError, ValueError):
    """Invalid sweep configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
