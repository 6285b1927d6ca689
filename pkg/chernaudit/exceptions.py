"""
Exception hierarchy for chernaudit
"""

from typing import Optional


class ChernAuditError(Exception):
    """Base class for all errors raised by the verification engine"""


class RingConstructionError(ChernAuditError):
    """A ChowPresentation was given an incomplete or malformed top table"""


class RingMismatchError(ChernAuditError):
    """Two classes from different presentations were combined"""


class DegreeError(ChernAuditError):
    """A class did not have the degree an operation requires"""


class NotAUnitError(ChernAuditError):
    """inverse_unit was asked to invert a class whose constant term is not 1"""


class ParityError(ChernAuditError):
    """Riemann-Hurwitz data gives an odd 2g-2"""


class GenusError(ChernAuditError):
    """A genus computation produced a negative or non-integral value"""


class RootOrderError(ChernAuditError):
    """A Puiseux exponent has a denominator outside the declared root order"""


class ParabolicFamilyError(ChernAuditError):
    """A parabolic family is empty or its levels are not increasing in [0, 1)"""


class ConfigError(ChernAuditError):
    """A config file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")
