"""
Exception hierarchy for the twisted torsion toolkit
"""

from typing import Optional


class TwistedTorsionError(Exception):
    """Base class for every error raised deliberately by the toolkit"""

    exit_code = 2

    def __init__(self, message: str, item: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.item = item

    def __str__(self) -> str:
        if self.item:
            return f"{self.message}: {self.item}"
        return self.message


# Input errors (exit code 2)

class InputError(TwistedTorsionError):
    """Malformed or inconsistent user input"""


class FieldSpecError(InputError):
    """Unknown or invalid field specifier"""


class ParseError(InputError):
    """Text that does not follow the polynomial, presentation or representation syntax"""


class UnknownKnotError(InputError):
    """Name not present in the built-in table"""


class RelatorViolationError(InputError):
    """A representation does not send a relator to the identity"""

    def __init__(self, relator: str, generator_names: Optional[str] = None):
        message = "representation does not satisfy relator"
        super().__init__(message, relator)
        self.relator = relator
        self.generator_names = generator_names


class PresentationError(InputError):
    """Presentation unusable for the requested computation"""


# Computational errors

class ShapeError(TwistedTorsionError, ValueError):
    """Matrix shapes do not fit the operation"""


class UndefinedDegreeError(TwistedTorsionError, ValueError):
    """Degree of the zero polynomial"""


class NotDivisibleError(TwistedTorsionError, ArithmeticError):
    """Exact division that leaves a remainder"""


class ExponentOverflowError(TwistedTorsionError, OverflowError):
    """Exponent outside the signed 32-bit range"""


class SingularMatrixError(TwistedTorsionError, ArithmeticError):
    """Matrix expected to be invertible is singular"""


class ChainComplexError(TwistedTorsionError, ValueError):
    """Boundary maps or homology bases do not form a valid based complex"""


class MissingHomologyBasisError(ChainComplexError):
    """Torsion of a non-acyclic complex requested without homology bases"""


class IncompatibleBasesError(ChainComplexError):
    """Bases of a short exact sequence are not of the form {i(c'), d}"""


class UnsupportedError(TwistedTorsionError):
    """Request outside the supported range (dimension, prime, rank)"""


class ZeroInvariantError(TwistedTorsionError, ValueError):
    """A theorem check was handed a zero invariant"""


class HypothesisError(TwistedTorsionError, ArithmeticError):
    """Order-based torsion with a vanishing denominator"""


class ConventionError(TwistedTorsionError):
    """Two independent computations of the same invariant disagree"""

    exit_code = 1
