"""Exception hierarchy.

Every error carries a stable ``code`` (used by the CLI in JSON error payloads)
and a ``usage`` flag separating malformed requests from mathematical
rejections of well-formed ones.
"""

from __future__ import annotations


class DrwError(Exception):
    code = "Error"
    usage = False


class LevelMismatch(DrwError):
    code = "LevelMismatch"


class PrecisionUnderflow(DrwError):
    code = "PrecisionUnderflow"


class PrecisionRequired(DrwError):
    code = "PrecisionRequired"


class CapExceeded(DrwError):
    code = "CapExceeded"
    usage = True


class LengthMismatch(DrwError):
    code = "LengthMismatch"


class TowerMismatch(DrwError):
    code = "TowerMismatch"


class LengthUnderflow(DrwError):
    code = "LengthUnderflow"


class DegreeOutOfRange(DrwError):
    code = "DegreeOutOfRange"


class ShapeMismatch(DrwError):
    code = "ShapeMismatch"


class DegreeMismatch(ShapeMismatch):
    code = "DegreeMismatch"


class NotAUnit(DrwError):
    code = "NotAUnit"


class NotInKernel(DrwError):
    code = "NotInKernel"


class NotInZ1(DrwError):
    code = "NotInZ1"


class UnsupportedShape(DrwError):
    code = "UnsupportedShape"


class TameInput(DrwError):
    code = "TameInput"


class UnknownSuite(DrwError):
    code = "UnknownSuite"
    usage = True


class UnknownLaw(DrwError):
    code = "UnknownLaw"
    usage = True


class ParseError(DrwError):
    """Syntax error in an expression, with 1-based line/column."""

    code = "SyntaxError"
    usage = True

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ArityError(ParseError):
    code = "ArityError"


class UnknownSymbol(ParseError):
    code = "UnknownSymbol"
