"""
Exception hierarchy shared by the parser, the hiding layer and the signer
"""
from typing import Optional


class CsvSigError(Exception):
    """Base class for every csvsig failure"""


class ParseError(CsvSigError):
    """The input is not a CSV file this parser accepts"""

    def __init__(self, message: str, offset: Optional[int] = None, line: Optional[int] = None):
        self.offset = offset
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantViolation(CsvSigError, ValueError):
    """A Field or Table was built in a state the grammar cannot express"""


class LengthMismatch(CsvSigError, ValueError):
    """A message does not have exactly one bit per carrier field"""

    def __init__(self, message_bits: int, payload_bits: int):
        self.message_bits = message_bits
        self.payload_bits = payload_bits
        super().__init__(f"message has {message_bits} bits but the table carries {payload_bits}")


class CapacityError(CsvSigError):
    """The table has fewer carrier fields than the data to embed"""

    def __init__(self, capacity: int, required: int):
        self.capacity = capacity
        self.required = required
        super().__init__(f"payload {capacity} bits < required {required} bits")


class KeyMaterialError(CsvSigError):
    """Key files that cannot be read or used"""


class KeyMismatchError(KeyMaterialError):
    """Key material does not belong to the named signature scheme"""


class UnsupportedSchemeError(KeyMaterialError):
    """Unknown signature scheme name"""

    def __init__(self, name: str, known=()):
        self.name = name
        hint = f" (known: {', '.join(known)})" if known else ""
        super().__init__(f"unsupported signature scheme: {name!r}{hint}")
