"""
Data hiding in the optional quotes of a CSV table
A field without special characters carries one bit: quoted = 1, bare = 0.
Fields that must be quoted carry nothing and are skipped.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from csv_model import Table, needs_quoting, strip
from errors import CapacityError, InvariantViolation, LengthMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BitString:
    """Ordered sequence of 0/1 values"""
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, 'bits', bits)

    @classmethod
    def from_string(cls, text: str) -> 'BitString':
        if set(text) - {'0', '1'}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def from_bytes(cls, data: bytes) -> 'BitString':
        """Most significant bit of each byte first"""
        unpacked = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        return cls(tuple(unpacked.tolist()))

    @classmethod
    def zeros(cls, length: int) -> 'BitString':
        return cls((0,) * length)

    @classmethod
    def ones(cls, length: int) -> 'BitString':
        return cls((1,) * length)

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def all_zero(self) -> bool:
        return not any(self.bits)

    def to_bytes(self) -> bytes:
        if self.length % 8:
            raise ValueError(f"{self.length} bits do not fill whole bytes")
        return np.packbits(np.array(self.bits, dtype=np.uint8)).tobytes()

    def prefix(self, length: int) -> 'BitString':
        return BitString(self.bits[:length])

    def suffix(self, start: int) -> 'BitString':
        return BitString(self.bits[start:])

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __add__(self, other: 'BitString') -> 'BitString':
        return BitString(self.bits + other.bits)

    def __str__(self) -> str:
        return ''.join(str(b) for b in self.bits)


@dataclass(frozen=True)
class ExtractionResult:
    """Bits read from the carriers, with the count of skipped fields"""
    bits: BitString
    carriers: int
    skipped: int

    @property
    def field_count(self) -> int:
        return self.carriers + self.skipped


def noesc(content: str) -> int:
    """1 when the field may be written either quoted or bare, else 0"""
    return 0 if needs_quoting(content) else 1


def payload(table: Table) -> int:
    """Number of bits the table can carry"""
    return sum(noesc(f.content) for f in table.fields())


def _carrier_flags(table: Table, bits: Iterable[int]) -> Iterable[bool]:
    bits = iter(bits)
    for f in table.fields():
        if noesc(f.content):
            yield next(bits) == 1
        else:
            yield True


def embed(table: Table, message: BitString) -> Table:
    """Quote carrier k iff bit k is 1; the table must already be stripped"""
    capacity = payload(table)
    if message.length != capacity:
        raise LengthMismatch(message.length, capacity)
    if any(f.quoted != needs_quoting(f.content) for f in table.fields()):
        raise InvariantViolation("embed needs a stripped table; call strip() first")
    return table.with_quoting(_carrier_flags(table, message.bits))


def extract(table: Table) -> ExtractionResult:
    bits = []
    skipped = 0
    for f in table.fields():
        if not noesc(f.content):
            skipped += 1
        else:
            bits.append(1 if f.quoted else 0)
    return ExtractionResult(BitString(tuple(bits)), carriers=len(bits), skipped=skipped)


def hide_message(table: Table, data: bytes) -> Table:
    """Embed arbitrary bytes, zero-padded to the table's payload"""
    message = BitString.from_bytes(data)
    capacity = payload(table)
    if message.length > capacity:
        raise CapacityError(capacity, message.length)
    logger.debug("hiding %d bits in %d carriers", message.length, capacity)
    return embed(strip(table), message + BitString.zeros(capacity - message.length))


def reveal_message(table: Table, length: Optional[int] = None) -> bytes:
    """Read back whole bytes; the first `length` bytes when given"""
    bits = extract(table).bits
    if length is None:
        usable = bits.length - bits.length % 8
    else:
        if length < 0:
            raise ValueError(f"message length must not be negative, got {length}")
        usable = length * 8
        if usable > bits.length:
            raise CapacityError(bits.length, usable)
    return bits.prefix(usable).to_bytes()
