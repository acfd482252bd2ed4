"""
CSV model that remembers how every field was quoted
Parses and writes RFC 4180 text (CRLF or LF in, CRLF out) and provides the
quote-stripped canonical form that signatures are computed over
"""
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, List, Sequence, Tuple

import config
from errors import InvariantViolation, ParseError

logger = logging.getLogger(__name__)


def needs_quoting(content: str) -> bool:
    """True when the content holds a comma, double quote, CR or LF"""
    return any(ch in config.SPECIAL_CHARACTERS for ch in content)


@dataclass(frozen=True)
class Field:
    """One cell: its logical value and whether the source enclosed it in quotes"""
    content: str
    quoted: bool = False

    @property
    def is_valid(self) -> bool:
        return self.quoted or not needs_quoting(self.content)

    def render(self) -> str:
        if not self.is_valid:
            raise InvariantViolation(f"unquoted field contains a special character: {self.content!r}")
        if not self.quoted:
            return self.content
        doubled = self.content.replace(config.QUOTE, config.QUOTE * 2)
        return f'{config.QUOTE}{doubled}{config.QUOTE}'


@dataclass(frozen=True)
class Table:
    """Ragged list of records; fields are enumerated row-major

    A final record made of one unquoted empty field only exists in text when
    a record delimiter follows it, so such tables always carry
    trailing_newline=True.
    """
    records: Tuple[Tuple[Field, ...], ...]
    trailing_newline: bool = True

    def __post_init__(self):
        records = tuple(tuple(record) for record in self.records)
        if not records:
            raise InvariantViolation("a table needs at least one record")
        for index, record in enumerate(records, start=1):
            if not record:
                raise InvariantViolation(f"record {index} has no fields")
        object.__setattr__(self, 'records', records)

        last = records[-1]
        if not self.trailing_newline and len(last) == 1 and last[0] == Field(''):
            object.__setattr__(self, 'trailing_newline', True)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[str]], trailing_newline: bool = True) -> 'Table':
        """Build a table from plain strings with only the mandatory quotes"""
        return cls(
            tuple(tuple(Field(value, needs_quoting(value)) for value in row) for row in rows),
            trailing_newline,
        )

    def fields(self) -> Iterator[Field]:
        for record in self.records:
            yield from record

    @property
    def field_count(self) -> int:
        return sum(len(record) for record in self.records)

    def contents(self) -> List[List[str]]:
        return [[f.content for f in record] for record in self.records]

    def with_quoting(self, flags: Iterable[bool]) -> 'Table':
        """Same contents, new quote flags given in row-major order"""
        flags = [bool(flag) for flag in flags]
        if len(flags) != self.field_count:
            raise InvariantViolation(f"{len(flags)} quote flags for {self.field_count} fields")
        remaining = iter(flags)
        records = [tuple(Field(f.content, next(remaining)) for f in record) for record in self.records]
        return Table(tuple(records), self.trailing_newline)


def parse(data: bytes) -> Table:
    """Parse CSV bytes, keeping the quoting state of every field"""
    if data.startswith(config.UTF8_BOM):
        data = data[len(config.UTF8_BOM):]
    try:
        text = data.decode(config.ENCODING)
    except UnicodeDecodeError as error:
        raise ParseError(f"input is not valid UTF-8: {error}", offset=error.start) from error
    if not text:
        raise ParseError("empty input", offset=0)

    records: List[Tuple[Field, ...]] = []
    record: List[Field] = []
    line = 1
    pos = 0
    end = len(text)

    while True:
        if pos < end and text[pos] == config.QUOTE:
            start = pos
            pos += 1
            pieces = []
            while True:
                close = text.find(config.QUOTE, pos)
                if close == -1:
                    raise ParseError("unbalanced quote", offset=start, line=line)
                pieces.append(text[pos:close])
                if text.startswith(config.QUOTE * 2, close):
                    pieces.append(config.QUOTE)
                    pos = close + 2
                    continue
                pos = close + 1
                break
            content = ''.join(pieces)
            if pos < end and text[pos] not in ',\r\n':
                raise ParseError(f"unexpected {text[pos]!r} after closing quote", offset=pos, line=line)
            record.append(Field(content, True))
            # quoted line breaks still advance the physical line count
            line += content.count('\n')
        else:
            start = pos
            while pos < end and text[pos] not in config.SPECIAL_CHARACTERS:
                pos += 1
            if pos < end and text[pos] == config.QUOTE:
                raise ParseError("double quote inside a non-escaped field", offset=pos, line=line)
            record.append(Field(text[start:pos], False))

        if pos >= end:
            records.append(tuple(record))
            trailing_newline = False
            break

        ch = text[pos]
        if ch == config.FIELD_SEPARATOR:
            pos += 1
            continue
        if ch == '\r':
            if not text.startswith(config.RECORD_DELIMITER, pos):
                raise ParseError("bare CR outside a quoted field", offset=pos, line=line)
            pos += 2
        else:
            pos += 1
        records.append(tuple(record))
        record = []
        line += 1
        if pos >= end:
            trailing_newline = True
            break

    table = Table(tuple(records), trailing_newline)
    logger.debug("parsed %d records, %d fields", len(table.records), table.field_count)
    return table


def strip(table: Table) -> Table:
    """Drop every optional quote, keeping only the mandatory ones"""
    return table.with_quoting(needs_quoting(f.content) for f in table.fields())


def serialize(table: Table) -> bytes:
    """Write the table with its own quote flags, CRLF between records"""
    lines = [config.FIELD_SEPARATOR.join(f.render() for f in record) for record in table.records]
    text = config.RECORD_DELIMITER.join(lines)
    if table.trailing_newline:
        text += config.RECORD_DELIMITER
    return text.encode(config.ENCODING)


def canonical_bytes(table: Table) -> bytes:
    """Minimal quoting, CRLF delimiters, one trailing CRLF, no BOM"""
    return serialize(replace(strip(table), trailing_newline=True))
