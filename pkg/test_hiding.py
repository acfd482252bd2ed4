"""
Capacity, embedding and extraction of hidden bits
"""
import itertools
import re

import pytest
from hypothesis import given, strategies as st

from conftest import SAMPLE_BYTES, SAMPLE_MESSAGE, carrier_table
from corpus import random_table
from csv_model import Field, Table, parse, serialize, strip
from errors import CapacityError, InvariantViolation, LengthMismatch
from hiding import BitString, embed, extract, hide_message, noesc, payload, reveal_message

ORACLE_ALPHABET = ['', 'a', 'a,b', 'x"y']

contents = st.text(alphabet=st.sampled_from(['a', ' ', ',', '"', '\n', 'é']), max_size=4)
stripped_tables = st.lists(st.lists(contents, min_size=1, max_size=4), min_size=1, max_size=4).map(Table.from_rows)


@st.composite
def table_and_message(draw):
    table = draw(stripped_tables)
    bits = draw(st.lists(st.integers(0, 1), min_size=payload(table), max_size=payload(table)))
    return table, BitString(tuple(bits))


def test_noesc():
    assert noesc('Hello,world') == 0
    assert noesc('') == 1
    assert noesc('Nice to meet you') == 1
    assert noesc('say "hi"') == 0
    assert noesc('two\nlines') == 0


def test_payload(sample_table):
    assert payload(sample_table) == 8
    assert payload(Table.from_rows([['a,b']])) == 0


def test_payload_matches_independent_scan(rng):
    table = random_table(rng, rows=4, columns=5, special_rate=0.4)
    expected = sum(1 for f in table.fields() if not re.search(r'[,"\r\n]', f.content))
    assert table.field_count == 20
    assert payload(table) == expected


def test_embed_reproduces_sample_file(sample_table):
    embedded = embed(sample_table, BitString.from_string(SAMPLE_MESSAGE))
    assert serialize(embedded) == SAMPLE_BYTES


def test_embed_all_zero_and_all_one(sample_table):
    capacity = payload(sample_table)
    assert embed(sample_table, BitString.zeros(capacity)) == strip(sample_table)
    assert all(f.quoted for f in embed(sample_table, BitString.ones(capacity)).fields())


def test_embed_rejects_wrong_length(sample_table):
    with pytest.raises(LengthMismatch):
        embed(sample_table, BitString.from_string('101'))


def test_embed_needs_stripped_table(sample_bytes):
    with pytest.raises(InvariantViolation):
        embed(parse(sample_bytes), BitString.zeros(8))


def test_extract_sample_file(sample_bytes):
    result = extract(parse(sample_bytes))
    assert str(result.bits) == SAMPLE_MESSAGE
    assert result.carriers == 8
    assert result.skipped == 1
    assert result.field_count == 9


def test_extract_stripped_table_is_all_zero(sample_bytes):
    result = extract(strip(parse(sample_bytes)))
    assert result.bits == BitString.zeros(8)


def test_extract_ignores_mandatory_quoted_fields(sample_bytes):
    table = parse(sample_bytes)
    records = list(table.records)
    records[0] = (Field('x,y', True),) + records[0]
    widened = Table(tuple(records))
    assert extract(widened).bits == extract(table).bits
    assert extract(widened).skipped == extract(table).skipped + 1


def _splits(values):
    """Every way to cut a flat field list into consecutive non-empty records"""
    for cuts in itertools.product([False, True], repeat=len(values) - 1):
        rows, row = [], [values[0]]
        for value, cut in zip(values[1:], cuts):
            if cut:
                rows.append(row)
                row = []
            row.append(value)
        rows.append(row)
        yield rows


def test_exhaustive_small_tables():
    checked = 0
    for size in range(1, 5):
        for values in itertools.product(ORACLE_ALPHABET, repeat=size):
            for rows in _splits(list(values)):
                table = Table.from_rows(rows)
                capacity = payload(table)
                for bits in itertools.product([0, 1], repeat=capacity):
                    message = BitString(bits)
                    assert extract(embed(table, message)).bits == message
                    checked += 1
    assert checked > 0


@given(table_and_message())
def test_embed_extract_laws(case):
    table, message = case
    embedded = embed(table, message)
    assert extract(embedded).bits == message
    assert strip(embedded) == table
    assert payload(embedded) == payload(table)
    assert parse(serialize(embedded)) == embedded


def test_bitstring_bytes():
    assert str(BitString.from_bytes(b'\xa5')) == '10100101'
    assert BitString.from_string('0100000101000010').to_bytes() == b'AB'
    assert BitString.from_bytes(b'').length == 0
    with pytest.raises(ValueError):
        BitString.from_string('101').to_bytes()
    with pytest.raises(ValueError):
        BitString((0, 2))


def test_hide_and_reveal_message():
    table = carrier_table(40, mandatory=3)
    hidden = hide_message(table, b'hi!')
    assert reveal_message(hidden, 3) == b'hi!'
    assert reveal_message(hidden) == b'hi!\x00\x00'
    assert strip(hidden) == table


def test_hide_message_capacity():
    with pytest.raises(CapacityError):
        hide_message(carrier_table(15), b'ab')
    with pytest.raises(CapacityError):
        reveal_message(carrier_table(15), 2)
    with pytest.raises(ValueError, match="negative"):
        reveal_message(carrier_table(21), -1)
