"""
Shared fixtures for the csvsig tests
"""
import numpy as np
import pytest

from csv_model import Table
from signing import keygen

# Three records, nine fields, one mandatory-quote field, message 10110011
SAMPLE_BYTES = (
    b'"H1",H2,"N1"\r\n'
    b'"Hello,world","green",3.0\r\n'
    b'Nice to meet you,"apple","8.0"\r\n'
)
SAMPLE_ROWS = [
    ['H1', 'H2', 'N1'],
    ['Hello,world', 'green', '3.0'],
    ['Nice to meet you', 'apple', '8.0'],
]
SAMPLE_MESSAGE = '10110011'
SAMPLE_CANONICAL = (
    b'H1,H2,N1\r\n'
    b'"Hello,world",green,3.0\r\n'
    b'Nice to meet you,apple,8.0\r\n'
)


def carrier_table(carriers: int, columns: int = 16, mandatory: int = 0) -> Table:
    """Stripped table with exactly `carriers` carrier fields plus `mandatory` comma fields"""
    values = [f"v{i}" for i in range(carriers)] + [f"c,{i}" for i in range(mandatory)]
    rows = [values[i:i + columns] for i in range(0, len(values), columns)] or [['a,b']]
    return Table.from_rows(rows)


@pytest.fixture
def sample_bytes():
    return SAMPLE_BYTES


@pytest.fixture
def sample_table():
    return Table.from_rows(SAMPLE_ROWS)


@pytest.fixture(scope='session')
def keys():
    return keygen('ed25519')


@pytest.fixture(scope='session')
def other_keys():
    return keygen('ed25519')


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
