"""
Configuration settings for csvsig
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Load optional overrides from a local .env
load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent
RESULTS_DIR = Path(os.getenv('CSVSIG_RESULTS_DIR', PROJECT_ROOT / 'results'))

# CSV grammar
ENCODING = 'utf-8'
UTF8_BOM = b'\xef\xbb\xbf'
FIELD_SEPARATOR = ','
QUOTE = '"'
RECORD_DELIMITER = '\r\n'
SPECIAL_CHARACTERS = frozenset({',', '"', '\r', '\n'})

# Signature schemes
DEFAULT_SCHEME = os.getenv('CSVSIG_SCHEME', 'ed25519')
KEY_FILE_LABEL = 'csvsig-scheme'
KEYGEN_PROBE_MESSAGE = b'csvsig keygen self-test\r\n'

# Logging (stderr); stdout carries the reports
LOG_LEVEL = os.getenv('CSVSIG_LOG_LEVEL', 'WARNING')

# Re-save experiment on a synthetic corpus
EXPERIMENT_FILE_COUNT = 10
EXPERIMENT_SEED = 20240601
EXPERIMENT_MIN_PAYLOAD = 512
EXPERIMENT_SHAPE = {
    'rows': (40, 120),     # inclusive range of records per file
    'columns': (6, 16),    # inclusive range of fields per record
    'special_rate': 0.15,  # share of fields holding a comma, quote or line break
    'quote_rate': 0.5,     # share of carrier fields quoted in the source
}
