"""
Synthetic open-data corpus and the re-save experiment
Signs every file, checks it validates, then rewrites the quoting the way a
spreadsheet re-save would and checks that validation now fails.
"""
import json
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

import config
from csv_model import Field, Table, needs_quoting, parse, serialize
from hiding import payload
from signing import KeyPair, RequoteMode, sign_table, simulate_requote, verify_bytes

logger = logging.getLogger(__name__)

ALPHABET = list('abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .-_/')
NON_ASCII = ['東京都', '人口', 'é', 'Ω', 'ß', '—']
SPECIAL_SNIPPETS = [',', '"', '""', '\r\n', '\n', '\r', ', ']


def random_content(rng: np.random.Generator, special: bool = False) -> str:
    """Short field value; `special` forces at least one comma, quote or line break"""
    length = int(rng.integers(0, 9))
    pieces = [ALPHABET[i] for i in rng.integers(0, len(ALPHABET), size=length)]
    if rng.random() < 0.1:
        pieces.append(NON_ASCII[int(rng.integers(len(NON_ASCII)))])
    if special:
        snippet = SPECIAL_SNIPPETS[int(rng.integers(len(SPECIAL_SNIPPETS)))]
        pieces.insert(int(rng.integers(0, len(pieces) + 1)), snippet)
    return ''.join(pieces)


def random_table(rng: np.random.Generator, rows: int, columns: int, ragged: bool = False,
                 special_rate: float = 0.15, quote_rate: float = 0.5,
                 trailing_newline: bool = True) -> Table:
    """Random table with a random (valid) quoting pattern"""
    records = []
    for _ in range(rows):
        width = int(rng.integers(1, columns + 1)) if ragged else columns
        record = []
        for _ in range(width):
            content = random_content(rng, bool(rng.random() < special_rate))
            quoted = needs_quoting(content) or bool(rng.random() < quote_rate)
            record.append(Field(content, quoted))
        records.append(tuple(record))
    return Table(tuple(records), trailing_newline)


def generate_corpus(count: int = config.EXPERIMENT_FILE_COUNT,
                    seed: int = config.EXPERIMENT_SEED,
                    min_payload: int = config.EXPERIMENT_MIN_PAYLOAD,
                    shape: Optional[Dict] = None) -> List[Tuple[str, Table]]:
    """Seeded list of (file name, table), each able to carry min_payload bits"""
    shape = {**config.EXPERIMENT_SHAPE, **(shape or {})}
    rng = np.random.default_rng(seed)
    corpus = []
    attempts = 0
    while len(corpus) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError(f"could not draw {count} tables with payload >= {min_payload}; enlarge the shape")
        rows = int(rng.integers(shape['rows'][0], shape['rows'][1] + 1))
        columns = int(rng.integers(shape['columns'][0], shape['columns'][1] + 1))
        table = random_table(rng, rows, columns, ragged=bool(rng.random() < 0.3),
                             special_rate=shape['special_rate'], quote_rate=shape['quote_rate'])
        if payload(table) < min_payload:
            continue
        corpus.append((f"synthetic_{len(corpus) + 1:03d}.csv", table))
    return corpus


def _requoted_valid(signed: bytes, keys: KeyPair, mode: RequoteMode) -> bool:
    resaved = serialize(simulate_requote(parse(signed), mode))
    return verify_bytes(resaved, keys.public_key).valid


def run_experiment(keys: KeyPair, corpus: List[Tuple[str, Table]]) -> pd.DataFrame:
    """One row per file: size, payload, and validation before/after re-save"""
    rows = []
    for name, table in corpus:
        signed = serialize(sign_table(table, keys))
        rows.append({
            'name': name,
            'filesize': len(serialize(table)),
            'payload': payload(table),
            'signature_bits': keys.signature_bits,
            'signed_valid': verify_bytes(signed, keys.public_key).valid,
            'strip_all_valid': _requoted_valid(signed, keys, RequoteMode.STRIP_ALL),
            'quote_all_valid': _requoted_valid(signed, keys, RequoteMode.QUOTE_ALL),
        })
        logger.debug("experiment %s: %s", name, rows[-1])
    return pd.DataFrame(rows)


def summarize(frame: pd.DataFrame) -> Dict:
    if frame.empty:
        return {'files': 0}
    return {
        'files': int(len(frame)),
        'signature_bits': int(frame['signature_bits'].iloc[0]),
        'min_payload': int(frame['payload'].min()),
        'max_payload': int(frame['payload'].max()),
        'validated': int(frame['signed_valid'].sum()),
        'rejected_after_strip_all': int((~frame['strip_all_valid']).sum()),
        'rejected_after_quote_all': int((~frame['quote_all_valid']).sum()),
    }


def experiment_passed(summary: Dict) -> bool:
    """Every signed file validated and every stripped re-save was rejected"""
    files = summary.get('files', 0)
    return files > 0 and summary['validated'] == files and summary['rejected_after_strip_all'] == files


def save_results(frame: pd.DataFrame, summary: Dict, path: Optional[Path] = None) -> Path:
    """Save experiment results as JSON (timestamped under RESULTS_DIR by default)"""
    if path is None:
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        path = config.RESULTS_DIR / f"experiment_{timestamp}.json"
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)

    with open(path, 'w') as f:
        json.dump({'summary': summary, 'files': frame.to_dict(orient='records')}, f, indent=2, default=str)
    return path
