"""
Test csvsig with sample data
The three-record sample file carries the message 10110011; the synthetic
corpus stands in for real open-data files in the re-save experiment.
"""
import time

from conftest import SAMPLE_BYTES, SAMPLE_MESSAGE, SAMPLE_ROWS
from corpus import experiment_passed, generate_corpus, run_experiment, save_results, summarize
from csv_model import Table, parse, serialize
from hiding import BitString, embed, extract, payload


def create_sample_table() -> Table:
    """Sample table with only the mandatory quotes"""
    return Table.from_rows(SAMPLE_ROWS)


def test_sample_file_golden_vector():
    start = time.perf_counter()
    table = create_sample_table()
    assert payload(table) == 8
    assert serialize(embed(table, BitString.from_string(SAMPLE_MESSAGE))) == SAMPLE_BYTES

    result = extract(parse(SAMPLE_BYTES))
    assert str(result.bits) == SAMPLE_MESSAGE
    assert (result.carriers, result.skipped) == (8, 1)
    assert time.perf_counter() - start < 0.5


def test_synthetic_corpus_is_deterministic():
    first = generate_corpus(count=3, seed=42)
    second = generate_corpus(count=3, seed=42)
    assert [serialize(t) for _, t in first] == [serialize(t) for _, t in second]
    assert all(payload(t) >= 512 for _, t in first)
    assert [name for name, _ in first] == ['synthetic_001.csv', 'synthetic_002.csv', 'synthetic_003.csv']


def test_resave_experiment(keys, tmp_path):
    corpus = generate_corpus()
    start = time.perf_counter()
    frame = run_experiment(keys, corpus)
    assert time.perf_counter() - start < 1.0
    summary = summarize(frame)

    assert summary['files'] == 10
    assert summary['signature_bits'] == 512
    assert summary['min_payload'] >= 512
    assert summary['validated'] == 10
    assert summary['rejected_after_strip_all'] == 10
    assert summary['rejected_after_quote_all'] == 10
    assert experiment_passed(summary)
    assert list(frame.columns) == ['name', 'filesize', 'payload', 'signature_bits',
                                   'signed_valid', 'strip_all_valid', 'quote_all_valid']

    saved = save_results(frame, summary, tmp_path / 'results.json')
    assert saved.exists()


def test_experiment_passed_needs_files():
    assert not experiment_passed({'files': 0})
    assert not experiment_passed({'files': 2, 'validated': 2, 'rejected_after_strip_all': 1})
