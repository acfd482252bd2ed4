"""
Main Application - csvsig
Embeds a digital signature in the optional quotes of a CSV file and verifies it
"""
import argparse
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import List, Optional

import config
from corpus import experiment_passed, generate_corpus, run_experiment, save_results, summarize
from csv_model import Table, canonical_bytes, parse, serialize
from errors import CapacityError, KeyMaterialError, ParseError
from hiding import extract, hide_message, reveal_message
from signing import (FailureReason, KeyPair, PublicKey, RequoteMode, ValidationReport, get_scheme,
                     keygen, load_private_key, load_public_key, sign_table, simulate_requote,
                     verify_table, write_key_pair)

logger = logging.getLogger('csvsig')


class ExitStatus(IntEnum):
    SUCCESS = 0
    INVALID = 1
    USAGE = 2
    CAPACITY = 3
    PARSE = 4
    KEY = 5


class UsageError(Exception):
    """Bad paths or arguments detected after argparse"""


class CsvSigApp:
    """Main application controller"""

    def run(self, args: argparse.Namespace) -> ExitStatus:
        """Dispatch a parsed command line, mapping failures onto exit codes"""
        handler = getattr(self, f"cmd_{args.command}")
        logger.debug("running %s", args.command)
        try:
            return handler(args)
        except UsageError as error:
            print(f"❌ {error}", file=sys.stderr)
            return ExitStatus.USAGE
        except ParseError as error:
            print(f"❌ Parse error: {error}", file=sys.stderr)
            return ExitStatus.PARSE
        except CapacityError as error:
            print(f"❌ Capacity error: {error}", file=sys.stderr)
            return ExitStatus.CAPACITY
        except KeyMaterialError as error:
            print(f"❌ Key error: {error}", file=sys.stderr)
            return ExitStatus.KEY

    # commands

    def cmd_keygen(self, args) -> ExitStatus:
        keys = keygen(args.scheme)
        scheme = get_scheme(keys.scheme)
        probe = config.KEYGEN_PROBE_MESSAGE
        if not scheme.verify_raw(keys.public_key, probe, scheme.sign_raw(keys.private_key, probe)):
            print("❌ Generated key pair failed its sign/verify self-test", file=sys.stderr)
            return ExitStatus.KEY

        self._check_distinct(args.priv, args.pub)
        try:
            write_key_pair(keys, args.priv, args.pub)
        except OSError as error:
            raise UsageError(f"cannot write key files: {error}") from error

        print(f"✅ Key pair written: {args.priv} (private), {args.pub} (public)")
        print(f"scheme: {scheme.name}")
        print(f"signature bits: {scheme.signature_bits}")
        return ExitStatus.SUCCESS

    def cmd_sign(self, args) -> ExitStatus:
        keys = self._load_key_pair(args.key)
        table = self._read_table(args.input)
        signed = sign_table(table, keys)
        self._write_output(args.input, args.output, serialize(signed))

        capacity = extract(signed).carriers
        print(f"✅ Signed {args.input} -> {args.output}")
        print(f"capacity: {capacity} bits")
        print(f"signature bits: {keys.signature_bits}")
        print(f"padding bits: {capacity - keys.signature_bits}")
        return ExitStatus.SUCCESS

    def cmd_verify(self, args) -> ExitStatus:
        public_key = self._load_public_key(args.pub)
        signature_bits = get_scheme(public_key.scheme).signature_bits
        try:
            table = self._read_table(args.input)
            report = verify_table(table, public_key)
        except ParseError:
            if args.report:
                self._print_report(ValidationReport.failed(
                    FailureReason.PARSE_ERROR, public_key.scheme, signature_bits=signature_bits), True)
            raise
        except CapacityError as error:
            if args.report:
                extracted = extract(table)
                self._print_report(ValidationReport.failed(
                    FailureReason.CAPACITY_TOO_SMALL, public_key.scheme, error.capacity,
                    signature_bits, extracted.skipped), True)
            raise

        self._print_report(report, args.report)
        return ExitStatus.SUCCESS if report.valid else ExitStatus.INVALID

    def cmd_capacity(self, args) -> ExitStatus:
        table = self._read_table(args.input)
        extracted = extract(table)
        print(f"fields: {extracted.field_count}, payload: {extracted.carriers} bits, skipped: {extracted.skipped}")
        return ExitStatus.SUCCESS

    def cmd_canonicalize(self, args) -> ExitStatus:
        table = self._read_table(args.input)
        self._write_output(args.input, args.output, canonical_bytes(table))
        print(f"✅ Canonical form written to {args.output}")
        print("⚠️ Canonical form has no optional quotes: any embedded signature is gone", file=sys.stderr)
        return ExitStatus.SUCCESS

    def cmd_tamper(self, args) -> ExitStatus:
        table = self._read_table(args.input)
        self._write_output(args.input, args.output, serialize(simulate_requote(table, args.mode)))
        print(f"✅ Re-quoted ({args.mode}) copy written to {args.output}")
        return ExitStatus.SUCCESS

    def cmd_hide(self, args) -> ExitStatus:
        table = self._read_table(args.input)
        data = args.message.encode(config.ENCODING)
        hidden = hide_message(table, data)
        self._write_output(args.input, args.output, serialize(hidden))
        print(f"✅ Hid {len(data)} bytes ({len(data) * 8} bits) in {args.output}")
        print(f"capacity: {extract(hidden).carriers} bits")
        return ExitStatus.SUCCESS

    def cmd_reveal(self, args) -> ExitStatus:
        table = self._read_table(args.input)
        data = reveal_message(table, args.bytes)
        if args.bytes is None:
            data = data.rstrip(b'\x00')
        print(f"message (hex): {data.hex()}")
        print(f"message (text): {data.decode(config.ENCODING, errors='replace')}")
        return ExitStatus.SUCCESS

    def cmd_experiment(self, args) -> ExitStatus:
        print("🧪 RE-SAVE EXPERIMENT ON A SYNTHETIC CORPUS")
        print("=" * 45)
        keys = keygen(args.scheme)
        corpus = generate_corpus(args.count, args.seed, max(keys.signature_bits, config.EXPERIMENT_MIN_PAYLOAD))
        frame = run_experiment(keys, corpus)
        summary = summarize(frame)

        print(frame.to_string(index=False))
        print("-" * 45)
        print(f"validated after signing: {summary['validated']}/{summary['files']}")
        print(f"rejected after strip_all re-save: {summary['rejected_after_strip_all']}/{summary['files']}")
        print(f"rejected after quote_all re-save: {summary['rejected_after_quote_all']}/{summary['files']}")

        if args.save or args.out:
            results_file = save_results(frame, summary, args.out)
            print(f"💾 Results: {results_file}")

        if experiment_passed(summary):
            print("✅ Experiment reproduced")
            return ExitStatus.SUCCESS
        print("❌ Experiment did not reproduce")
        return ExitStatus.INVALID

    # helpers

    def _read_table(self, path: Path) -> Table:
        try:
            data = Path(path).read_bytes()
        except OSError as error:
            raise UsageError(f"cannot read {path}: {error}") from error
        return parse(data)

    def _write_output(self, source: Path, target: Path, data: bytes) -> None:
        self._check_distinct(source, target)
        try:
            Path(target).write_bytes(data)
        except OSError as error:
            raise UsageError(f"cannot write {target}: {error}") from error

    def _check_distinct(self, first: Path, second: Path) -> None:
        if Path(first).resolve() == Path(second).resolve():
            raise UsageError(f"refusing to overwrite {first}: choose a different output path")

    def _read_key_text(self, path: Path) -> str:
        try:
            return Path(path).read_text(encoding='ascii')
        except (OSError, UnicodeDecodeError) as error:
            raise KeyMaterialError(f"cannot read key file {path}: {error}") from error

    def _load_key_pair(self, path: Path) -> KeyPair:
        return load_private_key(self._read_key_text(path))

    def _load_public_key(self, path: Path) -> PublicKey:
        return load_public_key(self._read_key_text(path))

    def _print_report(self, report: ValidationReport, machine: bool) -> None:
        lines = report.to_report() if machine else report.to_text()
        for line in lines:
            print(line)


LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


def _count(minimum: int):
    """argparse type for integers no smaller than `minimum`"""
    def parse_count(text: str) -> int:
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {value}")
        return value
    return parse_count


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='csvsig', description='Embed and verify digital signatures in CSV quoting')
    parser.add_argument('--log-level', type=str.upper, choices=LOG_LEVELS, default=config.LOG_LEVEL.upper(),
                        help='Logging level for stderr diagnostics')
    commands = parser.add_subparsers(dest='command', required=True)

    keygen_cmd = commands.add_parser('keygen', help='Generate a signing key pair')
    keygen_cmd.add_argument('--scheme', default=config.DEFAULT_SCHEME, help='Signature scheme (ed25519, rsa-1024, rsa-2048)')
    keygen_cmd.add_argument('--priv', type=Path, required=True, help='Private key output path')
    keygen_cmd.add_argument('--pub', type=Path, required=True, help='Public key output path')

    sign_cmd = commands.add_parser('sign', help='Embed a signature in the quoting of a CSV file')
    sign_cmd.add_argument('--in', dest='input', type=Path, required=True)
    sign_cmd.add_argument('--key', type=Path, required=True, help='Private key file')
    sign_cmd.add_argument('--out', dest='output', type=Path, required=True)

    verify_cmd = commands.add_parser('verify', help='Verify an embedded signature')
    verify_cmd.add_argument('--in', dest='input', type=Path, required=True)
    verify_cmd.add_argument('--pub', type=Path, required=True, help='Public key file')
    verify_cmd.add_argument('--report', action='store_true', help='Print a key=value report instead of text')

    capacity_cmd = commands.add_parser('capacity', help='Count fields and embeddable bits')
    capacity_cmd.add_argument('--in', dest='input', type=Path, required=True)

    canonical_cmd = commands.add_parser(
        'canonicalize', help='Write the minimal-quoting canonical form (DESTROYS any embedded signature)')
    canonical_cmd.add_argument('--in', dest='input', type=Path, required=True)
    canonical_cmd.add_argument('--out', dest='output', type=Path, required=True)

    tamper_cmd = commands.add_parser('tamper', help='Rewrite quoting the way a spreadsheet re-save would')
    tamper_cmd.add_argument('--in', dest='input', type=Path, required=True)
    tamper_cmd.add_argument('--mode', choices=[m.value for m in RequoteMode], required=True)
    tamper_cmd.add_argument('--out', dest='output', type=Path, required=True)

    hide_cmd = commands.add_parser('hide', help='Hide an arbitrary text message in the quoting')
    hide_cmd.add_argument('--in', dest='input', type=Path, required=True)
    hide_cmd.add_argument('--message', required=True)
    hide_cmd.add_argument('--out', dest='output', type=Path, required=True)

    reveal_cmd = commands.add_parser('reveal', help='Read a hidden message back')
    reveal_cmd.add_argument('--in', dest='input', type=Path, required=True)
    reveal_cmd.add_argument('--bytes', type=_count(0), help='Message length in bytes (default: everything, NULs trimmed)')

    experiment_cmd = commands.add_parser('experiment', help='Sign, verify and re-save a synthetic corpus')
    experiment_cmd.add_argument('--count', type=_count(1), default=config.EXPERIMENT_FILE_COUNT)
    experiment_cmd.add_argument('--seed', type=int, default=config.EXPERIMENT_SEED)
    experiment_cmd.add_argument('--scheme', default=config.DEFAULT_SCHEME)
    experiment_cmd.add_argument('--save', action='store_true', help='Save JSON results under the results directory')
    experiment_cmd.add_argument('--out', type=Path, help='Save JSON results to this path')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    return int(CsvSigApp().run(args))


if __name__ == "__main__":
    sys.exit(main())
