"""
Digital signatures embedded in the quoting of a CSV file
The signature is computed over canonical_bytes(table) and written into the
carrier fields of the stripped table, zero-padded to the full payload.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Union

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import padding, rsa
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey

import config
from csv_model import Table, canonical_bytes, parse, serialize, strip
from errors import CapacityError, KeyMaterialError, KeyMismatchError, UnsupportedSchemeError
from hiding import BitString, embed, extract, payload

logger = logging.getLogger(__name__)


class SignatureScheme(ABC):
    """Fixed-length sign/verify pair over byte strings"""
    name: str
    signature_bits: int
    private_type: type
    public_type: type

    @abstractmethod
    def generate(self):
        """Return a fresh private key object"""

    @abstractmethod
    def _sign(self, private_key, message: bytes) -> bytes:
        pass

    @abstractmethod
    def _verify(self, public_key, message: bytes, signature: bytes) -> None:
        pass

    def sign_raw(self, private_key: 'PrivateKey', message: bytes) -> bytes:
        self._check(private_key, self.private_type)
        signature = self._sign(private_key.key, message)
        if len(signature) * 8 != self.signature_bits:
            raise KeyMismatchError(
                f"{self.name} key produced a {len(signature) * 8}-bit signature, expected {self.signature_bits}"
            )
        return signature

    def verify_raw(self, public_key: 'PublicKey', message: bytes, signature: bytes) -> bool:
        self._check(public_key, self.public_type)
        try:
            self._verify(public_key.key, message, signature)
            return True
        except (InvalidSignature, ValueError):
            return False

    def accepts(self, key) -> bool:
        return isinstance(key, (self.private_type, self.public_type))

    def _check(self, key: Union['PrivateKey', 'PublicKey'], expected: type) -> None:
        if key.scheme != self.name or not isinstance(key.key, expected) or not self.accepts(key.key):
            raise KeyMismatchError(f"key for {key.scheme!r} cannot be used with scheme {self.name!r}")


class Ed25519Scheme(SignatureScheme):
    """Deterministic EdDSA; 64-byte signatures"""
    name = 'ed25519'
    signature_bits = 512
    private_type = Ed25519PrivateKey
    public_type = Ed25519PublicKey

    def generate(self):
        return Ed25519PrivateKey.generate()

    def _sign(self, private_key, message):
        return private_key.sign(message)

    def _verify(self, public_key, message, signature):
        public_key.verify(signature, message)


class RsaScheme(SignatureScheme):
    """RSASSA-PKCS1-v1_5 with SHA-256; signature length equals the modulus length"""
    private_type = rsa.RSAPrivateKey
    public_type = rsa.RSAPublicKey

    def __init__(self, key_size: int):
        self.name = f'rsa-{key_size}'
        self.signature_bits = key_size

    def generate(self):
        return rsa.generate_private_key(public_exponent=65537, key_size=self.signature_bits)

    def accepts(self, key) -> bool:
        return super().accepts(key) and key.key_size == self.signature_bits

    def _sign(self, private_key, message):
        return private_key.sign(message, padding.PKCS1v15(), hashes.SHA256())

    def _verify(self, public_key, message, signature):
        public_key.verify(signature, message, padding.PKCS1v15(), hashes.SHA256())


SCHEMES: Dict[str, SignatureScheme] = {
    scheme.name: scheme for scheme in (Ed25519Scheme(), RsaScheme(1024), RsaScheme(2048))
}


def get_scheme(name: str) -> SignatureScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise UnsupportedSchemeError(name, known=tuple(SCHEMES)) from None


@dataclass(frozen=True)
class PublicKey:
    scheme: str
    key: object

    def to_pem(self) -> str:
        pem = self.key.public_bytes(
            encoding=serialization.Encoding.PEM,
            format=serialization.PublicFormat.SubjectPublicKeyInfo,
        )
        return f"{config.KEY_FILE_LABEL}: {self.scheme}\n{pem.decode('ascii')}"


@dataclass(frozen=True)
class PrivateKey:
    scheme: str
    key: object = field(repr=False)

    def to_pem(self) -> str:
        pem = self.key.private_bytes(
            encoding=serialization.Encoding.PEM,
            format=serialization.PrivateFormat.PKCS8,
            encryption_algorithm=serialization.NoEncryption(),
        )
        return f"{config.KEY_FILE_LABEL}: {self.scheme}\n{pem.decode('ascii')}"


@dataclass(frozen=True)
class KeyPair:
    """κ_pub / κ_priv for one scheme"""
    public_key: PublicKey
    private_key: PrivateKey = field(repr=False)

    @property
    def scheme(self) -> str:
        return self.public_key.scheme

    @property
    def signature_bits(self) -> int:
        return get_scheme(self.scheme).signature_bits


def keygen(scheme: str = config.DEFAULT_SCHEME) -> KeyPair:
    impl = get_scheme(scheme)
    private = impl.generate()
    logger.debug("generated %s key pair", impl.name)
    return KeyPair(PublicKey(impl.name, private.public_key()), PrivateKey(impl.name, private))


def _split_key_file(text: str):
    header, _, pem = text.partition('\n')
    label, sep, name = header.partition(':')
    if not sep or label.strip() != config.KEY_FILE_LABEL:
        raise KeyMaterialError(f"key file must start with '{config.KEY_FILE_LABEL}: <scheme>'")
    return get_scheme(name.strip()), pem.encode('ascii')


def load_private_key(text: str) -> KeyPair:
    """Read a private key file; the public half is derived from it"""
    scheme, pem = _split_key_file(text)
    try:
        key = serialization.load_pem_private_key(pem, password=None)
    except (ValueError, TypeError) as error:
        raise KeyMaterialError(f"unreadable private key: {error}") from error
    if not isinstance(key, scheme.private_type) or not scheme.accepts(key):
        raise KeyMismatchError(f"private key is not a {scheme.name} key")
    return KeyPair(PublicKey(scheme.name, key.public_key()), PrivateKey(scheme.name, key))


def load_public_key(text: str) -> PublicKey:
    scheme, pem = _split_key_file(text)
    try:
        key = serialization.load_pem_public_key(pem)
    except (ValueError, TypeError) as error:
        raise KeyMaterialError(f"unreadable public key: {error}") from error
    if not isinstance(key, scheme.public_type) or not scheme.accepts(key):
        raise KeyMismatchError(f"public key is not a {scheme.name} key")
    return PublicKey(scheme.name, key)


def write_key_pair(keys: KeyPair, private_path: Path, public_path: Path) -> None:
    Path(private_path).write_text(keys.private_key.to_pem(), encoding='ascii')
    Path(public_path).write_text(keys.public_key.to_pem(), encoding='ascii')


class FailureReason(str, Enum):
    CAPACITY_TOO_SMALL = 'capacity_too_small'
    SIGNATURE_MISMATCH = 'signature_mismatch'
    PADDING_NONZERO = 'padding_nonzero'
    PARSE_ERROR = 'parse_error'


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of verify_table with capacity and padding diagnostics"""
    valid: bool
    capacity: int
    signature_bits: int
    padding_ok: bool
    failure_reason: Optional[FailureReason] = None
    scheme: str = ''
    skipped: int = 0

    def __post_init__(self):
        if self.valid and (self.failure_reason is not None or not self.padding_ok):
            raise ValueError("a valid report cannot carry a failure reason or bad padding")

    @classmethod
    def failed(cls, reason: FailureReason, scheme: str = '', capacity: int = 0,
               signature_bits: int = 0, skipped: int = 0) -> 'ValidationReport':
        """Report for a file that could not be checked at all"""
        return cls(False, capacity, signature_bits, False, reason, scheme, skipped)

    @property
    def padding_bits(self) -> int:
        return max(self.capacity - self.signature_bits, 0)

    def to_text(self) -> List[str]:
        status = "✅ VALID" if self.valid else f"❌ INVALID ({self.failure_reason.value})"
        return [
            status,
            f"scheme: {self.scheme}",
            f"capacity: {self.capacity} bits",
            f"signature bits: {self.signature_bits}",
            f"padding bits: {self.padding_bits} ({'all zero' if self.padding_ok else 'NOT zero'})",
        ]

    def to_report(self) -> List[str]:
        """Frozen key=value format, one pair per line"""
        return [
            f"valid={'true' if self.valid else 'false'}",
            f"scheme={self.scheme}",
            f"capacity={self.capacity}",
            f"signature_bits={self.signature_bits}",
            f"padding_bits={self.padding_bits}",
            f"padding_ok={'true' if self.padding_ok else 'false'}",
            f"skipped={self.skipped}",
            f"failure_reason={self.failure_reason.value if self.failure_reason else 'none'}",
        ]


def sign_table(table: Table, keys: KeyPair) -> Table:
    """Embed sign(canonical_bytes(table)) followed by zero padding"""
    scheme = get_scheme(keys.private_key.scheme)
    capacity = payload(table)
    if capacity < scheme.signature_bits:
        raise CapacityError(capacity, scheme.signature_bits)
    signature = BitString.from_bytes(scheme.sign_raw(keys.private_key, canonical_bytes(table)))
    padding_bits = capacity - signature.length
    logger.debug("signing: capacity %d, signature %d, padding %d", capacity, signature.length, padding_bits)
    return embed(strip(table), signature + BitString.zeros(padding_bits))


def verify_table(table: Table, public_key: PublicKey) -> ValidationReport:
    scheme = get_scheme(public_key.scheme)
    extracted = extract(table)
    if extracted.bits.length < scheme.signature_bits:
        raise CapacityError(extracted.bits.length, scheme.signature_bits)

    signature = extracted.bits.prefix(scheme.signature_bits).to_bytes()
    padding_ok = extracted.bits.suffix(scheme.signature_bits).all_zero
    signature_ok = scheme.verify_raw(public_key, canonical_bytes(table), signature)

    reason = None
    if not signature_ok:
        reason = FailureReason.SIGNATURE_MISMATCH
    elif not padding_ok:
        reason = FailureReason.PADDING_NONZERO
    if reason is not None:
        logger.warning("verification failed: %s", reason.value)

    return ValidationReport(
        valid=reason is None,
        capacity=extracted.carriers,
        signature_bits=scheme.signature_bits,
        padding_ok=padding_ok,
        failure_reason=reason,
        scheme=scheme.name,
        skipped=extracted.skipped,
    )


def sign_bytes(data: bytes, keys: KeyPair) -> bytes:
    return serialize(sign_table(parse(data), keys))


def verify_bytes(data: bytes, public_key: PublicKey) -> ValidationReport:
    return verify_table(parse(data), public_key)


class RequoteMode(str, Enum):
    """How a spreadsheet tool might rewrite quoting on re-save"""
    STRIP_ALL = 'strip_all'
    QUOTE_ALL = 'quote_all'


def simulate_requote(table: Table, mode: Union[RequoteMode, str]) -> Table:
    mode = RequoteMode(mode)
    if mode is RequoteMode.STRIP_ALL:
        return strip(table)
    return table.with_quoting(True for _ in table.fields())
