"""Seed-synchronized random streams.

Every random quantity shared by the two link ends comes from a ChaCha20
keystream keyed by the 32-byte seed. The 12-byte nonce is the SHA-256 of a
domain tag ("pool", "tuplegen", "schedule", "rotation", ...), so phases never
share draws. The stream is read as little-endian 64-bit words; word ``i``
sits in keystream block ``i // 8``, which makes any position directly
addressable.
"""

import hashlib

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

SEED_BYTES = 32
WORDS_PER_BLOCK = 8
BLOCK_BYTES = 64
_TWO_64 = 1 << 64
_MAX_POSITIONAL = 1 << 63
_INV_2_53 = 1.0 / (1 << 53)


def check_seed(seed: bytes) -> bytes:
    if not isinstance(seed, (bytes, bytearray)) or len(seed) != SEED_BYTES:
        raise ValueError(f"seed must be exactly {SEED_BYTES} bytes")
    return bytes(seed)


def seed_fingerprint(seed: bytes) -> str:
    """Hex SHA-256 of the seed; safe to store next to shared material."""
    return hashlib.sha256(check_seed(seed)).hexdigest()


def tag_nonce(domain_tag: str) -> bytes:
    if not domain_tag:
        raise ValueError("domain tag must be non-empty")
    return hashlib.sha256(domain_tag.encode("utf-8")).digest()[:12]


class KeyStream:
    """Deterministic stream of 64-bit words for one (seed, domain tag).

    Sequential draws (``randbelow``, ``random``) consume words from an
    internal cursor; positional reads (``words_at``, ``uniforms_at``) do not
    move it.
    """

    def __init__(self, seed: bytes, domain_tag: str):
        self._key = check_seed(seed)
        self.domain_tag = domain_tag
        self._nonce = tag_nonce(domain_tag)
        self._buffer = np.empty(0, dtype=np.uint64)
        self._buffer_start = 0
        self.position = 0

    def _keystream(self, first_block: int, blocks: int) -> bytes:
        counter = first_block.to_bytes(4, "little")
        algorithm = algorithms.ChaCha20(self._key, counter + self._nonce)
        cipher = Cipher(algorithm, mode=None)
        return cipher.encryptor().update(bytes(blocks * BLOCK_BYTES))

    def child(self, suffix: str) -> "KeyStream":
        return KeyStream(self._key, f"{self.domain_tag}:{suffix}")

    def words_at(self, start: int, count: int) -> np.ndarray:
        """Words ``start .. start + count - 1`` as a uint64 array."""
        if count <= 0:
            return np.empty(0, dtype=np.uint64)
        first_block, offset = divmod(start, WORDS_PER_BLOCK)
        blocks = -(-(offset + count) // WORDS_PER_BLOCK)
        raw = self._keystream(first_block, blocks)
        words = np.frombuffer(raw, dtype="<u8").astype(np.uint64)
        return words[offset : offset + count]

    def uniforms_at(self, start: int, count: int) -> np.ndarray:
        """Doubles in [0, 1) built from the top 53 bits of each word."""
        top = self.words_at(start, count) >> np.uint64(11)
        return top.astype(np.float64) * _INV_2_53

    def _next_word(self) -> int:
        index = self.position - self._buffer_start
        if index >= len(self._buffer):
            self._buffer_start = self.position
            self._buffer = self.words_at(self.position, 1024)
            index = 0
        self.position += 1
        return int(self._buffer[index])

    def _draw_words(self, words: int) -> int:
        value = 0
        for _ in range(words):
            value = (value << 64) | self._next_word()
        return value

    def randbelow(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection sampling."""
        if bound < 1:
            raise ValueError(f"bound must be positive, got {bound}")
        if bound == 1:
            return 0
        words = -(-bound.bit_length() // 64)
        span = 1 << (64 * words)
        limit = span - span % bound
        while True:
            value = self._draw_words(words)
            if value < limit:
                return value % bound

    def random(self) -> float:
        """Double in [0, 1) from 53 uniform bits."""
        return (self._next_word() >> 11) * _INV_2_53


def derive_stream(seed: bytes, domain_tag: str) -> KeyStream:
    return KeyStream(seed, domain_tag)


def indices_at(
    stream: KeyStream, start: int, count: int, bound: int
) -> np.ndarray:
    """Unbiased integers in [0, bound), one per position.

    Position ``t`` uses word ``t``; a rejected word is replaced by a
    sequential draw from the child stream ``"<tag>:<t>"`` so positions stay
    independent of each other.
    """
    if bound < 1 or bound > _MAX_POSITIONAL:
        raise ValueError(f"bound must be in [1, 2^63], got {bound}")
    words = stream.words_at(start, count)
    values = (words % np.uint64(bound)).astype(np.int64)
    limit = _TWO_64 - _TWO_64 % bound
    if limit < _TWO_64:
        rejected = np.flatnonzero(words >= np.uint64(limit))
        for offset in rejected.tolist():
            substream = stream.child(str(start + offset))
            values[offset] = substream.randbelow(bound)
    return values
