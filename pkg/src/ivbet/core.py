"""Exact value types for the betting game.

Bits are plain ints (0 or 1). Capitals are plain Python ints, which are
arbitrary precision by nature; code that would drive a capital negative is
expected to raise, never saturate. Everything here is immutable after
construction and safe to share between threads. No floats anywhere.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "as_bit",
    "flip",
    "BitString",
    "bits",
    "ExtRatio",
    "ratio_cmp",
    "Oracle",
    "PeriodicOracle",
    "SeededOracle",
    "PrefixOracle",
    "parse_oracle",
]


def as_bit(value: int) -> int:
    """Validate that value is 0 or 1 and return it as an int."""
    if value not in (0, 1):
        raise ValueError(f"not a bit: {value!r}")
    return int(value)


def flip(bit: int) -> int:
    """Complement of a bit. flip(flip(b)) == b."""
    return 1 - as_bit(bit)


class BitString:
    """An immutable finite binary string.

    Supports the handful of operations the game needs: length, indexing,
    extension by one bit, concatenation, restriction to a prefix, and the
    prefix relation. Hashable, so usable as a memo key.
    """

    __slots__ = ("_bits",)

    def __init__(self, bit_values: Iterable[int] = ()):
        self._bits = tuple(as_bit(b) for b in bit_values)

    @classmethod
    def from_str(cls, text: str) -> BitString:
        """Parse a string of '0'/'1' characters; empty string is the empty word."""
        if any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(c) for c in text)

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def __getitem__(self, index: int) -> int:
        return self._bits[index]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitString) and self._bits == other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def extend(self, bit: int) -> BitString:
        """The one-bit extension of this string."""
        out = BitString.__new__(BitString)
        out._bits = self._bits + (as_bit(bit),)
        return out

    def __add__(self, other: BitString) -> BitString:
        if not isinstance(other, BitString):
            return NotImplemented
        out = BitString.__new__(BitString)
        out._bits = self._bits + other._bits
        return out

    def restrict(self, n: int) -> BitString:
        """The length-n initial segment. Defined only for 0 <= n <= len."""
        if not 0 <= n <= len(self._bits):
            raise ValueError(f"restriction length {n} out of range for |sigma|={len(self._bits)}")
        out = BitString.__new__(BitString)
        out._bits = self._bits[:n]
        return out

    def suffix_from(self, n: int) -> BitString:
        """The tail after position n, so restrict(n) + suffix_from(n) == self."""
        if not 0 <= n <= len(self._bits):
            raise ValueError(f"suffix start {n} out of range for |sigma|={len(self._bits)}")
        out = BitString.__new__(BitString)
        out._bits = self._bits[n:]
        return out

    def is_prefix_of(self, other: BitString) -> bool:
        return len(self._bits) <= len(other._bits) and other._bits[: len(self._bits)] == self._bits

    def __str__(self) -> str:
        return "".join(str(b) for b in self._bits)

    def __repr__(self) -> str:
        return f"BitString('{self}')"


def bits(text: str) -> BitString:
    """Shorthand for BitString.from_str."""
    return BitString.from_str(text)


@dataclass(frozen=True)
class ExtRatio:
    """A non-negative rational extended with infinity via a zero denominator.

    Any ratio with denominator 0 (including 0/0) is infinite; all infinite
    values compare equal and are the unique maximum. Finite values compare by
    cross-multiplication, exactly.
    """

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.num < 0 or self.den < 0:
            raise ValueError(f"negative component in ratio {self.num}/{self.den}")

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def _cmp(self, other: ExtRatio) -> int:
        return ratio_cmp(self, other)

    def __lt__(self, other: ExtRatio) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: ExtRatio) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: ExtRatio) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: ExtRatio) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtRatio) and self._cmp(other) == 0

    def __hash__(self) -> int:
        if self.den == 0:
            return hash("ext-ratio-infinity")
        from fractions import Fraction

        return hash(Fraction(self.num, self.den))

    def __str__(self) -> str:
        return "inf" if self.den == 0 else f"{self.num}/{self.den}"


def ratio_cmp(a: ExtRatio, b: ExtRatio) -> int:
    """Compare two extended ratios: -1 (less), 0 (equal), +1 (greater).

    Total order: infinite values (denominator 0, including 0/0) are mutually
    equal and above every finite value; finite values order as real numbers.
    """
    if a.den == 0 and b.den == 0:
        return 0
    if a.den == 0:
        return 1
    if b.den == 0:
        return -1
    lhs = a.num * b.den
    rhs = b.num * a.den
    if lhs < rhs:
        return -1
    if lhs > rhs:
        return 1
    return 0


class Oracle:
    """An infinite binary sequence given by a total deterministic rule.

    Subclasses implement bit(n) for n >= 0; repeated queries at the same index
    must agree. The description is a canonical descriptor string that
    parse_oracle accepts, so a sequence can be reconstructed from a trace.
    """

    description: str

    def bit(self, n: int) -> int:
        raise NotImplementedError

    def _check_index(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"oracle index must be non-negative, got {n}")
        return n

    def prefix(self, n: int) -> BitString:
        """The first n bits as a BitString."""
        return BitString(self.bit(i) for i in range(n))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.description!r})"


class PeriodicOracle(Oracle):
    """Repeats a fixed nonempty bit pattern forever."""

    def __init__(self, pattern: str):
        if not pattern or any(c not in "01" for c in pattern):
            raise ValueError(f"pattern must be a nonempty string over 0/1, got {pattern!r}")
        self._pattern = tuple(int(c) for c in pattern)
        self.description = f"periodic:{pattern}"

    def bit(self, n: int) -> int:
        return self._pattern[self._check_index(n) % len(self._pattern)]


class SeededOracle(Oracle):
    """Deterministic pseudorandom sequence keyed by a 64-bit seed.

    bit(n) is the low bit of a keyed blake2b digest of the index, so queries
    are stateless, order-independent and stable across platforms.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must fit in u64, got {seed}")
        self._key = seed.to_bytes(8, "little")
        self.description = f"seed:{seed}"

    def bit(self, n: int) -> int:
        n = self._check_index(n)
        digest = hashlib.blake2b(n.to_bytes(16, "little"), digest_size=1, key=self._key).digest()
        return digest[0] & 1


class PrefixOracle(Oracle):
    """An explicit finite prefix, then a declared fallback sequence.

    Indexing past the prefix is relative: bit(len(prefix) + k) is the
    fallback's bit(k), i.e. the fallback is appended after the prefix.
    """

    def __init__(self, prefix: BitString, fallback: Oracle):
        self._prefix = prefix
        self._fallback = fallback
        self.description = f"prefix:{prefix}:{fallback.description}"

    def bit(self, n: int) -> int:
        n = self._check_index(n)
        if n < len(self._prefix):
            return self._prefix[n]
        return self._fallback.bit(n - len(self._prefix))


def parse_oracle(descriptor: str) -> Oracle:
    """Build an oracle from a descriptor string.

    Syntax: ``periodic:<bitpattern>``, ``seed:<u64>``, or
    ``prefix:<bitstring>:<fallback-descriptor>`` (the fallback is itself a
    descriptor, so prefixes nest).
    """
    scheme, sep, rest = descriptor.partition(":")
    if not sep:
        raise ValueError(f"malformed oracle descriptor {descriptor!r}")
    if scheme == "periodic":
        return PeriodicOracle(rest)
    if scheme == "seed":
        try:
            seed = int(rest)
        except ValueError:
            raise ValueError(f"seed must be an integer, got {rest!r}") from None
        return SeededOracle(seed)
    if scheme == "prefix":
        head, sep2, tail = rest.partition(":")
        if not sep2:
            raise ValueError(f"prefix descriptor needs a fallback: {descriptor!r}")
        return PrefixOracle(BitString.from_str(head), parse_oracle(tail))
    raise ValueError(f"unknown oracle scheme {scheme!r} in {descriptor!r}")
