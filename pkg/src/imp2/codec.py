"""Binary strings, the self-delimiting two-part program code, and the
length-stratified program space.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``; the empty
string is epsilon.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = [
    "ProgramCode", "Stratum", "MalformedProgram",
    "binstring_unrank", "binstring_rank", "prefix_length", "encode_index",
    "encode_program", "decode_program", "strata", "count_programs",
    "stratum_size", "sentence_range", "iterate_stratum", "sample_program",
]


def binstring_unrank(n: int) -> str:
    """The n-th binary string in length-increasing lexicographic order."""
    if n < 0:
        raise ValueError("index must be non-negative")
    return bin(n + 1)[3:]


def binstring_rank(s: str) -> int:
    if s and s.strip("01"):
        raise ValueError(f"not a bit string: {s!r}")
    return int("1" + s, 2) - 1


def prefix_length(n: int) -> int:
    """Length in bits of the self-delimiting code of sentence index ``n``."""
    return 2 * ((n + 1).bit_length() - 1) + 1


def encode_index(n: int) -> str:
    b = binstring_unrank(n)
    return "1" * len(b) + "0" + b


@dataclass(frozen=True)
class ProgramCode:
    sentence_index: int
    input: str = ""

    @property
    def bits(self) -> str:
        return encode_program(self)

    def __len__(self) -> int:
        return prefix_length(self.sentence_index) + len(self.input)


class MalformedProgram(ValueError):
    """The bit string ends inside the self-delimiting sentence index."""


def encode_program(p: ProgramCode) -> str:
    return encode_index(p.sentence_index) + p.input


def decode_program(bits: str, stream: bool = False):
    """Split ``bits`` into its sentence index and input stream.

    Returns a :class:`ProgramCode`; with ``stream=True`` returns
    ``(code, consumed)`` where ``consumed`` is the length of the index part.
    """
    if bits.strip("01"):
        raise ValueError(f"not a bit string: {bits!r}")
    r = 0
    while r < len(bits) and bits[r] == "1":
        r += 1
    if r == len(bits) or len(bits) < 2 * r + 1:
        raise MalformedProgram(f"input exhausted inside the index prefix of {bits!r}")
    n = binstring_rank(bits[r + 1: 2 * r + 1])
    code = ProgramCode(n, bits[2 * r + 1:])
    return (code, 2 * r + 1) if stream else code


# -- program space ------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    code_length: int
    prefix_length: int

    @property
    def input_length(self) -> int:
        return self.code_length - self.prefix_length

    @property
    def sentence_count(self) -> int:
        return 1 << ((self.prefix_length - 1) // 2)

    @property
    def input_count(self) -> int:
        return 1 << self.input_length

    @property
    def size(self) -> int:
        return self.sentence_count * self.input_count


def strata(max_len: int) -> Iterator[Stratum]:
    """All non-empty strata of codes up to ``max_len`` bits, in enumeration order."""
    for m in range(1, max_len + 1):
        for k in range(1, m + 1, 2):
            yield Stratum(m, k)


def stratum_size(m: int, k: int) -> int:
    if k % 2 == 0 or not 1 <= k <= m:
        return 0
    return 1 << ((k - 1) // 2 + m - k)


def count_programs(max_len: int, table: bool = False):
    """Exact number of program codes of length at most ``max_len``.

    With ``table=True`` also returns the list of non-empty strata.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    rows = list(strata(max_len))
    total = sum(s.size for s in rows)
    return (total, rows) if table else total


def sentence_range(k: int) -> range:
    """Sentence indices whose self-delimiting code has ``k`` bits."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"prefix length must be odd and positive, got {k}")
    r = (k - 1) // 2
    return range((1 << r) - 1, (1 << (r + 1)) - 1)


def iterate_stratum(m: int, k: int, lo: int = 0, hi: Optional[int] = None) -> Iterator[ProgramCode]:
    """Programs of stratum (m, k) with flattened index in ``[lo, hi)``.

    Flattened index ``i`` selects sentence ``i // 2**(m-k)`` (counted from
    the first index of prefix length k) and input ``i % 2**(m-k)``.
    """
    size = stratum_size(m, k)
    if size == 0:
        raise ValueError(f"no programs with code length {m} and prefix length {k}")
    if hi is None:
        hi = size
    if not 0 <= lo <= hi <= size:
        raise ValueError(f"range [{lo}, {hi}) outside stratum of size {size}")
    ell = m - k
    first = sentence_range(k).start
    for i in range(lo, hi):
        off, y = divmod(i, 1 << ell)
        yield ProgramCode(first + off, format(y, f"0{ell}b") if ell else "")


@lru_cache(maxsize=64)
def _cumulative(max_len: int) -> tuple[list[int], list[Stratum]]:
    bounds, rows, acc = [], [], 0
    for s in strata(max_len):
        acc += s.size
        bounds.append(acc)
        rows.append(s)
    return bounds, rows


def sample_program(max_len: int, rng: random.Random) -> ProgramCode:
    """A program drawn uniformly from all codes of at most ``max_len`` bits."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    bounds, rows = _cumulative(max_len)
    i = rng.randrange(bounds[-1])
    j = bisect_right(bounds, i)
    s = rows[j]
    offset = i - (bounds[j - 1] if j else 0)
    return next(iterate_stratum(s.code_length, s.prefix_length, offset, offset + 1))
