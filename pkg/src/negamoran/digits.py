"""Alphabets, digit words and the u-run block encoding.

Digit positions are 1-indexed everywhere so that "odd position" and
"even position" mean what they mean in the parity-twisted formulas.

A ``DigitSeq`` is a finite prefix plus an optional period.  An empty period
is a *finite* word.  Evaluators read a finite word as terminating, i.e. with
an implicit all-zero tail; parity maps such as :func:`complement_even` touch
only the digits that are actually listed, so call :meth:`DigitSeq.explicit`
first when the tail matters.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence


class DigitError(ValueError):
    """A digit outside the alphabet, or a malformed digit word."""


class LanguageError(DigitError):
    """A digit word that is not a u-run block expansion.

    ``position`` is the 1-indexed position of the first offending digit.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


@dataclass(frozen=True)
class SystemParams:
    s: int
    u: int

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 4:
            raise DigitError(f"base s must be an integer >= 4, got {self.s!r}")
        if not (0 <= self.u <= self.s - 1):
            raise DigitError(f"u must lie in [0, {self.s - 1}], got {self.u!r}")

    @property
    def A(self) -> tuple[int, ...]:
        return tuple(range(self.s))

    @property
    def A0(self) -> tuple[int, ...]:
        return tuple(c for c in range(1, self.s) if c != self.u)

    @property
    def Abar(self) -> tuple[int, ...]:
        # A \ {0, u}; coincides with A0 as a set
        return self.A0

    @property
    def l(self) -> int:
        return sum(1 for c in self.Abar if c % 2 == 1)

    @property
    def m(self) -> int:
        return sum(1 for c in self.Abar if c % 2 == 0)

    @property
    def branching(self) -> int:
        return len(self.Abar)


@dataclass(frozen=True)
class DigitSeq:
    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(d) for d in self.prefix))
        object.__setattr__(self, "period", tuple(int(d) for d in self.period))

    @property
    def is_finite(self) -> bool:
        return not self.period

    def validate(self, s: int) -> "DigitSeq":
        for i, d in enumerate(self.prefix + self.period, start=1):
            if not 0 <= d < s:
                raise DigitError(f"digit {d} at index {i} is outside [0, {s - 1}]")
        return self

    def explicit(self) -> "DigitSeq":
        """Same number, with the implicit zero tail spelled out."""
        return self if self.period else DigitSeq(self.prefix, (0,))

    def digit(self, n: int) -> int:
        """Digit at 1-indexed position ``n`` (zero beyond a finite word)."""
        k = len(self.prefix)
        if n <= k:
            return self.prefix[n - 1]
        if not self.period:
            return 0
        return self.period[(n - k - 1) % len(self.period)]

    def head(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, n + 1))

    def __iter__(self) -> Iterator[int]:
        yield from self.prefix
        if self.period:
            while True:
                yield from self.period

    def aligned(self) -> "DigitSeq":
        """Double an odd-length period so every period starts at the same parity."""
        if len(self.period) % 2 == 1:
            return DigitSeq(self.prefix, self.period * 2)
        return self

    def canonical(self) -> "DigitSeq":
        """Shortest prefix and primitive period of the same infinite word."""
        prefix, period = canonical_form(self.prefix, self.period, 0)
        return DigitSeq(prefix, period)

    def __str__(self) -> str:
        return format_word(self)


def canonical_form(prefix: tuple, period: tuple, filler) -> tuple[tuple, tuple]:
    """Shared normal form for eventually periodic tuples.

    An empty period means ``filler`` repeated; a period made only of
    ``filler`` is written as the empty period.
    """
    prefix, period = list(prefix), tuple(period)
    if period:
        n = len(period)
        for k in range(1, n + 1):
            if n % k == 0 and period == period[:k] * (n // k):
                period = period[:k]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix.pop()
            period = period[-1:] + period[:-1]
        if period == (filler,):
            period = ()
    if not period:
        while prefix and prefix[-1] == filler:
            prefix.pop()
    return tuple(prefix), period


@dataclass(frozen=True)
class BlockSeq:
    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(a) for a in self.prefix))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))

    def canonical(self) -> "BlockSeq":
        # block sequences have no filler value; -1 never matches
        prefix, period = canonical_form(self.prefix, self.period, -1)
        return BlockSeq(prefix, period)

    def validate(self, params: SystemParams) -> "BlockSeq":
        allowed = set(params.Abar)
        for i, a in enumerate(self.prefix + self.period, start=1):
            if a not in allowed:
                raise DigitError(
                    f"block value {a} (block {i}) not in {sorted(allowed)} for s={params.s}, u={params.u}"
                )
        return self


def _block(params: SystemParams, a: int) -> tuple[int, ...]:
    return (params.u,) * (a - 1) + (a,)


def expand_blocks(params: SystemParams, b: BlockSeq | Sequence[int]) -> DigitSeq:
    """Replace every block value a by a-1 copies of u followed by a."""
    if not isinstance(b, BlockSeq):
        b = BlockSeq(tuple(b))
    b.validate(params)
    prefix = tuple(d for a in b.prefix for d in _block(params, a))
    period = tuple(d for a in b.period for d in _block(params, a))
    return DigitSeq(prefix, period)


def _parse_blocks(params: SystemParams, digits: Sequence[int], start: int, offset: int):
    """Greedy block parser over a finite stretch.

    Yields ``(block_value, end_index)`` and stops at the first incomplete run.
    ``offset`` shifts reported positions.  Raises LanguageError on a violation.
    """
    u, allowed = params.u, set(params.Abar)
    i = start
    n = len(digits)
    while i < n:
        run = 0
        j = i
        while j < n and digits[j] == u:
            run += 1
            j += 1
            if run > params.s - 2:
                raise LanguageError(f"run of digit {u} longer than {params.s - 2}", offset + j)
        if j == n:
            return
        a = digits[j]
        if a not in allowed:
            raise LanguageError(f"digit {a} cannot terminate a block", offset + j + 1)
        if run != a - 1:
            raise LanguageError(f"block {a} needs {a - 1} leading {u}'s, found {run}", offset + j + 1)
        yield a, j + 1
        i = j + 1


def contract_blocks(params: SystemParams, d: DigitSeq) -> BlockSeq:
    """Left inverse of :func:`expand_blocks`; doubles as the S-set language test."""
    d.validate(params.s)
    if d.is_finite:
        blocks = []
        end = 0
        for a, end in _parse_blocks(params, d.prefix, 0, 0):
            blocks.append(a)
        if end != len(d.prefix):
            raise LanguageError(f"unterminated run of digit {params.u}", end + 1)
        return BlockSeq(tuple(blocks))

    # Unroll until a block boundary recurs at the same phase of the period.
    k, L = len(d.prefix), len(d.period)
    reps = (params.s - 1) // L + 2
    seen: dict[int, int] = {}
    blocks: list[int] = []
    tape = list(d.prefix)
    pos = 0
    while True:
        tape.extend(d.period * reps)
        advanced = False
        for a, end in _parse_blocks(params, tape, pos, 0):
            advanced = True
            blocks.append(a)
            pos = end
            if pos >= k:
                phase = (pos - k) % L
                if phase in seen:
                    first = seen[phase]
                    return BlockSeq(tuple(blocks[:first]), tuple(blocks[first:]))
                seen[phase] = len(blocks)
        if not advanced:
            raise LanguageError(f"unterminated run of digit {params.u}", pos + 1)


def complement_even(params: SystemParams | int, d: DigitSeq) -> DigitSeq:
    """Replace the digit at every even position by s-1-digit."""
    return _complement(params, d, parity=0)


def complement_odd(params: SystemParams | int, d: DigitSeq) -> DigitSeq:
    """Replace the digit at every odd position by s-1-digit."""
    return _complement(params, d, parity=1)


def _complement(params, d: DigitSeq, parity: int) -> DigitSeq:
    s = params.s if isinstance(params, SystemParams) else int(params)
    d.validate(s)
    d = d.aligned()
    k = len(d.prefix)

    def flip(digit, pos):
        return s - 1 - digit if pos % 2 == parity else digit

    prefix = tuple(flip(x, i) for i, x in enumerate(d.prefix, start=1))
    period = tuple(flip(x, i) for i, x in enumerate(d.period, start=k + 1))
    return DigitSeq(prefix, period)


def parse_word(text: str) -> DigitSeq:
    """Parse "113(12)" or, for bases above 10, "1,1,13(1,12)"."""
    text = text.strip().replace(" ", "")
    if text.count("(") > 1 or text.count(")") != text.count("("):
        raise DigitError(f"malformed digit word {text!r}")
    head, period_text = text, ""
    if "(" in text:
        i = text.index("(")
        if not text.endswith(")"):
            raise DigitError(f"period must close the word: {text!r}")
        head, period_text = text[:i], text[i + 1:-1]
        if not period_text:
            raise DigitError("empty period")

    def digits(part: str) -> tuple[int, ...]:
        part = part.strip(",")
        if not part:
            return ()
        if "," in part:
            return tuple(int(x) for x in part.split(","))
        if not part.isdigit():
            raise DigitError(f"bad digits {part!r}")
        return tuple(int(ch) for ch in part)

    try:
        return DigitSeq(digits(head), digits(period_text))
    except ValueError as exc:
        if isinstance(exc, DigitError):
            raise
        raise DigitError(f"bad digits in {text!r}") from exc


def format_word(d: DigitSeq, s: int | None = None) -> str:
    wide = (s is not None and s > 10) or any(x > 9 for x in d.prefix + d.period)
    sep = "," if wide else ""
    out = sep.join(map(str, d.prefix))
    if d.period:
        out += "(" + sep.join(map(str, d.period)) + ")"
    return out
