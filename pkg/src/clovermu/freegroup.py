"""Reduced words in the free group on the meridian generators x_1, ..., x_n.

Letters are stored as signed integers: ``i`` stands for x_i and ``-i`` for
x_i^-1.  Every :class:`GroupWord` is freely reduced on construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union


class RankMismatchError(ValueError):
    pass


class NotAConjugateError(ValueError):
    """Raised by :func:`strip_conjugator` when a word is not c x_i c^-1."""


class Letter(NamedTuple):
    index: int
    sign: int

    @property
    def code(self) -> int:
        return self.index * self.sign

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(abs(code), 1 if code > 0 else -1)


LetterLike = Union[Letter, int, tuple]


def _code(letter: LetterLike) -> int:
    if isinstance(letter, Letter):
        return letter.code
    if isinstance(letter, tuple):
        index, sign = letter
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign}")
        return index * sign
    return int(letter)


def _free_reduce(codes: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in codes:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class GroupWord:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        for c in self.letters:
            if c == 0 or abs(c) > self.rank:
                raise ValueError(f"generator index {abs(c)} out of range 1..{self.rank}")
        reduced = _free_reduce(self.letters)
        if reduced != self.letters:
            object.__setattr__(self, "letters", reduced)

    @classmethod
    def identity(cls, rank: int) -> "GroupWord":
        return cls(rank, ())

    @classmethod
    def generator(cls, rank: int, i: int, sign: int = 1) -> "GroupWord":
        return cls(rank, (i * sign,))

    @classmethod
    def parse(cls, text: str, rank: int) -> "GroupWord":
        return parse_word(text, rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return (Letter.from_code(c) for c in self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return multiply(self, other)

    def __invert__(self) -> "GroupWord":
        return invert(self)

    def __pow__(self, e: int) -> "GroupWord":
        return power(self, e)

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_word(self)


def reduce(raw: Sequence[LetterLike], rank: int) -> GroupWord:
    return GroupWord(rank, tuple(_code(x) for x in raw))


def _check_rank(a: GroupWord, b: GroupWord) -> None:
    if a.rank != b.rank:
        raise RankMismatchError(f"rank mismatch: {a.rank} vs {b.rank}")


def multiply(a: GroupWord, b: GroupWord) -> GroupWord:
    _check_rank(a, b)
    left, right = a.letters, b.letters
    # cancel across the seam only; both halves are already reduced
    i = 0
    m = min(len(left), len(right))
    while i < m and left[len(left) - 1 - i] == -right[i]:
        i += 1
    return GroupWord(a.rank, left[: len(left) - i] + right[i:])


def invert(a: GroupWord) -> GroupWord:
    return GroupWord(a.rank, tuple(-c for c in reversed(a.letters)))


def power(a: GroupWord, e: int) -> GroupWord:
    base = a if e >= 0 else invert(a)
    out = GroupWord.identity(a.rank)
    for _ in range(abs(e)):
        out = multiply(out, base)
    return out


def conjugate(a: GroupWord, by: GroupWord) -> GroupWord:
    """Return ``by * a * by^-1``."""
    return multiply(multiply(by, a), invert(by))


def commutator(a: GroupWord, b: GroupWord) -> GroupWord:
    """Return ``[a, b] = a^-1 b^-1 a b``."""
    return multiply(multiply(invert(a), invert(b)), multiply(a, b))


def left_normed_commutator(indices: Sequence[int], rank: int) -> GroupWord:
    """[[...[x_i1, x_i2], ...], x_ik]; a single index gives the generator itself."""
    if not indices:
        raise ValueError("need at least one index")
    w = GroupWord.generator(rank, indices[0])
    for i in indices[1:]:
        w = commutator(w, GroupWord.generator(rank, i))
    return w


def exponent_sum(w: GroupWord, i: int) -> int:
    return sum(1 if c > 0 else -1 for c in w.letters if abs(c) == i)


def strip_conjugator(w: GroupWord, i: int) -> GroupWord:
    """Find the reduced c, not ending in x_i^{+-1}, with ``w = c x_i c^-1``."""
    s = w.letters
    n = len(s)
    if n % 2 == 0:
        raise NotAConjugateError(f"{format_word(w)} is not a conjugate of x{i}")
    h = n // 2
    if s[h] != i:
        raise NotAConjugateError(f"{format_word(w)} is not a conjugate of x{i}")
    for t in range(h):
        if s[t] != -s[n - 1 - t]:
            raise NotAConjugateError(f"{format_word(w)} is not a conjugate of x{i}")
    # reducedness of w forbids the prefix from ending in x_i^-1; a trailing
    # x_i in the prefix commutes with the core and is absorbed
    c = s[:h]
    while c and c[-1] == i:
        c = c[:-1]
    return GroupWord(w.rank, c)


_TOKEN = re.compile(r"x(\d+)(\^-1)?$")


def parse_word(text: str, rank: int) -> GroupWord:
    codes = []
    for tok in text.split():
        if tok in ("1", "e"):
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse word token {tok!r}")
        i = int(m.group(1))
        codes.append(-i if m.group(2) else i)
    return GroupWord(rank, tuple(codes))


def format_word(w: GroupWord) -> str:
    if not w.letters:
        return "1"
    return " ".join(f"x{abs(c)}" + ("^-1" if c < 0 else "") for c in w.letters)
