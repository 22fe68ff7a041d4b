"""Braid words, the Artin action on the free group, and braid constructions.

A braid word on ``strands`` strands is a tuple of signed integers: ``k``
is sigma_k and ``-k`` is sigma_k^-1.  Words are read left to right, bottom to
top.  The Artin action is

    sigma_k:    x_k -> x_k x_{k+1} x_k^-1,   x_{k+1} -> x_k
    sigma_k^-1: x_k -> x_{k+1},              x_{k+1} -> x_{k+1}^-1 x_k x_{k+1}

and the image of a word b b' is the image of b' with the images of b
substituted in.  With these conventions the pure generator A_12 = sigma_1^2
has linking number +1.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Sequence

from .freegroup import GroupWord, _free_reduce, strip_conjugator
from .magnus import TruncatedSeries

DEFAULT_WORD_CAP = 10**6


class WordLengthExceededError(RuntimeError):
    """An exact Artin image grew past the word-length cap."""


class BraidParseError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


def word_cap() -> int:
    raw = os.environ.get("MILNOR_WORD_CAP")
    return int(raw) if raw else DEFAULT_WORD_CAP


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        letters = tuple(int(c) for c in self.letters)
        for c in letters:
            if c == 0 or abs(c) >= self.strands:
                raise ValueError(f"generator sigma_{abs(c)} out of range for {self.strands} strands")
        object.__setattr__(self, "letters", letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError(f"strand mismatch: {self.strands} vs {other.strands}")
        return type(self)(self.strands, self.letters + other.letters) if type(self) is type(other) \
            else BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return type(self)(self.strands, tuple(-c for c in reversed(self.letters)))

    def __pow__(self, e: int) -> "BraidWord":
        base = self if e >= 0 else self.inverse()
        return type(self)(self.strands, base.letters * abs(e))

    def __len__(self) -> int:
        return len(self.letters)

    def freely_reduced(self) -> "BraidWord":
        return type(self)(self.strands, _free_reduce(self.letters))

    def __str__(self) -> str:
        return format_braid(self)


class PureBraid(BraidWord):
    """A braid word whose permutation is the identity."""

    def __post_init__(self):
        super().__post_init__()
        if not is_pure(self):
            raise ValueError(f"braid {format_braid(self)!r} is not pure")


def as_pure(b: BraidWord) -> PureBraid:
    return b if isinstance(b, PureBraid) else PureBraid(b.strands, b.letters)


def permutation(b: BraidWord) -> tuple[int, ...]:
    """Final position (1-based) of the strand that starts at each position."""
    at = list(range(b.strands))  # at[p] = strand at position p
    for c in b.letters:
        k = abs(c) - 1
        at[k], at[k + 1] = at[k + 1], at[k]
    final = [0] * b.strands
    for p, s in enumerate(at):
        final[s] = p + 1
    return tuple(final)


def is_pure(b: BraidWord) -> bool:
    return permutation(b) == tuple(range(1, b.strands + 1))


# Artin action -----------------------------------------------------------------


def _cat(*parts: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for part in parts:
        for c in part:
            if out and out[-1] == -c:
                out.pop()
            else:
                out.append(c)
    return tuple(out)


def _inv(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(a))


def artin_images(b: BraidWord, cap: int | None = None) -> tuple[GroupWord, ...]:
    """Exact images of x_1, ..., x_n, as reduced words."""
    if cap is None:
        cap = word_cap()
    im = [(i,) for i in range(1, b.strands + 1)]
    for c in b.letters:
        p = abs(c) - 1
        q = p + 1
        if c > 0:
            new_p = _cat(im[p], im[q], _inv(im[p]))
            im[q] = im[p]
            im[p] = new_p
            grown = new_p
        else:
            new_q = _cat(_inv(im[q]), im[p], im[q])
            im[p] = im[q]
            im[q] = new_q
            grown = new_q
        if len(grown) > cap:
            raise WordLengthExceededError(
                f"Artin image exceeded {cap} letters; use series mode"
            )
    return tuple(GroupWord(b.strands, w) for w in im)


def artin_image(b: BraidWord, i: int, mode: str = "word", q: int | None = None, cap: int | None = None):
    """Image of x_i under the braid.

    ``mode="word"`` returns a :class:`GroupWord`; ``mode="series"`` returns
    its Magnus expansion truncated at degree ``q``, computed without ever
    forming the word.
    """
    if not 1 <= i <= b.strands:
        raise ValueError(f"generator index {i} out of range")
    if mode == "word":
        return artin_images(b, cap)[i - 1]
    if mode != "series":
        raise ValueError(f"unknown mode {mode!r}")
    if q is None:
        raise ValueError("series mode needs a truncation degree q")
    from ._engine import track_exact

    n = b.strands
    S = [TruncatedSeries.one(n, q) + TruncatedSeries.variable(n, q, j) for j in range(1, n + 1)]
    Si = [s.inverse() for s in S]
    W, Wi, strand = track_exact(b.letters, S, Si)
    p = i - 1
    return W[p] * S[strand[p]] * Wi[p]


def longitude_words(b: BraidWord, cap: int | None = None) -> tuple[GroupWord, ...]:
    """Conjugators c_i with image(x_i) = c_i x_i c_i^-1 (pure braids only)."""
    images = artin_images(b, cap)
    return tuple(strip_conjugator(w, i) for i, w in enumerate(images, start=1))


# constructions --------------------------------------------------------------------


def pure_generator(i: int, j: int, n: int) -> PureBraid:
    """A_ij = (s_{j-1} ... s_{i+1}) s_i^2 (s_{i+1}^-1 ... s_{j-1}^-1)."""
    if not 1 <= i < j <= n:
        raise ValueError(f"pure generator needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    down = tuple(range(j - 1, i, -1))
    return PureBraid(n, down + (i, i) + tuple(-c for c in reversed(down)))


def cable2(b: BraidWord, twists: Sequence[int] | None = None) -> BraidWord:
    """Double every strand; strand i becomes the pair (2i-1, 2i).

    ``twists[i]`` full twists are put on pair i below the doubled braid.
    """
    n = b.strands
    twists = list(twists) if twists is not None else [0] * n
    if len(twists) != n:
        raise ValueError(f"need {n} twist counts, got {len(twists)}")
    letters: list[int] = []
    for i, t in enumerate(twists, start=1):
        c = 2 * i - 1 if t >= 0 else -(2 * i - 1)
        letters.extend([c, c] * abs(t))
    for c in b.letters:
        k = abs(c)
        block = (2 * k, 2 * k - 1, 2 * k + 1, 2 * k)
        if c > 0:
            letters.extend(block)
        else:
            letters.extend(-x for x in reversed(block))
    return BraidWord(2 * n, tuple(letters))


def realize_longitude(j: int, w: GroupWord, n: int) -> PureBraid:
    """A pure braid whose strand j has longitude ``w`` to leading order.

    Strand j is carried to the last position, then loops once around the
    strand of x_m (sign e) for each letter x_m^e of ``w``, then is carried
    back.  The longitude of strand j is ``w`` with every letter replaced by a
    conjugate, so the Magnus expansions agree up to the weight of ``w``.
    """
    if not 1 <= j <= n:
        raise ValueError(f"strand {j} out of range 1..{n}")
    if w.rank > n:
        raise ValueError(f"word of rank {w.rank} does not fit on {n} strands")
    if any(abs(c) == j for c in w.letters):
        raise ValueError(f"word mentions x{j}, the strand being realized")
    if not w.letters:
        return PureBraid(n, ())
    carry = tuple(range(j, n))
    body: list[int] = []
    # later loops are applied first, so walk the word from the right
    for c in reversed(w.letters):
        m = abs(c)
        pos = m if m < j else m - 1
        loop = pure_generator(pos, n, n).letters
        body.extend(loop if c > 0 else tuple(-x for x in reversed(loop)))
    return PureBraid(n, carry + tuple(body) + tuple(-x for x in reversed(carry)))


def trivial(n: int) -> PureBraid:
    return PureBraid(n, ())


def is_trivial(b: BraidWord) -> bool:
    """Whether ``b`` is the identity braid (the Artin action is faithful)."""
    if not _free_reduce(b.letters):
        return True
    if not is_pure(b):
        return False
    from ._engine import string_link_longitudes

    # a nonzero low-degree longitude already rules out the identity
    rows = string_link_longitudes(b.letters, b.strands, 3, exact=True)
    if any(len(r.terms) > 1 for r in rows):
        return False
    try:
        images = artin_images(b)
    except WordLengthExceededError:
        return False
    return all(w.letters == (i,) for i, w in enumerate(images, start=1))


# text form ------------------------------------------------------------------------

_PURE_TOKEN = re.compile(r"A\[(\d+),(\d+)\](\^-1)?$")
_GEN_TOKEN = re.compile(r"([sS])(\d+)$")


def parse_braid(text: str, strands: int, pure: bool = False) -> BraidWord:
    """Parse ``s1 S2 A[1,3]^-1``; lowercase is positive, uppercase negative."""
    letters: list[int] = []
    for m in re.finditer(r"\S+", text):
        tok, col = m.group(0), m.start() + 1
        g = _GEN_TOKEN.match(tok)
        p = _PURE_TOKEN.match(tok)
        if g:
            k = int(g.group(2))
            if not 1 <= k < strands:
                raise BraidParseError(f"generator {tok!r} out of range for {strands} strands", col)
            letters.append(k if g.group(1) == "s" else -k)
        elif p:
            i, jj = int(p.group(1)), int(p.group(2))
            if not 1 <= i < jj <= strands:
                raise BraidParseError(f"pure generator {tok!r} needs 1 <= i < j <= {strands}", col)
            a = pure_generator(i, jj, strands).letters
            letters.extend(a if not p.group(3) else tuple(-x for x in reversed(a)))
        else:
            raise BraidParseError(f"unrecognized braid token {tok!r}", col)
    b = BraidWord(strands, tuple(letters))
    if pure:
        if not is_pure(b):
            raise BraidParseError("braid is not pure")
        return PureBraid(strands, b.letters)
    return b


def format_braid(b: BraidWord) -> str:
    return " ".join(f"s{c}" if c > 0 else f"S{-c}" for c in b.letters)
