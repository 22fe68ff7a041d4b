"""Longitudes, Milnor numbers mu, the indeterminacy Delta and mu-bar.

For a sequence I = i_1 ... i_k, mu(I) is the coefficient of
X_{i_1} ... X_{i_{k-1}} in the Magnus expansion of the normalized longitude
of component i_k; single indices give 0.  Working modulo G_q keeps monomials
of length at most q - 1, so mu(I) needs q >= |I|.  When q is omitted it
defaults to |I| + 1 (or the longest requested length + 1).
"""

from __future__ import annotations

import builtins
import itertools
import math
import random
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from ._engine import CoefficientOverflowError, Dense, layered_longitudes
from .braid import (
    PureBraid,
    WordLengthExceededError,
    longitude_words,
    pure_generator,
    realize_longitude,
)
from .freegroup import GroupWord, exponent_sum, left_normed_commutator, multiply, power
from .magnus import TruncatedSeries, TruncationError
from .tangle import KindError, SLMoveData, TangleRep, bottom_tangle, sl_move, string_link

_enumerate = builtins.enumerate


# sequences -----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SequenceIndex:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(i) for i in self.entries)
        if not entries:
            raise ValueError("a sequence needs at least one entry")
        if any(i < 1 for i in entries):
            raise ValueError(f"sequence entries must be positive: {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def non_repeated(self) -> bool:
        return len(set(self.entries)) == len(self.entries)

    def check(self, n: int) -> None:
        if max(self.entries) > n:
            raise ValueError(f"sequence {self} mentions a component beyond {n}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        if max(self.entries) < 10:
            return "".join(str(i) for i in self.entries)
        return ",".join(str(i) for i in self.entries)

    @classmethod
    def parse(cls, text: str) -> "SequenceIndex":
        text = text.strip()
        if "," in text:
            return cls(tuple(int(p) for p in text.split(",")))
        return cls(tuple(int(c) for c in text))


def seq(I) -> SequenceIndex:
    if isinstance(I, SequenceIndex):
        return I
    if isinstance(I, str):
        return SequenceIndex.parse(I)
    return SequenceIndex(tuple(I))


def enumerate_sequences(n: int, maxlen: int, non_repeated: bool = False) -> list[SequenceIndex]:
    """All sequences over 1..n of length 1..maxlen, by length then lexicographically."""
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    out = []
    for k in range(1, maxlen + 1):
        gen = itertools.permutations(range(1, n + 1), k) if non_repeated else itertools.product(
            range(1, n + 1), repeat=k
        )
        out.extend(SequenceIndex(e) for e in gen)
    return out


# Public name; the builtin stays reachable as _enumerate.
enumerate = enumerate_sequences  # noqa: A001


@dataclass(frozen=True)
class ResidueValue:
    delta: int
    value: int

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.delta > 0:
            object.__setattr__(self, "value", self.value % self.delta)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def to_json(self) -> dict:
        return {"delta": self.delta, "value": self.value}


# longitude tables ------------------------------------------------------------------


class LongitudeTable:
    """Expanded longitudes of one tangle, up to a fixed degree."""

    def __init__(self, n: int, degree: int, rows, dense: Dense | None):
        self.n = n
        self.degree = degree
        self._rows = rows
        self._dense = dense

    def coefficient(self, j: int, monomial: Sequence[int]) -> int:
        if len(monomial) > self.degree:
            raise TruncationError(
                f"monomial of length {len(monomial)} requested from longitudes truncated at degree {self.degree}"
            )
        if self._dense is not None:
            return int(self._rows[j - 1][self._dense.index(monomial)])
        return self._rows[j - 1].coefficient(tuple(monomial))

    def series(self, j: int) -> TruncatedSeries:
        row = self._rows[j - 1]
        return self._dense.to_series(row) if self._dense is not None else row

    def lowest_degree(self) -> int | None:
        """Smallest length of a monomial with nonzero coefficient, over all rows."""
        best = None
        for j in range(1, self.n + 1):
            d = self.series(j).lowest_nonconstant_degree()
            if d is not None and (best is None or d < best):
                best = d
        return best


def _key(t: TangleRep):
    return (t.components, t.braid.letters, tuple((m.pattern.braid.letters, m.twists) for m in t.layers))


_CACHE: "OrderedDict[tuple, LongitudeTable]" = OrderedDict()
_CACHE_SIZE = 512


def expansions(t: TangleRep, degree: int) -> LongitudeTable:
    """Magnus expansions of the longitudes, exact through ``degree``."""
    key = _key(t)
    hit = _CACHE.get(key)
    if hit is not None and hit.degree >= degree:
        _CACHE.move_to_end(key)
        return hit
    n = t.components
    layers = tuple((m.pattern.braid.letters, m.twists) for m in t.layers)
    try:
        rows = layered_longitudes(t.braid.letters, layers, n, degree)
        table = LongitudeTable(n, degree, rows, Dense(n, degree))
    except CoefficientOverflowError:
        rows = layered_longitudes(t.braid.letters, layers, n, degree, exact=True)
        table = LongitudeTable(n, degree, rows, None)
    _CACHE[key] = table
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return table


def clear_cache() -> None:
    _CACHE.clear()


def longitudes(t: TangleRep, q: int | None = None, mode: str = "auto"):
    """Normalized longitudes, as words when possible.

    ``mode="word"`` returns GroupWords (plain braids only); ``"series"``
    returns TruncatedSeries modulo G_q; ``"auto"`` prefers words and falls
    back to series when the word cap is hit or the tangle has SL-move layers.
    """
    if mode not in ("auto", "word", "series"):
        raise ValueError(f"unknown mode {mode!r}")
    if q is not None and q < 1:
        raise ValueError("q must be at least 1")
    if mode != "series" and not t.layers:
        try:
            words = longitude_words(t.braid)
            return tuple(
                multiply(w, power(GroupWord.generator(w.rank, i), -exponent_sum(w, i)))
                for i, w in _enumerate(words, start=1)
            )
        except WordLengthExceededError:
            if mode == "word":
                raise
    elif mode == "word":
        raise KindError("tangles with SL-move layers only have series longitudes")
    if q is None:
        raise ValueError("series longitudes need a truncation q")
    table = expansions(t, q - 1)
    return tuple(table.series(j).truncate(q - 1) for j in range(1, t.components + 1))


def _q_for(q: int | None, length: int) -> int:
    if q is None:
        return length + 1
    if length > q:
        raise TruncationError(f"sequence of length {length} needs q >= {length}, got q = {q}")
    return q


def _mu(t: TangleRep, I: SequenceIndex, q: int) -> int:
    I.check(t.components)
    if len(I) == 1:
        return 0
    return expansions(t, q - 1).coefficient(I.entries[-1], I.entries[:-1])


def mu(t: TangleRep, I, q: int | None = None, representative: bool = False) -> int:
    """Milnor number mu_t(I).

    Closures have no plain mu; pass ``representative=True`` to read the value
    of the underlying bottom tangle anyway.
    """
    I = seq(I)
    if t.kind == "link_closure" and not representative:
        raise KindError("closures carry mu-bar; pass representative=True for the tangle value")
    return _mu(t, I, _q_for(q, len(I)))


def mu_table(t: TangleRep, seqs: Iterable, q: int | None = None, representative: bool = False) -> dict:
    seqs = [seq(I) for I in seqs]
    if not seqs:
        return {}
    q = _q_for(q, max(len(I) for I in seqs))
    return {I: mu(t, I, q, representative) for I in seqs}


def _reductions(entries: tuple[int, ...]) -> list[tuple[int, ...]]:
    # proper subsequences (order kept) and all their cyclic rotations
    k = len(entries)
    out = set()
    for m in range(1, k):
        for comb in itertools.combinations(range(k), m):
            J = tuple(entries[i] for i in comb)
            for s in range(m):
                out.add(J[s:] + J[:s])
    return sorted(out)


def _need_closure(t: TangleRep) -> None:
    if t.kind != "link_closure":
        raise KindError(f"mu-bar is defined for closures, got a {t.kind}")


def delta(t: TangleRep, I, q: int | None = None) -> int:
    _need_closure(t)
    I = seq(I)
    q = _q_for(q, len(I))
    g = 0
    for J in _reductions(I.entries):
        g = math.gcd(g, _mu(t, SequenceIndex(J), q))
    return g


def mu_bar(t: TangleRep, I, q: int | None = None) -> ResidueValue:
    _need_closure(t)
    I = seq(I)
    q = _q_for(q, len(I))
    return ResidueValue(delta(t, I, q), _mu(t, I, q))


class Depth(NamedTuple):
    k: int
    saturated: bool

    def __str__(self) -> str:
        return f">= {self.k}" if self.saturated else str(self.k)


def vanishing_depth(t: TangleRep, bound: int, q: int | None = None) -> Depth:
    """Largest k <= bound with every mu-bar of length <= k zero.

    If all mu of length < m vanish then every Delta of length m is 0 and
    mu-bar equals mu there, so k is one less than the first length carrying
    a nonzero mu.  ``saturated`` means no such length up to ``bound``.
    """
    _need_closure(t)
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if q is None:
        q = bound + 1
    if q <= bound:
        raise TruncationError(f"vanishing depth up to {bound} needs q > {bound}, got q = {q}")
    if bound == 1:
        return Depth(1, True)
    low = expansions(t, bound - 1).lowest_degree()
    if low is None or low > bound - 1:
        return Depth(bound, True)
    return Depth(low, False)


class Certificate(NamedTuple):
    depth: Depth
    certified_length: int


def certify(t: TangleRep, bound: int, q: int | None = None) -> Certificate:
    """Lengths up to 2k + 1 are representative independent, k the vanishing depth."""
    if t.kind == "bottom_tangle":
        from .tangle import close

        t = close(t)
    d = vanishing_depth(t, bound, q)
    return Certificate(d, 2 * d.k + 1)


# random instances ------------------------------------------------------------------


def random_pure_braid(n: int, max_len: int, rng: random.Random) -> PureBraid:
    """A random word in the pure generators A_ij^{+-1} of total length <= max_len."""
    gens = [pure_generator(i, j, n).letters for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    letters: tuple[int, ...] = ()
    while gens:
        g = rng.choice(gens)
        if rng.random() < 0.5:
            g = tuple(-c for c in reversed(g))
        if len(letters) + len(g) > max_len:
            break
        letters += g
    return PureBraid(n, letters)


def random_commutator_braid(n: int, weight: int, rng: random.Random, factors: int = 1) -> PureBraid:
    """Product of realized weight-``weight`` commutator longitudes."""
    letters: tuple[int, ...] = ()
    for _ in range(factors):
        j = rng.randint(1, n)
        others = [m for m in range(1, n + 1) if m != j]
        idx = [rng.choice(others) for _ in range(weight)]
        if weight > 1 and len(others) > 1 and idx[0] == idx[1]:
            idx[1] = rng.choice([m for m in others if m != idx[0]])
        b = realize_longitude(j, left_normed_commutator(idx, n), n)
        if rng.random() < 0.5:
            b = b.inverse()
        letters += b.letters
    return PureBraid(n, letters)


class SharpPair(NamedTuple):
    base: TangleRep
    move: SLMoveData
    sequence: SequenceIndex
    before: int
    after: int


def find_sharp_pair(
    n: int = 4,
    max_base_len: int = 12,
    seed: int = 0,
    tries: int = 20000,
) -> SharpPair | None:
    """Search for an SL-move that keeps mu through length 3 but changes mu(12...n).

    Patterns are random pure braids with some nonzero linking number, so the
    common vanishing depth is 1 and only lengths <= 3 are protected.  Pairs
    with mu 0 before and 1 after are preferred; otherwise the first pair
    with a nonzero difference is returned.
    """
    rng = random.Random(seed)
    target = SequenceIndex(tuple(range(1, n + 1)))
    short = enumerate_sequences(n, 3)
    fallback = None
    for _ in range(tries):
        base = bottom_tangle(random_pure_braid(n, rng.randint(0, max_base_len), rng))
        pattern = random_pure_braid(n, rng.randint(1, 10), rng)
        pat = string_link(pattern)
        if all(mu(pat, (i, j)) == 0 for i in range(1, n + 1) for j in range(i + 1, n + 1)):
            continue
        move = SLMoveData(pat, tuple(rng.randint(-1, 1) for _ in range(n)))
        moved = sl_move(base, move)
        before, after = mu(base, target), mu(moved, target)
        if before == after:
            continue
        if any(mu(base, I, n) != mu(moved, I, n) for I in short):
            raise AssertionError("SL-move changed a protected mu value")
        pair = SharpPair(base, move, target, before, after)
        if before == 0 and after == 1:
            return pair
        if fallback is None:
            fallback = pair
    return fallback
