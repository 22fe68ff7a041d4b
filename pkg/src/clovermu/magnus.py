"""Truncated noncommutative power series with integer coefficients.

A series in X_1, ..., X_n keeps only monomials of length at most ``degree``.
Coefficients are Python integers, so nothing ever overflows on this path.
The Magnus expansion sends x_i to 1 + X_i and x_i^-1 to 1 - X_i + X_i^2 - ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .freegroup import GroupWord

Monomial = tuple[int, ...]


class SeriesMismatchError(ValueError):
    pass


class TruncationError(ValueError):
    """A coefficient was requested beyond the computed truncation."""


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    rank: int
    degree: int
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            m = tuple(m)
            if len(m) > self.degree:
                continue
            if any(i < 1 or i > self.rank for i in m):
                raise ValueError(f"monomial {m} uses a variable outside 1..{self.rank}")
            if c:
                clean[m] = int(c)
        object.__setattr__(self, "terms", clean)

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int, degree: int) -> "TruncatedSeries":
        return cls(rank, degree, {})

    @classmethod
    def one(cls, rank: int, degree: int) -> "TruncatedSeries":
        return cls(rank, degree, {(): 1})

    @classmethod
    def variable(cls, rank: int, degree: int, i: int) -> "TruncatedSeries":
        return cls(rank, degree, {(i,): 1})

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.rank != other.rank or self.degree != other.degree:
            raise SeriesMismatchError(
                f"series mismatch: (rank {self.rank}, degree {self.degree}) vs "
                f"(rank {other.rank}, degree {other.degree})"
            )

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TruncatedSeries(self.rank, self.degree, out)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.rank, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        q = self.degree
        by_len: dict[int, list] = {}
        for m, c in other.terms.items():
            by_len.setdefault(len(m), []).append((m, c))
        out: dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            room = q - len(ma)
            for length, items in by_len.items():
                if length > room:
                    continue
                for mb, cb in items:
                    key = ma + mb
                    out[key] = out.get(key, 0) + ca * cb
        return TruncatedSeries(self.rank, q, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.rank, self.degree, self.terms) == (other.rank, other.degree, other.terms)

    def __hash__(self):
        return hash((self.rank, self.degree, frozenset(self.terms.items())))

    def constant(self) -> int:
        return self.terms.get((), 0)

    def inverse(self) -> "TruncatedSeries":
        """Inverse of a series with constant term 1, via the geometric series."""
        if self.constant() != 1:
            raise ValueError("only series with constant term 1 are inverted")
        nil = self - TruncatedSeries.one(self.rank, self.degree)
        out = TruncatedSeries.one(self.rank, self.degree)
        term = out
        for _ in range(self.degree):
            term = -(term * nil)
            out = out + term
        return out

    def __pow__(self, e: int) -> "TruncatedSeries":
        base = self if e >= 0 else self.inverse()
        out = TruncatedSeries.one(self.rank, self.degree)
        for _ in range(abs(e)):
            out = out * base
        return out

    def truncate(self, degree: int) -> "TruncatedSeries":
        return TruncatedSeries(self.rank, degree, {m: c for m, c in self.terms.items() if len(m) <= degree})

    def coefficient(self, m: Monomial) -> int:
        m = tuple(m)
        if len(m) > self.degree:
            raise TruncationError(
                f"monomial of length {len(m)} requested from a series truncated at degree {self.degree}"
            )
        return self.terms.get(m, 0)

    def lowest_nonconstant_degree(self) -> int | None:
        degs = [len(m) for m in self.terms if m]
        return min(degs) if degs else None

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries(rank={self.rank}, degree={self.degree}, {format_series(self)!r})"


def one(n: int, q: int) -> TruncatedSeries:
    return TruncatedSeries.one(n, q)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def coefficient(s: TruncatedSeries, m: Monomial) -> int:
    return s.coefficient(m)


def _times_generator(s: TruncatedSeries, code: int) -> TruncatedSeries:
    # right multiplication by 1 + X_i, or by sum_k (-X_i)^k for x_i^-1
    i = abs(code)
    q = s.degree
    out = dict(s.terms)
    if code > 0:
        for m, c in s.terms.items():
            if len(m) < q:
                key = m + (i,)
                out[key] = out.get(key, 0) + c
    else:
        for m, c in s.terms.items():
            sign = -1
            key = m
            while len(key) < q:
                key = key + (i,)
                out[key] = out.get(key, 0) + sign * c
                sign = -sign
    return TruncatedSeries(s.rank, q, out)


def expand(w: GroupWord, q: int) -> TruncatedSeries:
    """Magnus expansion of a word, truncated after every letter."""
    s = TruncatedSeries.one(w.rank, q)
    for code in w.letters:
        s = _times_generator(s, code)
    return s


def evaluate(w: GroupWord, images: list[TruncatedSeries], inverses: list[TruncatedSeries] | None = None):
    """Substitute series for the generators of ``w`` (``images[i-1]`` for x_i)."""
    if inverses is None:
        inverses = [s.inverse() for s in images]
    out = TruncatedSeries.one(images[0].rank, images[0].degree)
    for code in w.letters:
        out = out * (images[code - 1] if code > 0 else inverses[-code - 1])
    return out


def _monomial_str(m: Monomial) -> str:
    return "".join(f"X{i}" for i in m)


def format_series(s: TruncatedSeries) -> str:
    """Monomials in length-then-lexicographic order, e.g. ``1 + X1X2 - X2X1``."""
    if not s.terms:
        return "0"
    parts = []
    for m in sorted(s.terms, key=lambda m: (len(m), m)):
        c = s.terms[m]
        body = _monomial_str(m)
        if not body:
            mag = str(abs(c))
        elif abs(c) == 1:
            mag = body
        else:
            mag = f"{abs(c)}{body}"
        if not parts:
            parts.append(mag if c > 0 else f"-{mag}")
        else:
            parts.append(("+ " if c > 0 else "- ") + mag)
    return " ".join(parts)
