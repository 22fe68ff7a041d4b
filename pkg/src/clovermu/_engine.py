"""Longitude computation engines.

Both engines run the Artin action on a braid while tracking, for every
position, the strand sitting there and a conjugator series W with
image(x_p) = W * S[strand] * W^-1, where S[j] is the series assigned to the
bottom meridian of strand j.  For a pure braid the final W[j] is the
longitude of strand j.

``dense``: series stored as flat int64 arrays graded by length (a monomial
(i_1..i_d) lives at offset[d] + sum (i_t - 1) n^(d - t)); the inner loops are
numba-compiled.  Every product is guarded against int64 overflow and the
caller is told to fall back.

``exact``: the same algorithm on :class:`TruncatedSeries` (Python ints).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
from numba import njit

from .magnus import TruncatedSeries


class CoefficientOverflowError(ArithmeticError):
    """An int64 product could exceed 2^62; recompute on the exact path."""


class NoConvergenceError(RuntimeError):
    pass


_LIMIT = float(2**62)


@lru_cache(maxsize=None)
def layout(n: int, degree: int):
    pw = np.array([n**d for d in range(degree + 1)], dtype=np.int64)
    off = np.zeros(degree + 2, dtype=np.int64)
    for d in range(degree + 1):
        off[d + 1] = off[d] + pw[d]
    return off, pw


@njit(cache=True)
def _mul(A, B, out, D, off, pw):
    ma = 0
    mb = 0
    for v in A:
        if abs(v) > ma:
            ma = abs(v)
    for v in B:
        if abs(v) > mb:
            mb = abs(v)
    if float(ma) * float(mb) * (D + 1) >= 4.6e18:
        return False
    out[:] = 0
    for da in range(D + 1):
        oa = off[da]
        for ia in range(pw[da]):
            a = A[oa + ia]
            if a == 0:
                continue
            for db in range(D + 1 - da):
                base = off[da + db] + ia * pw[db]
                ob = off[db]
                for ib in range(pw[db]):
                    b = B[ob + ib]
                    if b != 0:
                        out[base + ib] += a * b
    return True


@njit(cache=True)
def _track(letters, S, Si, D, off, pw):
    N = S.shape[0]
    size = S.shape[1]
    W = np.zeros((N, size), dtype=np.int64)
    Wi = np.zeros((N, size), dtype=np.int64)
    strand = np.arange(N)
    for p in range(N):
        W[p, 0] = 1
        Wi[p, 0] = 1
    t1 = np.empty(size, dtype=np.int64)
    t2 = np.empty(size, dtype=np.int64)
    nw = np.empty(size, dtype=np.int64)
    nwi = np.empty(size, dtype=np.int64)
    for code in letters:
        p = abs(code) - 1
        q = p + 1
        s = strand[p]
        t = strand[q]
        ok = True
        if code > 0:
            ok &= _mul(Wi[p], W[q], t1, D, off, pw)
            ok &= _mul(S[s], t1, t2, D, off, pw)
            ok &= _mul(W[p], t2, nw, D, off, pw)
            ok &= _mul(Wi[q], W[p], t1, D, off, pw)
            ok &= _mul(t1, Si[s], t2, D, off, pw)
            ok &= _mul(t2, Wi[p], nwi, D, off, pw)
            W[q, :] = W[p, :]
            Wi[q, :] = Wi[p, :]
            W[p, :] = nw
            Wi[p, :] = nwi
        else:
            ok &= _mul(Wi[q], W[p], t1, D, off, pw)
            ok &= _mul(Si[t], t1, t2, D, off, pw)
            ok &= _mul(W[q], t2, nw, D, off, pw)
            ok &= _mul(Wi[p], W[q], t1, D, off, pw)
            ok &= _mul(t1, S[t], t2, D, off, pw)
            ok &= _mul(t2, Wi[q], nwi, D, off, pw)
            W[p, :] = W[q, :]
            Wi[p, :] = Wi[q, :]
            W[q, :] = nw
            Wi[q, :] = nwi
        strand[p] = t
        strand[q] = s
        if not ok:
            return W, Wi, strand, False
    return W, Wi, strand, True


# dense helpers -------------------------------------------------------------


class Dense:
    """Arithmetic on flat graded arrays for a fixed (rank, degree)."""

    def __init__(self, n: int, degree: int):
        self.n = n
        self.degree = degree
        self.off, self.pw = layout(n, degree)
        self.size = int(self.off[-1])

    def one(self):
        a = np.zeros(self.size, dtype=np.int64)
        a[0] = 1
        return a

    def gen(self, i: int):
        a = self.one()
        if self.degree >= 1:
            a[self.off[1] + i - 1] = 1
        return a

    def gen_inverse(self, i: int):
        a = self.one()
        idx = 0
        for d in range(1, self.degree + 1):
            idx = idx * self.n + (i - 1)
            a[self.off[d] + idx] = (-1) ** d
        return a

    def mul(self, a, b):
        out = np.empty(self.size, dtype=np.int64)
        if not _mul(a, b, out, self.degree, self.off, self.pw):
            raise CoefficientOverflowError("int64 coefficient bound exceeded")
        return out

    def power(self, a, a_inv, e: int):
        base = a if e >= 0 else a_inv
        out = self.one()
        for _ in range(abs(e)):
            out = self.mul(out, base)
        return out

    def linear_coefficient(self, a, i: int) -> int:
        return int(a[self.off[1] + i - 1]) if self.degree >= 1 else 0

    def index(self, m) -> int:
        idx = 0
        for i in m:
            idx = idx * self.n + (i - 1)
        return int(self.off[len(m)] + idx)

    def to_series(self, a) -> TruncatedSeries:
        terms = {}
        for d in range(self.degree + 1):
            base = int(self.off[d])
            for idx, m in enumerate(itertools.product(range(1, self.n + 1), repeat=d)):
                c = int(a[base + idx])
                if c:
                    terms[m] = c
        return TruncatedSeries(self.n, self.degree, terms)

    def from_series(self, s: TruncatedSeries):
        a = np.zeros(self.size, dtype=np.int64)
        for m, c in s.terms.items():
            if abs(c) >= 2**62:
                raise CoefficientOverflowError("coefficient does not fit in int64")
            a[self.index(m)] = c
        return a

    def track(self, letters, S, Si):
        codes = np.asarray(letters, dtype=np.int64)
        W, Wi, strand, ok = _track(codes, S, Si, self.degree, self.off, self.pw)
        if not ok:
            raise CoefficientOverflowError("int64 coefficient bound exceeded")
        return W, Wi, strand


# exact tracking --------------------------------------------------------------


def track_exact(letters, S, Si):
    """Python-int version of the tracking loop; S, Si are lists of series."""
    N = len(S)
    one = TruncatedSeries.one(S[0].rank, S[0].degree)
    W = [one] * N
    Wi = [one] * N
    strand = list(range(N))
    for code in letters:
        p = abs(code) - 1
        q = p + 1
        s, t = strand[p], strand[q]
        if code > 0:
            nw = W[p] * (S[s] * (Wi[p] * W[q]))
            nwi = ((Wi[q] * W[p]) * Si[s]) * Wi[p]
            W[q], Wi[q] = W[p], Wi[p]
            W[p], Wi[p] = nw, nwi
        else:
            nw = W[q] * (Si[t] * (Wi[q] * W[p]))
            nwi = ((Wi[p] * W[q]) * S[t]) * Wi[q]
            W[p], Wi[p] = W[q], Wi[q]
            W[q], Wi[q] = nw, nwi
        strand[p], strand[q] = t, s
    return W, Wi, strand


# algebras ------------------------------------------------------------------------


class ExactAlgebra:
    """TruncatedSeries arithmetic behind the interface the layered solver uses."""

    exact = True

    def __init__(self, n: int, degree: int):
        self.n = n
        self.degree = degree

    def one(self):
        return TruncatedSeries.one(self.n, self.degree)

    def gen(self, i: int):
        return self.one() + TruncatedSeries.variable(self.n, self.degree, i)

    def gen_inverse(self, i: int):
        return self.gen(i).inverse()

    def mul(self, a, b):
        return a * b

    def power(self, a, a_inv, e: int):
        return a ** e if e >= 0 else a_inv ** (-e)

    def equal(self, a, b) -> bool:
        return a == b

    def track(self, letters, S, Si):
        return track_exact(letters, list(S), list(Si))

    def to_series(self, a) -> TruncatedSeries:
        return a


class DenseAlgebra(Dense):
    exact = False

    def equal(self, a, b) -> bool:
        return bool(np.array_equal(a, b))

    def track(self, letters, S, Si):
        W, Wi, strand = super().track(letters, np.stack(S), np.stack(Si))
        return list(W), list(Wi), strand


def algebra(n: int, degree: int, exact: bool):
    return ExactAlgebra(n, degree) if exact else DenseAlgebra(n, degree)


# longitudes --------------------------------------------------------------------


@lru_cache(maxsize=4096)
def self_exponents(letters: tuple, n: int) -> tuple[int, ...]:
    """Exponent sum of x_j in the tracked conjugator of strand j."""
    eng = Dense(n, 1)
    S = np.stack([eng.gen(i) for i in range(1, n + 1)])
    Si = np.stack([eng.gen_inverse(i) for i in range(1, n + 1)])
    W, _, strand = eng.track(letters, S, Si)
    _check_pure(strand)
    return tuple(eng.linear_coefficient(W[j], j + 1) for j in range(n))


def _conjugators(alg, letters, S, Si, exps, twists=None):
    """Normalized longitudes c_j (and inverses) with S substituted for x."""
    W, Wi, strand = alg.track(letters, S, Si)
    _check_pure(strand)
    lam, lam_inv = [], []
    for j, e in enumerate(exps):
        if twists is not None:
            e -= twists[j]
        lam.append(alg.mul(W[j], alg.power(Si[j], S[j], e)))
        lam_inv.append(alg.mul(alg.power(S[j], Si[j], e), Wi[j]))
    return lam, lam_inv


def string_link_longitudes(letters, n: int, degree: int, exact: bool = False):
    """Normalized longitudes of a pure braid on n strands."""
    return layered_longitudes(tuple(letters), (), n, degree, exact)


def layered_longitudes(base, layers, n: int, degree: int, exact: bool = False, max_iter: int | None = None):
    """Longitudes of a pure braid with doubled patterns stacked below it.

    ``layers`` lists (pattern letters, twists) pairs, each one stacked below
    the previous.  Writing a', l' for the meridians and longitudes under a
    layer and a, l for those above it, the layer imposes

        b_j = [l'_j, a'_j],   c_j = pattern longitude with x -> b (times b_j^t_j),
        a_j = c_j a'_j c_j^-1,   l'_j = c_j^-1 l_j c_j.

    The system is solved by iterating from trivial longitudes; every pass
    fixes at least one more degree.  Returns a list of series (``exact``) or
    a list of dense arrays.
    """
    alg = algebra(n, degree, exact)
    base = tuple(base)
    X = [alg.gen(i) for i in range(1, n + 1)]
    Xi = [alg.gen_inverse(i) for i in range(1, n + 1)]
    eb = self_exponents(base, n)
    if not layers:
        lam, _ = _conjugators(alg, base, X, Xi, eb)
        return lam
    eps = [self_exponents(tuple(p), n) for p, _ in layers]
    L = len(layers)
    one = alg.one()
    lam = [[one] * n for _ in range(L + 1)]
    lam_inv = [[one] * n for _ in range(L + 1)]
    if max_iter is None:
        max_iter = 2 * degree + 4
    for _ in range(max_iter):
        A, Ai = X, Xi
        conj = [None] * (L + 1)
        for l in range(L, 0, -1):
            pattern, twists = layers[l - 1]
            B = [alg.mul(alg.mul(lam_inv[l][j], Ai[j]), alg.mul(lam[l][j], A[j])) for j in range(n)]
            Bi = [alg.mul(alg.mul(Ai[j], lam_inv[l][j]), alg.mul(A[j], lam[l][j])) for j in range(n)]
            C, Ci = _conjugators(alg, pattern, B, Bi, eps[l - 1], twists)
            conj[l] = (C, Ci)
            A, Ai = (
                [alg.mul(alg.mul(C[j], A[j]), Ci[j]) for j in range(n)],
                [alg.mul(alg.mul(C[j], Ai[j]), Ci[j]) for j in range(n)],
            )
        new, new_inv = _conjugators(alg, base, A, Ai, eb)
        stable = all(alg.equal(new[j], lam[0][j]) for j in range(n))
        nxt, nxt_inv = [new], [new_inv]
        for l in range(1, L + 1):
            C, Ci = conj[l]
            new = [alg.mul(alg.mul(Ci[j], new[j]), C[j]) for j in range(n)]
            new_inv = [alg.mul(alg.mul(Ci[j], new_inv[j]), C[j]) for j in range(n)]
            stable = stable and all(alg.equal(new[j], lam[l][j]) for j in range(n))
            nxt.append(new)
            nxt_inv.append(new_inv)
        if stable:
            return lam[L]
        lam, lam_inv = nxt, nxt_inv
    raise NoConvergenceError("layer relations did not stabilize")


def _check_pure(strand) -> None:
    for p, s in enumerate(strand):
        if s != p:
            raise ValueError("braid is not pure; longitudes need the identity permutation")
