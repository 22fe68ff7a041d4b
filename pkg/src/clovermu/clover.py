"""Clover links, certified mu_c, edge-homotopy comparison and normal forms.

A clover link enters as a bottom-tangle representative.  Different
representatives of one clover link differ by SL-moves, so mu_c(I) is only
trusted for |I| <= 2k + 1, k the vanishing depth of the closure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

from .braid import PureBraid, realize_longitude
from .freegroup import left_normed_commutator
from .invariants import (
    Depth,
    SequenceIndex,
    enumerate_sequences,
    mu,
    mu_bar,
    seq,
    vanishing_depth,
)
from .tangle import (
    KindError,
    SizeMismatchError,
    TangleFormatError,
    TangleRep,
    close,
    from_json,
    product,
    string_link,
    trivial_tangle,
)

STATUSES = ("equivalent", "distinguished", "inconclusive")


@dataclass(frozen=True)
class CloverLink:
    components: int
    representative: TangleRep
    label: str = ""
    provenance: str = ""

    def __post_init__(self):
        if self.representative.kind != "bottom_tangle":
            raise KindError("a clover representative must be a bottom tangle")
        if self.representative.components != self.components:
            raise SizeMismatchError(
                f"representative has {self.representative.components} components, expected {self.components}"
            )

    @classmethod
    def trivial(cls, n: int, label: str = "trivial") -> "CloverLink":
        return cls(n, trivial_tangle(n), label)

    def to_json(self) -> dict:
        doc = {"kind": "clover", "components": self.components, "representative": self.representative.to_json()}
        if self.label:
            doc["label"] = self.label
        if self.provenance:
            doc["provenance"] = self.provenance
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "CloverLink":
        try:
            rep = from_json(doc["representative"])
            return cls(int(doc["components"]), rep, doc.get("label", ""), doc.get("provenance", ""))
        except KeyError as exc:
            raise TangleFormatError(f"missing field {exc.args[0]!r}") from None
        except (KindError, SizeMismatchError) as exc:
            raise TangleFormatError(str(exc)) from None


class CloverMu(NamedTuple):
    value: int
    certified: bool


def clover_mu(c: CloverLink, I, q: int | None = None) -> CloverMu:
    I = seq(I)
    if q is not None and len(I) > q - 1:
        raise ValueError(f"clover_mu of length {len(I)} needs q > {len(I)}")
    value = mu(c.representative, I, q)
    d = vanishing_depth(close(c.representative), len(I))
    return CloverMu(value, len(I) <= 2 * d.k + 1)


# comparison ----------------------------------------------------------------------


class Witness(NamedTuple):
    I: SequenceIndex
    left: int
    right: int


@dataclass(frozen=True)
class Verdict:
    status: str
    relation: str
    certified_length: int
    witnesses: tuple[Witness, ...] = ()
    depths: tuple[Depth, Depth] | None = None
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "distinguished" and not self.witnesses:
            raise ValueError("a distinguished verdict needs a witness")

    def to_json(self) -> dict:
        doc = {
            "status": self.status,
            "relation": self.relation,
            "certified_length": self.certified_length,
            "witnesses": [{"I": str(w.I), "left": w.left, "right": w.right} for w in self.witnesses],
        }
        if self.depths is not None:
            doc["depths"] = [{"k": d.k, "saturated": d.saturated} for d in self.depths]
        if self.note:
            doc["note"] = self.note
        return doc


def _basis(I: SequenceIndex) -> bool:
    # first entry smallest, last entry largest
    e = I.entries
    return e[0] == min(e) and e[-1] == max(e)


def _compare_mu(c: CloverLink, d: CloverLink, maxlen: int, q: int | None) -> tuple[Witness, ...]:
    seqs = enumerate_sequences(c.components, maxlen, non_repeated=True)
    q = maxlen + 1 if q is None else q
    diffs = []
    for I in seqs:
        a, b = mu(c.representative, I, q), mu(d.representative, I, q)
        if a != b:
            diffs.append(Witness(I, a, b))
    basic = [w for w in diffs if _basis(w.I)]
    return tuple(basic or diffs)


def _first_nonzero(t: TangleRep, maxlen: int) -> SequenceIndex | None:
    cl = close(t)
    for I in enumerate_sequences(t.components, maxlen):
        if not mu_bar(cl, I).is_zero:
            return I
    return None


def _mu_bar_value(t: TangleRep, I: SequenceIndex) -> int:
    return mu_bar(close(t), I).value


def compare_edge_homotopy(
    c: CloverLink,
    d: CloverLink,
    mode: str = "auto",
    q: int | None = None,
    length: int | None = None,
) -> Verdict:
    """Compare two clover links through their mu_c invariants.

    Modes: ``n3`` (three components, |I| <= 3), ``half`` (mu-bar vanishing up
    to n // 2, then |I| <= n), ``ehck:K`` (vanishing up to K, then
    |I| <= 2K + 1; plain ``ehck`` uses the smaller of the two depths), and
    ``auto`` which picks ``n3`` for three components and ``half`` otherwise.
    """
    n = c.components
    if d.components != n:
        raise SizeMismatchError(f"cannot compare {n} and {d.components} component clover links")
    if mode == "auto":
        mode = "n3" if n == 3 else "half"
    if mode == "n3":
        if n != 3:
            raise ValueError("mode n3 needs three-component clover links")
        maxlen = 3 if length is None else min(length, 3)
        _check_q(q, maxlen)
        w = _compare_mu(c, d, maxlen, q)
        return Verdict("distinguished" if w else "equivalent", "edge-homotopy", 3, w)
    if mode == "half":
        k = n // 2
        for side in (c, d):
            bad = _first_nonzero(side.representative, k)
            if bad is not None:
                w = Witness(bad, _mu_bar_value(c.representative, bad), _mu_bar_value(d.representative, bad))
                return Verdict("inconclusive", "edge-homotopy", 2 * k + 1, (w,),
                               note=f"mu-bar({bad}) does not vanish")
        maxlen = n if length is None else min(length, n)
        _check_q(q, maxlen)
        w = _compare_mu(c, d, maxlen, q)
        return Verdict("distinguished" if w else "equivalent", "edge-homotopy", 2 * k + 1, w)
    if mode.startswith("ehck"):
        _, _, arg = mode.partition(":")
        bound = int(arg) if arg else max(1, (n if length is None else length))
        dc = vanishing_depth(close(c.representative), bound)
        dd = vanishing_depth(close(d.representative), bound)
        depths = (dc, dd)
        if arg:
            k = int(arg)
            if dc.k < k or dd.k < k:
                return Verdict("inconclusive", f"edge-homotopy+C_{2 * k + 1}", 2 * k + 1, depths=depths,
                               note=f"vanishing depths {dc} and {dd} fall short of {k}")
        else:
            k = min(dc.k, dd.k)
        maxlen = 2 * k + 1 if length is None else min(length, 2 * k + 1)
        _check_q(q, maxlen)
        w = _compare_mu(c, d, maxlen, q)
        return Verdict("distinguished" if w else "equivalent", f"edge-homotopy+C_{2 * k + 1}", 2 * k + 1, w,
                       depths=depths)
    raise ValueError(f"unknown comparison mode {mode!r}")


def _check_q(q: int | None, maxlen: int) -> None:
    if q is not None and q <= maxlen:
        raise ValueError(f"comparing lengths up to {maxlen} needs q > {maxlen}, got {q}")


# normal forms --------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormTerm:
    pi: tuple[int, ...]
    exponent: int

    def __post_init__(self):
        p = self.pi
        if len(p) < 2 or len(set(p)) != len(p):
            raise ValueError(f"pi must be an injection of length >= 2, got {p}")
        if not all(p[0] < m < p[-1] for m in p[1:-1]) or p[0] >= p[-1]:
            raise ValueError(f"pi must start at its minimum and end at its maximum, got {p}")

    @property
    def stage(self) -> int:
        return len(self.pi) - 1


@dataclass(frozen=True)
class NormalForm:
    stages: tuple[tuple[NormalFormTerm, ...], ...]
    product: TangleRep = field(compare=False)

    def exponents(self) -> dict[tuple[int, ...], int]:
        return {t.pi: t.exponent for stage in self.stages for t in stage}


def injections(n: int, i: int) -> list[tuple[int, ...]]:
    """Injections {1..i+1} -> {1..n} with pi(1) the minimum and pi(i+1) the maximum."""
    from itertools import combinations, permutations

    out = []
    for lo, hi in combinations(range(1, n + 1), 2):
        inner = [m for m in range(lo + 1, hi)]
        for mid in combinations(inner, i - 1):
            for order in permutations(mid):
                out.append((lo,) + order + (hi,))
    return sorted(out)


def v_pi(pi: tuple[int, ...], n: int) -> PureBraid:
    """Elementary string link with mu(pi) = 1: strand pi(-1) realizes [[x_pi1, x_pi2], ...]."""
    w = left_normed_commutator(pi[:-1], n)
    return realize_longitude(pi[-1], w, n)


def normal_form(s: TangleRep, up_to: int, q: int | None = None) -> NormalForm:
    """Exponents of the link-homotopy normal form through length ``up_to``.

    Stage i multiplies V_pi^{x_pi} over the injections of length i + 1, with
    x_pi the gap between mu_s(pi) and mu of everything built so far.  The
    accumulated product is checked against s on every non-repeated sequence
    of length <= up_to.
    """
    if s.kind != "string_link":
        raise KindError(f"normal forms are taken of string links, got a {s.kind}")
    n = s.components
    if not 2 <= up_to <= n:
        raise ValueError(f"need 2 <= up_to <= {n}, got {up_to}")
    if q is None:
        q = up_to + 1
    if q <= up_to:
        raise ValueError(f"normal form through length {up_to} needs q > {up_to}")
    acc = string_link(PureBraid(n, ()))
    stages = []
    for i in range(1, up_to):
        terms = []
        letters: list[int] = []
        for pi in injections(n, i):
            x = mu(s, pi, q) - mu(acc, pi, q)
            terms.append(NormalFormTerm(pi, x))
            if x:
                letters.extend((v_pi(pi, n) ** x).letters)
        stages.append(tuple(terms))
        acc = product(acc, string_link(PureBraid(n, tuple(letters))))
    for I in enumerate_sequences(n, up_to, non_repeated=True):
        if mu(s, I, q) != mu(acc, I, q):
            raise ArithmeticError(f"normal form product misses mu({I})")
    return NormalForm(tuple(stages), acc)


def load_clover(text: str) -> CloverLink:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TangleFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or doc.get("kind") != "clover":
        raise TangleFormatError("not a clover document")
    return CloverLink.from_json(doc)
