"""String links, bottom tangles and link closures encoded by pure braids.

A :class:`TangleRep` carries a pure braid, an integer framing per component
and, for bottom tangles that went through SL-moves, the stack of doubled
patterns sitting below the braid (``layers``, first entry directly below).
String links and bottom tangles share the braid encoding: converting one to
the other only flips the kind tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .braid import PureBraid, as_pure, format_braid, is_trivial, parse_braid

KINDS = ("string_link", "bottom_tangle", "link_closure")


class KindError(ValueError):
    """An operation was given a tangle of the wrong kind."""


class SizeMismatchError(ValueError):
    pass


class TangleFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


@dataclass(frozen=True)
class TangleRep:
    kind: str
    components: int
    braid: PureBraid
    framings: tuple[int, ...] = ()
    layers: tuple["SLMoveData", ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise KindError(f"unknown tangle kind {self.kind!r}")
        if self.braid.strands != self.components:
            raise SizeMismatchError(
                f"braid has {self.braid.strands} strands but the tangle has {self.components} components"
            )
        object.__setattr__(self, "braid", as_pure(self.braid))
        fr = tuple(int(f) for f in self.framings) if self.framings else (0,) * self.components
        if len(fr) != self.components:
            raise SizeMismatchError(f"need {self.components} framings, got {len(fr)}")
        object.__setattr__(self, "framings", fr)
        object.__setattr__(self, "layers", tuple(self.layers))

    @property
    def n(self) -> int:
        return self.components

    def to_json(self) -> dict:
        doc = {
            "kind": self.kind,
            "components": self.components,
            "braid": format_braid(self.braid),
            "framings": list(self.framings),
        }
        if self.layers:
            doc["slmoves"] = [
                {"pattern": m.pattern.to_json(), "twists": list(m.twists)} for m in self.layers
            ]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class SLMoveData:
    """A string-link pattern (doubled antiparallel) plus full twists per band."""

    pattern: TangleRep
    twists: tuple[int, ...] = ()

    def __post_init__(self):
        if self.pattern.kind != "string_link":
            raise KindError("an SL-move pattern must be a string link")
        if self.pattern.layers:
            raise KindError("an SL-move pattern must be a plain braid")
        tw = tuple(int(t) for t in self.twists) if self.twists else (0,) * self.pattern.components
        if len(tw) != self.pattern.components:
            raise SizeMismatchError(f"need {self.pattern.components} twists, got {len(tw)}")
        object.__setattr__(self, "twists", tw)


def string_link(braid: PureBraid, framings: Sequence[int] | None = None) -> TangleRep:
    return TangleRep("string_link", braid.strands, as_pure(braid), tuple(framings or ()))


def bottom_tangle(braid: PureBraid, framings: Sequence[int] | None = None) -> TangleRep:
    return TangleRep("bottom_tangle", braid.strands, as_pure(braid), tuple(framings or ()))


def trivial_tangle(n: int, kind: str = "bottom_tangle") -> TangleRep:
    return TangleRep(kind, n, PureBraid(n, ()))


def _need(t: TangleRep, kind: str) -> None:
    if t.kind != kind:
        raise KindError(f"expected a {kind}, got a {t.kind}")


def to_bottom_tangle(s: TangleRep) -> TangleRep:
    _need(s, "string_link")
    return replace(s, kind="bottom_tangle")


def to_string_link(b: TangleRep) -> TangleRep:
    _need(b, "bottom_tangle")
    return replace(b, kind="string_link")


def product(a: TangleRep, b: TangleRep) -> TangleRep:
    """Stack ``b`` on top of ``a``; framings add."""
    _need(a, "string_link")
    _need(b, "string_link")
    if a.components != b.components:
        raise SizeMismatchError(f"cannot stack {a.components} and {b.components} components")
    if a.layers or b.layers:
        raise KindError("stacking is only defined here for plain braid encodings")
    braid = PureBraid(a.components, a.braid.letters + b.braid.letters)
    framings = tuple(x + y for x, y in zip(a.framings, b.framings))
    return TangleRep("string_link", a.components, braid, framings)


def close(b: TangleRep) -> TangleRep:
    _need(b, "bottom_tangle")
    return replace(b, kind="link_closure")


def sl_move(g: TangleRep, m: SLMoveData) -> TangleRep:
    """Stack the doubled pattern of ``m`` below ``g``.

    A trivial pattern only adds its twists to the framings.
    """
    _need(g, "bottom_tangle")
    if m.pattern.components != g.components:
        raise SizeMismatchError(
            f"pattern has {m.pattern.components} components, tangle has {g.components}"
        )
    if is_trivial(m.pattern.braid):
        if not any(m.twists):
            return g
        return replace(g, framings=tuple(f + t for f, t in zip(g.framings, m.twists)))
    return replace(g, layers=g.layers + (m,))


# JSON ----------------------------------------------------------------------------


def from_json(doc: dict) -> TangleRep:
    if not isinstance(doc, dict):
        raise TangleFormatError("a tangle document must be a JSON object")
    try:
        kind = doc["kind"]
        n = int(doc["components"])
        text = doc["braid"]
    except KeyError as exc:
        raise TangleFormatError(f"missing field {exc.args[0]!r}") from None
    if kind not in KINDS:
        raise TangleFormatError(f"unknown tangle kind {kind!r}")
    if n < 1:
        raise TangleFormatError("components must be positive")
    braid = parse_braid(text, n, pure=True)
    framings = doc.get("framings") or ()
    layers = []
    for item in doc.get("slmoves", ()):
        pattern = from_json(item["pattern"])
        layers.append(SLMoveData(pattern, tuple(item.get("twists") or ())))
    try:
        return TangleRep(kind, n, braid, tuple(framings), tuple(layers))
    except ValueError as exc:
        raise TangleFormatError(str(exc)) from None


def loads(text: str) -> TangleRep:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TangleFormatError(exc.msg, exc.lineno, exc.colno) from None
    return from_json(doc)


def dumps(t: TangleRep) -> str:
    return t.dumps()
