"""Command-line front end.

    clovermu compute <file> --length L [--non-repeated] [--mu-bar]
    clovermu compare <f1> <f2> --mode auto|n3|half|ehck:K --length L
    clovermu slmove <file> --pattern <g> --twists a,b,...
    clovermu normal-form <file> --length L
    clovermu certify <file> --bound B

Exit codes: 0 equivalent (or success), 1 distinguished, 2 inconclusive,
3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .braid import BraidParseError, WordLengthExceededError, format_braid
from .clover import CloverLink, clover_mu, compare_edge_homotopy, normal_form
from .invariants import certify, enumerate_sequences, mu, mu_bar
from .magnus import TruncationError
from .tangle import (
    KindError,
    SizeMismatchError,
    SLMoveData,
    TangleFormatError,
    TangleRep,
    close,
    from_json,
    sl_move,
)

EXIT = {"equivalent": 0, "distinguished": 1, "inconclusive": 2}
INVALID = 3


class InputError(Exception):
    pass


def _load(path: str) -> TangleRep | CloverLink:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    text = p.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    try:
        if isinstance(doc, dict) and doc.get("kind") == "clover":
            return CloverLink.from_json(doc)
        return from_json(doc)
    except (TangleFormatError, BraidParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _header(q: int) -> dict:
    return {"tool": "clovermu", "version": __version__, "truncation_q": q, "series_degree": q - 1}


def run_compute(path: str, length: int, non_repeated: bool = False, use_mu_bar: bool = False) -> dict:
    obj = _load(path)
    q = length + 1
    n = obj.components
    seqs = enumerate_sequences(n, length, non_repeated)
    values: dict = {}
    if isinstance(obj, CloverLink):
        kind = "clover"
        for I in seqs:
            v = clover_mu(obj, I, q)
            values[str(I)] = {"value": v.value, "certified": v.certified}
    else:
        kind = obj.kind
        t = obj
        if use_mu_bar and t.kind == "bottom_tangle":
            t = close(t)
        if t.kind == "link_closure":
            kind = "link_closure"
            for I in seqs:
                values[str(I)] = mu_bar(t, I, q).to_json()
        else:
            for I in seqs:
                values[str(I)] = mu(t, I, q)
    return {**_header(q), "command": "compute", "kind": kind, "components": n, "values": values}


def run_compare(path1: str, path2: str, mode: str, length: int | None) -> tuple[dict, int]:
    a, b = _load(path1), _load(path2)
    a, b = _as_clover(a, path1), _as_clover(b, path2)
    if a.components != b.components:
        raise InputError(f"component counts differ: {a.components} vs {b.components}")
    verdict = compare_edge_homotopy(a, b, mode, length=length)
    q = verdict.certified_length + 1 if length is None else max(length, 1) + 1
    doc = {**_header(q), "command": "compare", "mode": mode, **verdict.to_json()}
    return doc, EXIT[verdict.status]


def _as_clover(obj, path: str) -> CloverLink:
    if isinstance(obj, CloverLink):
        return obj
    if obj.kind != "bottom_tangle":
        raise InputError(f"{path}: compare needs clover or bottom-tangle input, got {obj.kind}")
    return CloverLink(obj.components, obj, label=Path(path).stem)


def run_slmove(path: str, pattern_path: str, twists: list[int] | None) -> dict:
    g = _load(path)
    u = _load(pattern_path)
    if isinstance(u, CloverLink) or u.kind != "string_link":
        raise InputError(f"{pattern_path}: the pattern must be a string link")
    n = u.components
    move = SLMoveData(u, tuple(twists) if twists else (0,) * n)
    if isinstance(g, CloverLink):
        rep = sl_move(g.representative, move)
        return CloverLink(g.components, rep, g.label, g.provenance).to_json()
    return sl_move(g, move).to_json()


def run_normal_form(path: str, length: int) -> dict:
    t = _load(path)
    if isinstance(t, CloverLink):
        raise InputError(f"{path}: normal forms are taken of string links")
    if t.kind == "bottom_tangle":
        t = TangleRep("string_link", t.components, t.braid, t.framings, t.layers)
    q = length + 1
    nf = normal_form(t, length, q)
    stages = [
        [{"pi": "".join(str(i) for i in term.pi) if t.components < 10 else ",".join(map(str, term.pi)),
          "exponent": term.exponent} for term in stage]
        for stage in nf.stages
    ]
    return {**_header(q), "command": "normal-form", "stages": stages, "braid": format_braid(nf.product.braid)}


def run_certify(path: str, bound: int) -> dict:
    obj = _load(path)
    t = obj.representative if isinstance(obj, CloverLink) else obj
    if t.kind == "string_link":
        raise InputError(f"{path}: certify needs a clover, bottom tangle or closure")
    cert = certify(t, bound)
    return {
        **_header(bound + 1),
        "command": "certify",
        "vanishing_depth": cert.depth.k,
        "saturated": cert.depth.saturated,
        "certified_length": cert.certified_length,
    }


def _twists(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"twists must be comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clovermu", description="Milnor invariants of string links and clover links")
    p.add_argument("--version", action="version", version=f"clovermu {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="table of mu (or mu-bar) values")
    c.add_argument("file")
    c.add_argument("--length", type=_positive, required=True)
    c.add_argument("--non-repeated", action="store_true")
    c.add_argument("--mu-bar", action="store_true")
    c.add_argument("-o", "--output")

    m = sub.add_parser("compare", help="edge-homotopy comparison of two clover links")
    m.add_argument("file1")
    m.add_argument("file2")
    m.add_argument("--mode", default="auto")
    m.add_argument("--length", type=_positive)
    m.add_argument("-o", "--output")

    s = sub.add_parser("slmove", help="apply an SL-move")
    s.add_argument("file")
    s.add_argument("--pattern", required=True)
    s.add_argument("--twists", type=_twists)
    s.add_argument("-o", "--output")

    nf = sub.add_parser("normal-form", help="link-homotopy normal form exponents")
    nf.add_argument("file")
    nf.add_argument("--length", type=_positive, required=True)
    nf.add_argument("-o", "--output")

    ce = sub.add_parser("certify", help="vanishing depth and certified length")
    ce.add_argument("file")
    ce.add_argument("--bound", type=_positive, required=True)
    ce.add_argument("-o", "--output")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else 0
    code = 0
    try:
        if args.command == "compute":
            doc = run_compute(args.file, args.length, args.non_repeated, args.mu_bar)
        elif args.command == "compare":
            doc, code = run_compare(args.file1, args.file2, args.mode, args.length)
        elif args.command == "slmove":
            doc = run_slmove(args.file, args.pattern, args.twists)
        elif args.command == "normal-form":
            doc = run_normal_form(args.file, args.length)
        else:
            doc = run_certify(args.file, args.bound)
    except (InputError, KindError, SizeMismatchError, TruncationError, WordLengthExceededError, ValueError) as exc:
        print(f"clovermu: error: {exc}", file=sys.stderr)
        return INVALID
    _emit(doc, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
