"""Command-line interface.

Exit codes: 0 on success, 1 when a verification run finds violations,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional

import jsonschema

from . import hn, oracle, pairs, plotting, schema, weight
from .core import PairModel, SplitBundle, as_rat, quotient_data, topsum

log = logging.getLogger("gaugehn")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Bad input; reported on stderr with exit code 2."""


def fmt_float(x: float) -> float:
    """Six decimals, round-half-even."""
    return float(Decimal(repr(float(x))).quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN))


def _is_square(q: Fraction) -> Optional[Fraction]:
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


def exact_min_weight(norm_sq: Fraction) -> str:
    root = _is_square(norm_sq)
    return f"-{root}" if root is not None else f"-sqrt({norm_sq})"


# -- input ---------------------------------------------------------------------

def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise InputError(f"{source}: {exc.strerror}") from None


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _field(err: jsonschema.ValidationError) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return path.lstrip(".") or "<document>"


def parse_spec(text: str, source: str = "<stdin>"):
    """Parse a bundle spec into ``(bundle, pair_or_None)``.

    Twists may come in any order; 1-based image indices refer to the order
    given and are remapped onto the descending order.
    """
    doc = _load_json(text, source)
    if isinstance(doc, dict) and doc.get("twists") == []:
        raise InputError("twists must be non-empty")
    try:
        jsonschema.validate(doc, schema.BUNDLE_SPEC)
    except jsonschema.ValidationError as exc:
        raise InputError(f"{source}: {_field(exc)}: {exc.message}") from None
    twists = doc["twists"]
    order = sorted(range(len(twists)), key=lambda i: -twists[i])
    position = {orig: new for new, orig in enumerate(order)}
    bundle = SplitBundle(twists)
    if "pair" not in doc:
        return bundle, None
    spec = doc["pair"]
    for j, idx in enumerate(spec["image"]):
        if idx > len(twists):
            raise InputError(f"{source}: pair.image[{j}]: index {idx} exceeds rank {len(twists)}")
    try:
        tau = as_rat(spec["tau"])
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{source}: pair.tau: {exc}") from None
    return bundle, PairModel(bundle, [position[i - 1] for i in spec["image"]], tau)


def _check_pair(p: Optional[PairModel], model_check: bool) -> None:
    if p is not None and model_check:
        try:
            pairs.check_model(p)
        except pairs.ModelAssumptionError as exc:
            raise InputError(f"{exc} (pass --no-model-check to override)") from None


# -- documents -----------------------------------------------------------------

def _head(command: str, b: SplitBundle) -> dict:
    return {"schema": schema.SCHEMA_VERSION, "command": command, "twists": list(b.twists)}


def hn_document(b: SplitBundle) -> dict:
    f = hn.hn_filtration(b)
    data = quotient_data(f)
    doc = _head("hn", b)
    doc.update(
        steps=[list(p) for p in f.points],
        quotients=[{"rank": r, "slope": str(m)} for r, m in data],
        slopes=[str(m) for _, m in data],
        vertices=_vertices(b),
        semistable=hn.is_semistable(b),
    )
    return doc


def _vertices(b: SplitBundle) -> list[list[int]]:
    return [[x, int(y)] for x, y in hn.polygon_of(hn.hn_filtration(b)).vertices]


def _pair_out(p: PairModel) -> dict:
    return {
        "image": sorted(i + 1 for i in p.image),
        "tau": str(p.tau),
        "tau_semistable": pairs.is_tau_semistable(p),
    }


def destabilize_document(b: SplitBundle, p: Optional[PairModel], model_check: bool = True) -> dict:
    doc = _head("destabilize", b)
    doc["pair"] = None if p is None else _pair_out(p)
    if p is None:
        d = weight.optimal_destabilizer(b)
        if d is None:
            doc["destabilizer"] = None
            return doc
        limit = [{"twists": list(x.twists), "carries_morphism": False}
                 for x in weight.limit_object(b, d)]
        extra = {"skip_index": None, "case": None, "m_index": None}
    else:
        d = pairs.pair_optimal_destabilizer(p, model_check=model_check)
        if d is None:
            doc["destabilizer"] = None
            return doc
        limit = [{"twists": list(x.bundle.twists), "carries_morphism": x.carries_morphism}
                 for x in pairs.pair_limit_object(p, d).blocks]
        extra = {"skip_index": d.skip_index, "case": d.case_tag, "m_index": d.m_index}
    doc["destabilizer"] = {
        "steps": [list(pt) for pt in d.flag.points],
        "direction": [str(x) for x in d.direction],
        "norm_sq": str(d.norm_sq),
        "min_weight": {"exact": exact_min_weight(d.norm_sq), "float": fmt_float(d.min_weight)},
        "float_view": [fmt_float(x) for x in d.float_view],
        **extra,
        "limit": limit,
    }
    return doc


def _baseline(b: SplitBundle, p: Optional[PairModel]) -> Fraction:
    return b.slope if p is None else p.tau


def polygon_document(b: SplitBundle, p: Optional[PairModel]) -> dict:
    doc = _head("polygon", b)
    doc.update(vertices=_vertices(b), baseline=str(_baseline(b, p)))
    return doc


def subobject_points(b: SplitBundle) -> list[tuple[int, int]]:
    """Swept points: each proper rank with every degree within 2 of the maximum."""
    pts = set()
    for k in range(1, b.rank):
        for d in range(topsum(b, k) - 2, topsum(b, k) + 1):
            pts.add((k, d))
    return sorted(pts)


def polygon_svg(b: SplitBundle, p: Optional[PairModel]) -> bytes:
    poly = hn.polygon_of(hn.hn_filtration(b))
    title = f"twists {list(b.twists)}"
    if p is not None:
        title += f", tau = {p.tau}"
    return plotting.polygon_svg(poly, _baseline(b, p), subobject_points(b), title)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# -- verify ----------------------------------------------------------------------

DEFAULT_CONFIG = {
    "schema": 1,
    "classical": {"max_rank": 4, "twist_range": [-2, 2], "degree_slack": 2,
                  "grid_resolution": 1e-3},
    "pairs": {"max_rank": 4, "twist_range": [-2, 3], "degree_slack": 2,
              "grid_resolution": 1e-3,
              "tau_grid": ["-1/2", "0", "1/2", "1", "3/2", "2"]},
}


def load_config(text: Optional[str], source: str) -> tuple[list[oracle.SweepConfig], list[str]]:
    doc = DEFAULT_CONFIG if text is None else _load_json(text, source)
    try:
        jsonschema.validate(doc, schema.CONFIG)
    except jsonschema.ValidationError as exc:
        raise InputError(f"{source}: {_field(exc)}: {exc.message}") from None
    corrupt = doc.get("corrupt_closed_form", False)
    cfgs, kinds = [], []
    for kind in ("classical", "pairs"):
        run = doc.get(kind)
        if run is None:
            continue
        try:
            cfg = oracle.SweepConfig(**{**run, "corrupt": corrupt})
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"{source}: {kind}: {exc}") from None
        cfgs.append(cfg)
        kinds.append(kind)
    if not cfgs:
        raise InputError(f"{source}: nothing to verify")
    return cfgs, kinds


def run_verify(cfgs, kinds) -> tuple[dict, list[dict]]:
    runs, margins = [], []
    for cfg, kind in zip(cfgs, kinds):
        certify = oracle.certify_classical if kind == "classical" else oracle.certify_pairs
        report = certify(cfg)
        log.info("%s: %s in %.1fs", kind, dict(report.checked), report.seconds)
        runs.append({
            "kind": kind,
            "ok": report.ok,
            "checked": dict(sorted(report.checked.items())),
            "violations": report.violations,
        })
        margins.extend(report.margins)
    doc = {"schema": schema.SCHEMA_VERSION, "command": "verify",
           "ok": all(r["ok"] for r in runs), "runs": runs}
    return doc, margins


def margins_tsv(rows: list[dict]) -> str:
    buf = io.StringIO()
    fields = ["kind", "twists", "image", "tau", "best", "runner_up", "margin"]
    w = csv.DictWriter(buf, fieldnames=fields, delimiter="\t", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row.get(k) is None else row[k]) for k in fields})
    return buf.getvalue()


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugehn",
        description="Harder-Narasimhan filtrations and optimal destabilizers of split bundles "
                    "and holomorphic pairs on the projective line.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("input", nargs="?", default="-",
                       help="JSON bundle spec file (default: standard input)")
        p.add_argument("--model-check", action=argparse.BooleanOptionalAction, default=True,
                       help="reject pairs with slope(E) < tau (default: on)")
        return p

    with_input(sub.add_parser("hn", help="Harder-Narasimhan filtration and polygon"))
    with_input(sub.add_parser("destabilize", help="optimal destabilizing direction"))
    poly = with_input(sub.add_parser("polygon", help="HN polygon as JSON or SVG"))
    poly.add_argument("--format", default="json", help="json or svg")
    poly.add_argument("-o", "--output", help="write to this file instead of standard output")
    ver = sub.add_parser("verify", help="brute-force certification sweep")
    ver.add_argument("--config", help="JSON sweep config (default: built-in acceptance config)")
    ver.add_argument("--out-dir", help="also write report.json, margins.tsv and margins.svg here")
    return parser


def _emit(data, output: Optional[str] = None) -> None:
    if output is not None:
        Path(output).write_bytes(data if isinstance(data, bytes) else data.encode())
    elif isinstance(data, bytes):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        sys.stdout.write(data)


def _dispatch(args) -> int:
    if args.command == "verify":
        text = None if args.config is None else _read_text(args.config)
        cfgs, kinds = load_config(text, args.config or "<default>")
        doc, margins = run_verify(cfgs, kinds)
        out = dumps(doc)
        _emit(out)
        if args.out_dir:
            target = Path(args.out_dir)
            target.mkdir(parents=True, exist_ok=True)
            (target / "report.json").write_text(out)
            (target / "margins.tsv").write_text(margins_tsv(margins))
            (target / "margins.svg").write_bytes(plotting.margins_svg(margins))
        return EXIT_OK if doc["ok"] else EXIT_FAIL

    source = "<stdin>" if args.input == "-" else args.input
    b, p = parse_spec(_read_text(args.input), source)
    _check_pair(p, args.model_check)
    if args.command == "hn":
        if p is not None:
            raise InputError("hn takes a bundle spec without 'pair'")
        _emit(dumps(hn_document(b)))
    elif args.command == "destabilize":
        _emit(dumps(destabilize_document(b, p, args.model_check)))
    else:
        if args.format == "json":
            _emit(dumps(polygon_document(b, p)), args.output)
        elif args.format == "svg":
            _emit(polygon_svg(b, p), args.output)
        else:
            raise InputError(f"unknown format {args.format!r} (expected json or svg)")
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except InputError as exc:
        print(f"gaugehn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
