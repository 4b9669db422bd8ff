"""Command-line entry point: single computations and catalog suites.

Exit codes: 0 success or all cases pass, 1 some suite case fails, 2 usage,
parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .catalog import build_catalog
from .centrality import centralizer_mono, distinctive_relation, faithful_cover, smith_centralizer
from .errors import NormcatError, ParseError, UnknownSuite, ValidationError
from .finalg import Congruence, FiniteGroup, GroupHom, Subgroup, group_from_json, group_to_json
from .mset import MSubgroup, internal_group_from_json, internal_normalizer
from .normalizer import normalizer
from .ptcat import Point
from .reports import dumps, jsonable, suite_block, to_text
from .suites import SUITES, SuiteConfig, run_suite
from .topgrp import TopGroup, members, top_normalizer, topology_from_json

KINDS = ("normalizer", "centralizer", "smith", "distinctive", "faithful-cover", "top-normalizer", "mset-normalizer")


def _load(path: str | None, what: str):
    if path is None:
        raise ParseError(f"{what} file is required")
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} file {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _group(doc, where: str) -> FiniteGroup:
    """A group whose table already has the identity at index 0, so element indices are stable."""
    try:
        G = group_from_json(doc)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from None
    if not np.array_equal(G.table, np.asarray(doc["table"])):
        raise ParseError(f"{where}: the identity must be element 0")
    return G


def _elements(doc, key: str, where: str) -> list[int]:
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing field '{key}'")
    els = doc[key]
    if not isinstance(els, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in els):
        raise ParseError(f"{where}.{key}: expected a list of integers")
    return els


def _subgroup(G: FiniteGroup, doc, where: str) -> Subgroup:
    els = _elements(doc, "elements", where)
    if any(not 0 <= e < G.order for e in els):
        raise ValidationError(f"{where}.elements: index out of range")
    return Subgroup(G, els, check=True)


def _point(doc, where: str) -> Point:
    try:
        X = _group(doc["X"], f"{where}.X")
        Y = _group(doc["Y"], f"{where}.Y")
        f = GroupHom(X, Y, doc["f"])
        s = GroupHom(Y, X, doc["s"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: missing or malformed field {exc}") from None
    return Point(f, s)


def _point_json(p: Point) -> dict:
    return {"X": group_to_json(p.X), "Y": group_to_json(p.Y), "f": p.f.map.tolist(), "s": p.s.map.tolist()}


def compute(kind: str, doc, aux) -> dict:
    if kind == "normalizer":
        G = _group(doc, "input")
        res = normalizer(_subgroup(G, aux, "aux"))
        return {"N": res.N, "N_order": res.N.order, "R_v_normal_subgroup": res.R_v.normal_subgroup,
                "U_in_N": res.U_in_N}
    if kind == "centralizer":
        G = _group(doc, "input")
        Z = centralizer_mono(_subgroup(G, aux, "aux")).Z
        return {"Z": Z, "Z_order": Z.order}
    if kind == "smith":
        G = _group(doc, "input")
        R = Congruence(_subgroup(G, aux, "aux"))
        Z = smith_centralizer(R)
        return {"Z_normal_subgroup": Z.normal_subgroup}
    if kind == "distinctive":
        D = distinctive_relation(_point(doc, "input"))
        return {"D_X": D.D_X.normal_subgroup, "D_Y": D.D_Y.normal_subgroup, "discrete": D.is_discrete()}
    if kind == "faithful-cover":
        cover, sq = faithful_cover(_point(doc, "input"))
        return {"cover": _point_json(cover), "on_total": sq.on_total.map, "on_base": sq.on_base.map}
    if kind == "top-normalizer":
        G = _group(doc.get("group") if isinstance(doc, dict) else None, "input.group")
        try:
            B = TopGroup(G, topology_from_json(range(G.order), doc["opens"]))
            A = topology_from_json(_elements(aux, "elements", "aux"), aux["opens"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"topology record missing or malformed field {exc}") from None
        r = top_normalizer(A, B)
        return {"N": members(r.N.carrier), "opens": r.N.topology.to_json()}
    if kind == "mset-normalizer":
        G = internal_group_from_json(doc)
        r = internal_normalizer(MSubgroup(G, _elements(aux, "elements", "aux")))
        return {"X": r.X.elements, "X_v": r.X_v, "X_tilde": r.X_tilde}
    raise ValidationError(f"unknown compute kind {kind!r}")


def run_suites(cfg: SuiteConfig) -> tuple[dict, bool]:
    report = {"config": {"max_order": cfg.max_order, "suites": list(cfg.suites), "seed": cfg.seed},
              "catalog": build_catalog(min(cfg.max_order, 12)).describe(), "suites": {}}
    timings = {}
    ok = True
    for name in cfg.suites:
        t0 = time.perf_counter()
        cases = run_suite(name, cfg.max_order, cfg.seed)
        timings[name] = time.perf_counter() - t0
        block = suite_block(cases)
        ok &= block["counts"]["fail"] == 0
        report["suites"][name] = block
    if cfg.timings:
        report["timings"] = timings
    return report, ok


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normcat", description="Certified normalizer and centralizer computations in finite models.")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="run one computation on JSON inputs")
    c.add_argument("kind", choices=KINDS)
    c.add_argument("--input", required=True)
    c.add_argument("--aux")
    c.add_argument("--out")
    s = sub.add_parser("suite", help="run named verification suites over the built-in catalog")
    s.add_argument("--max-order", type=int, default=16)
    s.add_argument("--suites", default="", help="comma-separated names; 'all' runs every suite")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--out")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    s.add_argument("--list", action="store_true", help="print the suite names and exit")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "compute":
            doc = _load(args.input, "input")
            aux = _load(args.aux, "aux") if args.aux else None
            if args.kind not in ("distinctive", "faithful-cover") and aux is None:
                raise ParseError(f"compute {args.kind} needs --aux")
            result = {"kind": args.kind, "result": jsonable(compute(args.kind, doc, aux))}
            _emit(dumps(result), args.out)
            return 0
        if args.list:
            _emit("\n".join(SUITES) + "\n", None)
            return 0
        names = [n for n in args.suites.split(",") if n]
        if names == ["all"]:
            names = list(SUITES)
        cfg = SuiteConfig(max_order=args.max_order, suites=tuple(names), seed=args.seed,
                          output_format=args.format, out=args.out, timings=args.timings)
        report, ok = run_suites(cfg)
        _emit(dumps(report) if cfg.output_format == "json" else to_text(report), cfg.out)
        return 0 if ok else 1
    except (UnknownSuite, ValidationError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except NormcatError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
