"""Command line front end.

Exit codes: 0 when every check passes, 1 when an analysis finds violations
or counterexamples, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from pathlib import Path

from . import augment as A
from . import diagram as D
from . import surfaces as S
from . import twist as T


class UsageError(Exception):
    pass


def _canon(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(obj) -> str:
    data = obj if isinstance(obj, bytes) else _canon(obj).encode()
    return hashlib.sha256(data).hexdigest()


# --- input -------------------------------------------------------------


def _line_of(text: str, err: Exception) -> str:
    m = re.search(r"offset (\d+)", str(err))
    if not m:
        return str(err)
    off = int(m.group(1))
    line = text.count("\n", 0, off) + 1
    return f"line {line}: {err}"


def read_diagrams(path: str) -> tuple[list[tuple[str, str]], bytes]:
    """(name, PD text) pairs from a single-diagram file or a JSON-lines
    corpus, plus the raw bytes for digests."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as err:
        raise UsageError(f"{path}: {err.strerror}") from None
    text = raw.decode("utf-8", errors="replace")
    if not text.strip():
        raise UsageError(f"{path}: empty input")
    if p.suffix == ".jsonl":
        out = []
        for k, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                out.append((str(obj.get("name", f"line{k}")), obj["pd"]))
            except (json.JSONDecodeError, KeyError, TypeError) as err:
                raise UsageError(f"{path}: line {k}: bad corpus record ({err})") from None
        return out, raw
    return [(p.stem, text)], raw


def _parse(name: str, text: str):
    try:
        return D.parse_pd(text), None
    except D.DiagramError as err:
        return None, _line_of(text, err)


# --- reports -------------------------------------------------------------


def analyze_one(name: str, text: str) -> tuple[dict, bool]:
    rep = D.validate(text)
    out = {"name": name, "validation": {"ok": rep.ok, "failures": rep.failures(),
                                        "checks": [list(c) for c in rep.checks]}}
    d, err = _parse(name, text)
    if d is None:
        out["error"] = err
        return out, False
    out["crossings"] = d.n
    out["components"] = len(d.components)
    if not D.is_alternating(d):
        out["alternating"] = False
        return out, False
    out["alternating"] = True
    col = D.checkerboard(d)
    prime = T.is_prime(d)
    reduced = T.is_twist_reduced(d, col)
    out["prime"] = {"ok": bool(prime), "witness": None if prime else prime.to_json()}
    out["twist_reduced"] = {"ok": bool(reduced), "witness": None if reduced else reduced.to_json()}
    out["twist_regions"] = [r.to_json() for r in T.twist_regions(d, col)]
    out["coloring"] = list(col.colors)
    if prime and reduced:
        out["twist_number"] = T.twist_number(d, col)
    return out, bool(prime and reduced and rep.ok)


def surfaces_one(d: D.PlanarDiagram, col: D.Coloring) -> dict:
    cb = {c: S.checkerboard_surface_report(d, col, c).to_json() for c in (D.BLUE, D.RED)}
    return {"checkerboard": cb,
            "chi_sum": cb[D.BLUE]["chi"] + cb[D.RED]["chi"],
            "faces_minus_2v": len(col.colors) - 2 * d.n}


def augment_one(name: str, text: str, ntw: int, i: int, blue_only: bool) -> tuple[dict, bool]:
    d, err = _parse(name, text)
    if d is None:
        return {"name": name, "error": err}, False
    col = D.checkerboard(d)
    try:
        aug = A.augment(d, col, ntw, D.BLUE if blue_only else "all")
        red = A.reduce_twists(aug, i)
    except (T.NotPrime, T.NotTwistReduced) as exc:
        return {"name": name, "error": str(exc), "witness": exc.witness.to_json()}, False
    except (A.NotAlternating, D.DiagramError) as exc:
        return {"name": name, "error": str(exc)}, False
    structure = A.validate_augmented(red)
    out = {"name": name, "stage": red.stage, "augmented": red.to_json(),
           "structure": structure.to_json(), "degenerate": not red.circles}
    reports = {}
    for c in (D.BLUE, D.RED):
        reports[c] = {
            "checkerboard": S.checkerboard_surface_report(red.base, red.col, c).to_json()
            if red.base.n else None,
            "punctured": S.punctured_surface_report(red, c).to_json() if red.base.n else None,
            "twisted": S.twisted_surface_report(red, c).to_json() if red.base.n else None,
        }
    out["surfaces"] = reports
    if red.circles:
        out["r_tw"] = A.r_tw(red)
    return out, structure.ok


# --- commands -------------------------------------------------------------


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.json:
        Path(args.json).write_text(text + "\n")
    else:
        print(text)


def _ledger(args, command: str, input_digest: str, params: dict, result: dict,
            counts=None, runtime: float = 0.0) -> None:
    if not args.ledger:
        return
    rec = {"command": command, "input_digest": input_digest, "parameters": params,
           "result_digest": _digest(result), "counts": counts, "runtime": round(runtime, 3)}
    with open(args.ledger, "a") as fh:
        fh.write(_canon(rec) + "\n")


def _over_corpus(args, fn, command: str, params: dict) -> int:
    t0 = time.perf_counter()
    items, raw = read_diagrams(args.path)
    reports, goods = [], []
    for name, text in items:
        rep, good = fn(name, text)
        reports.append(rep)
        goods.append(good)
    ok = all(goods)
    result = reports[0] if len(reports) == 1 else {
        "diagrams": reports,
        "summary": {"total": len(reports), "failed": [r["name"] for r, g in zip(reports, goods) if not g]}}
    _emit(result, args)
    _ledger(args, command, _digest(raw), params, result, {"diagrams": len(reports)},
            time.perf_counter() - t0)
    return 0 if ok else 1


def cmd_parse(args) -> int:
    def one(name, text):
        d, err = _parse(name, text)
        if d is None:
            return {"name": name, "error": err, "validation": D.validate(text).failures()}, False
        return {"name": name, "pd": D.to_pd(d), "diagram": D.to_json(d)}, True
    return _over_corpus(args, one, "parse", {})


def cmd_analyze(args) -> int:
    return _over_corpus(args, analyze_one, "analyze", {})


def cmd_augment(args) -> int:
    if args.i not in (0, 2):
        raise UsageError("--i must be 0 or 2")
    if args.ntw < 1:
        raise UsageError("--ntw must be at least 1")
    params = {"ntw": args.ntw, "i": args.i, "blue_only": args.blue_only}
    return _over_corpus(args, lambda n, t: augment_one(n, t, args.ntw, args.i, args.blue_only),
                        "augment", params)


def cmd_surfaces(args) -> int:
    def one(name, text):
        d, err = _parse(name, text)
        if d is None:
            return {"name": name, "error": err}, False
        return {"name": name, **surfaces_one(d, D.checkerboard(d))}, True
    return _over_corpus(args, one, "surfaces", {})


def cmd_export_dot(args) -> int:
    if args.path.endswith(".json"):
        from .maps.graph import EmbeddedGraph
        try:
            g = EmbeddedGraph.from_json(Path(args.path).read_text())
        except OSError as err:
            raise UsageError(f"{args.path}: {err.strerror}") from None
        except (ValueError, KeyError) as err:
            raise UsageError(f"{args.path}: not an embedded graph ({err})") from None
        dot = g.to_dot()
    else:
        items, _ = read_diagrams(args.path)
        chunks = []
        for name, text in items:
            d, err = _parse(name, text)
            if d is None:
                print(f"{name}: {err}", file=sys.stderr)
                return 1
            chunks.append(D.to_dot(d))
        dot = "".join(chunks)
    if args.json:
        Path(args.json).write_text(dot)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_lemmas(args) -> int:
    from .maps import enumerate as E
    from .maps import lemmas as L
    try:
        if args.lemma_cmd == "verify":
            rep = L.search_counterexamples(args.lemma, args.max_edges, args.rtw,
                                           workers=args.workers)
            result = rep.to_json(with_runtime=False)
            _emit(rep.to_json(), args)
            params = {"lemma": args.lemma, "max_edges": args.max_edges, "rtw": args.rtw}
            _ledger(args, "lemmas verify", _digest(params), params, result, rep.counts, rep.runtime)
            return 0 if rep.ok else 1
        t0 = time.perf_counter()
        if args.min_face is None:
            args.min_face = 1 if args.context == "sphere" else 3
        cons = E.Constraints(args.min_face)
        counts = E.count(args.context, args.max_edges, cons)
        counts = {str(k): v for k, v in counts.items()}
        result = {"context": args.context, "max_edges": args.max_edges,
                  "min_face": args.min_face, "counts": counts, "total": sum(counts.values())}
        if not args.count_only:
            result["graphs"] = [g.to_json() for g in E.enumerate_graphs(args.context, args.max_edges, cons)]
        _emit(result, args)
        params = {k: result[k] for k in ("context", "max_edges", "min_face")}
        _ledger(args, "lemmas enumerate", _digest(params), params, result, counts,
                time.perf_counter() - t0)
        return 0
    except E.CapExceeded as err:
        raise UsageError(str(err)) from None
    except ValueError as err:
        raise UsageError(str(err)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistlink", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--ledger", metavar="PATH", help="append a run record (JSON lines)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, fn, hlp in (("parse", cmd_parse, "parse and validate PD codes"),
                          ("analyze", cmd_analyze, "twist regions, primality, twist number"),
                          ("surfaces", cmd_surfaces, "checkerboard surface reports"),
                          ("export-dot", cmd_export_dot, "DOT export of a diagram or graph JSON")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("path")
        p.set_defaults(func=fn)

    p = sub.add_parser("augment", parents=[common], help="crossing circles and twist removal")
    p.add_argument("path")
    p.add_argument("--ntw", type=int, required=True)
    p.add_argument("--i", type=int, default=0, choices=(0, 2))
    p.add_argument("--blue-only", action="store_true")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("lemmas", help="graph lemma campaigns")
    lsub = p.add_subparsers(dest="lemma_cmd", required=True)
    v = lsub.add_parser("verify", parents=[common])
    v.add_argument("--lemma", required=True, choices=("sphere", "disk", "torus", "bigon-bound"))
    v.add_argument("--max-edges", type=int, required=True)
    v.add_argument("--rtw", type=int)
    v.add_argument("--workers", type=int, default=int(os.environ.get("TWISTLINK_WORKERS", "1")))
    v.set_defaults(func=cmd_lemmas)
    e = lsub.add_parser("enumerate", parents=[common])
    e.add_argument("--context", required=True, choices=("sphere", "disk", "torus"))
    e.add_argument("--max-edges", type=int, required=True)
    e.add_argument("--min-face", type=int, help="least inner face degree (default 1 on the sphere, 3 otherwise)")
    e.add_argument("--count-only", action="store_true")
    e.set_defaults(func=cmd_lemmas)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
