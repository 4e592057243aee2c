"""``tempograph`` command line: ``segment``, ``synth`` and ``eval`` subcommands.

Exit codes: 0 success, 2 unreadable or malformed input, 3 infeasible request,
4 internal invariant violation. Output files are written to a temporary file
in the target directory and renamed into place, so a failed run leaves no
partial output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from collections.abc import Sequence
from pathlib import Path

from .coverage import WEIGHTS, kgcvr_segment
from .segmentation import InfeasibleError, Segmentation, segment
from .synth import GroundTruth, SyntheticSpec, evaluate, generate
from .temporal_graph import EdgeListError, Interval, TemporalGraph, induced_static, parse_edge_list

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_INVARIANT = 0, 2, 3, 4
SEED_ENV = "TEMPOGRAPH_SEED"


class InvariantError(RuntimeError):
    """A solver returned a result that breaks its own contract."""


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output: str | None) -> None:
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def _seed(value: int | None) -> int | None:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return None
    try:
        return int(env)
    except ValueError:
        raise _Fail(EXIT_INPUT, f"{SEED_ENV}={env!r} is not an integer") from None


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: invalid JSON: {exc}") from None


# -- segment ----------------------------------------------------------------


def check_result(g: TemporalGraph, seg: Segmentation) -> None:
    """Episodes must tile ``1..r`` in order, hold ``k`` intervals and report true densities."""
    eps = seg.episodes
    if len(eps) != seg.k:
        raise InvariantError(f"{len(eps)} episodes for k={seg.k}")
    expect = 1
    for ep in eps:
        if ep.lo != expect or ep.hi < ep.lo:
            raise InvariantError(f"episode [{ep.lo}, {ep.hi}] does not continue the tiling at {expect}")
        expect = ep.hi + 1
        h = induced_static(g, Interval(ep.lo, ep.hi))
        if any(v not in h.adj for v in ep.nodes):
            raise InvariantError(f"episode [{ep.lo}, {ep.hi}] holds nodes inactive in its interval")
        if not math.isclose(h.density(ep.nodes), ep.density, rel_tol=1e-9, abs_tol=1e-12):
            raise InvariantError(f"episode [{ep.lo}, {ep.hi}] density mismatch")
    if expect != g.r + 1:
        raise InvariantError(f"episodes end at {expect - 1}, timeline ends at {g.r}")


def result_document(g: TemporalGraph, seg: Segmentation, params: dict, cover=None) -> dict:
    doc = {
        "parameters": params,
        "graph": {"nodes": g.n, "temporal_edges": g.m, "timestamps": g.r},
        "episodes": [
            {
                "start": ep.start,
                "end": ep.end,
                "nodes": seg.node_labels(ep),
                "density": ep.density,
                "size": len(ep.nodes),
            }
            for ep in seg.episodes
        ],
        "total_profit": seg.total_profit,
        "total_density": seg.total_density,
        "timings": dict(seg.timings),
    }
    if cover is not None:
        doc["cover"] = {
            "node_sets": cover.node_sets,
            "cover": cover.cover,
            "covered_nodes": cover.covered_nodes,
            "mean_size": cover.mean_size,
            "mean_density": cover.mean_density,
            "mean_jaccard": cover.mean_jaccard,
            "jaccard_matrix": cover.jaccard_matrix,
        }
    return doc


def result_csv(doc: dict) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["start_raw", "end_raw", "density", "size", "nodes"])
    for ep in doc["episodes"]:
        out.writerow([ep["start"], ep["end"], repr(ep["density"]), ep["size"],
                      ";".join(str(v) for v in ep["nodes"])])
    return buf.getvalue()


def cmd_segment(args: argparse.Namespace) -> int:
    if args.eps_dp <= 0 or args.eps_ds <= 0:
        raise _Fail(EXIT_INFEASIBLE, "--eps-dp and --eps-ds must be positive")
    if args.lam < 0:
        raise _Fail(EXIT_INFEASIBLE, "--lam must be >= 0")
    t0 = time.perf_counter()
    try:
        g = parse_edge_list(_read_text(args.input))
    except EdgeListError as exc:
        raise _Fail(EXIT_INPUT, f"{args.input}: {exc}") from None
    load = time.perf_counter() - t0
    seed = _seed(args.seed)
    params: dict = {"mode": args.mode, "k": args.k, "post_process": bool(args.post_process),
                    "seed": seed, "input": str(args.input)}
    if args.mode != "optimal":
        params["eps_dp"] = args.eps_dp
        params["eps_ds"] = args.eps_ds
    cover = None
    if args.mode == "kgcvr":
        sketch = (args.eps_cm, args.delta_cm) if args.sketch else None
        if sketch and not (args.eps_cm > 0 and 0 < args.delta_cm < 1):
            raise _Fail(EXIT_INFEASIBLE, "need --eps-cm > 0 and 0 < --delta-cm < 1")
        params.update(lam=args.lam, cover_fn=args.cover_fn,
                      sketch={"eps_cm": args.eps_cm, "delta_cm": args.delta_cm} if sketch else None)
        if args.post_process:
            raise _Fail(EXIT_INFEASIBLE, "--post-process would discard the coverage objective; "
                        "not supported with --mode kgcvr")
        seg, cover = kgcvr_segment(g, args.k, args.lam, args.cover_fn, args.eps_dp, args.eps_ds,
                                   sketch=sketch, seed=seed)
    else:
        seg = segment(g, args.k, args.mode, args.eps_dp, args.eps_ds, post=args.post_process)
    check_result(g, seg)
    seg.timings = {"load": load, **seg.timings}
    doc = result_document(g, seg, params, cover)
    _emit(result_csv(doc) if args.format == "csv" else json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


# -- synth ------------------------------------------------------------------


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        n=args.n, timeline=args.timeline, k=args.k, community_size=args.community_size,
        community_degree=args.community_degree, background_degree=args.background_degree,
        interval_length=args.interval_length, seed=_seed(args.seed) or 0, jitter=not args.no_jitter,
    )
    g, truth = generate(spec)
    truth_path = args.truth or f"{args.output}.truth.json"
    write_atomic(args.output, g.to_edge_list())
    write_atomic(truth_path, truth.to_json() + "\n")
    return EXIT_OK


# -- eval -------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    found = _read_json(args.found)
    try:
        truth = GroundTruth.from_json(_read_json(args.truth))
        metrics = evaluate(found, truth)
    except (KeyError, TypeError, ValueError) as exc:
        raise _Fail(EXIT_INPUT, f"malformed input: {exc!r}") from None
    _emit(json.dumps(metrics.to_dict(), indent=2) + "\n", args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tempograph", description="Densest temporal episodes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("segment", help="split the timeline of an edge list into k dense episodes")
    s.add_argument("input", help="edge list 'u v t' per line ('-' for stdin)")
    s.add_argument("--mode", default="kgapprox",
                   choices=["optimal", "kgapprox", "kgoptdp", "kgoptds", "kgcvr"])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--eps-dp", type=float, default=0.1)
    s.add_argument("--eps-ds", type=float, default=0.1)
    s.add_argument("--lam", type=float, default=0.0, help="coverage weight (kgcvr)")
    s.add_argument("--cover-fn", default="indicator", choices=sorted(WEIGHTS))
    s.add_argument("--post-process", action="store_true",
                   help="replace each episode's subgraph by the exact densest one")
    s.add_argument("--sketch", action="store_true", help="count-min frequency tracking (kgcvr)")
    s.add_argument("--eps-cm", type=float, default=0.01)
    s.add_argument("--delta-cm", type=float, default=0.01)
    s.add_argument("--seed", type=int, default=None, help=f"falls back to ${SEED_ENV}")
    s.add_argument("--format", default="json", choices=["json", "csv"])
    s.add_argument("--output", "-o", default=None)
    s.set_defaults(func=cmd_segment)

    y = sub.add_parser("synth", help="generate a planted-community temporal graph")
    d = SyntheticSpec()
    y.add_argument("--n", type=int, default=d.n)
    y.add_argument("--timeline", type=int, default=d.timeline)
    y.add_argument("--k", type=int, default=d.k)
    y.add_argument("--community-size", type=int, default=d.community_size)
    y.add_argument("--community-degree", type=float, default=d.community_degree)
    y.add_argument("--background-degree", type=float, default=d.background_degree)
    y.add_argument("--interval-length", type=int, default=d.interval_length)
    y.add_argument("--no-jitter", action="store_true", help="centre each interval in its slot")
    y.add_argument("--seed", type=int, default=None, help=f"falls back to ${SEED_ENV}")
    y.add_argument("--output", "-o", required=True, help="edge-list path")
    y.add_argument("--truth", default=None, help="ground-truth JSON path (default OUTPUT.truth.json)")
    y.set_defaults(func=cmd_synth)

    e = sub.add_parser("eval", help="score a segment result against planted ground truth")
    e.add_argument("found", help="result JSON from 'segment'")
    e.add_argument("truth", help="ground-truth JSON from 'synth'")
    e.add_argument("--output", "-o", default=None)
    e.set_defaults(func=cmd_eval)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"tempograph: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleError as exc:
        print(f"tempograph: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InvariantError as exc:
        print(f"tempograph: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"tempograph: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
