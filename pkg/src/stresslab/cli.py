"""Batch front door: generate instances, compute stresses, run verifiers and
probes, reconstruct affine types, and fan out report corpora.

Exit codes: 0 pass/probe-holds, 1 fail/probe-fails, 2 bad parameters or
hypothesis-unmet, 3 I/O errors.  All randomness enters through --seed.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys

from . import fileio
from .complexes import classify, fhg, is_flag, max_missing_dim
from .generators import (
    Instance, cross_polytope, cyclic_polytope, polygon_join, random_pl_sphere,
    simplex_boundary, stacked_join, stacked_sphere,
)
from .stresses import (
    AFFINE, LINEAR, derivative_span, recover_affine_type, stress_space,
)
from .verifiers import CHECKS, PROBES, run_check

EXIT_PASS, EXIT_FAIL, EXIT_UNMET, EXIT_IO = 0, 1, 2, 3


def build_instance(constructor: str, params: dict, seed=None) -> Instance:
    c = constructor.replace("_", "-")
    if c == "cross-polytope":
        return cross_polytope(int(params["d"]))
    if c == "simplex-boundary":
        return simplex_boundary(int(params["d"]))
    if c == "cyclic-polytope":
        return cyclic_polytope(int(params["d"]), int(params["n"]))
    if c == "stacked-sphere":
        return stacked_sphere(int(params["d"]), int(params["n"]))
    if c == "stacked-join":
        return stacked_join(int(params["d"]), int(params["k"]))
    if c == "polygon-join":
        return polygon_join(*[int(m) for m in params["ms"]])
    if c == "random-pl-sphere":
        constraints = {}
        if params.get("keep_flag"):
            constraints["keep_flag"] = True
        if params.get("max_missing_dim") is not None:
            constraints["max_missing_dim"] = int(params["max_missing_dim"])
        return random_pl_sphere(
            int(params["d"]), int(params["steps"]), int(seed),
            constraints or None, bound=int(params.get("bound", 10 ** 6)),
        )
    raise ValueError(f"unknown constructor {constructor!r}")


def _cmd_gen(args) -> int:
    params = {}
    for key in ("d", "n", "k", "steps", "bound", "max_missing_dim"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    if args.ms:
        params["ms"] = [int(x) for x in args.ms.split(",")]
    if args.keep_flag:
        params["keep_flag"] = True
    try:
        inst = build_instance(args.constructor, params, seed=args.seed)
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNMET
    payload = fileio.dumps(fileio.instance_to_dict(inst))
    try:
        fileio.write_atomic(args.out, payload)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"{inst.name}: constructor={inst.provenance.get('constructor')} "
          f"params={inst.provenance.get('params')} seed={inst.provenance.get('seed')} "
          f"-> {args.out}")
    return EXIT_PASS


def _load_instance(path: str) -> Instance:
    return fileio.instance_from_dict(fileio.load(path))


def _cmd_inspect(args) -> int:
    try:
        inst = _load_instance(args.instance)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    cx = inst.complex
    d = cx.dim + 1
    v = fhg(cx, d)
    rep = classify(cx)
    print(f"name:        {inst.name}")
    print(f"d:           {d}  (dim {cx.dim})")
    print(f"f:           {cx.f_vector()}")
    print(f"h:           {v.h}")
    print(f"g:           {v.g}")
    print(f"flag:        {is_flag(cx)}  max missing dim: {max_missing_dim(cx)}")
    print(f"structure:   pure={rep.pure} pseudomanifold={rep.pseudomanifold} "
          f"normal={rep.normal} strongly_connected={rep.strongly_connected}")
    print(f"embedding:   {'dim ' + str(inst.embedding.dim) if inst.embedding else 'none'}")
    print(f"polytopal:   {inst.is_polytopal() if inst.embedding else 'n/a'}")
    print(f"flip trace:  {len(inst.trace.steps) if inst.trace else 'none'}")
    return EXIT_PASS


def _cmd_stress(args) -> int:
    try:
        inst = _load_instance(args.instance)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    if inst.embedding is None:
        print("error: instance has no embedding", file=sys.stderr)
        return EXIT_UNMET
    kind = {"linear": LINEAR, "affine": AFFINE}.get(args.kind)
    if kind is None or args.degree < 0:
        print("error: bad degree/kind", file=sys.stderr)
        return EXIT_UNMET
    space = stress_space(inst.complex, inst.embedding, args.degree, kind)
    payload = fileio.dumps(fileio.stress_to_dict(space, inst.name, inst.name))
    if args.out:
        try:
            fileio.write_atomic(args.out, payload)
        except OSError as e:
            print(f"io error: {e}", file=sys.stderr)
            return EXIT_IO
    print(f"{inst.name}: dim Stress^{'a' if kind == AFFINE else 'l'}_{args.degree} "
          f"= {space.dim}")
    return EXIT_PASS


def _check_params(args) -> dict:
    params = {}
    if args.i is not None:
        params["i"] = args.i
    if args.j is not None:
        params["j"] = args.j
    if args.k is not None:
        params["k"] = args.k
    if args.tau:
        params["tau"] = tuple(args.tau.split(","))
    if args.missing:
        params["missing"] = tuple(args.missing.split(","))
    if args.subset is not None:
        params["subset"] = tuple(x for x in args.subset.split(",") if x)
    if args.simplex:
        params["simplex_vertices"] = tuple(args.simplex.split(","))
    return params


def _conclusion_exit(conclusion: str) -> int:
    if conclusion in ("pass", "probe-holds"):
        return EXIT_PASS
    if conclusion in ("fail", "probe-fails"):
        return EXIT_FAIL
    return EXIT_UNMET


def _cmd_verify(args, probe=False) -> int:
    ids = PROBES if probe else CHECKS
    if args.check not in ids:
        print(f"error: unknown {'probe' if probe else 'check'} id {args.check!r}",
              file=sys.stderr)
        return EXIT_UNMET
    try:
        inst = _load_instance(args.instance)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        report = run_check(args.check, inst, **_check_params(args))
    except (KeyError, TypeError) as e:
        print(f"error: missing/bad parameters for {args.check}: {e}", file=sys.stderr)
        return EXIT_UNMET
    payload = fileio.dumps(fileio.report_to_dict(report))
    if args.out:
        try:
            fileio.write_atomic(args.out, payload)
        except OSError as e:
            print(f"io error: {e}", file=sys.stderr)
            return EXIT_IO
    print(f"{args.check} on {inst.name}: {report.conclusion} "
          f"dims={fileio.jsonable(report.dims)} ({report.elapsed:.2f}s)")
    return _conclusion_exit(report.conclusion)


def _cmd_reconstruct(args) -> int:
    try:
        payload = fileio.load(args.stress)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        space = fileio.stress_from_dict(payload)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNMET
    if space.kind != AFFINE or space.degree != args.i:
        print(f"error: need an affine stress/1 of degree {args.i}", file=sys.stderr)
        return EXIT_UNMET
    if not (0 < args.j < args.i):
        print("error: need 0 < j < i", file=sys.stderr)
        return EXIT_UNMET
    span = derivative_span(space, args.i - args.j)
    if span.dim == 0 and args.j < args.i:
        print("warning: zero-dimensional derivative span", file=sys.stderr)
    if args.affine_type:
        if args.j != 1:
            print("error: --affine-type needs j = 1", file=sys.stderr)
            return EXIT_UNMET
        try:
            emb = recover_affine_type(span)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_UNMET
        out = fileio.dumps(fileio.embedding_to_dict(emb))
        print(f"recovered canonical embedding in dimension {emb.dim}")
    else:
        out = fileio.dumps(fileio.stress_to_dict(span, payload.get("complex", ""),
                                                 payload.get("embedding", "")))
        print(f"derivative span at degree {args.j}: dim {span.dim}")
    try:
        fileio.write_atomic(args.out, out)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_PASS


def _run_job(job):
    inst_spec = job["instance"]
    inst = build_instance(
        inst_spec["constructor"], inst_spec.get("params", {}), inst_spec.get("seed")
    )
    params = {k: (tuple(v) if isinstance(v, list) else v)
              for k, v in job.get("params", {}).items()}
    report = run_check(job["check"], inst, **params)
    return report


def _job_filename(job) -> str:
    blob = json.dumps(job, sort_keys=True).encode()
    digest = hashlib.sha256(blob).hexdigest()[:12]
    inst = job["instance"]
    base = f"{job['check']}-{inst['constructor']}-{digest}"
    return base.replace("/", "_") + ".json"


def _cmd_corpus(args) -> int:
    try:
        spec = fileio.load(args.spec)
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    jobs = spec.get("jobs", [])
    outdir = args.out_dir
    os.makedirs(outdir, exist_ok=True)
    workers = int(os.environ.get("STRESSLAB_WORKERS", "0")) or min(4, os.cpu_count() or 1)
    results = []
    if workers > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(job) for job in jobs]
    counts = {"pass": 0, "fail": 0, "hypothesis-unmet": 0,
              "probe-holds": 0, "probe-fails": 0}
    hard_fail = False
    rows = []
    for job, rep in zip(jobs, results):
        fname = _job_filename(job)
        try:
            fileio.write_atomic(os.path.join(outdir, fname),
                                fileio.dumps(fileio.report_to_dict(rep)))
        except OSError as e:
            print(f"io error: {e}", file=sys.stderr)
            return EXIT_IO
        counts[rep.conclusion] = counts.get(rep.conclusion, 0) + 1
        if rep.conclusion == "fail" and job["check"] not in PROBES:
            hard_fail = True
        rows.append((job["check"], rep.instance.get("name", "?"), rep.conclusion,
                     f"{rep.elapsed:.2f}s"))
    width = [max((len(str(r[c])) for r in rows), default=8) for c in range(4)]
    for r in rows:
        print("  ".join(str(x).ljust(w) for x, w in zip(r, width)))
    print(f"summary: {counts}")
    summary = {"format": "corpus-summary/1", "counts": counts,
               "reports": [_job_filename(j) for j in jobs]}
    fileio.write_atomic(os.path.join(outdir, "summary.json"), fileio.dumps(summary))
    return EXIT_FAIL if hard_fail else EXIT_PASS


def _cmd_report(args) -> int:
    try:
        names = sorted(os.listdir(args.dir))
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    counts = {}
    for name in names:
        if not name.endswith(".json") or name == "summary.json":
            continue
        payload = fileio.load(os.path.join(args.dir, name))
        if payload.get("format") != "vr/1":
            continue
        rep = fileio.report_from_dict(payload)
        counts[rep.conclusion] = counts.get(rep.conclusion, 0) + 1
        print(f"{rep.check_id:<20} {rep.instance.get('name', '?'):<16} {rep.conclusion}")
    print(f"summary: {counts}")
    return EXIT_PASS


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="stresslab",
        description="exact stress spaces of embedded simplicial complexes",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate an instance bundle")
    g.add_argument("constructor")
    g.add_argument("--dim", "--d", dest="d", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--steps", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--bound", type=int)
    g.add_argument("--ms", help="comma-separated polygon sizes")
    g.add_argument("--keep-flag", action="store_true")
    g.add_argument("--max-missing-dim", type=int, dest="max_missing_dim")
    g.add_argument("--out", required=True)

    i = sub.add_parser("inspect", help="summarize an instance bundle")
    i.add_argument("instance")

    s = sub.add_parser("stress", help="compute a stress space")
    s.add_argument("instance")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--kind", choices=["linear", "affine"], default="affine")
    s.add_argument("--out")

    for name in ("verify", "probe"):
        v = sub.add_parser(name, help=f"run a {name}")
        v.add_argument("check")
        v.add_argument("instance")
        v.add_argument("--i", type=int)
        v.add_argument("--j", type=int)
        v.add_argument("--k", type=int)
        v.add_argument("--tau", help="comma-separated vertex labels")
        v.add_argument("--missing", help="missing face, comma-separated")
        v.add_argument("--subset", help="subset of the missing face")
        v.add_argument("--simplex", help="simplex factor vertices (join checks)")
        v.add_argument("--out")

    r = sub.add_parser("reconstruct", help="derivative span / affine type")
    r.add_argument("stress")
    r.add_argument("--i", type=int, required=True)
    r.add_argument("--j", type=int, required=True)
    r.add_argument("--affine-type", action="store_true")
    r.add_argument("--out", required=True)

    c = sub.add_parser("corpus", help="run a corpus of checks")
    c.add_argument("spec")
    c.add_argument("--out-dir", required=True)

    rp = sub.add_parser("report", help="summarize a directory of vr/1 files")
    rp.add_argument("dir")

    args = ap.parse_args(argv)
    if args.cmd == "gen":
        return _cmd_gen(args)
    if args.cmd == "inspect":
        return _cmd_inspect(args)
    if args.cmd == "stress":
        return _cmd_stress(args)
    if args.cmd == "verify":
        return _cmd_verify(args, probe=False)
    if args.cmd == "probe":
        return _cmd_verify(args, probe=True)
    if args.cmd == "reconstruct":
        return _cmd_reconstruct(args)
    if args.cmd == "corpus":
        return _cmd_corpus(args)
    if args.cmd == "report":
        return _cmd_report(args)
    return EXIT_UNMET


if __name__ == "__main__":
    sys.exit(main())
