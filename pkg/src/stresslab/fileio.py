"""JSON file formats: scx/1 (complex), emb/1 (embedding), inst/1 (instance
bundle), stress/1 (stress-space basis), vr/1 (verification report).

All output is canonical: fixed key order, sorted vertex lists, facets sorted
lexicographically, rationals as normalized "p/q" strings.  Writers are atomic
(temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .complexes import SimplicialComplex
from .embeddings import Embedding
from .generators import FlipStep, FlipTrace, Instance
from .stresses import StressSpace
from .verifiers import VerificationReport


def _frac_str(x) -> str:
    return str(Fraction(x))


def jsonable(obj):
    """Recursively convert to JSON-compatible structures."""
    if isinstance(obj, Fraction):
        return _frac_str(obj)
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, SimplicialComplex):
        return complex_to_dict(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=1)


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- scx/1 -------------------------------------------------------------------

def complex_to_dict(cx: SimplicialComplex) -> dict:
    return {
        "format": "scx/1",
        "name": cx.name,
        "vertices": list(cx.vertices),
        "facets": sorted(list(f) for f in cx.facets),
    }


def complex_from_dict(d: dict) -> SimplicialComplex:
    if d.get("format") != "scx/1":
        raise ValueError(f"not an scx/1 payload: {d.get('format')!r}")
    return SimplicialComplex.from_facets(
        d["vertices"], [tuple(f) for f in d["facets"]], name=d.get("name", "")
    )


# -- emb/1 -------------------------------------------------------------------

def embedding_to_dict(p: Embedding) -> dict:
    return {
        "format": "emb/1",
        "dim": p.dim,
        "coords": {v: [_frac_str(x) for x in pt] for v, pt in sorted(p.coords.items())},
    }


def embedding_from_dict(d: dict) -> Embedding:
    if d.get("format") != "emb/1":
        raise ValueError(f"not an emb/1 payload: {d.get('format')!r}")
    return Embedding(
        d["dim"],
        {v: tuple(Fraction(x) for x in pt) for v, pt in d["coords"].items()},
    )


# -- inst/1 ------------------------------------------------------------------

def trace_to_dict(trace: FlipTrace) -> dict:
    return {
        "start": trace.start,
        "seed": trace.seed,
        "steps": [{"a": list(s.a), "b": list(s.b), "j": s.j} for s in trace.steps],
    }


def trace_from_dict(d: dict) -> FlipTrace:
    return FlipTrace(
        start=d["start"],
        seed=d.get("seed"),
        steps=tuple(
            FlipStep(a=tuple(s["a"]), b=tuple(s["b"]), j=s["j"]) for s in d["steps"]
        ),
    )


def instance_to_dict(inst: Instance) -> dict:
    return {
        "format": "inst/1",
        "name": inst.name,
        "complex": complex_to_dict(inst.complex),
        "embedding": embedding_to_dict(inst.embedding) if inst.embedding else None,
        "provenance": jsonable(inst.provenance),
        "flip_trace": trace_to_dict(inst.trace) if inst.trace else None,
    }


def instance_from_dict(d: dict) -> Instance:
    if d.get("format") != "inst/1":
        raise ValueError(f"not an inst/1 payload: {d.get('format')!r}")
    return Instance(
        name=d["name"],
        complex=complex_from_dict(d["complex"]),
        embedding=embedding_from_dict(d["embedding"]) if d.get("embedding") else None,
        provenance=d.get("provenance", {}),
        trace=trace_from_dict(d["flip_trace"]) if d.get("flip_trace") else None,
    )


# -- stress/1 ----------------------------------------------------------------

def _monomial_pairs(mu) -> list:
    out = []
    for v in sorted(set(mu)):
        out.append([v, mu.count(v)])
    return out


def _monomial_from_pairs(pairs) -> tuple:
    mu = []
    for v, e in pairs:
        mu.extend([v] * e)
    return tuple(sorted(mu))


def stress_to_dict(space: StressSpace, complex_name: str = "",
                   embedding_name: str = "") -> dict:
    return {
        "format": "stress/1",
        "kind": space.kind,
        "degree": space.degree,
        "complex": complex_name or space.complex.name,
        "embedding": embedding_name,
        "monomials": [_monomial_pairs(m) for m in space.monomials],
        "basis": [[_frac_str(x) for x in row] for row in space.basis],
    }


def stress_from_dict(d: dict):
    """Parse a stress/1 payload.

    The supports of the monomials recover the needed skeleton of the complex,
    which is enough for derivative spans and affine-type recovery; returns a
    StressSpace over that skeleton with a trivial embedding context.
    """
    if d.get("format") != "stress/1":
        raise ValueError(f"not a stress/1 payload: {d.get('format')!r}")
    monomials = tuple(_monomial_from_pairs(p) for p in d["monomials"])
    supports = {tuple(sorted(set(m))) for m in monomials if m} or {()}
    cx = SimplicialComplex(supports, name=d.get("complex", ""))
    basis = tuple(
        tuple(Fraction(x) for x in row) for row in d["basis"]
    )
    placeholder = Embedding(0, {v: () for v in cx.vertices})
    return StressSpace(
        kind=d["kind"], degree=d["degree"], complex=cx, embedding=placeholder,
        monomials=monomials, basis=basis,
    )


# -- vr/1 --------------------------------------------------------------------

def report_to_dict(rep: VerificationReport) -> dict:
    return {
        "format": "vr/1",
        "check_id": rep.check_id,
        "instance": jsonable(rep.instance),
        "hypotheses_checked": [[n, bool(v)] for n, v in rep.hypotheses_checked],
        "conclusion": rep.conclusion,
        "dims": jsonable(rep.dims),
        "witness": jsonable(rep.witness),
        "elapsed": rep.elapsed,
    }


def report_from_dict(d: dict) -> VerificationReport:
    if d.get("format") != "vr/1":
        raise ValueError(f"not a vr/1 payload: {d.get('format')!r}")
    return VerificationReport(
        check_id=d["check_id"],
        instance=d["instance"],
        hypotheses_checked=[(n, v) for n, v in d["hypotheses_checked"]],
        conclusion=d["conclusion"],
        dims=d["dims"],
        witness=d.get("witness"),
        elapsed=d.get("elapsed", 0.0),
    )


def load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
