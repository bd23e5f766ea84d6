"""Instance constructors: named sphere families, bistellar flips, random PL
spheres with replayable traces, and the canonical stacked ball of a k-stacked
sphere.

Every constructor is deterministic given its parameters and seed, and every
embedding it produces is exact rational.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .complexes import (
    SimplicialComplex, face, join, missing_faces, max_missing_dim, is_flag,
)
from .embeddings import (
    Embedding, check_polytopal, generic_random, genericity_certificate,
    GenericityCertificate,
)


class FlipError(ValueError):
    pass


@dataclass(frozen=True)
class FlipStep:
    a: tuple
    b: tuple
    j: int  # |a|


@dataclass(frozen=True)
class FlipTrace:
    start: str  # e.g. "simplex-boundary-5"
    steps: tuple
    seed: Optional[int] = None


@dataclass
class Instance:
    """Named (complex, embedding) pair with provenance for reproducibility."""

    name: str
    complex: SimplicialComplex
    embedding: Optional[Embedding] = None
    provenance: dict = field(default_factory=dict)
    trace: Optional[FlipTrace] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def is_polytopal(self) -> bool:
        if "polytopal" not in self._cache:
            if self.embedding is None:
                self._cache["polytopal"] = (False, {"reason": "no embedding"})
            else:
                self._cache["polytopal"] = check_polytopal(self.complex, self.embedding)
        return self._cache["polytopal"][0]

    def genericity(self) -> GenericityCertificate:
        if "genericity" not in self._cache:
            self._cache["genericity"] = genericity_certificate(
                self.complex, self.embedding
            )
        return self._cache["genericity"]

    def pl_certificate(self) -> Optional[str]:
        """'trace' when built by flips from a simplex boundary, else
        'polytopal' when the embedding witnesses convexity, else None."""
        if self.trace is not None:
            return "trace"
        if self.embedding is not None and self.is_polytopal():
            return "polytopal"
        return None


# ---------------------------------------------------------------------------
# Simplex boundary and cross-polytope
# ---------------------------------------------------------------------------

def _simplex_points(d: int, labels):
    """d+1 points spanning Q^d with barycenter at the origin."""
    pts = {}
    for i, v in enumerate(labels[:-1]):
        pts[v] = tuple(Fraction(1 if j == i else 0) for j in range(d))
    pts[labels[-1]] = tuple(Fraction(-1) for _ in range(d))
    return pts


def simplex_boundary(d: int) -> Instance:
    if d < 1:
        raise ValueError("d >= 1 required")
    labels = [f"s{i:02d}" for i in range(d + 1)]
    facets = list(itertools.combinations(labels, d))
    cx = SimplicialComplex(facets, name=f"sb{d}")
    p = Embedding(d, _simplex_points(d, labels))
    return Instance(
        name=f"sb{d}", complex=cx, embedding=p,
        provenance={"constructor": "simplex-boundary", "params": {"d": d}, "seed": None},
        trace=FlipTrace(start=f"simplex-boundary-{d}", steps=()),
    )


def cross_polytope(d: int) -> Instance:
    if d < 1:
        raise ValueError("d >= 1 required")
    pairs = [(f"c{i:02d}n", f"c{i:02d}p") for i in range(1, d + 1)]
    facets = [tuple(pair[s] for pair, s in zip(pairs, signs))
              for signs in itertools.product((0, 1), repeat=d)]
    cx = SimplicialComplex(facets, name=f"oct{d}")
    pts = {}
    for i, (neg, pos) in enumerate(pairs):
        pts[pos] = tuple(Fraction(1 if j == i else 0) for j in range(d))
        pts[neg] = tuple(Fraction(-1 if j == i else 0) for j in range(d))
    return Instance(
        name=f"oct{d}", complex=cx, embedding=Embedding(d, pts),
        provenance={"constructor": "cross-polytope", "params": {"d": d}, "seed": None},
    )


# ---------------------------------------------------------------------------
# Cyclic polytopes (moment curve, Gale evenness)
# ---------------------------------------------------------------------------

def cyclic_polytope(d: int, n: int) -> Instance:
    if d < 2 or n < d + 1:
        raise ValueError("need d >= 2 and n >= d+1")
    labels = [f"t{i:02d}" for i in range(1, n + 1)]
    facets = []
    for sub in itertools.combinations(range(n), d):
        inside = set(sub)
        ok = True
        outside = [i for i in range(n) if i not in inside]
        for a, b in itertools.combinations(outside, 2):
            between = sum(1 for s in sub if a < s < b)
            if between % 2:
                ok = False
                break
        if ok:
            facets.append(tuple(labels[i] for i in sub))
    cx = SimplicialComplex(facets, name=f"cyclic-{d}-{n}")
    pts = {
        labels[i - 1]: tuple(Fraction(i ** e) for e in range(1, d + 1))
        for i in range(1, n + 1)
    }
    p = Embedding(d, pts)
    ok, witness = check_polytopal(cx, p)
    if not ok:
        raise AssertionError(f"cyclic polytope failed convexity: {witness}")
    return Instance(
        name=f"cyclic-{d}-{n}", complex=cx, embedding=p,
        provenance={"constructor": "cyclic-polytope", "params": {"d": d, "n": n}, "seed": None},
    )


# ---------------------------------------------------------------------------
# Polygon joins and simplex-boundary joins (free sums)
# ---------------------------------------------------------------------------

def _circle_points(m: int):
    """m rational points on the unit circle in strictly increasing angle.

    t_k = u/(1-u^2) for u uniform in (-1,1) sweeps the angle range via the
    tangent half-angle parametrization; points on a circle are automatically
    in strictly convex position and the spread keeps the origin inside.
    """
    pts = []
    for k in range(m):
        u = Fraction(2 * k + 1 - m, m)
        t = u / (1 - u * u)
        den = 1 + t * t
        pts.append(((1 - t * t) / den, 2 * t / den))
    return pts


def _verify_polygon(pts):
    m = len(pts)
    for k in range(m):
        ax, ay = pts[k]
        bx, by = pts[(k + 1) % m]
        cx_, cy = pts[(k + 2) % m]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx_ - ax)
        if cross <= 0:
            raise AssertionError("polygon vertices not strictly convex")
        if ax * by - ay * bx <= 0:  # origin strictly left of each edge
            raise AssertionError("origin not strictly inside polygon")


def polygon_join(*ms: int) -> Instance:
    """Join of cycles C_{m_1} * ... * C_{m_r}, embedded as a free sum of
    convex polygons in orthogonal coordinate blocks."""
    if not ms or any(m < 3 for m in ms):
        raise ValueError("each polygon needs at least 3 vertices")
    r = len(ms)
    d = 2 * r
    parts = []
    pts = {}
    for bi, m in enumerate(ms, start=1):
        labels = [f"g{bi}v{k:02d}" for k in range(m)]
        edges = [(labels[k], labels[(k + 1) % m]) for k in range(m)]
        parts.append(SimplicialComplex(edges))
        circ = _circle_points(m)
        _verify_polygon(circ)
        for lab, (x, y) in zip(labels, circ):
            pt = [Fraction(0)] * d
            pt[2 * (bi - 1)], pt[2 * (bi - 1) + 1] = x, y
            pts[lab] = tuple(pt)
    cx = parts[0]
    for nxt in parts[1:]:
        cx = join(cx, nxt)
    name = "pjoin-" + "-".join(map(str, ms))
    cx = SimplicialComplex(cx.facets, name=name)
    return Instance(
        name=name, complex=cx, embedding=Embedding(d, pts),
        provenance={"constructor": "polygon-join", "params": {"ms": list(ms)}, "seed": None},
    )


def stacked_join(d: int, k: int) -> Instance:
    """The join of simplex boundaries of dimensions d-k-1 and k-1 (that is,
    boundary complexes on d-k+1 and k+1 vertices), as a free sum."""
    if not 1 <= k <= d - 1:
        raise ValueError("need 1 <= k <= d-1")
    m1, m2 = d - k, k
    lab1 = [f"q{i:02d}" for i in range(m1 + 1)]
    lab2 = [f"r{i:02d}" for i in range(m2 + 1)]
    cx1 = SimplicialComplex(itertools.combinations(lab1, m1))
    cx2 = SimplicialComplex(itertools.combinations(lab2, m2))
    pts1 = _simplex_points(m1, lab1)
    pts2 = _simplex_points(m2, lab2)
    pts = {}
    for v, pt in pts1.items():
        pts[v] = tuple(pt) + tuple(Fraction(0) for _ in range(m2))
    for v, pt in pts2.items():
        pts[v] = tuple(Fraction(0) for _ in range(m1)) + tuple(pt)
    name = f"sjoin-{d}-{k}"
    cx = SimplicialComplex(join(cx1, cx2).facets, name=name)
    return Instance(
        name=name, complex=cx, embedding=Embedding(d, pts),
        provenance={"constructor": "stacked-join", "params": {"d": d, "k": k}, "seed": None},
    )


# ---------------------------------------------------------------------------
# Bistellar flips
# ---------------------------------------------------------------------------

def bistellar_flip(cx: SimplicialComplex, a, b) -> SimplicialComplex:
    """Replace the induced join a-bar * boundary(b-bar) by its complement.

    Precondition failures name the subset that breaks them.
    """
    a, b = face(a), face(b)
    if set(a) & set(b):
        raise FlipError(f"A and B overlap: {sorted(set(a) & set(b))}")
    if len(a) + len(b) != cx.dim + 2:
        raise FlipError(f"|A|+|B| = {len(a) + len(b)} != d+1 = {cx.dim + 2}")
    if not a:
        raise FlipError("A must be nonempty")
    if cx.has_face(b):
        raise FlipError(f"B = {b} is already a face")
    removed = []
    for v in b:
        g = tuple(sorted(a + tuple(u for u in b if u != v)))
        if not cx.has_face(g):
            raise FlipError(f"required facet {g} missing (dropping {v!r} from B)")
        removed.append(g)
    if not b:
        raise FlipError("B must be nonempty")
    added = [tuple(sorted(b + tuple(u for u in a if u != v))) for v in a]
    new_facets = [g for g in cx.facets if g not in set(removed)] + added
    return SimplicialComplex(new_facets)


def flip_face_count_delta(d: int, j: int):
    """Face-count changes (by dimension 0..d-1) across a j-flip of a
    (d-1)-sphere: gained are the faces containing B, lost those containing A."""
    from math import comb

    delta = [0] * d
    nb = d + 1 - j
    for s in range(j):  # gained: sigma cup B, sigma proper subset of A
        dim = nb + s - 1
        if 0 <= dim < d:
            delta[dim] += comb(j, s)
    for s in range(nb):  # lost: A cup tau, tau proper subset of B
        dim = j + s - 1
        if 0 <= dim < d:
            delta[dim] -= comb(nb, s)
    return tuple(delta)


def legal_flips(cx: SimplicialComplex, fresh_label: str):
    """All (A, B) pairs admitting a bistellar flip, sorted deterministically.

    Vertex-adding flips use ``fresh_label`` for the new vertex.
    """
    d = cx.dim + 1
    cands = []
    for g in cx.facets:  # |B| = 1: subdivide a facet with a fresh apex
        cands.append((g, (fresh_label,)))
    for b in missing_faces(cx):
        nb = len(b)
        if nb > d:
            continue
        j = d + 1 - nb
        b_set = set(b)
        first_sub = tuple(sorted(b[1:]))
        lk0 = [s for s in _cofaces(cx, first_sub, j) if not b_set & set(s)]
        for a in lk0:
            ok = True
            for v in b[1:]:
                g = tuple(sorted(a + tuple(u for u in b if u != v)))
                if not cx.has_face(g):
                    ok = False
                    break
            if ok:
                cands.append((a, b))
    return sorted(cands)


def _cofaces(cx: SimplicialComplex, f, size):
    """Faces g of the link of f with |g| = size (i.e. g cup f is a face)."""
    fs = set(f)
    out = set()
    for g in cx.facets:
        if fs <= set(g):
            rest = tuple(v for v in g if v not in fs)
            out.update(itertools.combinations(rest, size))
    return sorted(out)


class FlipWalkError(RuntimeError):
    def __init__(self, message, partial_trace):
        super().__init__(message)
        self.partial_trace = partial_trace


def random_pl_sphere(d: int, steps: int, seed: int, constraints: Optional[dict] = None,
                     embed: bool = True, bound: int = 10 ** 6) -> Instance:
    """Random walk in the flip graph from the simplex boundary.

    Each step samples uniformly among legal flips that preserve the
    constraints ({"keep_flag": bool, "max_missing_dim": int} forbids missing
    faces of dimension >= the given value).  Deterministic per seed.
    """
    if steps < 0:
        raise ValueError("steps >= 0")
    constraints = constraints or {}
    rng = random.Random(seed)
    cx = simplex_boundary(d).complex
    trace_steps = []
    fresh_id = 0
    for _ in range(steps):
        fresh = f"n{fresh_id:03d}"
        ok_cands = []
        for a, b in legal_flips(cx, fresh):
            nxt = bistellar_flip(cx, a, b)
            if constraints.get("keep_flag") and not is_flag(nxt):
                continue
            mmax = constraints.get("max_missing_dim")
            if mmax is not None and max_missing_dim(nxt) >= mmax:
                continue
            ok_cands.append((a, b, nxt))
        if not ok_cands:
            raise FlipWalkError(
                f"no legal flip under constraints after {len(trace_steps)} steps",
                FlipTrace(start=f"simplex-boundary-{d}", steps=tuple(trace_steps), seed=seed),
            )
        a, b, cx = ok_cands[rng.randrange(len(ok_cands))]
        if fresh in b:
            fresh_id += 1
        trace_steps.append(FlipStep(a=a, b=b, j=len(a)))
    trace = FlipTrace(start=f"simplex-boundary-{d}", steps=tuple(trace_steps), seed=seed)
    name = f"rps-{d}-{steps}-{seed}"
    cx = SimplicialComplex(cx.facets, name=name)
    inst = Instance(
        name=name, complex=cx,
        provenance={"constructor": "random-pl-sphere",
                    "params": {"d": d, "steps": steps,
                               "constraints": {k: v for k, v in sorted(constraints.items())}},
                    "seed": seed},
        trace=trace,
    )
    if embed:
        p, _cert = generic_random(cx, d, seed=seed, bound=bound)
        inst.embedding = p
    return inst


def replay_trace(trace: FlipTrace) -> SimplicialComplex:
    """Re-apply a flip trace from its named start; bit-identical per seed."""
    kind, _, dstr = trace.start.rpartition("-")
    if kind != "simplex-boundary":
        raise ValueError(f"unknown trace start {trace.start!r}")
    cx = simplex_boundary(int(dstr)).complex
    for step in trace.steps:
        cx = bistellar_flip(cx, step.a, step.b)
    return cx


# ---------------------------------------------------------------------------
# Stacked spheres with convex-position coordinates
# ---------------------------------------------------------------------------

def stacked_sphere(d: int, n: int) -> Instance:
    """n-vertex 1-stacked (d-1)-sphere: repeated facet subdivisions with each
    apex placed beyond the subdivided facet (exact rationals)."""
    if n < d + 1:
        raise ValueError("need n >= d+1")
    base = simplex_boundary(d)
    cx, pts = base.complex, dict(base.embedding.coords)
    steps = []
    apex_id = 0
    while len(cx.vertices) < n:
        facet = cx.facets[0]
        apex = f"a{apex_id:02d}"
        apex_id += 1
        pts[apex] = _beyond_point(cx, Embedding(d, pts), facet)
        cx = bistellar_flip(cx, facet, (apex,))
        steps.append(FlipStep(a=facet, b=(apex,), j=len(facet)))
    name = f"stacked-{d}-{n}"
    cx = SimplicialComplex(cx.facets, name=name)
    return Instance(
        name=name, complex=cx, embedding=Embedding(d, pts),
        provenance={"constructor": "stacked-sphere", "params": {"d": d, "n": n}, "seed": None},
        trace=FlipTrace(start=f"simplex-boundary-{d}", steps=tuple(steps)),
    )


def _beyond_point(cx: SimplicialComplex, p: Embedding, facet):
    """Barycenter of the facet pushed outward; the push is halved until the
    subdivided complex verifies as convex."""
    from .embeddings import _facet_functional

    d = p.dim
    functional = _facet_functional(p, facet)
    if functional is None:
        raise AssertionError("degenerate facet while stacking")
    a, bval = functional
    interior = [
        sum(pt) / len(p.coords) for pt in zip(*p.coords.values())
    ]
    side = sum(ai * xi for ai, xi in zip(a, interior)) - bval
    if side == 0:
        raise AssertionError("interior point on facet hyperplane")
    outward = tuple(-ai if side > 0 else ai for ai in a)
    bary = tuple(
        sum(p.coords[v][i] for v in facet) / len(facet) for i in range(d)
    )
    eps = Fraction(1)
    for _ in range(64):
        apex = tuple(b + eps * u for b, u in zip(bary, outward))
        trial_pts = dict(p.coords)
        trial_pts["__apex__"] = apex
        trial = bistellar_flip(cx, facet, ("__apex__",))
        ok, _w = check_polytopal(trial, Embedding(d, trial_pts))
        if ok:
            return apex
        eps /= 2
    raise AssertionError("could not place apex beyond facet")


# ---------------------------------------------------------------------------
# The canonical k-stacked ball T(Delta)
# ---------------------------------------------------------------------------

def murai_nevo_ball(cx: SimplicialComplex, k: int) -> SimplicialComplex:
    """All vertex sets whose (d-k-1)-skeleton of the full simplex lies in the
    complex; for a k-stacked sphere this is the unique k-stacked ball with
    boundary cx."""
    d = cx.dim + 1
    t = d - k
    if k < 0 or t < 1:
        raise ValueError("need 0 <= k <= d-1")
    members = {f for kk in range(0, cx.dim + 1) for f in cx.faces_of_dim(kk)}
    vs = cx.vertices
    level = {f for f in members if len(f) == t}
    size = t
    current = level
    while current:
        size += 1
        cands = set()
        for f in current:
            fs = set(f)
            for v in vs:
                if v not in fs:
                    cands.add(tuple(sorted(f + (v,))))
        nxt = set()
        for s in cands:
            if all(sub in current for sub in itertools.combinations(s, size - 1)):
                nxt.add(s)
        members |= nxt
        current = nxt
    return SimplicialComplex(members)
