"""Exact rational embeddings, the associated linear-form system, genericity
and polytopality certificates, affine transforms, and vertex-figure quotients.

Genericity is a proxy: large random integer coordinates plus exact rank
certificates for the finitely many open conditions the checks actually use
(facet independence, affine independence of adjacent facet pairs).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg, lp
from .complexes import SimplicialComplex


@dataclass(frozen=True)
class Embedding:
    """Map from vertex labels to points of Q^dim."""

    dim: int
    coords: dict

    def __post_init__(self):
        clean = {
            v: tuple(Fraction(x) for x in pt) for v, pt in self.coords.items()
        }
        for v, pt in clean.items():
            if len(pt) != self.dim:
                raise ValueError(f"vertex {v!r} has a point of wrong dimension")
        object.__setattr__(self, "coords", clean)

    def point(self, v) -> tuple:
        return self.coords[v]

    def restrict(self, vertices) -> "Embedding":
        return Embedding(self.dim, {v: self.coords[v] for v in vertices})

    def covers(self, cx: SimplicialComplex) -> bool:
        return all(v in self.coords for v in cx.vertices)


@dataclass(frozen=True)
class ThetaSystem:
    """The (d+1) linear forms of an embedding: coordinate rows plus the
    all-ones row, with columns aligned to ``vertices``."""

    vertices: tuple
    rows: tuple  # (d+1) tuples of Fractions

    @property
    def dim(self):
        return len(self.rows) - 1


def natural(cx: SimplicialComplex, coord_table: dict, dim: Optional[int] = None) -> Embedding:
    """Embedding from a verbatim coordinate table covering V(cx)."""
    missing = [v for v in cx.vertices if v not in coord_table]
    if missing:
        raise ValueError(f"coordinates missing for {missing}")
    pts = {v: tuple(Fraction(x) for x in coord_table[v]) for v in cx.vertices}
    d = dim if dim is not None else len(next(iter(pts.values())))
    return Embedding(d, pts)


def theta(p: Embedding, vertices) -> ThetaSystem:
    vertices = tuple(vertices)
    rows = [
        tuple(p.coords[v][i] for v in vertices) for i in range(p.dim)
    ]
    rows.append(tuple(Fraction(1) for _ in vertices))
    return ThetaSystem(vertices=vertices, rows=tuple(rows))


# ---------------------------------------------------------------------------
# Rank certificates
# ---------------------------------------------------------------------------

def _points_linearly_independent(points) -> bool:
    pts = list(points)
    rows = [list(pt) for pt in pts]
    red, piv = linalg.rref(rows)
    return len(piv) == len(pts)


def points_affinely_independent(points) -> bool:
    pts = [list(pt) + [Fraction(1)] for pt in points]
    red, piv = linalg.rref(pts)
    return len(piv) == len(pts)


def affine_rank(points) -> int:
    """Dimension of the affine span plus one (number of independent points)."""
    pts = [list(pt) + [Fraction(1)] for pt in points]
    _, piv = linalg.rref(pts)
    return len(piv)


@dataclass(frozen=True)
class GenericityCertificate:
    facet_independent: bool
    adjacent_pairs_affinely_independent: bool
    seed: Optional[int] = None
    resample_count: int = 0

    @property
    def ok(self):
        return self.facet_independent and self.adjacent_pairs_affinely_independent


def genericity_certificate(cx: SimplicialComplex, p: Embedding,
                           seed=None, resample_count=0) -> GenericityCertificate:
    facet_ok = all(
        _points_linearly_independent([p.coords[v] for v in f]) for f in cx.facets
    )
    adjacent_ok = True
    if facet_ok:
        for ridge, fl in cx._ridges().items():
            if len(fl) == 2:
                union = sorted(set(fl[0]) | set(fl[1]))
                if not points_affinely_independent([p.coords[v] for v in union]):
                    adjacent_ok = False
                    break
    else:
        adjacent_ok = all(
            points_affinely_independent(
                [p.coords[v] for v in sorted(set(fl[0]) | set(fl[1]))]
            )
            for fl in cx._ridges().values()
            if len(fl) == 2
        )
    return GenericityCertificate(
        facet_independent=facet_ok,
        adjacent_pairs_affinely_independent=adjacent_ok,
        seed=seed,
        resample_count=resample_count,
    )


DEFAULT_BOUND = 10 ** 6
RETRY_CAP = 16


def generic_random(cx: SimplicialComplex, d: int, seed: int,
                   bound: int = DEFAULT_BOUND):
    """Random integer coordinates in [-bound, bound], resampled until the
    rank certificates hold.  Returns (Embedding, GenericityCertificate)."""
    if d < cx.dim + 1:
        raise ValueError(f"embedding dimension {d} below {cx.dim + 1}")
    rng = random.Random(seed)
    for attempt in range(RETRY_CAP):
        pts = {
            v: tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d))
            for v in cx.vertices
        }
        p = Embedding(d, pts)
        cert = genericity_certificate(cx, p, seed=seed, resample_count=attempt)
        if cert.ok:
            return p, cert
    raise ValueError(f"no generic embedding found after {RETRY_CAP} attempts")


# ---------------------------------------------------------------------------
# Polytopality
# ---------------------------------------------------------------------------

def check_polytopal(cx: SimplicialComplex, p: Embedding):
    """Every facet hyperplane strictly supports the remaining vertices.

    Returns (flag, witness); witness is the violating (facet, vertex) pair or
    a degenerate facet.
    """
    d = p.dim
    if not cx.is_pure or cx.dim != d - 1:
        return False, {"reason": "not pure of dimension d-1"}
    for f in cx.facets:
        normal = _facet_functional(p, f)
        if normal is None:
            return False, {"reason": "degenerate facet hyperplane", "facet": f}
        a, b = normal
        sign = 0
        for v in cx.vertices:
            if v in f:
                continue
            s = sum(ai * xi for ai, xi in zip(a, p.coords[v])) - b
            if s == 0 or (sign and (s > 0) != (sign > 0)):
                return False, {"facet": f, "vertex": v}
            sign = 1 if s > 0 else -1
    return True, None


def _facet_functional(p: Embedding, f):
    """(a, b) with a.x = b on the facet, unique up to scale, or None."""
    pts = [p.coords[v] for v in f]
    rows = [{j: x for j, x in enumerate(list(pt) + [Fraction(-1)])} for pt in pts]
    ker = linalg.kernel(rows, p.dim + 1)
    if len(ker) != 1:
        return None
    vec = ker[0]
    return tuple(vec[: p.dim]), vec[p.dim]


# ---------------------------------------------------------------------------
# Affine transforms and canonical form
# ---------------------------------------------------------------------------

def affine_transform(p: Embedding, matrix, shift) -> Embedding:
    """v -> A p(v) + b with A exactly invertible."""
    a = [[Fraction(x) for x in row] for row in matrix]
    b = [Fraction(x) for x in shift]
    d = p.dim
    if len(a) != d or any(len(r) != d for r in a) or len(b) != d:
        raise ValueError("transform shape mismatch")
    red, piv = linalg.rref(a)
    if len(piv) != d:
        raise ValueError("singular transform")
    pts = {}
    for v, pt in p.coords.items():
        pts[v] = tuple(
            sum(a[i][j] * pt[j] for j in range(d)) + b[i] for i in range(d)
        )
    return Embedding(d, pts)


def recover_canonical(p: Embedding) -> Embedding:
    """Pin the lexicographically first d+1 affinely independent vertices to
    0, e_1, ..., e_d."""
    d = p.dim
    order = sorted(p.coords)
    chosen = []
    for v in order:
        if affine_rank([p.coords[u] for u in chosen + [v]]) == len(chosen) + 1:
            chosen.append(v)
        if len(chosen) == d + 1:
            break
    if len(chosen) < d + 1:
        raise ValueError("no affinely spanning vertex subset")
    base = p.coords[chosen[0]]
    cols = [
        [p.coords[v][i] - base[i] for v in chosen[1:]] for i in range(d)
    ]
    # solve L . (p(v_i) - p(v_0)) = e_i  =>  L = D^{-1} for D with those columns
    dmat = [[cols[i][j] for j in range(d)] for i in range(d)]
    inv = _invert(dmat)
    pts = {}
    for v, pt in p.coords.items():
        shifted = [pt[i] - base[i] for i in range(d)]
        pts[v] = tuple(
            sum(inv[i][j] * shifted[j] for j in range(d)) for i in range(d)
        )
    return Embedding(d, pts)


def _invert(mat):
    d = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(d)]
           for i, row in enumerate(mat)]
    red, piv = linalg.rref(aug)
    if piv != list(range(d)):
        raise ValueError("singular matrix")
    return [row[d:] for row in red]


def affine_dependencies(p: Embedding, vertices) -> list:
    """Canonical basis (RREF rows over ``vertices``) of the affine dependence
    space of the point configuration."""
    vertices = tuple(vertices)
    ts = theta(p, vertices)
    rows = [
        {j: row[j] for j in range(len(vertices)) if row[j]} for row in ts.rows
    ]
    return linalg.kernel(rows, len(vertices))


# ---------------------------------------------------------------------------
# Vertex figures / quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientStep:
    """One vertex figure: apex, its star and link (in the pre-step complex),
    the chart embedding of the star with the apex at the origin, and the
    positive scale factors a_u = h . (p(u) - p(apex))."""

    apex: str
    star: SimplicialComplex
    link: SimplicialComplex
    star_chart: Embedding
    scales: dict


@dataclass(frozen=True)
class QuotientChain:
    face: tuple
    complex: SimplicialComplex  # lk(face)
    embedding: Embedding        # natural embedding of the quotient
    steps: tuple                # QuotientStep, outermost first


def quotient_embedding(cx: SimplicialComplex, p: Embedding, f) -> QuotientChain:
    """Iterated vertex figures over the vertices of ``f`` (in label order).

    Each step finds a strictly separating hyperplane h by exact LP, cuts the
    edges at h . x = 1, and charts the hyperplane into one fewer coordinate.
    """
    f = tuple(sorted(f))
    if not cx.has_face(f):
        raise ValueError(f"{f} is not a face")
    cur_cx, cur_p = cx, p
    steps = []
    for v in f:
        cur_cx, cur_p, step = _vertex_figure(cur_cx, cur_p, v)
        steps.append(step)
    return QuotientChain(face=f, complex=cur_cx, embedding=cur_p, steps=tuple(steps))


def _vertex_figure(cx: SimplicialComplex, p: Embedding, v: str):
    d = p.dim
    origin = p.coords[v]
    others = [u for u in cx.vertices if u != v]
    shifted = {u: tuple(x - o for x, o in zip(p.coords[u], origin)) for u in others}
    # separating hyperplane: h . q(u) >= 1 for all other vertices
    h = lp.feasible_point([list(shifted[u]) for u in others], [1] * len(others))
    if h is None:
        raise ValueError(f"no separating hyperplane at vertex {v!r}")
    j_star = next(i for i in range(d) if h[i])
    link = cx.link((v,))
    star = cx.star((v,))
    scales = {}
    link_pts = {}
    chart_pts = {v: tuple(Fraction(0) for _ in range(d))}
    for u in others:
        a_u = sum(hi * xi for hi, xi in zip(h, shifted[u]))
        scales[u] = a_u
        chart = _chart(shifted[u], h, j_star)
        chart_pts[u] = chart
        if u in link.vertices:
            cut = tuple(x / a_u for x in chart[: d - 1])
            link_pts[u] = cut
    q = Embedding(d - 1, link_pts)
    star_chart = Embedding(d, {u: chart_pts[u] for u in star.vertices})
    return link, q, QuotientStep(
        apex=v, star=star, link=link, star_chart=star_chart, scales=scales
    )


def _chart(x, h, j_star):
    """Linear chart (x_i for i != j_star, h.x); maps {h.x = 1} to height 1."""
    kept = [x[i] for i in range(len(x)) if i != j_star]
    height = sum(hi * xi for hi, xi in zip(h, x))
    return tuple(kept + [height])
