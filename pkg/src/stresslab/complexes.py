"""Abstract simplicial complexes given by their facets.

Faces are canonically-sorted tuples of opaque string labels; all derived face
tables are computed eagerly at construction, so instances are immutable and
safe to share between worker processes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional


Face = tuple  # sorted tuple of vertex labels


def face(vertices: Iterable[str]) -> Face:
    """Canonical face from an iterable of labels; rejects duplicates."""
    vs = tuple(sorted(vertices))
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate vertices in face {vs}")
    return vs


def face_dim(f: Face) -> int:
    return len(f) - 1


class SimplicialComplex:
    """Immutable simplicial complex; faces enumerated once at construction."""

    __slots__ = ("vertices", "facets", "_faces", "_ridge_map", "name")

    def __init__(self, facets: Iterable[Face], name: str = ""):
        maximal = _inclusion_maximal({face(f) for f in facets})
        if not maximal:
            raise ValueError("a complex needs at least one facet")
        self.facets = tuple(sorted(maximal, key=lambda f: (-len(f), f)))
        self.vertices = tuple(sorted({v for f in self.facets for v in f}))
        self.name = name
        faces: dict[int, set] = {-1: {()}}
        for f in self.facets:
            for r in range(1, len(f) + 1):
                faces.setdefault(r - 1, set()).update(
                    itertools.combinations(f, r)
                )
        self._faces = {k: frozenset(s) for k, s in faces.items()}
        self._ridge_map = None

    @classmethod
    def from_facets(cls, labels: Iterable[str], facet_lists, name: str = ""):
        """Build from declared labels and facet vertex lists.

        Non-maximal facets are absorbed; every declared label must occur.
        """
        labels = list(labels)
        if not facet_lists:
            raise ValueError("empty facet list")
        known = set(labels)
        fs = []
        for fl in facet_lists:
            f = face(fl)
            unknown = set(f) - known
            if unknown:
                raise ValueError(f"unknown label(s) {sorted(unknown)} in facet {f}")
            fs.append(f)
        cx = cls(fs, name=name)
        missing = known - set(cx.vertices)
        if missing:
            raise ValueError(f"declared vertices not in any facet: {sorted(missing)}")
        return cx

    # -- basic queries ------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.facets[0]) - 1

    @property
    def is_pure(self) -> bool:
        return all(len(f) == len(self.facets[0]) for f in self.facets)

    def faces_of_dim(self, k: int) -> frozenset:
        if k < -1 or k > self.dim:
            raise ValueError(f"dimension {k} out of range for dim-{self.dim} complex")
        return self._faces.get(k, frozenset())

    def all_faces(self, include_empty: bool = False):
        for k in range(-1 if include_empty else 0, self.dim + 1):
            yield from sorted(self._faces.get(k, ()))

    def has_face(self, f: Face) -> bool:
        return tuple(sorted(f)) in self._faces.get(len(f) - 1, frozenset())

    def f_vector(self) -> tuple:
        """(f_0, ..., f_dim)."""
        return tuple(len(self._faces.get(k, ())) for k in range(self.dim + 1))

    def num_faces(self, k: int) -> int:
        return len(self._faces.get(k, frozenset()))

    # -- subcomplex operators ----------------------------------------------

    def star(self, f: Face) -> "SimplicialComplex":
        f = tuple(sorted(f))
        if not self.has_face(f):
            raise ValueError(f"{f} is not a face")
        fs = set(f)
        return SimplicialComplex([g for g in self.facets if fs <= set(g)])

    def link(self, f: Face) -> "SimplicialComplex":
        f = tuple(sorted(f))
        if not self.has_face(f):
            raise ValueError(f"{f} is not a face")
        fs = set(f)
        return SimplicialComplex(
            [tuple(v for v in g if v not in fs) for g in self.facets if fs <= set(g)]
        )

    def antistar(self, f: Face) -> "SimplicialComplex":
        """Faces not containing f; returns self if f is not a face."""
        f = tuple(sorted(f))
        if not self.has_face(f):
            return self
        fs = set(f)
        out = []
        for g in self.facets:
            if fs <= set(g):
                out.extend(tuple(u for u in g if u != v) for v in f)
            else:
                out.append(g)
        return SimplicialComplex(out)

    def induced(self, w: Iterable[str]) -> Optional["SimplicialComplex"]:
        ws = set(w)
        out = []
        for g in self.facets:
            inter = tuple(v for v in g if v in ws)
            if inter:
                out.append(inter)
        return SimplicialComplex(out) if out else None

    def skeleton(self, i: int) -> "SimplicialComplex":
        if i >= self.dim:
            return self
        if i < 0:
            raise ValueError("skeleton dimension must be >= 0")
        return SimplicialComplex(self._faces[i] | {(v,) for v in self.vertices})

    def graph_neighbors(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for (u, v) in self._faces.get(1, ()):
            adj[u].add(v)
            adj[v].add(u)
        return adj

    # -- ridge bookkeeping ---------------------------------------------------

    def _ridges(self) -> dict:
        """Map (d-2)-face -> list of facets containing it (pure complexes)."""
        if self._ridge_map is None:
            rm: dict[Face, list] = {}
            for g in self.facets:
                if g:
                    for r in itertools.combinations(g, len(g) - 1):
                        rm.setdefault(r, []).append(g)
            self._ridge_map = rm
        return self._ridge_map

    @property
    def strongly_connected(self) -> bool:
        if not self.is_pure:
            return False
        if len(self.facets) == 1:
            return True
        adj = {g: set() for g in self.facets}
        for fl in self._ridges().values():
            for a, b in itertools.combinations(fl, 2):
                adj[a].add(b)
                adj[b].add(a)
        seen = {self.facets[0]}
        stack = [self.facets[0]]
        while stack:
            for n in adj[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        return len(seen) == len(self.facets)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        tag = self.name or f"{len(self.vertices)}v/{len(self.facets)}F"
        return f"SimplicialComplex({tag}, dim={self.dim})"


def _inclusion_maximal(faces):
    faces = sorted(faces, key=len, reverse=True)
    out = []
    sets = []
    for f in faces:
        fs = set(f)
        if not any(fs <= s for s in sets):
            out.append(f)
            sets.append(fs)
    return out


# ---------------------------------------------------------------------------
# Joins and cones
# ---------------------------------------------------------------------------

def join(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    overlap = set(a.vertices) & set(b.vertices)
    if overlap:
        raise ValueError(f"label collision in join: {sorted(overlap)}")
    return SimplicialComplex([fa + fb for fa in a.facets for fb in b.facets])


def cone(apex: str, base: SimplicialComplex) -> SimplicialComplex:
    if apex in base.vertices:
        raise ValueError(f"cone apex {apex!r} already a vertex")
    return SimplicialComplex([(apex,) + f for f in base.facets])


# ---------------------------------------------------------------------------
# Missing faces
# ---------------------------------------------------------------------------

def missing_faces(cx: SimplicialComplex) -> frozenset:
    """Minimal non-faces: F not a face, every proper subset a face."""
    out = set()
    vs = cx.vertices
    # size 2: non-edges
    edges = cx._faces.get(1, frozenset())
    for pair in itertools.combinations(vs, 2):
        if pair not in edges:
            out.add(pair)
    # size m >= 3: grow candidates from (m-1)-faces
    for m in range(3, cx.dim + 3):
        lower = cx._faces.get(m - 2, frozenset())
        current = cx._faces.get(m - 1, frozenset())
        cands = set()
        for f in lower:
            fs = set(f)
            for v in vs:
                if v not in fs:
                    cands.add(tuple(sorted(f + (v,))))
        for s in cands:
            if s in current:
                continue
            if all(t in lower for t in itertools.combinations(s, m - 1)):
                out.add(s)
    return frozenset(out)


def is_flag(cx: SimplicialComplex) -> bool:
    return all(len(f) == 2 for f in missing_faces(cx))


def max_missing_dim(cx: SimplicialComplex) -> int:
    mf = missing_faces(cx)
    return max((len(f) - 1 for f in mf), default=-1)


# ---------------------------------------------------------------------------
# Structure classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    pure: bool
    pseudomanifold: str  # none | with-boundary | without-boundary
    normal: bool
    strongly_connected: bool
    boundary_complex: Optional[SimplicialComplex]


def classify(cx: SimplicialComplex) -> StructureReport:
    """Evaluate purity, pseudomanifold type, normality, strong connectivity."""
    pure = cx.is_pure
    pm = "none"
    boundary = None
    if pure:
        counts = {r: len(fl) for r, fl in cx._ridges().items()}
        if counts and max(counts.values()) <= 2:
            bd = [r for r, c in counts.items() if c == 1]
            if bd:
                pm = "with-boundary"
                boundary = SimplicialComplex(bd)
            else:
                pm = "without-boundary"
    normal = False
    if pm != "none":
        normal = all(
            cx.link(f).strongly_connected
            for k in range(-1, cx.dim - 1)
            for f in cx._faces.get(k, ())
        )
    return StructureReport(
        pure=pure,
        pseudomanifold=pm,
        normal=normal,
        strongly_connected=cx.strongly_connected,
        boundary_complex=boundary,
    )


def boundary_of(cx: SimplicialComplex) -> Optional[SimplicialComplex]:
    """Subcomplex generated by ridges lying in exactly one facet."""
    bd = [r for r, fl in cx._ridges().items() if len(fl) == 1]
    return SimplicialComplex(bd) if bd else None


def minimal_interior_faces(cx: SimplicialComplex) -> frozenset:
    """Faces G with G interior and the whole boundary of G-bar inside the
    boundary complex."""
    rep = classify(cx)
    if rep.pseudomanifold != "with-boundary":
        raise ValueError("complex has no boundary")
    bd = rep.boundary_complex
    bd_faces = {f for k in range(-1, bd.dim + 1) for f in bd._faces.get(k, ())}
    out = set()
    for k in range(0, cx.dim + 1):
        for g in cx._faces.get(k, ()):
            if g in bd_faces:
                continue
            if all(s in bd_faces for s in itertools.combinations(g, len(g) - 1)):
                out.add(g)
    return frozenset(out)


# ---------------------------------------------------------------------------
# f/h/g-vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FHGVectors:
    """f[i] counts (i-1)-faces (so f[0] = 1); h has length d+1;
    g runs from g_0 = 1 to g_ceil(d/2)."""

    f: tuple
    h: tuple
    g: tuple


def fhg(cx: SimplicialComplex, d: int) -> FHGVectors:
    if cx.dim != d - 1:
        raise ValueError(f"complex has dimension {cx.dim}, expected {d - 1}")
    f = (1,) + cx.f_vector()
    h = tuple(
        sum((-1) ** (j - i) * comb(d - i, d - j) * f[i] for i in range(j + 1))
        for j in range(d + 1)
    )
    half = (d + 1) // 2
    g = (1,) + tuple(h[j] - h[j - 1] for j in range(1, half + 1))
    return FHGVectors(f=f, h=h, g=g)


def g_number(cx: SimplicialComplex, d: int, j: int) -> int:
    """g_j with the usual conventions g_0 = 1 and g_j = 0 for j < 0."""
    if j < 0:
        return 0
    if j == 0:
        return 1
    f = (1,) + cx.f_vector()

    def h(jj):
        return sum((-1) ** (jj - i) * comb(d - i, d - jj) * f[i] for i in range(jj + 1))

    return h(j) - h(j - 1)
