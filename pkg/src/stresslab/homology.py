"""Reduced simplicial homology ranks and homology sphere/ball certificates.

Ranks of boundary matrices are computed exactly: over Q through the certified
kernel engine, over GF(2) by bitmask elimination.  The sphere and ball
predicates follow the recursive link conditions directly.
"""

from __future__ import annotations

import itertools

from . import linalg
from .complexes import SimplicialComplex


def _boundary_rows_q(cx: SimplicialComplex, k: int):
    """Rows of the transposed boundary map C_k -> C_{k-1} (augmented at k=0).

    Returned as sparse columns-of-the-map: one dict per k-face, so the rank
    of this row set equals rank of the boundary matrix.
    """
    kfaces = sorted(cx.faces_of_dim(k))
    lower = {f: i for i, f in enumerate(sorted(cx.faces_of_dim(k - 1)))}
    rows = []
    for f in kfaces:
        row = {}
        for i in range(len(f)):
            sub = f[:i] + f[i + 1:]
            row[lower[sub]] = 1 if i % 2 == 0 else -1
        rows.append(row)
    return rows, len(lower)


def _boundary_rank(cx: SimplicialComplex, k: int, field: str) -> int:
    if k < 0 or k > cx.dim:
        return 0
    rows, ncols = _boundary_rows_q(cx, k)
    if field == "GF2":
        return linalg.gf2_rank([list(r.keys()) for r in rows])
    return linalg.rank(rows, ncols)


def homology_ranks(cx: SimplicialComplex, field: str = "Q"):
    """Reduced Betti numbers (b0, ..., b_dim) over Q or GF2."""
    if field not in ("Q", "GF2"):
        raise ValueError(f"unknown field {field!r}")
    if cx.dim == -1:
        return ()
    ranks = {k: _boundary_rank(cx, k, field) for k in range(cx.dim + 2)}
    out = []
    for k in range(cx.dim + 1):
        dim_ck = cx.num_faces(k)
        out.append(dim_ck - ranks[k] - ranks.get(k + 1, 0))
    return tuple(out)


def has_sphere_homology(cx: SimplicialComplex, m: int, field: str) -> bool:
    """Whether cx has the reduced homology of an m-sphere (m >= -1)."""
    if m == -1:
        return cx.dim == -1
    if cx.dim != m:
        return False
    betti = homology_ranks(cx, field)
    return betti == (0,) * m + (1,)


def has_ball_homology(cx: SimplicialComplex, m: int, field: str) -> bool:
    """Whether cx is acyclic of dimension m (m >= 0)."""
    if m < 0 or cx.dim != m:
        return False
    return homology_ranks(cx, field) == (0,) * (m + 1)


def is_homology_sphere(cx: SimplicialComplex, field: str = "Q") -> bool:
    """Every link (including the one of the empty face) has the homology of a
    sphere of complementary dimension."""
    d = cx.dim + 1
    for k in range(-1, cx.dim + 1):
        for f in cx.faces_of_dim(k):
            if not has_sphere_homology(cx.link(f), d - 1 - len(f), field):
                return False
    return True


def is_homology_ball(cx: SimplicialComplex, field: str = "Q") -> bool:
    """Acyclic, links are spheres or balls of the right dimension, and the
    boundary (faces with ball links) is a homology sphere."""
    d = cx.dim
    if d < 0:
        return False
    if homology_ranks(cx, field) != (0,) * (d + 1):
        return False
    boundary = set()
    for k in range(0, d + 1):
        for f in cx.faces_of_dim(k):
            lk = cx.link(f)
            m = d - len(f)
            if has_ball_homology(lk, m, field):
                boundary.add(f)
            elif not has_sphere_homology(lk, m, field):
                return False
    if not boundary:
        return d == 0  # a point is the only ball with empty boundary
    # boundary faces must be downward closed
    for f in boundary:
        for s in itertools.combinations(f, len(f) - 1):
            if s and s not in boundary:
                return False
    bd = SimplicialComplex(boundary)
    return bd.dim == d - 1 and is_homology_sphere(bd, field)
