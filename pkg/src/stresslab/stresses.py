"""Stress spaces of embedded complexes and the algebra around them.

A linear k-stress is a homogeneous degree-k polynomial, every monomial
supported on a face, annihilated by the d coordinate derivations of the
embedding; an affine k-stress is additionally annihilated by the derivation
of the all-ones form.  Spaces are exact nullspaces with a canonical
reduced-row-echelon basis over the graded-lex monomial order, so equality of
spaces is literal equality of bases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .complexes import SimplicialComplex
from .embeddings import Embedding, QuotientStep, recover_canonical

Monomial = tuple  # vertex labels, sorted, with multiplicity; degree = length

LINEAR = "linear"
AFFINE = "affine"


def monomial_support(mu: Monomial) -> tuple:
    return tuple(sorted(set(mu)))


def monomial_basis(cx: SimplicialComplex, k: int):
    """All degree-k monomials with support a face, in graded-lex order."""
    if k < 0:
        return ()
    if k == 0:
        return ((),)
    out = []
    for s in range(1, min(k, cx.dim + 1) + 1):
        for f in cx.faces_of_dim(s - 1):
            # multiplicities: compositions of k into s positive parts
            for extra in itertools.combinations_with_replacement(range(s), k - s):
                mu = list(f)
                for i in extra:
                    mu.append(f[i])
                out.append(tuple(sorted(mu)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class StressPoly:
    """Homogeneous face-supported polynomial as monomial -> coefficient."""

    degree: int
    coeffs: dict

    def __post_init__(self):
        clean = {
            m: Fraction(c) for m, c in self.coeffs.items() if Fraction(c) != 0
        }
        if any(len(m) != self.degree for m in clean):
            raise ValueError("mixed-degree polynomial")
        object.__setattr__(self, "coeffs", clean)

    @property
    def is_zero(self):
        return not self.coeffs

    def weight(self, f) -> Fraction:
        """Coefficient of the squarefree monomial of the face f."""
        return self.coeffs.get(tuple(sorted(f)), Fraction(0))

    def vector(self, monomials) -> list:
        idx = {m: i for i, m in enumerate(monomials)}
        vec = [Fraction(0)] * len(monomials)
        for m, c in self.coeffs.items():
            if m not in idx:
                raise ValueError(f"monomial {m} outside the given basis")
            vec[idx[m]] = c
        return vec


def poly_from_vector(vec, monomials, degree) -> StressPoly:
    return StressPoly(
        degree=degree,
        coeffs={m: Fraction(v) for m, v in zip(monomials, vec) if v},
    )


def derivative(poly: StressPoly, mu) -> StressPoly:
    """Iterated partial derivative by the monomial mu."""
    coeffs = dict(poly.coeffs)
    deg = poly.degree
    for v in mu:
        nxt = {}
        for m, c in coeffs.items():
            e = m.count(v)
            if e:
                rest = list(m)
                rest.remove(v)
                key = tuple(rest)
                nxt[key] = nxt.get(key, Fraction(0)) + c * e
        coeffs = nxt
        deg -= 1
    return StressPoly(degree=deg, coeffs=coeffs)


def derivative_by_form(poly: StressPoly, form: dict) -> StressPoly:
    """Derivation by the linear form sum_v form[v] * x_v."""
    out = {}
    for v, lam in form.items():
        if not lam:
            continue
        part = derivative(poly, (v,))
        for m, c in part.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + Fraction(lam) * c
    return StressPoly(degree=poly.degree - 1, coeffs=out)


# ---------------------------------------------------------------------------
# Stress spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StressSpace:
    kind: str
    degree: int
    complex: SimplicialComplex
    embedding: Embedding
    monomials: tuple
    basis: tuple  # canonical RREF rows over ``monomials``

    @property
    def dim(self) -> int:
        return len(self.basis)

    def polys(self):
        return [poly_from_vector(row, self.monomials, self.degree) for row in self.basis]

    def contains_poly(self, poly: StressPoly) -> bool:
        try:
            vec = poly.vector(self.monomials)
        except ValueError:
            return False
        if not self.basis:
            return not any(vec)
        return linalg.row_space_contains([list(r) for r in self.basis], vec)

    def same_space(self, other: "StressSpace") -> bool:
        return (
            self.degree == other.degree
            and self.monomials == other.monomials
            and self.basis == other.basis
        )


def _derivation_forms(cx: SimplicialComplex, p: Embedding, kind: str):
    verts = cx.vertices
    forms = [
        {v: p.coords[v][i] for v in verts if p.coords[v][i]} for i in range(p.dim)
    ]
    if kind == AFFINE:
        forms.append({v: Fraction(1) for v in verts})
    return forms


def stress_matrix_rows(cx: SimplicialComplex, p: Embedding, k: int, kind: str):
    """Sparse rows of the stacked derivation maps on the degree-k basis."""
    bk = monomial_basis(cx, k)
    bkm1 = monomial_basis(cx, k - 1)
    idx = {m: i for i, m in enumerate(bkm1)}
    forms = _derivation_forms(cx, p, kind)
    nrows = len(forms) * len(bkm1)
    rows = [dict() for _ in range(nrows)]
    for col, mu in enumerate(bk):
        for v in set(mu):
            e = mu.count(v)
            rest = list(mu)
            rest.remove(v)
            target = idx[tuple(rest)]
            for fi, form in enumerate(forms):
                c = form.get(v)
                if c:
                    row = rows[fi * len(bkm1) + target]
                    row[col] = row.get(col, 0) + c * e
    return [r for r in rows if r], bk


def stress_space(cx: SimplicialComplex, p: Embedding, k: int,
                 kind: str = AFFINE) -> StressSpace:
    """Exact nullspace of the derivation maps; canonical reduced basis."""
    if kind not in (LINEAR, AFFINE):
        raise ValueError(f"unknown kind {kind!r}")
    if not p.covers(cx):
        raise ValueError("embedding does not cover the complex")
    rows, bk = stress_matrix_rows(cx, p, k, kind)
    ker = linalg.kernel(rows, len(bk))
    return StressSpace(
        kind=kind, degree=k, complex=cx, embedding=p,
        monomials=bk, basis=tuple(tuple(v) for v in ker),
    )


def is_stress(cx: SimplicialComplex, p: Embedding, poly: StressPoly,
              kind: str = AFFINE) -> bool:
    """Exact check of the defining conditions (support + annihilation)."""
    for m in poly.coeffs:
        if not cx.has_face(monomial_support(m)):
            return False
    for form in _derivation_forms(cx, p, kind):
        if not derivative_by_form(poly, form).is_zero:
            return False
    return True


# ---------------------------------------------------------------------------
# Subspace algebra (automatic re-embedding into an ambient monomial basis)
# ---------------------------------------------------------------------------

def reembed_rows(space: StressSpace, ambient_monomials) -> list:
    if space.monomials == tuple(ambient_monomials):
        return [list(r) for r in space.basis]
    idx = {m: i for i, m in enumerate(ambient_monomials)}
    out = []
    for row in space.basis:
        vec = [Fraction(0)] * len(ambient_monomials)
        for m, v in zip(space.monomials, row):
            if v:
                if m not in idx:
                    raise ValueError(f"ambient mismatch: {m} not in ambient basis")
                vec[idx[m]] = v
        out.append(vec)
    return out


def _ambient_like(space: StressSpace, ambient: StressSpace, rows) -> StressSpace:
    red, _ = linalg.rref(rows)
    return StressSpace(
        kind=space.kind, degree=space.degree, complex=ambient.complex,
        embedding=ambient.embedding, monomials=ambient.monomials,
        basis=tuple(tuple(r) for r in red),
    )


def sum_spaces(ambient: StressSpace, parts) -> StressSpace:
    """Canonical basis of the sum of subspaces inside ``ambient``'s basis."""
    rows = []
    for s in parts:
        if s.degree != ambient.degree:
            raise ValueError("degree mismatch in subspace sum")
        rows.extend(reembed_rows(s, ambient.monomials))
    if not rows:
        return StressSpace(
            kind=ambient.kind, degree=ambient.degree, complex=ambient.complex,
            embedding=ambient.embedding, monomials=ambient.monomials, basis=(),
        )
    return _ambient_like(ambient, ambient, rows)


def spaces_equal(a: StressSpace, b: StressSpace) -> bool:
    if a.degree != b.degree:
        return False
    if a.monomials == b.monomials:
        return a.basis == b.basis
    mono = sorted(set(a.monomials) | set(b.monomials))
    ra = linalg.row_space_canonical(reembed_rows(a, mono))
    rb = linalg.row_space_canonical(reembed_rows(b, mono))
    return ra == rb


def space_contains(outer: StressSpace, inner: StressSpace) -> bool:
    if outer.degree != inner.degree:
        return False
    rows_outer = [list(r) for r in outer.basis]
    for row in reembed_rows(inner, outer.monomials):
        if not linalg.row_space_contains(rows_outer, row):
            return False
    return True


def intersect_spaces(a: StressSpace, b: StressSpace) -> StressSpace:
    rows_b = reembed_rows(b, a.monomials)
    inter = linalg.intersect_row_spaces([list(r) for r in a.basis], rows_b)
    return StressSpace(
        kind=a.kind, degree=a.degree, complex=a.complex, embedding=a.embedding,
        monomials=a.monomials, basis=tuple(tuple(r) for r in inter),
    )


# ---------------------------------------------------------------------------
# Derivative spans
# ---------------------------------------------------------------------------

ALL_MONOMIALS = "all-monomials"
FACE_MONOMIALS = "face-monomials"


def derivative_span(space: StressSpace, r: int, mode: str = FACE_MONOMIALS) -> StressSpace:
    """Span of all order-r derivatives of the space by squarefree monomials.

    Modes differ in the index set (all squarefree degree-r monomials versus
    face monomials only); derivatives by non-face monomials of face-supported
    polynomials vanish, so both agree and the face mode is just smaller.
    """
    if r >= space.degree and space.degree != r:
        raise ValueError("derivative order must be below the degree")
    cx = space.complex
    if mode == ALL_MONOMIALS:
        mus = list(itertools.combinations(cx.vertices, r))
    elif mode == FACE_MONOMIALS:
        mus = sorted(cx.faces_of_dim(r - 1)) if r >= 1 else [()]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    target = monomial_basis(cx, space.degree - r)
    rows = []
    for row in space.basis:
        poly = poly_from_vector(row, space.monomials, space.degree)
        for mu in mus:
            d = derivative(poly, mu)
            if not d.is_zero:
                rows.append(d.vector(target))
    red, _ = linalg.rref(rows)
    return StressSpace(
        kind=space.kind, degree=space.degree - r, complex=cx,
        embedding=space.embedding, monomials=target,
        basis=tuple(tuple(v) for v in red),
    )


def derivative_image(space: StressSpace, mu, target_basis) -> list:
    """Rows of the image of d_mu applied to the space, in target_basis."""
    rows = []
    for row in space.basis:
        poly = poly_from_vector(row, space.monomials, space.degree)
        d = derivative(poly, mu)
        vec = [Fraction(0)] * len(target_basis)
        idx = {m: i for i, m in enumerate(target_basis)}
        for m, c in d.coeffs.items():
            vec[idx[m]] = c
        rows.append(vec)
    return rows


# ---------------------------------------------------------------------------
# Squarefree parts, signs, supports
# ---------------------------------------------------------------------------

def squarefree_part(poly: StressPoly) -> dict:
    """Weights of the (k-1)-faces (k = degree) in the polynomial."""
    return {
        m: c for m, c in poly.coeffs.items() if len(set(m)) == poly.degree
    }


def sign_vector(poly: StressPoly, faces) -> tuple:
    out = []
    for f in faces:
        w = poly.weight(f)
        out.append("+" if w > 0 else "-" if w < 0 else "0")
    return tuple(out)


def support_faces(space: StressSpace) -> frozenset:
    """(k-1)-faces whose weight functional is nonzero on the space."""
    out = set()
    for mi, m in enumerate(space.monomials):
        if len(set(m)) == space.degree:
            if any(row[mi] for row in space.basis):
                out.add(m)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Cone lemma lift
# ---------------------------------------------------------------------------

def cone_lift(link_stress: StressPoly, step: QuotientStep, k: int) -> StressPoly:
    """Lift an affine k-stress from a vertex link (quotient embedding) to the
    star, dividing each base-face weight by the product of the scale factors.

    Solves the constrained linear system; the cone structure guarantees a
    solution, so failure signals a violated precondition.
    """
    star, chart = step.star, step.star_chart
    rows, bk = stress_matrix_rows(star, chart, k, AFFINE)
    nb = len(bk)
    idx = {m: i for i, m in enumerate(bk)}
    aug = []
    for row in rows:
        vec = [Fraction(row.get(c, 0)) for c in range(nb)] + [Fraction(0)]
        aug.append(vec)
    for f in step.link.faces_of_dim(k - 1):
        scale = Fraction(1)
        for u in f:
            scale *= step.scales[u]
        target = link_stress.weight(f) / scale
        vec = [Fraction(0)] * (nb + 1)
        vec[idx[f]] = Fraction(1)
        vec[nb] = target
        aug.append(vec)
    red, piv = linalg.rref(aug)
    if nb in piv:
        raise ValueError("cone lift has no solution: precondition violated")
    sol = [Fraction(0)] * nb
    for i, c in enumerate(piv):
        sol[c] = red[i][nb]
    return poly_from_vector(sol, bk, k)


# ---------------------------------------------------------------------------
# Affine-type recovery from a degree-1 space
# ---------------------------------------------------------------------------

def recover_affine_type(space: StressSpace) -> Embedding:
    """Canonical embedding whose affine dependence space equals the given
    degree-1 space (unique via the canonical pinning)."""
    if space.degree != 1:
        raise ValueError("affine type recovery needs a degree-1 space")
    verts = [m[0] for m in space.monomials]
    n = len(verts)
    d = n - space.dim - 1
    if d < 1:
        raise ValueError("inconsistent dimension: no spanning configuration")
    rows = [
        {c: v for c, v in enumerate(row) if v} for row in space.basis
    ]
    comp = linalg.kernel(rows, n)  # (d+1) x n, contains the all-ones vector
    ones = [Fraction(1)] * n
    if not linalg.row_space_contains([list(r) for r in comp], ones):
        raise ValueError("inconsistent dimension: all-ones not orthogonal")
    # coefficients expressing the ones vector in the complement basis
    tr = [[comp[i][j] for i in range(len(comp))] + [ones[j]] for j in range(n)]
    red, piv = linalg.rref(tr)
    y = [Fraction(0)] * len(comp)
    for i, c in enumerate(piv):
        if c < len(comp):
            y[c] = red[i][len(comp)]
    j_star = next(i for i, v in enumerate(y) if v)
    pts = {}
    for col, v in enumerate(verts):
        column = [comp[i][col] for i in range(len(comp))]
        height = sum(yi * xi for yi, xi in zip(y, column))
        assert height == 1
        pts[v] = tuple(column[i] for i in range(len(comp)) if i != j_star)
    return recover_canonical(Embedding(d, pts))
