"""One executable check per theorem: hypothesis gating, exact subspace
comparisons, and structured reports.

Every verifier certifies its hypotheses before evaluating the conclusion and
reports three-valued outcomes (pass / fail / hypothesis-unmet); conjecture
probes use probe-holds / probe-fails instead and never assert.  A fail always
carries a witness.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from . import linalg, lp
from .complexes import (
    SimplicialComplex, boundary_of, classify, fhg, g_number, is_flag,
    max_missing_dim, missing_faces,
)
from .embeddings import (
    affine_dependencies, affine_rank, quotient_embedding,
)
from .generators import Instance, cross_polytope, murai_nevo_ball
from .homology import is_homology_ball, is_homology_sphere
from .stresses import (
    AFFINE, FACE_MONOMIALS, ALL_MONOMIALS, LINEAR, StressPoly, StressSpace,
    cone_lift, derivative, derivative_by_form, is_stress, monomial_basis,
    poly_from_vector, recover_affine_type, sign_vector, spaces_equal,
    squarefree_part, stress_space, sum_spaces, support_faces, derivative_span,
)

PASS = "pass"
FAIL = "fail"
UNMET = "hypothesis-unmet"
PROBE_HOLDS = "probe-holds"
PROBE_FAILS = "probe-fails"


@dataclass
class VerificationReport:
    check_id: str
    instance: dict
    hypotheses_checked: list
    conclusion: str
    dims: dict = field(default_factory=dict)
    witness: Optional[object] = None
    elapsed: float = 0.0

    def __post_init__(self):
        if self.conclusion == FAIL and self.witness is None:
            raise ValueError("a failing report needs a witness")

    @property
    def ok(self):
        return self.conclusion in (PASS, PROBE_HOLDS)


class _Gate:
    """Evaluates named hypotheses in order; remembers the first failure."""

    def __init__(self):
        self.checked = []
        self.failed = None

    def require(self, name, value) -> bool:
        value = bool(value)
        self.checked.append((name, value))
        if not value and self.failed is None:
            self.failed = name
        return value

    @property
    def ok(self):
        return self.failed is None


def _provenance(inst: Instance) -> dict:
    out = {"name": inst.name}
    out.update(inst.provenance)
    return out


def _finish(check_id, inst, gate, conclusion, dims=None, witness=None, t0=0.0):
    if gate.failed is not None:
        conclusion = UNMET
        witness = {"hypothesis": gate.failed}
    return VerificationReport(
        check_id=check_id,
        instance=_provenance(inst),
        hypotheses_checked=gate.checked,
        conclusion=conclusion,
        dims=dims or {},
        witness=witness,
        elapsed=time.perf_counter() - t0,
    )


# -- cached instance-level facts --------------------------------------------

def _cached(inst: Instance, key, fn):
    if key not in inst._cache:
        inst._cache[key] = fn()
    return inst._cache[key]


def _dim_d(inst: Instance) -> int:
    return inst.complex.dim + 1


def _flag(inst):
    return _cached(inst, "flag", lambda: is_flag(inst.complex))


def _max_missing(inst):
    return _cached(inst, "max_missing", lambda: max_missing_dim(inst.complex))


def _sphere_gf2(inst):
    return _cached(inst, "sphere_gf2", lambda: is_homology_sphere(inst.complex, "GF2"))


def _sphere_q(inst):
    return _cached(inst, "sphere_q", lambda: is_homology_sphere(inst.complex, "Q"))


def _classify(inst):
    return _cached(inst, "classify", lambda: classify(inst.complex))


def _space(inst: Instance, k: int, kind: str) -> StressSpace:
    key = ("space", k, kind)
    return _cached(inst, key, lambda: stress_space(inst.complex, inst.embedding, k, kind))


def _star_space(inst: Instance, f, k: int, kind: str) -> StressSpace:
    star = inst.complex.star(f)
    p = inst.embedding.restrict(star.vertices)
    return stress_space(star, p, k, kind)


def _generic_route(gate, inst, name="generic-route"):
    """Polytopal instances pass immediately; otherwise require the genericity
    certificate plus a GF2 homology-sphere certificate."""
    if inst.embedding is None:
        return gate.require("embedding", False)
    if inst.is_polytopal():
        return gate.require(name + ": polytopal", True)
    ok = inst.genericity().ok and _sphere_gf2(inst)
    return gate.require(name + ": generic gf2-sphere", ok)


def _flag_pl_route(gate, inst):
    """Polytopal, or flag PL (trace) with a generic-proxy embedding."""
    if inst.embedding is None:
        return gate.require("embedding", False)
    if inst.is_polytopal():
        return gate.require("polytopal", True)
    ok = _flag(inst) and inst.pl_certificate() is not None and inst.genericity().ok
    return gate.require("flag-pl-generic", ok)


# ---------------------------------------------------------------------------
# Lefschetz surjectivity and dimension counts
# ---------------------------------------------------------------------------

def _image_of_c(space: StressSpace):
    """Canonical row space of the all-ones derivation applied to a space."""
    cx = space.complex
    target = monomial_basis(cx, space.degree - 1)
    idx = {m: i for i, m in enumerate(target)}
    rows = []
    ones = {v: Fraction(1) for v in cx.vertices}
    for row in space.basis:
        poly = poly_from_vector(row, space.monomials, space.degree)
        d = derivative_by_form(poly, ones)
        vec = [Fraction(0)] * len(target)
        for m, c in d.coeffs.items():
            vec[idx[m]] = c
        rows.append(vec)
    red, _ = linalg.rref(rows)
    return red, target


def verify_lefschetz(inst: Instance, i: int) -> VerificationReport:
    """The all-ones form maps linear i-stresses onto (i-1)-stresses, and the
    affine i-stress dimension equals g_i."""
    t0 = time.perf_counter()
    gate = _Gate()
    d = _dim_d(inst)
    gate.require("degree-range", 1 <= i <= (d + 1) // 2)
    _generic_route(gate, inst)
    if not gate.ok:
        return _finish("lefschetz", inst, gate, UNMET, t0=t0)
    sl_i = _space(inst, i, LINEAR)
    sl_prev = _space(inst, i - 1, LINEAR)
    sa_i = _space(inst, i, AFFINE)
    image, _ = _image_of_c(sl_i)
    surjective = image == [list(r) for r in sl_prev.basis]
    gi = g_number(inst.complex, d, i)
    dims = {
        "linear_i": sl_i.dim, "linear_im1": sl_prev.dim,
        "affine_i": sa_i.dim, "g_i": gi, "image": len(image),
    }
    ok = surjective and sa_i.dim == gi
    if d == 2 * i - 1:
        dims["isomorphism"] = sl_i.dim == sl_prev.dim
        ok = ok and sl_i.dim == sl_prev.dim
    witness = None if ok else {"dims": dims, "surjective": surjective}
    return _finish("lefschetz", inst, gate, PASS if ok else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Partition of unity
# ---------------------------------------------------------------------------

def _star_sum_equals(inst, total: StressSpace, faces, kind) -> tuple:
    parts = [_star_space(inst, f, total.degree, kind) for f in faces]
    summed = sum_spaces(total, parts)
    return summed.basis == total.basis, summed.dim


def verify_pou_affine1(inst: Instance) -> VerificationReport:
    """Affine 1-stresses decompose over stars of (d-3)-faces and of vertices."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    gate.require("dimension d>=3", d >= 3)
    gate.require("embedding", inst.embedding is not None)
    gate.require("pure", cx.is_pure)
    gate.require("strongly-connected", cx.strongly_connected)
    if gate.ok:
        gate.require("adjacent-pairs-affinely-independent",
                     inst.genericity().adjacent_pairs_affinely_independent)
    if not gate.ok:
        return _finish("pou-affine1", inst, gate, UNMET, t0=t0)
    total = _space(inst, 1, AFFINE)
    ok_faces, dim_faces = _star_sum_equals(inst, total, sorted(cx.faces_of_dim(d - 3)), AFFINE)
    ok_verts, dim_verts = _star_sum_equals(
        inst, total, [(v,) for v in cx.vertices], AFFINE
    )
    dims = {"affine_1": total.dim, "face_star_sum": dim_faces, "vertex_star_sum": dim_verts}
    ok = ok_faces and ok_verts
    witness = None if ok else {"dims": dims}
    return _finish("pou-affine1", inst, gate, PASS if ok else FAIL, dims, witness, t0)


def verify_pou_linear(inst: Instance, i: int, k: int = 1,
                      j: Optional[int] = None) -> VerificationReport:
    """Linear i-stresses decompose over stars of k-vertex faces, and (given j)
    arise as order-(i-j) derivatives of linear i-stresses."""
    t0 = time.perf_counter()
    gate = _Gate()
    d = _dim_d(inst)
    gate.require("embedding", inst.embedding is not None)
    if gate.ok:
        gate.require("homology-sphere", _sphere_q(inst) or _sphere_gf2(inst))
        gate.require("facet-independent", inst.genericity().facet_independent)
    gate.require("part1-range", 1 <= i <= d - 1 and 1 <= k <= d - i)
    if j is not None:
        gate.require("part2-range", 1 <= j < i <= d)
    if not gate.ok:
        return _finish("pou-linear", inst, gate, UNMET, t0=t0)
    cx = inst.complex
    total = _space(inst, i, LINEAR)
    ok1, dim_sum = _star_sum_equals(inst, total, sorted(cx.faces_of_dim(k - 1)), LINEAR)
    dims = {"linear_i": total.dim, "star_sum": dim_sum}
    ok = ok1
    if j is not None:
        span_face = derivative_span(total, i - j, FACE_MONOMIALS)
        span_all = derivative_span(total, i - j, ALL_MONOMIALS)
        target = _space(inst, j, LINEAR)
        dims["span_face"] = span_face.dim
        dims["span_all"] = span_all.dim
        dims["linear_j"] = target.dim
        ok = ok and span_face.basis == target.basis and span_all.basis == target.basis
    witness = None if ok else {"dims": dims}
    return _finish("pou-linear", inst, gate, PASS if ok else FAIL, dims, witness, t0)


def verify_pou_linear_join(inst: Instance, simplex_vertices, i: int,
                           t: int = 1, j: Optional[int] = None) -> VerificationReport:
    """Simplex-join variant: for a join of a full simplex with a homology
    sphere, stars over sphere faces decompose, and derivatives by sphere
    variables alone span the lower space."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    sset = set(simplex_vertices)
    gate.require("embedding", inst.embedding is not None)
    shape_ok = all(sset <= set(f) for f in cx.facets)
    gate.require("join-shape", shape_ok)
    if not gate.ok:
        return _finish("pou-linear-join", inst, gate, UNMET, t0=t0)
    sphere = cx.link(tuple(sorted(sset)))
    k_sphere = sphere.dim + 1
    gate.require("base-homology-sphere",
                 is_homology_sphere(sphere, "Q") or is_homology_sphere(sphere, "GF2"))
    gate.require("facet-independent", inst.genericity().facet_independent)
    part1 = 1 <= i <= k_sphere - 1 and 1 <= t <= k_sphere - i
    if j is None:
        gate.require("part1-range", part1)
    else:
        gate.require("part2-range", 1 <= j < i <= k_sphere)
    if not gate.ok:
        return _finish("pou-linear-join", inst, gate, UNMET, t0=t0)
    total = _space(inst, i, LINEAR)
    dims = {"linear_i": total.dim}
    ok = True
    if part1:
        faces = sorted(sphere.faces_of_dim(t - 1))
        ok1, dim_sum = _star_sum_equals(inst, total, faces, LINEAR)
        dims["star_sum"] = dim_sum
        ok = ok and ok1
    if j is not None:
        target = monomial_basis(cx, j)
        rows = []
        for row in total.basis:
            poly = poly_from_vector(row, total.monomials, total.degree)
            for mu in itertools.combinations(sorted(sphere.vertices), i - j):
                dmu = derivative(poly, mu)
                if not dmu.is_zero:
                    rows.append(dmu.vector(target))
        red, _ = linalg.rref(rows)
        tgt = _space(inst, j, LINEAR)
        dims["span_sphere_vars"] = len(red)
        dims["linear_j"] = tgt.dim
        ok = ok and red == [list(r) for r in tgt.basis]
    witness = None if ok else {"dims": dims}
    return _finish("pou-linear-join", inst, gate, PASS if ok else FAIL, dims, witness, t0)


def verify_pou_affine_higher(inst: Instance, i: int) -> VerificationReport:
    """Affine i-stresses decompose over vertex stars (2 <= i <= (d-1)/2)."""
    t0 = time.perf_counter()
    gate = _Gate()
    d = _dim_d(inst)
    gate.require("degree-range", 2 <= i and 2 * i <= d - 1)
    if inst.embedding is None:
        gate.require("embedding", False)
    elif inst.is_polytopal():
        gate.require("polytopal", True)
    else:
        gate.require("pl-trace-generic",
                     inst.trace is not None and inst.genericity().ok)
    if not gate.ok:
        return _finish("pou-affine-higher", inst, gate, UNMET, t0=t0)
    cx = inst.complex
    total = _space(inst, i, AFFINE)
    ok, dim_sum = _star_sum_equals(inst, total, [(v,) for v in cx.vertices], AFFINE)
    dims = {"affine_i": total.dim, "vertex_star_sum": dim_sum}
    witness = None if ok else {"dims": dims}
    return _finish("pou-affine-higher", inst, gate, PASS if ok else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Antistars and star surjections
# ---------------------------------------------------------------------------

def verify_antistar(inst: Instance, tau, i: int) -> VerificationReport:
    """Linear stresses of the antistar decompose over stars (taken in the
    whole complex) of its minimal interior faces; affine dimensions of the
    antistar match its g-numbers."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    tau = tuple(sorted(tau))
    gate.require("face", cx.has_face(tau) and len(tau) >= 1)
    gate.require("dimension d>=4", d >= 4)
    _flag_pl_route(gate, inst)
    gate.require("degree-range", 1 <= i <= d - 1)
    if not gate.ok:
        return _finish("antistar", inst, gate, UNMET, t0=t0)
    anti = cx.antistar(tau)
    p_anti = inst.embedding.restrict(anti.vertices)
    from .complexes import minimal_interior_faces

    mifs = sorted(minimal_interior_faces(anti))
    total = stress_space(anti, p_anti, i, LINEAR)
    parts = []
    for h in mifs:
        star = cx.star(h)
        parts.append(stress_space(star, inst.embedding.restrict(star.vertices), i, LINEAR))
    summed = sum_spaces(total, parts)
    ok = summed.basis == total.basis
    dims = {
        "linear_i_antistar": total.dim,
        "star_sum": summed.dim,
        "interior_faces": len(mifs),
    }
    affine_part = 2 * i <= d and _max_missing(inst) <= d - 2 * i + 1
    gate.checked.append(("affine-part-applicable", affine_part))
    if affine_part:
        for j in range(max(1, len(tau)), i + 1):
            sa = stress_space(anti, p_anti, j, AFFINE)
            gj = g_number(anti, d, j)
            dims[f"affine_{j}_antistar"] = sa.dim
            dims[f"g_{j}_antistar"] = gj
            ok = ok and sa.dim == gj
    witness = None if ok else {"dims": dims}
    return _finish("antistar", inst, gate, PASS if ok else FAIL, dims, witness, t0)


def verify_star_surjection(inst: Instance, i: int, tau) -> VerificationReport:
    """Differentiating by the face monomial of tau maps affine i-stresses onto
    the affine (i - |tau|)-stresses of the star of tau."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    tau = tuple(sorted(tau))
    gate.require("face", cx.has_face(tau) and len(tau) >= 1)
    gate.require("dimension d>=4", d >= 4)
    gate.require("degree-range", len(tau) <= i and 2 * i <= d)
    if inst.embedding is not None and inst.is_polytopal():
        gate.require("polytopal+missing-bound", _max_missing(inst) <= d - 2 * i + 1)
    else:
        _flag_pl_route(gate, inst)
    if not gate.ok:
        return _finish("star-surjection", inst, gate, UNMET, t0=t0)
    sa = _space(inst, i, AFFINE)
    target = _star_space(inst, tau, i - len(tau), AFFINE)
    rows = []
    for row in sa.basis:
        poly = poly_from_vector(row, sa.monomials, sa.degree)
        dmu = derivative(poly, tau)
        if not dmu.is_zero:
            rows.append(dmu.vector(target.monomials))
    red, _ = linalg.rref(rows)
    onto = red == [list(r) for r in target.basis]
    lk = cx.link(tau)
    g_top = g_number(cx, d, i)
    g_link = g_number(lk, d - len(tau), i - len(tau))
    dims = {
        "affine_i": sa.dim, "image": len(red), "star_affine": target.dim,
        "g_i": g_top, "g_link": g_link, "g-inequality": g_top >= g_link,
    }
    ok = onto and g_top >= g_link
    witness = None if ok else {"dims": dims}
    return _finish("star-surjection", inst, gate, PASS if ok else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------

def verify_reconstruction(inst: Instance, i: int, j: int) -> VerificationReport:
    """Order-(i-j) derivatives of affine i-stresses span the affine j-stress
    space; for j = 1 the recovered canonical embedding has exactly the
    original dependence space."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    gate.require("dimension d>=4", d >= 4)
    gate.require("degree-range", 1 <= j < i and 2 * i <= d)
    gate.require("embedding", inst.embedding is not None)
    if gate.ok:
        if i == 2 and j == 1:
            rep = _classify(inst)
            route = inst.is_polytopal() or (
                rep.pseudomanifold == "without-boundary" and rep.normal
                and inst.genericity().ok
            )
            gate.require("polytopal-or-normal-pm-generic", route)
            gate.require("missing-bound", _max_missing(inst) <= d - 3)
        else:
            if inst.is_polytopal():
                gate.require("polytopal+missing-bound",
                             _max_missing(inst) <= d - 2 * i + 1)
            else:
                _flag_pl_route(gate, inst)
    if not gate.ok:
        return _finish("reconstruction", inst, gate, UNMET, t0=t0)
    sa_i = _space(inst, i, AFFINE)
    sa_j = _space(inst, j, AFFINE)
    span = derivative_span(sa_i, i - j, FACE_MONOMIALS)
    ok = span.basis == sa_j.basis
    dims = {"affine_i": sa_i.dim, "affine_j": sa_j.dim, "span": span.dim}
    if ok and j == 1:
        recovered = recover_affine_type(span)
        deps = affine_dependencies(recovered, cx.vertices)
        sa1_rows = [list(r) for r in sa_j.basis]
        ok = [list(r) for r in deps] == sa1_rows
        dims["recovered_dim"] = recovered.dim
        dims["dependence-space-equal"] = ok
    witness = None if ok else {"dims": dims}
    return _finish("reconstruction", inst, gate, PASS if ok else FAIL, dims, witness, t0)


def verify_support(inst: Instance, i: int) -> VerificationReport:
    """Every (i-1)-face participates in some affine i-stress."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    gate.require("degree-range", 2 <= i and 2 * i <= d)
    gate.require("embedding", inst.embedding is not None)
    if gate.ok:
        if inst.is_polytopal():
            gate.require("polytopal+missing-bound",
                         _max_missing(inst) <= d - 2 * i + 1)
        else:
            _flag_pl_route(gate, inst)
    if not gate.ok:
        return _finish("support", inst, gate, UNMET, t0=t0)
    sa = _space(inst, i, AFFINE)
    supported = support_faces(sa)
    all_faces = cx.faces_of_dim(i - 1)
    ok = supported == all_faces
    dims = {"affine_i": sa.dim, "supported": len(supported), "faces": len(all_faces)}
    witness = None
    if not ok:
        witness = {"unsupported": sorted(all_faces - supported)}
    return _finish("support", inst, gate, PASS if ok else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Flag g-vector lower bound
# ---------------------------------------------------------------------------

def _octahedral_isomorphic(cx: SimplicialComplex) -> bool:
    """Decide isomorphism with the cross-polytope boundary via the antipodal
    pairing: each vertex has exactly one non-neighbor and the facets are
    exactly the transversals of the pairing."""
    d = cx.dim + 1
    if len(cx.vertices) != 2 * d:
        return False
    adj = cx.graph_neighbors()
    pairing = {}
    for v in cx.vertices:
        non = [u for u in cx.vertices if u != v and u not in adj[v]]
        if len(non) != 1:
            return False
        pairing[v] = non[0]
    if any(pairing[pairing[v]] != v for v in cx.vertices):
        return False
    pairs = sorted({tuple(sorted((v, pairing[v]))) for v in cx.vertices})
    if len(pairs) != d:
        return False
    expected = {
        tuple(sorted(pick)) for pick in itertools.product(*pairs)
    }
    return set(cx.facets) == expected


def verify_flag_g_bound(inst: Instance) -> VerificationReport:
    """g-numbers of flag PL spheres are bounded below by those of the
    cross-polytope, with equality only for the octahedral sphere."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    gate.require("flag", _flag(inst))
    gate.require("pl-certificate", inst.pl_certificate() is not None)
    gate.require("homology-sphere", _sphere_gf2(inst))
    if not gate.ok:
        return _finish("flag-g-bound", inst, gate, UNMET, t0=t0)
    dims = {}
    equality_at = []
    witness = None
    ok = True
    for i in range(1, d // 2 + 1):
        gi = g_number(cx, d, i)
        bound = comb(d, i) - comb(d, i - 1)
        dims[f"g_{i}"] = gi
        dims[f"bound_{i}"] = bound
        if gi < bound:
            ok = False
            witness = {"violating_i": i, "g_i": gi, "bound": bound}
            break
        if gi == bound:
            equality_at.append(i)
    if ok and equality_at:
        iso = _octahedral_isomorphic(cx)
        dims["equality_at"] = equality_at
        dims["octahedral"] = iso
        if not iso:
            ok = False
            witness = {"equality_at": equality_at, "octahedral": False}
    return _finish("flag-g-bound", inst, gate, PASS if ok else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Sign-vector stress construction
# ---------------------------------------------------------------------------

def _lp_affine1_signed(cx: SimplicialComplex, space_rows, monomials, positive,
                       nonpositive):
    """Feasible lambda in the degree-1 row space with weight >= 1 on
    ``positive`` and <= 0 on ``nonpositive``; None when infeasible."""
    idx = {m[0]: c for c, m in enumerate(monomials)}
    nbasis = len(space_rows)
    if nbasis == 0:
        return None
    a_rows, b = [], []
    for v in positive:
        a_rows.append([row[idx[v]] for row in space_rows])
        b.append(Fraction(1))
    for v in nonpositive:
        a_rows.append([-row[idx[v]] for row in space_rows])
        b.append(Fraction(0))
    y = lp.feasible_point(a_rows, b)
    if y is None:
        return None
    vec = [
        sum(y[t] * space_rows[t][c] for t in range(nbasis))
        for c in range(len(monomials))
    ]
    return vec


def _positive_stress_core(inst: Instance, m_face, f_sub, i: int):
    """LP + cone-lift + surjection preimage; returns (poly, info) or raises
    ValueError with the failing stage."""
    cx, p = inst.complex, inst.embedding
    m_face = tuple(sorted(m_face))
    f_sub = tuple(sorted(f_sub))
    info = {}
    if i == 1:
        sa1 = _space(inst, 1, AFFINE)
        inside = list(m_face)
        outside = [v for v in cx.vertices if v not in m_face]
        vec = _lp_affine1_signed(cx, [list(r) for r in sa1.basis], sa1.monomials,
                                 inside, outside)
        if vec is None:
            raise ValueError("LP infeasible on the full complex")
        return poly_from_vector(vec, sa1.monomials, 1), info
    chain = quotient_embedding(cx, p, f_sub)
    quotient, q = chain.complex, chain.embedding
    m_prime = [v for v in m_face if v not in f_sub]
    sa1 = stress_space(quotient, q, 1, AFFINE)
    outside = [v for v in quotient.vertices if v not in m_prime]
    vec = _lp_affine1_signed(quotient, [list(r) for r in sa1.basis],
                             sa1.monomials, m_prime, outside)
    if vec is None:
        raise ValueError("LP infeasible on the quotient")
    lam = poly_from_vector(vec, sa1.monomials, 1)
    info["lp_weights"] = {m[0]: str(v) for m, v in zip(sa1.monomials, vec) if v}
    for step in reversed(chain.steps):
        lam = cone_lift(lam, step, 1)
    # preimage under differentiation by the face monomial of f_sub
    sa_i = _space(inst, i, AFFINE)
    star = cx.star(f_sub)
    target = monomial_basis(star, 1)
    idx = {m: c for c, m in enumerate(target)}
    rows = []
    for row in sa_i.basis:
        poly = poly_from_vector(row, sa_i.monomials, i)
        dmu = derivative(poly, f_sub)
        vec_t = [Fraction(0)] * len(target)
        for mm, c in dmu.coeffs.items():
            vec_t[idx[mm]] = c
        rows.append(vec_t)
    rhs = [Fraction(0)] * len(target)
    for mm, c in lam.coeffs.items():
        rhs[idx[mm]] = c
    aug = [list(r) + [val] for r, val in zip(_transpose(rows), rhs)]
    red, piv = linalg.rref(aug)
    if len(rows) in piv:
        raise ValueError("surjection preimage solve inconsistent")
    y = [Fraction(0)] * len(rows)
    for t, c in enumerate(piv):
        y[c] = red[t][len(rows)]
    out = {}
    for yt, row in zip(y, sa_i.basis):
        if yt:
            for mm, c in zip(sa_i.monomials, row):
                if c:
                    out[mm] = out.get(mm, Fraction(0)) + yt * c
    return StressPoly(degree=i, coeffs=out), info


def _transpose(rows):
    if not rows:
        return []
    return [[row[c] for row in rows] for c in range(len(rows[0]))]


def positive_stress_on_missing_face(inst: Instance, m_face, f_sub, i: int):
    """Construct an affine i-stress positive exactly on the faces F u v with
    v in M minus F, and nonpositive on the other F u v.

    Returns (StressPoly or None, VerificationReport).
    """
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    m_face = tuple(sorted(m_face))
    f_sub = tuple(sorted(f_sub))
    gate.require("polytopal", inst.embedding is not None and inst.is_polytopal())
    gate.require("missing-face", m_face in missing_faces(cx))
    gate.require("size-bound", len(m_face) >= i + 1)
    gate.require("subset", set(f_sub) <= set(m_face) and len(f_sub) == i - 1)
    gate.require("missing-dim-bound", _max_missing(inst) <= d - 2 * i + 1)
    gate.require("dimension d>=2i", d >= 2 * i)
    if not gate.ok:
        return None, _finish("sign-stress", inst, gate, UNMET, t0=t0)
    try:
        lam, info = _positive_stress_core(inst, m_face, f_sub, i)
    except ValueError as e:
        return None, _finish("sign-stress", inst, gate, FAIL,
                             {"stage": str(e)}, {"error": str(e)}, t0)
    ok = is_stress(cx, inst.embedding, lam, AFFINE)
    signs = {}
    for v in cx.link(f_sub).vertices if f_sub else cx.vertices:
        g = tuple(sorted(f_sub + (v,)))
        if not cx.has_face(g):
            continue
        w = lam.weight(g)
        signs[g] = "+" if w > 0 else "-" if w < 0 else "0"
        if v in m_face and v not in f_sub:
            ok = ok and w > 0
        else:
            ok = ok and w <= 0
    dims = {"checked_faces": len(signs)}
    witness = None if ok else {"signs": {" ".join(k): v for k, v in signs.items()}}
    report = _finish("sign-stress", inst, gate, PASS if ok else FAIL, dims, witness, t0)
    return (lam if ok else lam), report


# ---------------------------------------------------------------------------
# k-stacked spheres
# ---------------------------------------------------------------------------

def verify_kstacked(inst: Instance, k: int, i: int) -> VerificationReport:
    """The canonical stacked ball carries the affine stresses of its boundary
    as linear stresses, and affine i-stresses determine the affine 1-stresses."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx, p = inst.complex, inst.embedding
    d = _dim_d(inst)
    gate.require("degree-range", 1 <= i <= k and 2 * (k + 1) <= d)
    gate.require("embedding", p is not None)
    gate.require("missing-bound", _max_missing(inst) <= d - i)
    gate.require("homology-sphere", _sphere_q(inst))
    if not gate.ok:
        return _finish("kstacked", inst, gate, UNMET, t0=t0)
    ball = murai_nevo_ball(cx, k)
    facets_ok = ball.is_pure and ball.dim == d and all(
        affine_rank([p.coords[v] for v in f]) == len(f) for f in ball.facets
    )
    gate.require("ball-facets-affinely-independent", facets_ok)
    if not gate.ok:
        return _finish("kstacked", inst, gate, UNMET, t0=t0)
    from .embeddings import Embedding

    p_lift = Embedding(d + 1, {v: tuple(p.coords[v]) + (Fraction(1),) for v in cx.vertices})
    dims = {}
    ok = True
    # identity between affine stresses of the sphere and linear stresses of
    # the ball, at degrees 1 and i
    for j in (1, i) if i != 1 else (1,):
        sa = _space(inst, j, AFFINE)
        sl = stress_space(ball, p_lift, j, LINEAR)
        same_basis = sa.monomials == sl.monomials
        eq = same_basis and sa.basis == sl.basis
        dims[f"affine_{j}_sphere"] = sa.dim
        dims[f"linear_{j}_ball"] = sl.dim
        dims[f"identity_{j}"] = eq
        ok = ok and eq
    sa_i = _space(inst, i, AFFINE)
    sa_1 = _space(inst, 1, AFFINE)
    span = derivative_span(sa_i, i - 1, FACE_MONOMIALS)
    dims["span_to_1"] = span.dim
    dims["affine_1"] = sa_1.dim
    recon = span.basis == sa_1.basis
    dims["reconstructs_1"] = recon
    ok = ok and recon
    g_next = g_number(cx, d, k + 1)
    bd = boundary_of(ball)
    dims["g_k+1"] = g_next
    dims["boundary-equals-sphere"] = bd == cx
    dims["ball-homology"] = is_homology_ball(ball, "Q")
    ok = ok and g_next == 0 and bd == cx
    witness = None if ok else {"dims": dims}
    return _finish("kstacked", inst, gate, PASS if ok else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Framework rigidity
# ---------------------------------------------------------------------------

def verify_rigidity(inst: Instance) -> VerificationReport:
    """Infinitesimal rigidity of the 1-skeleton framework: the affine 2-stress
    dimension equals f_1 - d f_0 + C(d+1, 2)."""
    t0 = time.perf_counter()
    gate = _Gate()
    cx, p = inst.complex, inst.embedding
    gate.require("embedding", p is not None)
    if gate.ok:
        d = p.dim
        gate.require("affinely-spanning",
                     affine_rank([p.coords[v] for v in cx.vertices]) == d + 1)
    if not gate.ok:
        return _finish("rigidity", inst, gate, UNMET, t0=t0)
    graph = cx.skeleton(1) if cx.dim > 1 else cx
    sa2 = stress_space(graph, p.restrict(graph.vertices), 2, AFFINE)
    d = p.dim
    f0 = len(graph.vertices)
    f1 = graph.num_faces(1)
    g2 = f1 - d * f0 + comb(d + 1, 2)
    rigid = sa2.dim == g2
    dims = {"affine_2": sa2.dim, "g2": g2, "rigid": rigid}
    witness = None if rigid else {"dims": dims, "flexible": True}
    return _finish("rigidity", inst, gate, PASS if rigid else FAIL, dims, witness, t0)


# ---------------------------------------------------------------------------
# Conjecture probes (never asserted)
# ---------------------------------------------------------------------------

def probe_conjecture(conj_id: str, inst: Instance, **params) -> VerificationReport:
    t0 = time.perf_counter()
    gate = _Gate()
    cx = inst.complex
    d = _dim_d(inst)
    i = params.get("i")
    j = params.get("j", 1)
    dims = {}
    witness = None

    if conj_id in ("conj-1.2", "conj-1.3"):
        gate.require("degree-range", 2 <= i <= d // 2 and 1 <= j < i)
        gate.require("polytopal", inst.embedding is not None and inst.is_polytopal())
        gate.require("missing-bound", _max_missing(inst) <= d - i)
        if not gate.ok:
            return _finish(conj_id, inst, gate, UNMET, t0=t0)
        sa_i = _space(inst, i, AFFINE)
        sa_j = _space(inst, j, AFFINE)
        span = derivative_span(sa_i, i - j, FACE_MONOMIALS)
        dims = {"affine_i": sa_i.dim, "affine_j": sa_j.dim, "span": span.dim}
        holds = span.basis == sa_j.basis
        if not holds:
            witness = {"dims": dims}
    elif conj_id == "conj-3.3":
        gate.require("degree-range", 2 <= i <= d // 2)
        _generic_route(gate, inst)
        gate.require("missing-bound", _max_missing(inst) <= d - i)
        if not gate.ok:
            return _finish(conj_id, inst, gate, UNMET, t0=t0)
        sa = _space(inst, i, AFFINE)
        supported = support_faces(sa)
        every = cx.faces_of_dim(i - 1)
        dims = {"supported": len(supported), "faces": len(every), "affine_i": sa.dim}
        holds = supported == every
        if not holds:
            witness = {"unsupported": sorted(every - supported)}
    elif conj_id == "conj-3.7":
        gate.require("degree-range", 1 <= j < i <= d // 2)
        _generic_route(gate, inst)
        gate.require("missing-bound", _max_missing(inst) <= d - i)
        if not gate.ok:
            return _finish(conj_id, inst, gate, UNMET, t0=t0)
        sa_i = _space(inst, i, AFFINE)
        sa_j = _space(inst, j, AFFINE)
        span_all = derivative_span(sa_i, i - j, ALL_MONOMIALS)
        span_face = derivative_span(sa_i, i - j, FACE_MONOMIALS)
        dims = {
            "affine_i": sa_i.dim, "affine_j": sa_j.dim,
            "span_all": span_all.dim, "span_face": span_face.dim,
            "modes_agree": span_all.basis == span_face.basis,
        }
        holds = span_all.basis == sa_j.basis
        if not holds:
            witness = {"dims": dims}
    elif conj_id == "conj-4.4":
        gate.require("degree-range", 2 <= i and 2 * i <= d - 1)
        _generic_route(gate, inst)
        if not gate.ok:
            return _finish(conj_id, inst, gate, UNMET, t0=t0)
        total = _space(inst, i, AFFINE)
        holds, dim_sum = _star_sum_equals(
            inst, total, [(v,) for v in cx.vertices], AFFINE
        )
        dims = {"affine_i": total.dim, "vertex_star_sum": dim_sum}
        if not holds:
            witness = {"dims": dims}
    elif conj_id == "conj-1.1":
        gate.require("degree-range", 2 <= i <= d // 2 and d >= 4)
        gate.require("polytopal", inst.embedding is not None and inst.is_polytopal())
        if not gate.ok:
            return _finish(conj_id, inst, gate, UNMET, t0=t0)
        holds = True
        attempted = 0
        failures = []
        for m_face in sorted(missing_faces(cx)):
            if len(m_face) < i + 1:
                continue
            for f_sub in itertools.combinations(m_face, i - 1):
                attempted += 1
                try:
                    lam, _info = _positive_stress_core(inst, m_face, f_sub, i)
                    good = is_stress(cx, inst.embedding, lam, AFFINE)
                    for v in cx.link(tuple(sorted(f_sub))).vertices:
                        g = tuple(sorted(f_sub + (v,)))
                        if not cx.has_face(g):
                            continue
                        w = lam.weight(g)
                        if v in m_face:
                            good = good and w > 0
                        else:
                            good = good and w <= 0
                    if not good:
                        failures.append({"missing": m_face, "subset": f_sub})
                except ValueError as e:
                    failures.append({"missing": m_face, "subset": f_sub, "error": str(e)})
        dims = {"sign_certificates": attempted, "failures": len(failures)}
        holds = not failures
        if not holds:
            witness = {"failures": failures[:5]}
    else:
        raise ValueError(f"unknown conjecture id {conj_id!r}")

    return _finish(conj_id, inst, gate, PROBE_HOLDS if holds else PROBE_FAILS,
                   dims, witness, t0)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

CHECKS = {
    "lefschetz": lambda inst, **kw: verify_lefschetz(inst, kw["i"]),
    "pou-affine1": lambda inst, **kw: verify_pou_affine1(inst),
    "pou-linear": lambda inst, **kw: verify_pou_linear(
        inst, kw["i"], kw.get("k", 1), kw.get("j")),
    "pou-linear-join": lambda inst, **kw: verify_pou_linear_join(
        inst, kw["simplex_vertices"], kw["i"], kw.get("t", 1), kw.get("j")),
    "pou-affine-higher": lambda inst, **kw: verify_pou_affine_higher(inst, kw["i"]),
    "antistar": lambda inst, **kw: verify_antistar(inst, kw["tau"], kw["i"]),
    "star-surjection": lambda inst, **kw: verify_star_surjection(inst, kw["i"], kw["tau"]),
    "reconstruction": lambda inst, **kw: verify_reconstruction(inst, kw["i"], kw["j"]),
    "support": lambda inst, **kw: verify_support(inst, kw["i"]),
    "flag-g-bound": lambda inst, **kw: verify_flag_g_bound(inst),
    "sign-stress": lambda inst, **kw: positive_stress_on_missing_face(
        inst, kw["missing"], kw.get("subset", ()), kw["i"])[1],
    "kstacked": lambda inst, **kw: verify_kstacked(inst, kw["k"], kw["i"]),
    "rigidity": lambda inst, **kw: verify_rigidity(inst),
}

PROBES = ("conj-1.1", "conj-1.2", "conj-1.3", "conj-3.3", "conj-3.7", "conj-4.4")


def run_check(check_id: str, inst: Instance, **params) -> VerificationReport:
    if check_id in CHECKS:
        return CHECKS[check_id](inst, **params)
    if check_id in PROBES:
        return probe_conjecture(check_id, inst, **params)
    raise KeyError(f"unknown check id {check_id!r}")
