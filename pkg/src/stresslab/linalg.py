"""Exact rational linear algebra: canonical nullspace bases, ranks, RREF.

Everything here is exact.  Small systems are solved directly with
``fractions.Fraction`` Gaussian elimination.  Large integer systems go through
a certified modular path: a single-prime echelon (numpy, dense) finds the
candidate pivot structure, Dixon p-adic lifting recovers exact rational
kernel vectors, and the result is verified unconditionally -- every returned
vector is checked against every input row over Q, and the count is matched
against a mod-p rank bound.  A bad prime can only cause a retry, never a
wrong answer.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

# Primes sit below 2**29 so that products of two residues, and residue-limb
# matvecs over <= 2**12 rows, stay inside int64.
_PRIME_CEILING = 2 ** 29
_MAX_ENTRY_BITS = 34
_MAX_LIFT_DIM = 4096


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:  # deterministic Miller-Rabin for n < 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_stream():
    n = _PRIME_CEILING - 1
    while True:
        if _is_prime(n):
            yield n
        n -= 2


PRIMES = tuple(itertools.islice(_prime_stream(), 48))

# Below this many columns the direct Fraction path wins on overhead.
_SMALL_COLS = 96


class LinAlgError(Exception):
    pass


def clear_denominators(rows):
    """Scale each row by the lcm of its denominators.  Kernel is unchanged."""
    out = []
    for row in rows:
        lcm = 1
        for v in row.values():
            if isinstance(v, Fraction):
                d = v.denominator
                lcm = lcm // gcd(lcm, d) * d
        cleaned = {}
        for c, v in row.items():
            iv = int(v * lcm) if isinstance(v, Fraction) else int(v) * lcm
            if iv:
                cleaned[c] = iv
        if cleaned:
            out.append(cleaned)
    return out


# ---------------------------------------------------------------------------
# Dense Fraction RREF (small kernels and all subspace algebra)
# ---------------------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form of dense Fraction rows.

    Returns (reduced_rows, pivot_columns); zero rows are dropped.  Pivots are
    leftmost-first-nonzero, so the result is the canonical RREF of the row
    space.
    """
    mat = [list(map(Fraction, r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        prow = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], prow)]
        piv_cols.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], piv_cols


def _kernel_from_rref(red, piv_cols, ncols):
    piv_set = set(piv_cols)
    free = [c for c in range(ncols) if c not in piv_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(piv_cols):
            vec[c] = -red[i][f]
        basis.append(vec)
    red2, _ = rref(basis)
    return red2


def _kernel_small(rows, ncols):
    dense = []
    for row in rows:
        vec = [Fraction(0)] * ncols
        for c, v in row.items():
            vec[c] = Fraction(v)
        dense.append(vec)
    red, piv = rref(dense)
    return _kernel_from_rref(red, piv, ncols)


# ---------------------------------------------------------------------------
# Modular path
# ---------------------------------------------------------------------------

def _modp_echelon(mat, p):
    """Forward elimination mod p with unit pivots.

    Destroys ``mat``.  Returns (U, pivot_cols, pivot_row_origin) where
    ``pivot_row_origin[i]`` is the original index of the i-th pivot row.
    """
    nrows, ncols = mat.shape
    origin = np.arange(nrows)
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(mat[r:, c])[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            mat[[r, pr]] = mat[[pr, r]]
            origin[[r, pr]] = origin[[pr, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r, c:] = (mat[r, c:] * inv) % p
        below = mat[r + 1:, c]
        nzb = np.nonzero(below)[0]
        if len(nzb):
            mat[r + 1 + nzb, c:] = (
                mat[r + 1 + nzb, c:] - np.outer(below[nzb], mat[r, c:])
            ) % p
        piv_cols.append(c)
        r += 1
    return mat[:r], piv_cols, origin[:r]


def _split_matvec(A, x, p):
    """(A @ x) % p with x in [0, p), safe against int64 overflow."""
    lo = x & 0x7FFF
    hi = x >> 15
    return ((A @ lo) % p + (((A @ hi) % p) << 15)) % p


def _modp_kernel(U, piv_cols, ncols, p):
    """Kernel basis mod p (rows) from an echelon factor with unit pivots."""
    piv_set = set(piv_cols)
    free = [c for c in range(ncols) if c not in piv_set]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    for j, f in enumerate(free):
        K[j, f] = 1
    for i in range(len(piv_cols) - 1, -1, -1):
        c = piv_cols[i]
        row = U[i]
        nz = np.nonzero(row)[0]
        nz = nz[nz != c]
        if len(nz):
            K[:, c] = (-_split_matvec(K[:, nz], row[nz], p)) % p
    return K, free


def _modp_rref_small(mat, p):
    """Full RREF of a small dense mod-p matrix; returns (reduced, piv_cols)."""
    mat = mat % p
    nrows, ncols = mat.shape
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(mat[r:, c])[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            mat[[r, pr]] = mat[[pr, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r] = (mat[r] * inv) % p
        for i in np.nonzero(mat[:, c])[0]:
            if i != r:
                mat[i] = (mat[i] - mat[i, c] * mat[r]) % p
        piv_cols.append(c)
        r += 1
    return mat[:r], piv_cols


def _rational_reconstruct(a, m):
    """Find n/d == a (mod m) with |n|, d <= sqrt(m/2), or None."""
    a %= m
    if a == 0:
        return Fraction(0)
    bound = isqrt((m - 1) // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    n, d = r1, s1
    if d < 0:
        n, d = -n, -d
    if d == 0 or d > bound or gcd(n, d) != 1:
        return None
    if (n - a * d) % m != 0:
        return None
    return Fraction(n, d)


class _DixonSolver:
    """Exact solver for B x = c with B integer and invertible mod p."""

    def __init__(self, B_int, p):
        if B_int.shape[0] > _MAX_LIFT_DIM:
            raise LinAlgError("system too large for the lifting path")
        maxabs = int(np.max(np.abs(B_int))) if B_int.size else 0
        if maxabs.bit_length() > _MAX_ENTRY_BITS:
            raise LinAlgError("matrix entries too large for the lifting path")
        self.p = p
        self.n = B_int.shape[0]
        self.B = B_int
        self.Binv = self._invert_modp(B_int % p, p)

    @staticmethod
    def _invert_modp(mat, p):
        n = mat.shape[0]
        aug = np.concatenate([mat % p, np.eye(n, dtype=np.int64)], axis=1)
        for c in range(n):
            nz = np.nonzero(aug[c:, c])[0]
            if len(nz) == 0:
                raise LinAlgError("singular mod p")
            pr = c + int(nz[0])
            if pr != c:
                aug[[c, pr]] = aug[[pr, c]]
            inv = pow(int(aug[c, c]), p - 2, p)
            aug[c] = (aug[c] * inv) % p
            col = aug[:, c].copy()
            col[c] = 0
            nzc = np.nonzero(col)[0]
            if len(nzc):
                aug[nzc] = (aug[nzc] - np.outer(col[nzc], aug[c])) % p
        return aug[:, n:]

    def solve(self, c_ints, max_iters=8192):
        """Exact rational solution of B x = c via p-adic lifting."""
        p = self.p
        n = self.n
        maxb = int(np.max(np.abs(self.B))) if self.B.size else 0
        # residual updates stay inside int64 when n * max|B| * p * 2^16 < 2^63
        fast = n * max(maxb, 1) <= (1 << 33)
        resid = np.array([int(v) for v in c_ints],
                         dtype=np.int64 if fast else object)
        acc = [0] * n  # p-adic accumulators, updated incrementally
        m_pow = 1
        checkpoint = 8
        for it in range(1, max_iters + 1):
            if fast:
                rp = resid % p
            else:
                rp = np.array([int(v) % p for v in resid], dtype=np.int64)
            x = _split_matvec(self.Binv, rp, p)
            for i in range(n):
                xi = int(x[i])
                if xi:
                    acc[i] += m_pow * xi
            m_pow *= p
            lo = x & 0xFFFF
            hi = x >> 16
            t_lo = self.B @ lo
            t_hi = self.B @ hi
            if fast:
                resid = (resid - t_lo - (t_hi << 16)) // p
                done = not resid.any()
            else:
                resid = np.array(
                    [(int(r) - int(a) - (int(b) << 16)) // p
                     for r, a, b in zip(resid, t_lo, t_hi)],
                    dtype=object,
                )
                done = not any(resid)
            if done or it >= checkpoint:
                sol = self._try_reconstruct(acc, m_pow)
                if sol is not None:
                    return sol
                checkpoint = max(it + 8, (it * 3) // 2)
        raise LinAlgError("p-adic lifting did not converge")

    def _try_reconstruct(self, acc, m):
        """Rational reconstruction with a shared running denominator; a few
        probe entries fail fast.  Wrong accepts are impossible: the caller
        verifies the result exactly."""
        n = self.n
        margin = m >> 32  # accept scaled-integer lifts only with 32 slack bits
        half = m >> 1
        den = 1
        out = [None] * n
        probes = sorted({0, n // 2, n - 1})
        for stage in (probes, range(n)):
            for i in stage:
                if out[i] is not None:
                    continue
                v = acc[i] * den % m
                if v > half:
                    v -= m
                if abs(v) <= margin:
                    out[i] = Fraction(v, den)
                    continue
                q = _rational_reconstruct(acc[i], m)
                if q is None:
                    return None
                out[i] = q
                if q.denominator > 1:
                    den = den * q.denominator // gcd(den, q.denominator)
        return out


def _verify_kernel_rows(rows, vectors):
    for row in rows:
        for vec in vectors:
            s = Fraction(0)
            for c, a in row.items():
                if vec[c]:
                    s += a * vec[c]
            if s:
                return False
    return True


def _kernel_modular(rows, ncols):
    maxabs = max(abs(v) for row in rows for v in row.values())
    if maxabs.bit_length() > _MAX_ENTRY_BITS:
        raise LinAlgError("entries too large for the modular path")
    dense0 = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for c, v in row.items():
            dense0[i, c] = v
    for p in PRIMES:
        U, piv_cols, _ = _modp_echelon(dense0 % p, p)
        rank_p = len(piv_cols)
        nullity = ncols - rank_p
        if nullity == 0:
            return [], rank_p
        K, _ = _modp_kernel(U, piv_cols, ncols, p)
        _, lead = _modp_rref_small(K, p)
        if len(lead) != nullity:
            continue  # bad prime
        lead_set = set(lead)
        keep = [c for c in range(ncols) if c not in lead_set]
        sub = dense0[:, keep] % p
        _, piv2, origin2 = _modp_echelon(sub, p)
        if len(piv2) != len(keep):
            continue  # bad prime: restriction must have full column rank
        B = dense0[origin2][:, keep]
        try:
            solver = _DixonSolver(B, p)
            vectors = []
            for lc in lead:
                c_vec = [-int(v) for v in dense0[origin2][:, lc]]
                x = solver.solve(c_vec)
                vec = [Fraction(0)] * ncols
                vec[lc] = Fraction(1)
                for pos, col in enumerate(keep):
                    vec[col] = x[pos]
                vectors.append(vec)
        except LinAlgError:
            continue
        ok = True
        for i, vec in enumerate(vectors):  # RREF structure over Q
            if any(vec[c] for c in range(lead[i])) or vec[lead[i]] != 1:
                ok = False
                break
        if ok and _verify_kernel_rows(rows, vectors):
            # nullity exact kernel vectors bound rank from above; rank_p
            # bounds it from below.  Certified.
            return vectors, rank_p
    raise LinAlgError("all primes exhausted without a verified kernel")


def kernel(rows, ncols):
    """Canonical RREF basis of {x : M x = 0}.

    ``rows`` is a sparse matrix given as dicts col -> int/Fraction.  The
    result is exact; the column order defines the canonical form.
    """
    rows = clear_denominators(rows)
    if ncols == 0:
        return []
    if not rows:
        return [
            [Fraction(1) if j == i else Fraction(0) for j in range(ncols)]
            for i in range(ncols)
        ]
    if ncols <= _SMALL_COLS:
        return _kernel_small(rows, ncols)
    try:
        vectors, _ = _kernel_modular(rows, ncols)
        return vectors
    except LinAlgError:
        return _kernel_small(rows, ncols)


def rank(rows, ncols):
    """Exact rank over Q."""
    rows = clear_denominators(rows)
    if ncols == 0 or not rows:
        return 0
    return ncols - len(kernel(rows, ncols))


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------

def gf2_rank(rows):
    """Rank over GF(2); rows are iterables of column indices or bitmasks."""
    basis = {}
    r = 0
    for row in rows:
        if isinstance(row, int):
            m = row
        else:
            m = 0
            for c in row:
                m ^= 1 << c
        while m:
            t = m.bit_length() - 1
            if t in basis:
                m ^= basis[t]
            else:
                basis[t] = m
                r += 1
                break
    return r


# ---------------------------------------------------------------------------
# Subspace algebra over Q
# ---------------------------------------------------------------------------

def row_space_canonical(rows):
    red, _ = rref(rows)
    return red


def same_row_space(rows_a, rows_b):
    return row_space_canonical(rows_a) == row_space_canonical(rows_b)


def row_space_contains(rows, vec):
    """True iff ``vec`` lies in the row space spanned by ``rows``."""
    red, piv = rref(rows)
    v = list(map(Fraction, vec))
    for i, c in enumerate(piv):
        if v[c]:
            f = v[c]
            v = [a - f * b for a, b in zip(v, red[i])]
    return not any(v)


def intersect_row_spaces(rows_a, rows_b):
    """Zassenhaus: canonical basis of the intersection of two row spaces."""
    if not rows_a or not rows_b:
        return []
    n = len(rows_a[0])
    stacked = [list(r) + list(r) for r in rows_a]
    stacked += [list(r) + [Fraction(0)] * n for r in rows_b]
    red, _ = rref(stacked)
    out = [r[n:] for r in red if not any(r[:n])]
    return row_space_canonical(out)
