"""Symmetric maps, annihilator subspaces, and rank-locus checks.

The heart of this module is the family W-perp = {M symmetric : M W = 0} for a
subspace W of the g-dimensional fiber.  For codim(W) = c its dimension is
c(c+1)/2, and evaluation e_v : M -> M v maps W-perp into the annihilator of
W, a space of dimension c.  So on W-perp every e_v has rank at most c: these
spaces can never contain an i-plane on which some e_v is injective once
i > c.  The converse (only the W-perp spaces are degenerate in this way) is
probed by randomized polynomial identity testing.

Everything here offers an exact path over the rationals: ranks of matrices
with Fraction entries are computed by exact elimination, so a reported
witness is a proof and a reported absence is wrong with probability bounded
by Schwartz-Zippel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BadDimension,
    DimensionMismatch,
    InputNotRankOne,
    NotIndependent,
    NotSymmetric,
    RankMismatch,
)
from .linalg import (
    LinSubspace,
    SymMap,
    as_sym_array,
    rank_with_kernel,
    sym_basis,
    sym_dim,
    sym_index_pairs,
)
from .report import VerificationReport, passing
from .sampling import derive_rng

V_SAMPLE_BOUND = 1000  # integer box for polynomial identity testing


# ---------------------------------------------------------------------------
# Exact linear algebra over Fraction entries.
# ---------------------------------------------------------------------------


def frac_matrix(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def frac_rref(mat):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def frac_rank(mat) -> int:
    return len(frac_rref(mat)[1])


def frac_nullspace(mat, ncols: int) -> list[list[Fraction]]:
    """Exact basis of the kernel, one vector per free column."""
    if not mat:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    rows, pivots = frac_rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def frac_det(mat) -> Fraction:
    rows = [list(r) for r in mat]
    m = len(rows)
    det = Fraction(1)
    for c in range(m):
        pivot = next((i for i in range(c, m) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, m):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def frac_independent_rows(mat) -> list[int]:
    """Indices of a maximal linearly independent subset of rows, greedily."""
    chosen = []
    reduced: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(mat):
        work = list(row)
        for rrow, p in zip(reduced, pivots):
            if work[p] != 0:
                f = work[p]
                work = [a - f * b for a, b in zip(work, rrow)]
        p = next((c for c, x in enumerate(work) if x != 0), None)
        if p is None:
            continue
        inv = 1 / work[p]
        work = [x * inv for x in work]
        reduced.append(work)
        pivots.append(p)
        chosen.append(idx)
    return chosen


# ---------------------------------------------------------------------------
# Rational symmetric maps.
# ---------------------------------------------------------------------------


class RationalSymMap:
    """Symmetric matrix with Fraction entries; symmetry is exact by construction."""

    __slots__ = ("rows", "g")

    def __init__(self, rows):
        rows = [[Fraction(x) for x in r] for r in rows]
        g = len(rows)
        if any(len(r) != g for r in rows):
            raise DimensionMismatch("rational symmetric map must be square")
        for i in range(g):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise NotSymmetric(
                        f"entries ({i},{j}) and ({j},{i}) differ: "
                        f"{rows[i][j]} vs {rows[j][i]}"
                    )
        self.rows = tuple(tuple(r) for r in rows)
        self.g = g

    def apply(self, v) -> list[Fraction]:
        return [sum((self.rows[r][c] * v[c] for c in range(self.g)), Fraction(0))
                for r in range(self.g)]

    def flatten(self) -> list[Fraction]:
        # plain upper-triangle entries; for the sqrt(2)-weighted coordinates
        # used by LinSubspace("Sg") go through sym_to_vec on as_float()
        return [self.rows[a][b] for (a, b) in sym_index_pairs(self.g)]

    def scale(self, c) -> "RationalSymMap":
        c = Fraction(c)
        return RationalSymMap([[x * c for x in r] for r in self.rows])

    def add(self, other: "RationalSymMap") -> "RationalSymMap":
        return RationalSymMap(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.rows], dtype=complex)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)


def rational_from_vec(vec, g: int) -> RationalSymMap:
    out = [[Fraction(0)] * g for _ in range(g)]
    for x, (a, b) in zip(vec, sym_index_pairs(g)):
        out[a][b] = Fraction(x)
        out[b][a] = Fraction(x)
    return RationalSymMap(out)


def random_rational_vector(g: int, rng, bound: int = V_SAMPLE_BOUND) -> list[Fraction]:
    while True:
        v = [Fraction(int(x)) for x in rng.integers(-bound, bound + 1, size=g)]
        if any(x != 0 for x in v):
            return v


def random_rational_symmap(g: int, rng, bound: int = 9) -> RationalSymMap:
    vals = rng.integers(-bound, bound + 1, size=sym_dim(g))
    return rational_from_vec([Fraction(int(x)) for x in vals], g)


# ---------------------------------------------------------------------------
# Annihilator subspaces.
# ---------------------------------------------------------------------------


def wperp(w: LinSubspace) -> LinSubspace:
    """{M symmetric : M W = 0} in flattened coordinates; dim = c(c+1)/2."""
    if w.ambient_tag != "V":
        raise DimensionMismatch(f"expected a fiber subspace, got tag {w.ambient_tag!r}")
    g = w.ambient_dim
    n = sym_dim(g)
    basis = sym_basis(g)
    if w.dim == 0:
        return LinSubspace(np.eye(n, dtype=complex), "Sg")
    # constraint rows: (E_alpha w_j)_r as a (dim W * g) x n system
    cols = np.einsum("agh,jh->jga", basis, w.basis).reshape(w.dim * g, n)
    _, kernel, _ = rank_with_kernel(cols, tol=1e-12)
    c = g - w.dim
    expected = c * (c + 1) // 2
    if kernel.dim != expected:
        raise RankMismatch(
            f"annihilator dimension {kernel.dim}, expected {expected}"
        )
    return LinSubspace(kernel.basis, "Sg")


def wperp_exact(w_rows: list[list[Fraction]], g: int) -> list[RationalSymMap]:
    """Exact rational basis of {M : M w = 0 for the given spanning rows}."""
    n = sym_dim(g)
    pairs = sym_index_pairs(g)
    col_of = {}
    for i, (a, b) in enumerate(pairs):
        col_of[(a, b)] = i
        col_of[(b, a)] = i
    eqs = []
    for w in w_rows:
        for r in range(g):
            row = [Fraction(0)] * n
            for c in range(g):
                row[col_of[(r, c)]] += w[c]
            eqs.append(row)
    null = frac_nullspace(eqs, n)
    c = g - frac_rank(w_rows)
    expected = c * (c + 1) // 2
    if len(null) != expected:
        raise RankMismatch(f"annihilator dimension {len(null)}, expected {expected}")
    return [rational_from_vec(v, g) for v in null]


@dataclass(frozen=True)
class EvalOperator:
    """Evaluation of a basis of symmetric maps on one fiber vector."""

    x_basis: tuple
    v: np.ndarray
    matrix: np.ndarray

    @classmethod
    def build(cls, x_basis, v) -> "EvalOperator":
        mats = [as_sym_array(x) for x in x_basis]
        v = np.asarray(v, dtype=complex).reshape(-1)
        if any(m.shape[0] != v.shape[0] for m in mats):
            raise DimensionMismatch("basis maps and vector disagree in dimension")
        rows = np.array([m @ v for m in mats], dtype=complex)
        return cls(tuple(SymMap(m) for m in mats), v, rows)


def eval_matrix_exact(basis: list[RationalSymMap], v: list[Fraction]):
    return [m.apply(v) for m in basis]


def rational_span_to_subspace(basis: list[RationalSymMap]) -> LinSubspace:
    """Float subspace (isometric flattened coordinates) spanned by exact maps."""
    from .linalg import sym_to_vec

    rows = np.array([sym_to_vec(m.as_float()) for m in basis], dtype=complex)
    return LinSubspace.from_spanning(rows, "Sg")


# ---------------------------------------------------------------------------
# Degeneracy of evaluation on a subspace of symmetric maps.
# ---------------------------------------------------------------------------


@dataclass
class DegeneracyWitness:
    v: object                 # fiber vector (ndarray or list of Fraction)
    basis_indices: list[int]  # rows of e_v that are independent
    rank: int


@dataclass
class DegeneracyReport:
    """Outcome of searching for a vector v with rank(e_v) >= i on a subspace."""

    satisfied: bool           # True when no witness was found
    witness: DegeneracyWitness | None
    i: int
    dim: int
    n_samples: int
    exact: bool
    notes: str


def _float_basis(x) -> list[np.ndarray]:
    from .linalg import vec_to_sym

    if isinstance(x, LinSubspace):
        if x.ambient_tag != "Sg":
            raise DimensionMismatch(f"expected Sg coordinates, got {x.ambient_tag!r}")
        g = int((np.sqrt(8 * x.ambient_dim + 1) - 1) / 2 + 0.5)
        return [vec_to_sym(row, g) for row in x.basis]
    return [as_sym_array(m) for m in x]


def check_evaluation_degeneracy(x, i: int, n_v_samples: int = 100, seed: int = 0,
                                exact: bool | None = None) -> DegeneracyReport:
    """Search for v with rank(e_v restricted to span(x)) >= i.

    x is either a LinSubspace in flattened symmetric coordinates or a list of
    RationalSymMap (exact path).  Absence of a witness over N integer samples
    from [-1000, 1000]^g is wrong with probability at most (i/2001)^N when a
    witness exists, by Schwartz-Zippel applied to the i x i minors.
    """
    rational = isinstance(x, (list, tuple)) and x and isinstance(x[0], RationalSymMap)
    if exact is None:
        exact = rational
    if exact and not rational:
        raise BadDimension("exact path needs a rational basis")
    if i < 1:
        raise BadDimension(f"target rank must be >= 1, got {i}")

    rng = derive_rng(seed, "degeneracy", i)
    note = (
        f"no-witness verdicts are wrong with probability <= ({i}/2001)^{n_v_samples} "
        "when a witness exists"
    )
    if exact:
        basis: list[RationalSymMap] = list(x)
        g = basis[0].g
        dim = len(basis)
        if dim < i:
            raise BadDimension(f"space of dimension {dim} cannot carry rank {i}")
        for _ in range(n_v_samples):
            v = random_rational_vector(g, rng)
            rows = eval_matrix_exact(basis, v)
            if frac_rank(rows) >= i:
                idx = frac_independent_rows(rows)[:i]
                return DegeneracyReport(False, DegeneracyWitness(v, idx, frac_rank(rows)),
                                        i, dim, n_v_samples, True, "witness is exact")
        return DegeneracyReport(True, None, i, dim, n_v_samples, True, note)

    mats = _float_basis(x)
    dim = len(mats)
    g = mats[0].shape[0] if mats else 0
    if dim < i:
        raise BadDimension(f"space of dimension {dim} cannot carry rank {i}")
    for _ in range(n_v_samples):
        v = rng.standard_normal(g) + 1j * rng.standard_normal(g)
        op = EvalOperator.build(mats, v)
        rank, _, _ = rank_with_kernel(op.matrix)
        if rank >= i:
            idx = _independent_rows_float(op.matrix, i)
            return DegeneracyReport(False, DegeneracyWitness(v, idx, rank),
                                    i, dim, n_v_samples, False, "")
    return DegeneracyReport(True, None, i, dim, n_v_samples, False, note)


def _independent_rows_float(matrix: np.ndarray, count: int) -> list[int]:
    chosen: list[int] = []
    for idx in range(matrix.shape[0]):
        trial = chosen + [idx]
        r, _, _ = rank_with_kernel(matrix[trial])
        if r == len(trial):
            chosen = trial
            if len(chosen) == count:
                break
    return chosen


# ---------------------------------------------------------------------------
# The rigidity suite: annihilator spaces are the only degenerate ones.
# ---------------------------------------------------------------------------


def _random_rational_w(g: int, dim: int, rng) -> list[list[Fraction]]:
    while True:
        rows = [[Fraction(int(x)) for x in rng.integers(-9, 10, size=g)]
                for _ in range(dim)]
        if frac_rank(rows) == dim:
            return rows


def _random_rational_space(g: int, dim: int, rng) -> list[RationalSymMap]:
    while True:
        basis = [random_rational_symmap(g, rng) for _ in range(dim)]
        if frac_rank([m.flatten() for m in basis]) == dim:
            return basis


def _witness_found(basis: list[RationalSymMap], i: int, n_v: int, rng) -> bool:
    g = basis[0].g
    for _ in range(n_v):
        v = random_rational_vector(g, rng)
        if frac_rank(eval_matrix_exact(basis, v)) >= i:
            return True
    return False


def annihilator_rigidity_suite(g: int, i: int, trials: int = 50,
                               n_v_samples: int = 100,
                               seed: int = 0) -> VerificationReport:
    """Degenerate evaluation characterizes annihilator spaces, tested exactly.

    For i >= 3 and spaces of dimension i(i-1)/2: annihilators {M : M W = 0}
    of codimension-(i-1) subspaces W never show an evaluation of rank i,
    while perturbed copies and generic spaces of the same dimension (and any
    space one dimension larger) always do.  For i in {1, 2} no space of
    dimension max(i, i(i-1)/2) avoids rank-i evaluations at all.  All ranks
    are computed over the rationals, so every "witness found" verdict is a
    proof.
    """
    if i < 1 or i > g:
        raise BadDimension(f"target rank {i} outside 1..{g}")
    report = VerificationReport(
        "eval-rank", {"genus": g, "i": i, "trials": trials,
                      "n_v_samples": n_v_samples, "seed": seed})
    rng = derive_rng(seed, "rigidity", g, i)
    d = i * (i - 1) // 2
    sz_note = (f"no-witness verdicts wrong with probability <= "
               f"({i}/2001)^{n_v_samples} per space when a witness exists")

    if i >= 3:
        wdim = g - i + 1
        n_spaces = 3
        dim_error = 0
        missing_witness_ok = True
        perps = []
        for _ in range(n_spaces):
            perp = wperp_exact(_random_rational_w(g, wdim, rng), g)
            perps.append(perp)
            dim_error = max(dim_error, abs(len(perp) - d))
            rep = check_evaluation_degeneracy(perp, i, n_v_samples,
                                              seed=int(rng.integers(1 << 30)))
            missing_witness_ok = missing_witness_ok and rep.satisfied
        report.add(passing(
            "annihilator-dimension",
            f"dim {{M : M W = 0}} = {d} for codimension {i - 1}",
            float(dim_error), 0.5))
        report.add(passing(
            "annihilator-no-witness",
            f"no rank-{i} evaluation on annihilator spaces",
            0.0 if missing_witness_ok else 1.0, 0.5, notes=sz_note))

        for label, eps in (("unit", Fraction(1)), ("small", Fraction(1, 1000))):
            missed = 0
            example = ""
            for t in range(trials):
                perp = perps[t % len(perps)]
                while True:
                    noise = random_rational_symmap(g, rng)
                    stacked = [m.flatten() for m in perp] + [noise.flatten()]
                    if frac_rank(stacked) == d + 1:
                        break
                perturbed = [perp[0].add(noise.scale(eps))] + list(perp[1:])
                if frac_rank([m.flatten() for m in perturbed]) != d:
                    missed += 1  # degenerate draw, count as failure
                    continue
                if t == 0:
                    probe = check_evaluation_degeneracy(
                        perturbed, i, n_v_samples, seed=int(rng.integers(1 << 30)))
                    if probe.satisfied:
                        missed += 1
                    else:
                        example = ("example witness v = ["
                                   + ", ".join(str(x) for x in probe.witness.v)
                                   + f"], rank {probe.witness.rank}")
                elif not _witness_found(perturbed, i, n_v_samples, rng):
                    missed += 1
            report.add(passing(
                f"perturbed-witness-eps-{label}",
                f"perturbing one basis vector of the annihilator by {eps} "
                f"times an outside map always restores a rank-{i} evaluation",
                float(missed), 0.5, notes=example))

        missed = sum(
            0 if _witness_found(_random_rational_space(g, d, rng),
                                i, n_v_samples, rng) else 1
            for _ in range(trials))
        report.add(passing(
            "generic-same-dim-witness",
            f"generic {d}-dimensional spaces always show a rank-{i} evaluation",
            float(missed), 0.5))

        missed = sum(
            0 if _witness_found(_random_rational_space(g, d + 1, rng),
                                i, n_v_samples, rng) else 1
            for _ in range(trials))
        report.add(passing(
            "larger-dim-witness",
            f"spaces of dimension {d + 1} always show a rank-{i} evaluation",
            float(missed), 0.5))

    for small_i in (1, 2):
        if small_i > min(i, g):
            continue
        dim_small = max(small_i, small_i * (small_i - 1) // 2)
        missed = sum(
            0 if _witness_found(_random_rational_space(g, dim_small, rng),
                                small_i, n_v_samples, rng) else 1
            for _ in range(10))
        report.add(passing(
            f"rank-{small_i}-always-witnessed",
            f"every {dim_small}-dimensional space shows a rank-{small_i} "
            "evaluation",
            float(missed), 0.5))
    return report


# ---------------------------------------------------------------------------
# Tangency to rank loci.
# ---------------------------------------------------------------------------


@dataclass
class TangentCheck:
    rank: int
    predicate_holds: bool    # N(ker M) inside im M
    minors_vanish: bool      # directional derivatives of all (rank+1)-minors
    agree: bool
    max_minor_derivative: float
    exact: bool


def _minor_derivative_float(m: np.ndarray, n: np.ndarray, rows, cols) -> complex:
    base = m[np.ix_(rows, cols)]
    pert = n[np.ix_(rows, cols)]
    total = 0.0 + 0.0j
    for r in range(len(rows)):
        work = base.copy()
        work[r] = pert[r]
        total += np.linalg.det(work)
    return total


def _minor_derivative_exact(m, n, rows, cols) -> Fraction:
    total = Fraction(0)
    for r_pos in range(len(rows)):
        work = [
            [ (n if ri == rows[r_pos] else m)[ri][ci] for ci in cols ]
            for ri in rows
        ]
        total += frac_det(work)
    return total


def rank_locus_tangent_check(m, n, tol: float = 1e-10,
                             exact: bool | None = None) -> TangentCheck:
    """Compare two criteria for N being tangent to the rank locus at M.

    Route one: N maps ker(M) into im(M).  Route two: the directional
    derivatives at M, in direction N, of every (k+1) x (k+1) minor vanish,
    where k = rank(M).  The two verdicts must agree.
    """
    rational = isinstance(m, RationalSymMap)
    if exact is None:
        exact = rational
    if exact and not rational:
        raise BadDimension("exact path needs RationalSymMap inputs")

    if exact:
        g = m.g
        mm = [list(r) for r in m.rows]
        nn = [list(r) for r in n.rows]
        k = frac_rank(mm)
        kernel = frac_nullspace(mm, g)
        predicate = True
        for kv in kernel:
            nk = [sum((nn[r][c] * kv[c] for c in range(g)), Fraction(0)) for r in range(g)]
            augmented = [mm[r] + [nk[r]] for r in range(g)]
            if frac_rank(augmented) != k:
                predicate = False
                break
        minors_ok = True
        worst = Fraction(0)
        if k < g:
            for rows in itertools.combinations(range(g), k + 1):
                for cols in itertools.combinations(range(g), k + 1):
                    d = _minor_derivative_exact(mm, nn, rows, cols)
                    worst = max(worst, abs(d))
                    if d != 0:
                        minors_ok = False
        return TangentCheck(k, predicate, minors_ok, predicate == minors_ok,
                            float(worst), True)

    ma = m.as_float() if isinstance(m, RationalSymMap) else as_sym_array(m)
    na = n.as_float() if isinstance(n, RationalSymMap) else as_sym_array(n)
    g = ma.shape[0]
    k, kernel, image = rank_with_kernel(ma, tol=tol)
    predicate = True
    proj = image.projector()
    scale = max(1.0, float(np.linalg.norm(na)))
    for kv in kernel.basis:
        nk = na @ kv
        if np.linalg.norm(nk - proj @ nk) > tol * scale:
            predicate = False
            break
    minors_ok = True
    worst = 0.0
    if k < g:
        mscale = max(1.0, float(np.max(np.abs(ma)))) ** k * scale
        for rows in itertools.combinations(range(g), k + 1):
            for cols in itertools.combinations(range(g), k + 1):
                d = abs(_minor_derivative_float(ma, na, rows, cols))
                worst = max(worst, d / mscale)
                if d > tol * mscale:
                    minors_ok = False
    return TangentCheck(k, predicate, minors_ok, predicate == minors_ok, worst, False)


def random_rank_k_symmap(g: int, k: int, rng, bound: int = 5):
    """Exact rank-k symmetric map sum of k rational outer squares, with factors."""
    if not (0 < k <= g):
        raise BadDimension(f"rank {k} outside 1..{g}")
    while True:
        factors = [random_rational_vector(g, rng, bound=bound) for _ in range(k)]
        rows = [[Fraction(0)] * g for _ in range(g)]
        for idx, u in enumerate(factors):
            sign = 1 if idx % 2 == 0 else -1  # mixed signature, same rank
            for a in range(g):
                for b in range(g):
                    rows[a][b] += sign * u[a] * u[b]
        m = RationalSymMap(rows)
        if frac_rank([list(r) for r in m.rows]) == k:
            return m, factors


def tangent_direction(factors, g: int, rng, bound: int = 5) -> RationalSymMap:
    """Symmetric map guaranteed tangent to the rank locus at sum of outer squares.

    Built as sum u_j w_j^T + w_j u_j^T, which maps the kernel of the base
    point into its image for any choice of the w_j.
    """
    rows = [[Fraction(0)] * g for _ in range(g)]
    for u in factors:
        w = random_rational_vector(g, rng, bound=bound)
        for a in range(g):
            for b in range(g):
                rows[a][b] += u[a] * w[b] + w[a] * u[b]
    return RationalSymMap(rows)


# ---------------------------------------------------------------------------
# Pencils of rank-one maps and rank-one search.
# ---------------------------------------------------------------------------


@dataclass
class PencilProfile:
    max_rank: int
    rank_two_achieved: bool
    n_samples: int


def pencil_rank_profile(m, n, n_grid: int = 24, seed: int = 0,
                        tol: float = 1e-10) -> PencilProfile:
    """Rank profile of the pencil a M + b N for rank-one M, N."""
    ma = as_sym_array(m)
    na = as_sym_array(n)
    for name, a in (("first", ma), ("second", na)):
        r, _, _ = rank_with_kernel(a, tol=tol)
        if r != 1:
            raise InputNotRankOne(f"{name} pencil endpoint has rank {r}")
    stack = np.array([ma.reshape(-1), na.reshape(-1)])
    r, _, _ = rank_with_kernel(stack, tol=tol)
    if r != 2:
        raise NotIndependent("pencil endpoints are linearly dependent")
    rng = derive_rng(seed, "pencil")
    best = 0
    count = 0
    coeffs = [(np.cos(t), np.sin(t)) for t in np.linspace(0, np.pi, n_grid, endpoint=False)]
    coeffs += [tuple(rng.standard_normal(2) + 1j * rng.standard_normal(2)) for _ in range(n_grid)]
    for a, b in coeffs:
        if abs(a) + abs(b) < 1e-12:
            continue
        rank, _, _ = rank_with_kernel(a * ma + b * na, tol=tol)
        best = max(best, rank)
        count += 1
    return PencilProfile(best, best >= 2, count)


def find_rank_ones(x: LinSubspace, v, tol: float = 1e-8) -> list[SymMap]:
    """Rank-one elements of {M in span(x) : M v = 0}, up to scale.

    The intersection is expected to have dimension at most two (a pencil);
    larger intersections are outside the supported search and raise
    BadDimension.
    """
    mats = _float_basis(x)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if not mats:
        return []
    g = mats[0].shape[0]
    rows = np.array([m @ v for m in mats], dtype=complex)  # (dim, g)
    # kernel of rows^T: coefficient vectors c with sum c_j (m_j v) = 0.
    # The cutoff must scale with the inputs, not with rows itself: when every
    # basis element annihilates v the matrix is pure roundoff and a relative
    # cutoff would hallucinate rank.
    scale = max(np.linalg.norm(m) for m in mats) * np.linalg.norm(v)
    cut = 1e-10 * max(scale, 1e-30)
    full = np.linalg.svd(rows.T, full_matrices=True)
    rank = int(np.sum(full[1] > cut))
    coeff_basis = full[2][rank:].conj()
    members = [sum(c * m for c, m in zip(cv, mats)) for cv in coeff_basis]
    dim = len(members)
    if dim == 0:
        return []
    if dim > 2:
        raise BadDimension(f"intersection has dimension {dim}; pencil search handles <= 2")

    def is_rank_one(a):
        s = np.linalg.svd(a, compute_uv=False)
        return s[0] > tol and s[1] <= tol * s[0]

    found = []
    if dim == 1:
        if is_rank_one(members[0]):
            found.append(members[0] / np.linalg.norm(members[0]))
    else:
        a, b = members
        # 2x2 minors of s*a + t*b are quadratics in (s, t); intersect their roots
        candidates = [(1.0, 0.0), (0.0, 1.0)]
        quads = []
        for r1, r2 in itertools.combinations(range(g), 2):
            for c1, c2 in itertools.combinations(range(g), 2):
                # minor(s, t) = q0 s^2 + q1 s t + q2 t^2
                q0 = a[r1, c1] * a[r2, c2] - a[r1, c2] * a[r2, c1]
                q2 = b[r1, c1] * b[r2, c2] - b[r1, c2] * b[r2, c1]
                q1 = (a[r1, c1] * b[r2, c2] + b[r1, c1] * a[r2, c2]
                      - a[r1, c2] * b[r2, c1] - b[r1, c2] * a[r2, c1])
                quads.append((q0, q1, q2))
        scale = max(max(abs(q) for q in qs) for qs in quads) if quads else 0.0
        for q0, q1, q2 in quads:
            if max(abs(q0), abs(q1), abs(q2)) > 1e-9 * max(scale, 1e-30):
                roots = np.roots([q0, q1, q2])
                candidates.extend((complex(r), 1.0) for r in roots)
                break
        for s, t in candidates:
            cand = s * a + t * b
            norm = np.linalg.norm(cand)
            if norm < tol:
                continue
            cand = cand / norm
            if is_rank_one(cand):
                if not any(
                    np.abs(np.vdot(cand.reshape(-1), f.reshape(-1))) > 1 - 1e-6
                    for f in found
                ):
                    found.append(cand)
    return [SymMap(f) for f in found]
