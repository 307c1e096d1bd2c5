"""Curvature of the Hodge bundle and its dual over the Siegel upper half space.

With y = Im(tau), the dual bundle carries the metric h = y^{-1} and the Hodge
bundle itself the metric y.  Writing dt / dtbar for the matrices of coordinate
1-forms (entry (i, j) is the generator for the unordered pair {i, j}), the
Chern connection curvature dbar(h^{-1} dh) evaluates in closed form to

    omega_dual  = -(1/4) dt    y^{-1} dtbar y^{-1}
    omega_hodge = -(1/4) y^{-1} dtbar y^{-1} dt

with wedge products between the 1-form factors and ordinary products with the
scalar matrices.  Both are validated against a finite-difference evaluation
of dbar(h^{-1} dh) itself (see curvature_fd), which uses the convention that
dbar acts from the left: for a matrix A of functions and the (1, 0)-form
A dz, the coefficient of dz ^ dzbar in dbar(A dz) is -dbar A.

The normalized curvature is G = omega / (2 pi i); the pairing form for a
fiber vector v of the dual bundle is

    <G v, v> = (i / 8 pi) * (vbar' y^{-1}) dt y^{-1} dtbar (y^{-1} v)

a real (1, 1)-form (equal to its own conjugate).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ZeroVector
from .extform import (
    ExtForm,
    FormMatrix,
    dtau_bar_matrix,
    dtau_matrix,
    gen_count,
    index_pairs,
    pair_index,
)
from .linalg import SiegelPoint, sym_basis, sym_dim


def dual_metric(tau: SiegelPoint) -> np.ndarray:
    """Metric on the dual Hodge bundle: inverse of Im(tau)."""
    return np.linalg.inv(tau.y).astype(complex)

def hodge_metric(tau: SiegelPoint) -> np.ndarray:
    """Metric on the Hodge bundle: Im(tau)."""
    return tau.y.astype(complex)


def dual_curvature_matrix(tau: SiegelPoint) -> FormMatrix:
    g = tau.g
    b = np.linalg.inv(tau.y)
    dt = dtau_matrix(g)
    dtb = dtau_bar_matrix(g)
    return dt.matmul(b).matmul(dtb).matmul(b).scale(-0.25)


def hodge_curvature_matrix(tau: SiegelPoint) -> FormMatrix:
    g = tau.g
    b = np.linalg.inv(tau.y)
    dt = dtau_matrix(g)
    dtb = dtau_bar_matrix(g)
    return (b @ dtb).matmul(b).matmul(dt).scale(-0.25)


@dataclass(frozen=True)
class CurvaturePackage:
    """Point data for the dual Hodge bundle: metric, curvature, normalization."""

    tau: SiegelPoint
    h: np.ndarray = field(init=False)
    omega: FormMatrix = field(init=False)
    g_normalized: FormMatrix = field(init=False)

    def __post_init__(self):
        h = dual_metric(self.tau)
        h.setflags(write=False)
        omega = dual_curvature_matrix(self.tau)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "g_normalized", omega.scale(1.0 / (2j * np.pi)))

    @property
    def g(self) -> int:
        return self.tau.g


def curvature_package(tau: SiegelPoint) -> CurvaturePackage:
    return CurvaturePackage(tau)


# ---------------------------------------------------------------------------
# Finite-difference oracle for dbar(h^{-1} dh).
# ---------------------------------------------------------------------------

METRICS = {
    "dual": lambda t: np.linalg.inv(t.imag).astype(complex),
    "hodge": lambda t: t.imag.astype(complex),
}


def _perturbation(g: int, alpha: tuple[int, int]) -> np.ndarray:
    a, b = alpha
    e = np.zeros((g, g))
    e[a, b] = 1.0
    e[b, a] = 1.0  # off-diagonal coordinates move both entries
    if a == b:
        e[a, b] = 1.0
    return e


def curvature_fd(tau: SiegelPoint, metric: str = "dual", step: float = 1e-5):
    """Finite-difference curvature coefficients, keyed by generator index pair.

    Returns a dict mapping (alpha, beta) to the g x g coefficient matrix of
    dz_alpha ^ dzbar_beta in dbar(h^{-1} dh), with alpha and beta running over
    the generator indices of the symmetric coordinates.  Central differences
    throughout; the outer dbar differentiates the connection matrix function
    h^{-1} d_alpha h.
    """
    metric_fn = METRICS[metric]
    g = tau.g
    pairs = index_pairs(g)
    base = tau.tau

    def connection(alpha_pert: np.ndarray, at: np.ndarray) -> np.ndarray:
        hp = metric_fn(at + step * alpha_pert)
        hm = metric_fn(at - step * alpha_pert)
        dx = (hp - hm) / (2 * step)
        hp = metric_fn(at + 1j * step * alpha_pert)
        hm = metric_fn(at - 1j * step * alpha_pert)
        dy = (hp - hm) / (2 * step)
        dh = (dx - 1j * dy) / 2
        return np.linalg.solve(metric_fn(at), dh)

    out = {}
    for ia, alpha in enumerate(pairs):
        pa = _perturbation(g, alpha)
        for ib, beta in enumerate(pairs):
            pb = _perturbation(g, beta)
            ax_p = connection(pa, base + step * pb)
            ax_m = connection(pa, base - step * pb)
            dx = (ax_p - ax_m) / (2 * step)
            ay_p = connection(pa, base + 1j * step * pb)
            ay_m = connection(pa, base - 1j * step * pb)
            dy = (ay_p - ay_m) / (2 * step)
            dbar_a = (dx + 1j * dy) / 2
            out[(ia, ib)] = -dbar_a
    return out


def curvature_coefficients(omega: FormMatrix):
    """Reorganize a curvature matrix into the layout of curvature_fd."""
    g = omega.g
    n = gen_count(g)
    out = {
        (ia, ib): np.zeros((g, g), dtype=complex)
        for ia in range(n)
        for ib in range(n)
    }
    for i in range(g):
        for j in range(g):
            for (s, t), c in omega.entries[i][j].terms().items():
                if s.bit_count() != 1 or t.bit_count() != 1:
                    raise DimensionMismatch("curvature entries must be (1,1)-forms")
                ia = s.bit_length() - 1
                ib = t.bit_length() - 1
                out[(ia, ib)][i, j] += c
    return out


def fd_relative_error(tau: SiegelPoint, metric: str = "dual", step: float = 1e-5) -> float:
    omega = dual_curvature_matrix(tau) if metric == "dual" else hodge_curvature_matrix(tau)
    analytic = curvature_coefficients(omega)
    fd = curvature_fd(tau, metric=metric, step=step)
    scale = max(np.max(np.abs(m)) for m in fd.values())
    worst = max(np.max(np.abs(analytic[k] - fd[k])) for k in fd)
    return float(worst / scale)


# ---------------------------------------------------------------------------
# Pairing forms.
# ---------------------------------------------------------------------------


def curvature_pairing_form(pkg: CurvaturePackage, v) -> ExtForm:
    """The (1, 1)-form <G v, v> for a fiber vector v of the dual bundle.

    Scales like |c|^2 in v and equals its own conjugate.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    g = pkg.g
    if v.shape != (g,):
        raise DimensionMismatch(f"vector shape {v.shape} does not match genus {g}")
    if np.allclose(v, 0):
        raise ZeroVector("pairing form needs a nonzero fiber vector")
    row = np.conj(v) @ pkg.h
    acc = ExtForm.zero(g)
    for i in range(g):
        if row[i] == 0:
            continue
        for j in range(g):
            entry = pkg.g_normalized.entries[i][j]
            if not entry.is_zero() and v[j] != 0:
                acc = acc + entry * (row[i] * v[j])
    return acc


def pairing_coefficient_matrix(pkg: CurvaturePackage, v: np.ndarray) -> np.ndarray:
    """Generator-indexed coefficient matrix K of <G v, v> = sum K[a, b] dt_a ^ dtbar_b."""
    g = pkg.g
    n = gen_count(g)
    b = np.linalg.inv(pkg.tau.y)
    z = b @ np.asarray(v, dtype=complex)
    t = np.einsum("i,jk,l->ijkl", np.conj(z), b, z) * (1j / (8 * np.pi))
    k = np.zeros((n, n), dtype=complex)
    for i in range(g):
        for j in range(g):
            ia = pair_index(g, i, j)
            for p in range(g):
                for q in range(g):
                    ib = pair_index(g, p, q)
                    k[ia, ib] += t[i, j, p, q]
    return k


def line_hermitian_form(tau: SiegelPoint, w) -> np.ndarray:
    """Hermitian form (a, b) -> <a w, b w>_dual / <w, w>_hodge on symmetric maps.

    Expressed in the Frobenius-orthonormal basis of symmetric matrices; the
    result is positive semidefinite of rank at most g and invariant under
    rescaling w.
    """
    w = np.asarray(w, dtype=complex).reshape(-1)
    g = tau.g
    if w.shape != (g,):
        raise DimensionMismatch(f"vector shape {w.shape} does not match genus {g}")
    if np.allclose(w, 0):
        raise ZeroVector("the form is undefined on the zero vector")
    h = dual_metric(tau)
    basis = sym_basis(g)
    mw = np.einsum("agh,h->ga", basis, w)  # column a is basis[a] @ w
    denom = np.real(np.conj(w) @ hodge_metric(tau) @ w)
    return np.einsum("gb,gh,ha->ba", np.conj(mw), h, mw) / denom


def fundamental_form(l_matrix: np.ndarray, g: int) -> ExtForm:
    """(1, 1)-form of a Hermitian form on symmetric maps, positive convention.

    For the Hermitian form H given in the Frobenius-orthonormal basis, returns
    (i/2) sum H(E'_a, E'_b) dt_a ^ dtbar_b over plain entry-basis matrices
    E'.  For H = line_hermitian_form(tau, w) this equals
    4 pi <G v, v> / <v, v> at the matched v = Im(tau) conj(w).
    """
    n = sym_dim(g)
    l_matrix = np.asarray(l_matrix, dtype=complex)
    if l_matrix.shape != (n, n):
        raise DimensionMismatch(f"form matrix shape {l_matrix.shape}, expected ({n}, {n})")
    pairs = index_pairs(g)
    weights = np.array([1.0 if a == b else np.sqrt(2.0) for (a, b) in pairs])
    terms = {}
    for ia in range(n):
        for ib in range(n):
            c = 0.5j * weights[ia] * weights[ib] * l_matrix[ib, ia]
            if c != 0:
                terms[(1 << ia, 1 << ib)] = c
    return ExtForm(g, terms)


def matched_dual_vector(tau: SiegelPoint, w) -> np.ndarray:
    """The dual-bundle vector v = Im(tau) conj(w) matched to a Hodge vector w."""
    return tau.y @ np.conj(np.asarray(w, dtype=complex).reshape(-1))
