"""Core numeric linear algebra: domain points, symmetric maps, subspaces.

Tolerances follow two conventions.  Symmetry of inputs is absolute (1e-12 on
the raw entries, then the input is symmetrized so stored matrices equal their
transpose exactly).  Rank decisions are relative: a singular value counts as
nonzero when it exceeds ``tol`` times the largest singular value, which makes
rank invariant under overall scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadDimension,
    BadParameters,
    DimensionMismatch,
    NotPositiveDefinite,
    NotSymmetric,
)

SYMMETRY_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-10


def _as_square(m, name="matrix") -> np.ndarray:
    a = np.atleast_2d(np.asarray(m))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def _symmetrized(a: np.ndarray, what: str) -> np.ndarray:
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"{what} deviates from symmetry by {asym:.3e}")
    out = (a + a.T) / 2
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SiegelPoint:
    """A symmetric complex g x g matrix with positive definite imaginary part."""

    tau: np.ndarray
    g: int = field(init=False)

    def __post_init__(self):
        a = _as_square(self.tau, "tau").astype(complex)
        a = _symmetrized(a, "tau")
        w = np.linalg.eigvalsh(a.imag)
        if w[0] <= 0:
            raise NotPositiveDefinite(
                f"imaginary part has minimum eigenvalue {w[0]:.3e}"
            )
        object.__setattr__(self, "tau", a)
        object.__setattr__(self, "g", a.shape[0])

    @property
    def x(self) -> np.ndarray:
        return self.tau.real

    @property
    def y(self) -> np.ndarray:
        return self.tau.imag


def make_siegel_point(x_re, y_im) -> SiegelPoint:
    """Assemble x_re + i*y_im, validating symmetry and positivity."""
    x = _as_square(x_re, "x_re").astype(float)
    y = _as_square(y_im, "y_im").astype(float)
    if x.shape != y.shape:
        raise DimensionMismatch(
            f"real and imaginary parts differ in shape: {x.shape} vs {y.shape}"
        )
    return SiegelPoint(x + 1j * y)


@dataclass(frozen=True)
class SymMap:
    """A symmetric complex g x g matrix, viewed as a map from a g-space to its dual."""

    m: np.ndarray
    g: int = field(init=False)

    def __post_init__(self):
        a = _as_square(self.m, "symmetric map").astype(complex)
        a = _symmetrized(a, "symmetric map")
        object.__setattr__(self, "m", a)
        object.__setattr__(self, "g", a.shape[0])

    def __call__(self, v) -> np.ndarray:
        return self.m @ np.asarray(v, dtype=complex)


def as_sym_array(x) -> np.ndarray:
    """Accept a SymMap or an array-like; return the validated symmetric array."""
    if isinstance(x, SymMap):
        return x.m
    return SymMap(np.asarray(x)).m


# ---------------------------------------------------------------------------
# Flattening of symmetric matrices to coordinates.
#
# Coordinates run over index pairs (a, b) with a <= b.  Off-diagonal entries
# are weighted by sqrt(2) so the standard Hermitian inner product of two
# coordinate vectors equals the Frobenius inner product of the matrices.
# ---------------------------------------------------------------------------


def sym_index_pairs(g: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(g) for b in range(a, g)]


def sym_dim(g: int) -> int:
    return g * (g + 1) // 2


def sym_to_vec(m) -> np.ndarray:
    a = as_sym_array(m)
    g = a.shape[0]
    out = np.empty(sym_dim(g), dtype=complex)
    for i, (p, q) in enumerate(sym_index_pairs(g)):
        out[i] = a[p, q] * (1.0 if p == q else np.sqrt(2.0))
    return out


def vec_to_sym(v, g: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (sym_dim(g),):
        raise DimensionMismatch(
            f"coordinate vector has shape {v.shape}, expected ({sym_dim(g)},)"
        )
    out = np.zeros((g, g), dtype=complex)
    for i, (p, q) in enumerate(sym_index_pairs(g)):
        if p == q:
            out[p, q] = v[i]
        else:
            out[p, q] = out[q, p] = v[i] / np.sqrt(2.0)
    return out


def sym_basis(g: int) -> np.ndarray:
    """Stack of Frobenius-orthonormal symmetric basis matrices, shape (n, g, g)."""
    n = sym_dim(g)
    out = np.zeros((n, g, g), dtype=complex)
    for i, (p, q) in enumerate(sym_index_pairs(g)):
        if p == q:
            out[i, p, q] = 1.0
        else:
            out[i, p, q] = out[i, q, p] = 1.0 / np.sqrt(2.0)
    return out


# ---------------------------------------------------------------------------
# Subspaces.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinSubspace:
    """A subspace given by orthonormal rows in fixed ambient coordinates.

    ambient_tag marks which ambient space the coordinates refer to, e.g. "V"
    for the g-dimensional fiber, "Sg" for flattened symmetric matrices, "R2g"
    for the real symplectic model.  Operations refuse to mix tags.
    """

    basis: np.ndarray
    ambient_tag: str

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=complex))
        if b.shape[0] > b.shape[1]:
            raise BadDimension(
                f"{b.shape[0]} rows cannot be independent in dimension {b.shape[1]}"
            )
        gram = b @ b.conj().T
        dev = np.max(np.abs(gram - np.eye(b.shape[0]))) if b.size else 0.0
        if dev > ORTHONORMALITY_TOL * 10:
            raise BadDimension(f"basis rows not orthonormal (deviation {dev:.3e})")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_spanning(cls, rows, ambient_tag: str, tol: float = 1e-12) -> "LinSubspace":
        """Orthonormalize spanning rows, dropping dependent ones."""
        a = np.atleast_2d(np.asarray(rows, dtype=complex))
        u, s, vh = np.linalg.svd(a, full_matrices=False)
        if s.size and s[0] > 0:
            rank = int(np.sum(s > tol * s[0]))
        else:
            rank = 0
        if rank == 0:
            return cls(np.zeros((0, a.shape[1]), dtype=complex), ambient_tag)
        return cls(vh[:rank], ambient_tag)

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis.conj()

    def contains(self, v, tol: float = 1e-10) -> bool:
        v = np.asarray(v, dtype=complex)
        scale = max(1.0, float(np.linalg.norm(v)))
        resid = np.linalg.norm(v - self.projector() @ v)
        return resid <= tol * scale


def subspace_distance(a: LinSubspace, b: LinSubspace) -> float:
    """Largest principal-angle sine, realized as the gap between projectors.

    Returns a value in [0, 1]; 0 only for equal subspaces of equal dimension.
    """
    if a.ambient_dim != b.ambient_dim or a.ambient_tag != b.ambient_tag:
        raise DimensionMismatch(
            f"subspaces live in different ambients: "
            f"({a.ambient_tag}, {a.ambient_dim}) vs ({b.ambient_tag}, {b.ambient_dim})"
        )
    return float(np.linalg.norm(a.projector() - b.projector(), 2))


def rank_with_kernel(m, tol: float = DEFAULT_RANK_TOL):
    """Rank, kernel and image of a complex matrix, by SVD.

    The threshold is relative: singular values above tol * sigma_max count.
    Returns (rank, kernel, image) with kernel a subspace of the domain and
    image a subspace of the codomain, both tagged "V".
    """
    if tol <= 0:
        raise BadParameters(f"rank tolerance must be positive, got {tol}")
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    u, s, vh = np.linalg.svd(a)
    if s.size and s[0] > 0:
        rank = int(np.sum(s > tol * s[0]))
    else:
        rank = 0
    kernel = LinSubspace(np.conj(vh[rank:]), "V")
    image = LinSubspace(u[:, :rank].T, "V")
    return rank, kernel, image
