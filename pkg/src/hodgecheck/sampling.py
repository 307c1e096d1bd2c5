"""Deterministic random sampling helpers.

One master seed drives everything.  Independent streams are derived through
SeedSequence spawn keys computed from stable string or integer labels, so a
given (seed, label) pair yields the same draws no matter which other suites
ran before it or in what order.
"""

from __future__ import annotations

import zlib

import numpy as np

from .linalg import LinSubspace, SiegelPoint, sym_dim


def _key_part(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    return zlib.crc32(str(part).encode("utf8"))


def derive_rng(seed: int, *key) -> np.random.Generator:
    """A generator tied to (seed, key...); stable across runs and schedules."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_key_part(p) for p in key))
    return np.random.default_rng(ss)


def random_symmetric_real(g: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((g, g)) * scale
    return (a + a.T) / 2


def random_symmetric_complex(g: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((g, g)) + 1j * rng.standard_normal((g, g))
    a *= scale
    return (a + a.T) / 2


def random_siegel_point(g: int, rng: np.random.Generator, spread: float = 0.8,
                        y_lo: float = 0.5, y_hi: float = 2.0) -> SiegelPoint:
    """Random point with well-conditioned imaginary part (eigenvalues in [y_lo, y_hi])."""
    x = random_symmetric_real(g, rng, spread)
    q, _ = np.linalg.qr(rng.standard_normal((g, g)))
    ev = rng.uniform(y_lo, y_hi, size=g)
    y = q @ np.diag(ev) @ q.T
    y = (y + y.T) / 2
    return SiegelPoint(x + 1j * y)


def random_complex_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def random_unit_vector(metric: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the unit sphere of the Hermitian metric.

    A standard complex Gaussian pushed through the inverse Cholesky factor is
    unitarily invariant in any metric-orthonormal frame; normalizing gives the
    sphere measure.
    """
    g = metric.shape[0]
    z = random_complex_vector(g, rng)
    ell = np.linalg.cholesky(metric)
    v = np.linalg.solve(ell.conj().T, z)
    return v / np.linalg.norm(z)


def random_subspace(ambient_dim: int, dim: int, rng: np.random.Generator,
                    ambient_tag: str, real: bool = False) -> LinSubspace:
    if real:
        rows = rng.standard_normal((dim, ambient_dim))
    else:
        rows = rng.standard_normal((dim, ambient_dim)) + 1j * rng.standard_normal((dim, ambient_dim))
    return LinSubspace.from_spanning(rows, ambient_tag)


def random_plane_sg(g: int, k: int, rng: np.random.Generator) -> LinSubspace:
    """Random complex k-plane of symmetric matrices, in flattened coordinates."""
    return random_subspace(sym_dim(g), k, rng, "Sg")
