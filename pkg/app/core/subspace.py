"""Orthonormal bases of the walk's free subspace and Gaussian sampling in them."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config.settings import settings


@dataclass(frozen=True)
class OrthoBasis:
    """d orthonormal vectors in R^n, stored as the rows of a d x n array."""

    dim_ambient: int
    vectors: np.ndarray

    def __post_init__(self):
        self.vectors.flags.writeable = False

    @classmethod
    def full(cls, n: int) -> "OrthoBasis":
        return cls(n, np.eye(n))

    @classmethod
    def empty(cls, n: int) -> "OrthoBasis":
        return cls(n, np.zeros((0, n)))

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    def orthonormality_error(self) -> float:
        """max |<b_i, b_j> - delta_ij|."""
        if self.d == 0:
            return 0.0
        gram = self.vectors @ self.vectors.T
        return float(np.max(np.abs(gram - np.eye(self.d))))

    def project(self, u: np.ndarray) -> np.ndarray:
        """Orthogonal projection of u (or of each column of u) onto the span."""
        return self.vectors.T @ (self.vectors @ u)


def _tol(tol: Optional[float]) -> float:
    return settings.ORTHO_TOL if tol is None else tol


def complement_basis(constraints, n: int, tol: Optional[float] = None) -> OrthoBasis:
    """Orthonormal basis of {u : <u, w> = 0 for every given w}.

    Constraints are orthogonalized with classical Gram-Schmidt plus one
    re-orthogonalization pass; a constraint whose residual is at most
    tol * ||w|| is treated as dependent. The complement is then completed from
    the standard basis, always taking the axis least covered so far (its
    residual norm is at least sqrt((n - r) / n)).
    """
    tol = _tol(tol)
    W = np.asarray(constraints, dtype=np.float64).reshape(-1, n)
    Q = np.zeros((n, n))
    r = 0
    for w in W:
        w_norm = np.linalg.norm(w)
        if w_norm == 0.0:
            continue
        res = w.copy()
        for _ in range(2):
            res -= Q[:, :r] @ (Q[:, :r].T @ res)
        res_norm = np.linalg.norm(res)
        if res_norm <= tol * w_norm:
            continue
        Q[:, r] = res / res_norm
        r += 1

    covered = np.sum(Q[:, :r] ** 2, axis=1)
    out = np.zeros((n - r, n))
    k = 0
    while r < n:
        i = int(np.argmax(1.0 - covered))
        res = -(Q[:, :r] @ Q[i, :r])
        res[i] += 1.0
        res -= Q[:, :r] @ (Q[:, :r].T @ res)
        res /= np.linalg.norm(res)
        Q[:, r] = res
        out[k] = res
        covered += res ** 2
        r += 1
        k += 1
    return OrthoBasis(n, out)


def downdate(basis: OrthoBasis, w: np.ndarray, tol: Optional[float] = None) -> OrthoBasis:
    """Basis of span(basis) ∩ w⊥ in O(n*d).

    The coordinates r = B w of w's projection are rotated onto the last basis
    slot with a Householder reflection; dropping that slot leaves d - 1
    orthonormal vectors orthogonal to w. If w is already orthogonal to the span
    (||B w|| <= tol * ||w||) the basis is returned unchanged.
    """
    tol = _tol(tol)
    w = np.asarray(w, dtype=np.float64)
    w_norm = np.linalg.norm(w)
    if basis.d == 0 or w_norm == 0.0:
        return basis
    B = basis.vectors
    r = B @ w
    r_norm = np.linalg.norm(r)
    if r_norm <= tol * w_norm:
        return basis
    if basis.d == 1:
        return OrthoBasis.empty(basis.dim_ambient)

    v = r / r_norm
    v[-1] += 1.0 if v[-1] >= 0.0 else -1.0
    scale = 2.0 / float(v @ v)
    reflected = B[:-1] - (scale * v[:-1])[:, None] * (v @ B)[None, :]
    return OrthoBasis(basis.dim_ambient, reflected)


def sample_gaussian(basis: OrthoBasis, rng: np.random.Generator) -> np.ndarray:
    """G = sum_k g_k b_k with g_k iid N(0, 1); the zero vector for an empty basis."""
    if basis.d == 0:
        return np.zeros(basis.dim_ambient)
    return rng.standard_normal(basis.d) @ basis.vectors


def sample_gaussian_block(basis: OrthoBasis, rng: np.random.Generator, steps: int) -> np.ndarray:
    """`steps` independent samples as the rows of a steps x n array."""
    if basis.d == 0:
        return np.zeros((steps, basis.dim_ambient))
    return rng.standard_normal((steps, basis.d)) @ basis.vectors
