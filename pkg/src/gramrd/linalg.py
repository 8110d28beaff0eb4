"""Matrix types and loss functions for latent/Gram matrix comparison.

Conventions
-----------
A latent matrix Z is n x d with one latent vector per row.  Its Gram matrix
is X = Z Z^T.  Two losses are used throughout:

* ``gram_loss_L(X, Y, d)``:  d / (n(n+1)) * ||X - Y||_F^2.  The normalizer
  makes the identity-matrix baseline have expected loss exactly 1 under the
  isotropic Gaussian prior, so losses are directly comparable across shapes.
* ``procrustes_loss_ell(A, B)``:  (1/n) * inf_O ||A - B O||_F^2 over
  orthogonal O, i.e. alignment error modulo a right rotation of B.

The Procrustes infimum has the closed form
(||A||_F^2 + ||B||_F^2 - 2 * nuclear_norm(B^T A)) / n, attained at
O = U V^T where B^T A = U S V^T.  Brute-force minimization over random
orthogonal matrices is used only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "GramMatrix",
    "LatentMatrix",
    "gram_from_latents",
    "gram_loss_L",
    "nuclear_norm",
    "polar_decompose",
    "procrustes_loss_ell",
    "psd_sqrt",
]

SPHERE_ROW_NORM_TOL = 1e-12
SYMMETRY_TOL = 1e-12
PSD_EIG_TOL = -1e-10


def _as_matrix(x, name: str) -> np.ndarray:
    if isinstance(x, LatentMatrix) or isinstance(x, GramMatrix):
        arr = x.entries
    else:
        arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class LatentMatrix:
    """An n x d matrix of latent row vectors.

    When ``spherical`` is set every row must have unit Euclidean norm
    (within 1e-12); construction fails otherwise.
    """

    entries: np.ndarray
    spherical: bool = False
    n: int = field(init=False)
    d: int = field(init=False)

    def __post_init__(self) -> None:
        arr = _as_matrix(self.entries, "latent matrix")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "n", arr.shape[0])
        object.__setattr__(self, "d", arr.shape[1])
        if self.n < 1 or self.d < 1:
            raise ValidationError(f"latent matrix must be nonempty, got {arr.shape}")
        if self.spherical:
            norms = np.linalg.norm(arr, axis=1)
            worst = float(np.max(np.abs(norms - 1.0)))
            if worst > SPHERE_ROW_NORM_TOL:
                raise ValidationError(
                    f"spherical rows must be unit norm within {SPHERE_ROW_NORM_TOL}, "
                    f"worst deviation {worst:.3e}"
                )


@dataclass(frozen=True)
class GramMatrix:
    """A symmetric positive semidefinite n x n matrix with a rank bound.

    ``rank_bound`` records min(n, d) when the matrix came from an n x d
    latent matrix; it is metadata, not a measured rank.
    """

    entries: np.ndarray
    rank_bound: int
    n: int = field(init=False)

    def __post_init__(self) -> None:
        arr = _as_matrix(self.entries, "gram matrix")
        if arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"gram matrix must be square, got {arr.shape}")
        asym = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
        if asym > SYMMETRY_TOL:
            raise ValidationError(
                f"gram matrix must be symmetric within {SYMMETRY_TOL}, got {asym:.3e}"
            )
        arr = np.ascontiguousarray((arr + arr.T) / 2.0)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "n", arr.shape[0])
        if not (1 <= self.rank_bound <= self.n):
            raise ValidationError(
                f"rank_bound must lie in [1, n={self.n}], got {self.rank_bound}"
            )
        smallest = float(np.linalg.eigvalsh(arr)[0])
        if smallest < PSD_EIG_TOL:
            raise ValidationError(
                f"gram matrix must be PSD within eigenvalue tolerance {PSD_EIG_TOL}, "
                f"smallest eigenvalue {smallest:.3e}"
            )


def gram_from_latents(Z) -> GramMatrix:
    """Form X = Z Z^T (exactly symmetrized) from a latent matrix."""
    if isinstance(Z, LatentMatrix):
        arr = Z.entries
    else:
        arr = _as_matrix(Z, "latent matrix")
    X = arr @ arr.T
    X = (X + X.T) / 2.0
    return GramMatrix(entries=X, rank_bound=min(arr.shape))


def gram_loss_L(X, Y, d: int) -> float:
    """Normalized squared Frobenius loss d/(n(n+1)) * ||X - Y||_F^2.

    ``d`` is the latent dimension used in the normalizer; it is a free
    parameter because the Gram matrices alone do not determine it.
    """
    Xa = _as_matrix(X, "X")
    Ya = _as_matrix(Y, "Y")
    if Xa.shape != Ya.shape:
        raise ValidationError(f"shape mismatch: {Xa.shape} vs {Ya.shape}")
    if Xa.shape[0] != Xa.shape[1]:
        raise ValidationError(f"gram matrices must be square, got {Xa.shape}")
    if not isinstance(d, (int, np.integer)) or d <= 0:
        raise DomainError(f"latent dimension d must be a positive integer, got {d!r}")
    n = Xa.shape[0]
    diff = Xa - Ya
    return float(d / (n * (n + 1.0)) * np.vdot(diff, diff).real)


def procrustes_loss_ell(A, B) -> tuple[float, np.ndarray]:
    """Alignment loss (1/n) inf_O ||A - B O||_F^2 and a minimizing O.

    Parameters
    ----------
    A, B : (n, d) arrays or LatentMatrix
        Matrices to align; B is rotated onto A.

    Returns
    -------
    loss : float
        The infimum value (floored at 0 against roundoff).
    O : (d, d) ndarray
        An orthogonal matrix attaining it, from the SVD of B^T A.
    """
    Aa = _as_matrix(A, "A")
    Ba = _as_matrix(B, "B")
    if Aa.shape != Ba.shape:
        raise ValidationError(f"shape mismatch: {Aa.shape} vs {Ba.shape}")
    n = Aa.shape[0]
    M = Ba.T @ Aa
    U, s, Vt = np.linalg.svd(M)
    O = U @ Vt
    value = (np.vdot(Aa, Aa).real + np.vdot(Ba, Ba).real - 2.0 * s.sum()) / n
    return max(float(value), 0.0), O


def nuclear_norm(M) -> float:
    """Sum of singular values."""
    arr = _as_matrix(M, "M")
    return float(np.linalg.svd(arr, compute_uv=False).sum())


def psd_sqrt(M) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues in [-1e-10, 0) are treated as roundoff and clipped to zero;
    anything lower raises DomainError.
    """
    arr = _as_matrix(M, "M")
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"psd_sqrt needs a square matrix, got {arr.shape}")
    sym = (arr + arr.T) / 2.0
    w, V = np.linalg.eigh(sym)
    if w[0] < PSD_EIG_TOL:
        raise DomainError(
            f"matrix is not PSD within tolerance {PSD_EIG_TOL}: min eigenvalue {w[0]:.3e}"
        )
    root = (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T
    return (root + root.T) / 2.0


def polar_decompose(A) -> tuple[np.ndarray, np.ndarray]:
    """Left polar decomposition A = P U.

    P = (A A^T)^{1/2} is n x n PSD and U is an n x d partial isometry
    (orthonormal columns when n >= d, orthonormal rows when n < d; a full
    orthogonal matrix when n == d).
    """
    arr = _as_matrix(A, "A")
    W, s, Vt = np.linalg.svd(arr, full_matrices=False)
    P = (W * s) @ W.T
    P = (P + P.T) / 2.0
    U = W @ Vt
    return P, U
