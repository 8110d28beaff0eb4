"""Latent-matrix sampling with reproducible, splittable random streams.

Priors:

* gaussian-isotropic: rows i.i.d. N(0, (1/d) I_d), so E||z_i||^2 = 1.
* sphere-uniform: rows uniform on the unit sphere S^{d-1} (normalized
  Gaussians), so the Gram diagonal is exactly 1.

Streams are derived from (seed, *stream ids) through a Philox counter-based
generator; equal keys give bit-identical draws regardless of which worker
consumes them, which is what makes threaded sweeps reproducible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DomainError, ValidationError
from .linalg import GramMatrix, LatentMatrix, gram_from_latents

__all__ = [
    "BetaDecomposition",
    "LatentConfig",
    "Prior",
    "beta_decompose",
    "sample_gram",
    "sample_latent_rows",
    "sample_latents",
    "stream",
]

_SEED_BITS = 64


class Prior(str, enum.Enum):
    GAUSSIAN = "gaussian-isotropic"
    SPHERE = "sphere-uniform"


def _coerce_prior(prior) -> Prior:
    if isinstance(prior, Prior):
        return prior
    try:
        return Prior(prior)
    except ValueError:
        names = ", ".join(p.value for p in Prior)
        raise DomainError(f"unknown prior {prior!r}; expected one of: {names}") from None


@dataclass(frozen=True)
class LatentConfig:
    """Shape, prior and seed for one latent-matrix ensemble."""

    n: int
    d: int
    prior: Prior = Prior.GAUSSIAN
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "prior", _coerce_prior(self.prior))
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise ValidationError(f"d must be a positive integer, got {self.d!r}")
        if not isinstance(self.seed, (int, np.integer)) or not (
            0 <= self.seed < 2**_SEED_BITS
        ):
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


def stream(seed: int, *ids: int) -> np.random.Generator:
    """Independent generator for (seed, ids...); equal keys, equal streams."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in ids))
    return np.random.Generator(np.random.Philox(ss))


def sample_latent_rows(rng: np.random.Generator, m: int, d: int, prior) -> np.ndarray:
    """Raw (m, d) array of latent rows; fast path for Monte Carlo loops."""
    prior = _coerce_prior(prior)
    g = rng.standard_normal((m, d))
    if prior is Prior.GAUSSIAN:
        return g / math.sqrt(d)
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # Resample the (measure-zero, but finite-precision) zero rows.
    bad = np.flatnonzero(norms[:, 0] == 0.0)
    while bad.size:
        g[bad] = rng.standard_normal((bad.size, d))
        norms[bad] = np.linalg.norm(g[bad], axis=1, keepdims=True)
        bad = np.flatnonzero(norms[:, 0] == 0.0)
    out = g / norms
    # Normalization is accurate to a few ulp; renormalize once more so the
    # unit-norm invariant of LatentMatrix holds exactly within 1e-12.
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


def sample_latents(cfg: LatentConfig, worker: int = 0) -> LatentMatrix:
    """Draw the latent matrix for ``cfg``; bit-identical for equal seeds.

    ``worker`` selects an independent stream for parallel replication.
    """
    rng = stream(cfg.seed, worker)
    rows = sample_latent_rows(rng, cfg.n, cfg.d, cfg.prior)
    return LatentMatrix(entries=rows, spherical=cfg.prior is Prior.SPHERE)


def sample_gram(cfg: LatentConfig, worker: int = 0) -> GramMatrix:
    """Draw X = Z Z^T from fresh latents (same stream as sample_latents)."""
    Z = sample_latents(cfg, worker)
    X = Z.entries @ Z.entries.T
    X = (X + X.T) / 2.0
    if cfg.prior is Prior.SPHERE:
        np.fill_diagonal(X, 1.0)
    return GramMatrix(entries=X, rank_bound=min(cfg.n, cfg.d))


@dataclass(frozen=True)
class BetaDecomposition:
    """Row norms, unit directions, and noisy norms of a latent matrix.

    Invariants: beta > 0, direction rows unit norm within 1e-12, and
    diag(beta) @ directions reconstructs the input within 1e-12.
    """

    beta: np.ndarray
    directions: np.ndarray
    beta_hat: np.ndarray
    delta: float

    def __post_init__(self) -> None:
        if self.beta.ndim != 1 or self.directions.ndim != 2:
            raise ValidationError("beta must be a vector and directions a matrix")
        if self.beta_hat.shape != self.beta.shape:
            raise ValidationError("beta_hat must match beta in shape")
        if self.directions.shape[0] != self.beta.shape[0]:
            raise ValidationError("directions must have one row per beta entry")
        if not np.all(self.beta > 0.0):
            raise DegenerateInputError("all row norms must be strictly positive")
        norms = np.linalg.norm(self.directions, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValidationError("direction rows must be unit norm within 1e-12")
        if self.delta < 0.0:
            raise DomainError("noise level delta must be nonnegative")


def beta_decompose(Z, delta: float = 0.0, seed: int = 0) -> BetaDecomposition:
    """Split Z into row norms and directions; add N(0, delta^2) to the norms.

    With delta == 0 the noisy norms equal the exact ones.  A zero row has no
    direction and raises DegenerateInputError.
    """
    arr = Z.entries if isinstance(Z, LatentMatrix) else np.asarray(Z, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"latent matrix must be 2-d, got shape {arr.shape}")
    if float(delta) < 0.0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    beta = np.linalg.norm(arr, axis=1)
    if np.any(beta == 0.0):
        raise DegenerateInputError("zero-norm latent row has no direction")
    directions = arr / beta[:, None]
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    if delta == 0.0:
        beta_hat = beta.copy()
    else:
        rng = stream(seed, 0xBE7A)
        beta_hat = beta + float(delta) * rng.standard_normal(beta.shape)
    return BetaDecomposition(
        beta=beta, directions=directions, beta_hat=beta_hat, delta=float(delta)
    )
