"""Matrix primitives: containers, losses, and the alignment minimizer.

The alignment closed form is checked against a brute-force minimum over
random orthogonal matrices, so the two routes are independent.
"""

import numpy as np
import pytest
from scipy.stats import ortho_group

from gramrd.errors import ValidationError
from gramrd.linalg import (
    GramMatrix,
    LatentMatrix,
    gram_from_latents,
    gram_loss_L,
    nuclear_norm,
    polar_decompose,
    procrustes_loss_ell,
    psd_sqrt,
)
from gramrd.sampling import stream


def test_latent_matrix_validation():
    LatentMatrix(np.zeros((3, 2)))
    with pytest.raises(ValidationError):
        LatentMatrix(np.zeros(3))
    with pytest.raises(ValidationError):
        LatentMatrix(np.array([[np.inf, 0.0]]))
    # spherical flag enforces unit rows
    rows = np.array([[1.0, 0.0], [0.0, 1.0]])
    LatentMatrix(rows, spherical=True)
    with pytest.raises(ValidationError):
        LatentMatrix(2.0 * rows, spherical=True)


def test_gram_matrix_validation():
    X = np.array([[2.0, 0.5], [0.5, 1.0]])
    g = GramMatrix(X, rank_bound=2)
    assert g.entries.shape == (2, 2)
    with pytest.raises(ValidationError):
        GramMatrix(np.array([[1.0, 0.3], [0.2, 1.0]]), rank_bound=2)  # asymmetric
    with pytest.raises(ValidationError):
        GramMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]), rank_bound=2)  # indefinite


def test_gram_from_latents():
    rng = stream(7, 1)
    A = rng.standard_normal((5, 3))
    g = gram_from_latents(LatentMatrix(A))
    np.testing.assert_allclose(g.entries, A @ A.T, rtol=0.0, atol=1e-12)
    assert g.rank_bound == 3


def test_gram_loss_scaling():
    """L(X, Y) = d / (n(n+1)) * ||X - Y||_F^2, checked by hand."""
    rng = stream(11, 2)
    n, d = 6, 4
    X = rng.standard_normal((n, n))
    X = X @ X.T
    Y = rng.standard_normal((n, n))
    Y = Y @ Y.T
    manual = d / (n * (n + 1)) * float(np.sum((X - Y) ** 2))
    assert gram_loss_L(X, Y, d) == pytest.approx(manual, rel=1e-12)
    assert gram_loss_L(X, X, d) == 0.0


def test_alignment_zero_at_exact_rotation():
    rng = stream(23, 3)
    for d in (1, 2, 5):
        A = rng.standard_normal((7, d))
        O = ortho_group.rvs(d, random_state=np.random.default_rng(5)) if d > 1 else np.array([[-1.0]])
        val, aligner = procrustes_loss_ell(A, A @ O)
        assert val <= 1e-12
        np.testing.assert_allclose(A @ O @ aligner, A, rtol=0.0, atol=1e-6)


def test_alignment_matches_brute_force():
    """Closed form vs. an independent numerical minimum over O(d).

    Three layers: the closed form can never exceed any of 20000 Haar
    candidates' losses; no small rotation of the returned minimizer
    improves it; and Nelder-Mead refinement of the best sampled candidate
    (parametrized by skew-symmetric coordinates, an optimization route that
    shares nothing with the SVD formula) lands on the same value.
    """
    from scipy.optimize import minimize

    rng = stream(31, 4)
    n, d = 5, 3
    A = rng.standard_normal((n, d))
    B = rng.standard_normal((n, d))
    val, aligner = procrustes_loss_ell(A, B)

    og = ortho_group(dim=d, seed=np.random.default_rng(17))
    candidates = og.rvs(size=20_000)
    diffs = A[None, :, :] - B[None, :, :] @ candidates
    losses = np.einsum("kij,kij->k", diffs, diffs) / n
    best_idx = int(losses.argmin())
    assert val <= float(losses[best_idx]) + 1e-9

    # local polish around the returned minimizer: no nearby rotation improves
    for _ in range(200):
        S = rng.standard_normal((d, d)) * 1e-3
        S = S - S.T
        Q = aligner @ _expm_skew(S)
        loss_q = float(np.sum((A - B @ Q) ** 2)) / n
        assert loss_q >= val - 1e-12

    base = candidates[best_idx]
    iu = np.triu_indices(d, k=1)

    def loss_at(theta):
        S = np.zeros((d, d))
        S[iu] = theta
        S = S - S.T
        Q = base @ _expm_skew(S)
        return float(np.sum((A - B @ Q) ** 2)) / n

    res = minimize(loss_at, np.zeros(d * (d - 1) // 2), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
    assert res.fun >= val - 1e-10
    assert res.fun - val <= 1e-6 * max(1.0, val)


def _expm_skew(S):
    w, V = np.linalg.eig(S)
    return np.real(V @ np.diag(np.exp(w)) @ np.linalg.inv(V))


def test_alignment_reports_its_own_minimizer():
    rng = stream(41, 5)
    A = rng.standard_normal((8, 4))
    B = rng.standard_normal((8, 4))
    val, O = procrustes_loss_ell(A, B)
    np.testing.assert_allclose(O.T @ O, np.eye(4), rtol=0.0, atol=1e-10)
    assert float(np.sum((A - B @ O) ** 2)) / 8 == pytest.approx(val, rel=1e-10)


def test_nuclear_norm_vs_svd():
    rng = stream(43, 6)
    M = rng.standard_normal((6, 6))
    assert nuclear_norm(M) == pytest.approx(float(np.linalg.svd(M, compute_uv=False).sum()), rel=1e-12)


def test_psd_sqrt_squares_back():
    rng = stream(47, 7)
    A = rng.standard_normal((5, 5))
    X = A @ A.T
    R = psd_sqrt(X)
    np.testing.assert_allclose(R @ R, X, rtol=0.0, atol=1e-9)
    np.testing.assert_allclose(R, R.T, rtol=0.0, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(R) >= -1e-10)


def test_polar_decompose_reconstructs():
    # left polar: A = P U with P PSD and U a partial isometry
    rng = stream(53, 8)
    for shape in ((4, 4), (3, 6), (6, 3)):
        A = rng.standard_normal(shape)
        P, U = polar_decompose(A)
        np.testing.assert_allclose(P @ U, A, rtol=0.0, atol=1e-10)
        k = min(shape)
        gram = U @ U.T if shape[0] <= shape[1] else U.T @ U
        np.testing.assert_allclose(gram, np.eye(k), rtol=0.0, atol=1e-10)
        np.testing.assert_allclose(P, P.T, rtol=0.0, atol=1e-12)
        assert np.all(np.linalg.eigvalsh(P) >= -1e-10)
