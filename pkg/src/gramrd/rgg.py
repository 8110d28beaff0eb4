"""Random geometric graphs under a step kernel and a baseline spectral estimator.

A graph on n vertices is built from latent rows z_1..z_n by connecting
i ~ j exactly when <z_i, z_j> >= tau.  The threshold tau is calibrated by
Monte Carlo so the average edge density matches a target p.  The
estimator is deliberately plain: center the adjacency matrix by the known
p, keep the top-d eigenpairs with eigenvalues clipped at zero, and
rescale by a scalar fit on a held-out calibration run with known latents.
Sweeps report the Gram loss as a function of d / (n * h(p)) with h in
nats, which is the axis on which recovery empirically turns on and off.

The estimator is a baseline for the positive direction only; nothing
here depends on it being optimal, and the impossibility side of the
story is carried entirely by the bounds module.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .linalg import GramMatrix, LatentMatrix, gram_loss_L
from .sampling import LatentConfig, Prior, _coerce_prior, sample_latent_rows, stream
from .specfun import binary_entropy, nats_to_bits

__all__ = [
    "ExperimentRecord",
    "GraphSample",
    "SweepSummary",
    "MAX_GRAPH_N",
    "calibrate_threshold",
    "coding_cost_bits",
    "fit_calibration_scale",
    "generate_graph",
    "graph_from_latents",
    "phase_sweep",
    "spectral_estimate",
    "trivial_estimate",
]

MAX_GRAPH_N = 4096

_TAU_STREAM = 0x07A0
_CAL_STREAM = 0x0CA1
_DIAG_FLOOR = 1e-8


@dataclass(frozen=True)
class GraphSample:
    """A realized graph together with the latents that produced it.

    The adjacency matrix is dense uint8 (0/1), symmetric with a zero
    diagonal; the latents are retained so losses can be evaluated against
    the ground-truth Gram matrix.
    """

    adjacency: np.ndarray
    latents: LatentMatrix
    kernel_threshold: float
    target_density: float
    realized_density: float = field(init=False)

    def __post_init__(self) -> None:
        A = np.asarray(self.adjacency)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError(f"adjacency must be square, got shape {A.shape}")
        n = A.shape[0]
        if n < 2:
            raise ValidationError("a graph needs at least 2 vertices")
        if n > MAX_GRAPH_N:
            raise ValidationError(f"n={n} exceeds the dense-storage cap {MAX_GRAPH_N}")
        if n != self.latents.n:
            raise ValidationError(
                f"adjacency order {n} does not match latent row count {self.latents.n}"
            )
        A = A.astype(np.uint8, copy=True)
        if not np.all((A == 0) | (A == 1)):
            raise ValidationError("adjacency entries must be 0 or 1")
        if not np.array_equal(A, A.T):
            raise ValidationError("adjacency must be symmetric")
        if np.any(np.diagonal(A) != 0):
            raise ValidationError("adjacency diagonal must be zero")
        if not (0.0 < self.target_density < 1.0):
            raise ValidationError(
                f"target density must lie in (0, 1), got {self.target_density}"
            )
        A.setflags(write=False)
        object.__setattr__(self, "adjacency", A)
        pairs = n * (n - 1) // 2
        edges = int(np.triu(A, k=1).sum())
        object.__setattr__(self, "realized_density", edges / pairs)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.triu(self.adjacency, k=1).sum())


@dataclass(frozen=True)
class ExperimentRecord:
    """One (estimator, trial) outcome inside a sweep."""

    n: int
    d: int
    p: float
    tau: float
    seed: int
    estimator_name: str
    loss_L: float
    runtime_seconds: float

    def __post_init__(self) -> None:
        if self.loss_L < 0.0:
            raise ValidationError(f"loss must be nonnegative, got {self.loss_L}")


@dataclass(frozen=True)
class SweepSummary:
    """Per-grid-point aggregate of a sweep, keyed by d / (n * h(p))."""

    n: int
    d: int
    p: float
    tau: float
    abscissa: float
    trials: int
    spectral_mean_loss: float
    spectral_stderr: float
    trivial_mean_loss: float
    trivial_stderr: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "tau": self.tau,
            "d_over_n_hp": self.abscissa,
            "trials": self.trials,
            "spectral_mean_loss": self.spectral_mean_loss,
            "spectral_stderr": self.spectral_stderr,
            "trivial_mean_loss": self.trivial_mean_loss,
            "trivial_stderr": self.trivial_stderr,
        }


def calibrate_threshold(
    d: int,
    p: float,
    prior: Prior | str = Prior.GAUSSIAN,
    samples: int = 1_000_000,
    seed: int = 0,
) -> float:
    """Empirical (1-p)-quantile of <z, z'> over independent latent pairs.

    By construction P(<z, z'> >= tau) is approximately p, so graphs built
    at this threshold have average edge density near p.
    """
    prior = _coerce_prior(prior)
    if not (0.0 < p < 1.0):
        raise DomainError(f"target density must lie in (0, 1), got {p}")
    if not (isinstance(d, (int, np.integer)) and d >= 1):
        raise DomainError(f"latent dimension must be a positive integer, got {d}")
    if samples < 1_000:
        raise DomainError(f"need at least 1000 calibration pairs, got {samples}")
    rng = stream(seed, _TAU_STREAM)
    ips = np.empty(samples)
    # Chunk so the two latent blocks stay within ~128 MB even at large d.
    chunk = max(1, min(65_536, 8_000_000 // int(d)))
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        u = sample_latent_rows(rng, b, int(d), prior)
        v = sample_latent_rows(rng, b, int(d), prior)
        ips[done : done + b] = np.einsum("ij,ij->i", u, v)
        done += b
    return float(np.quantile(ips, 1.0 - p))


def graph_from_latents(
    latents: LatentMatrix | np.ndarray,
    tau: float,
    target_density: float,
    prior: Prior | str = Prior.GAUSSIAN,
) -> GraphSample:
    """Apply the step kernel 1{<z_i, z_j> >= tau} to existing latents."""
    if not isinstance(latents, LatentMatrix):
        latents = LatentMatrix(
            np.asarray(latents, dtype=np.float64),
            spherical=_coerce_prior(prior) is Prior.SPHERE,
        )
    Z = latents.entries
    X = Z @ Z.T
    upper = np.triu(X >= tau, k=1)
    A = (upper | upper.T).astype(np.uint8)
    return GraphSample(
        adjacency=A,
        latents=latents,
        kernel_threshold=float(tau),
        target_density=float(target_density),
    )


def generate_graph(cfg: LatentConfig, tau: float, target_density: float, worker: int = 0) -> GraphSample:
    """Sample fresh latents from ``cfg`` and build the step-kernel graph."""
    from .sampling import sample_latents

    Z = sample_latents(cfg, worker=worker)
    return graph_from_latents(Z, tau, target_density)


def trivial_estimate(graph: GraphSample) -> GramMatrix:
    """The identity-matrix baseline; its expected Gram loss is the unit scale."""
    n = graph.n
    return GramMatrix(np.eye(n), rank_bound=n)


def _centered_top_eigs(adjacency: np.ndarray, p: float, d_embed: int) -> np.ndarray:
    """Top-d_embed spectral reconstruction of A - p(J - I), eigenvalues clipped at 0."""
    A = adjacency.astype(np.float64)
    n = A.shape[0]
    M = A - p * (np.ones((n, n)) - np.eye(n))
    w, V = np.linalg.eigh(M)
    idx = np.argsort(w)[::-1][:d_embed]
    w_top = np.clip(w[idx], 0.0, None)
    V_top = V[:, idx]
    G = (V_top * w_top) @ V_top.T
    return (G + G.T) / 2.0


def fit_calibration_scale(
    cfg: LatentConfig,
    tau: float,
    p: float,
    d_embed: int | None = None,
    runs: int = 1,
) -> float:
    """Least-squares scalar mapping embedding inner products to true ones.

    Uses held-out simulated runs at the same (n, d, p): fresh latents with
    a dedicated stream, so the scale is never fit on the graph it will be
    applied to.  The scale is clamped at zero to keep s*G positive
    semidefinite.
    """
    if runs < 1:
        raise DomainError(f"runs must be >= 1, got {runs}")
    d_embed = min(cfg.d, cfg.n) if d_embed is None else int(d_embed)
    if not (1 <= d_embed <= cfg.n):
        raise DomainError(f"embedding dimension must lie in [1, n], got {d_embed}")
    num = 0.0
    den = 0.0
    iu = np.triu_indices(cfg.n, k=1)
    for r in range(runs):
        rng = stream(cfg.seed, _CAL_STREAM, r)
        Z = sample_latent_rows(rng, cfg.n, cfg.d, cfg.prior)
        X = Z @ Z.T
        upper = np.triu(X >= tau, k=1)
        A = (upper | upper.T).astype(np.uint8)
        G = _centered_top_eigs(A, p, d_embed)
        g = G[iu]
        x = X[iu]
        num += float(g @ x)
        den += float(g @ g)
    if den <= 0.0:
        return 0.0
    return max(num / den, 0.0)


def spectral_estimate(
    graph: GraphSample,
    d: int,
    p: float,
    scale: float | None = None,
    calibration_seed: int = 0,
) -> GramMatrix:
    """Estimate the latent Gram matrix from the adjacency matrix alone.

    Centers by the known p, keeps the top-d eigenpairs (clipped at zero so
    the output is PSD), and multiplies by the calibration scale.  When
    ``scale`` is None a fresh held-out run is simulated here; sweeps fit
    it once per grid point instead.  For spherical latents the known unit
    diagonal is imposed by a congruence, which preserves positive
    semidefiniteness.
    """
    n = graph.n
    if not (isinstance(d, (int, np.integer)) and d >= 1):
        raise DomainError(f"embedding dimension must be a positive integer, got {d}")
    if d > n:
        raise DomainError(f"embedding dimension d={d} exceeds the graph order n={n}")
    if not (0.0 < p < 1.0):
        raise DomainError(f"density must lie in (0, 1), got {p}")
    G = _centered_top_eigs(graph.adjacency, p, int(d))
    if scale is None:
        cfg = LatentConfig(
            n=n,
            d=graph.latents.d,
            prior=Prior.SPHERE if graph.latents.spherical else Prior.GAUSSIAN,
            seed=calibration_seed,
        )
        scale = fit_calibration_scale(cfg, graph.kernel_threshold, p, d_embed=int(d))
    if scale < 0.0:
        raise DomainError(f"calibration scale must be nonnegative, got {scale}")
    X_hat = scale * G
    if graph.latents.spherical:
        dg = np.clip(np.diagonal(X_hat).copy(), _DIAG_FLOOR, None)
        X_hat = X_hat / np.sqrt(np.outer(dg, dg))
        np.fill_diagonal(X_hat, 1.0)
    X_hat = (X_hat + X_hat.T) / 2.0
    return GramMatrix(X_hat, rank_bound=min(int(d), n))


def coding_cost_bits(graph: GraphSample) -> tuple[float, float]:
    """(entropy budget, realized ideal code length) for the edge sequence, in bits.

    The budget is C(n,2) * h(p_hat) with the empirical density plugged in;
    the code length sums per-pair log-likelihoods under the i.i.d.
    Bernoulli(p_hat) model and adds the 2-bit arithmetic-coding overhead.
    The two are computed by independent routes on purpose.
    """
    p_hat = graph.realized_density
    if not (0.0 < p_hat < 1.0):
        raise DomainError(
            f"coding sanity needs a nondegenerate graph, realized density {p_hat}"
        )
    n = graph.n
    pairs = n * (n - 1) // 2
    k = graph.edge_count
    budget = pairs * nats_to_bits(float(binary_entropy(p_hat)))
    code = -(k * math.log2(p_hat) + (pairs - k) * math.log2(1.0 - p_hat)) + 2.0
    return budget, code


def _run_trial(
    point_index: int,
    trial: int,
    cfg: LatentConfig,
    tau: float,
    p: float,
    d_embed: int,
    scale: float,
) -> list[ExperimentRecord]:
    worker = (point_index << 20) | trial
    Z = sample_latent_rows(stream(cfg.seed, worker), cfg.n, cfg.d, cfg.prior)
    latents = LatentMatrix(Z, spherical=cfg.prior is Prior.SPHERE)
    graph = graph_from_latents(latents, tau, p)
    X_true = Z @ Z.T

    t0 = time.perf_counter()
    x_spec = spectral_estimate(graph, d_embed, p, scale=scale)
    loss_spec = gram_loss_L(X_true, x_spec.entries, cfg.d)
    t_spec = time.perf_counter() - t0

    t0 = time.perf_counter()
    x_triv = trivial_estimate(graph)
    loss_triv = gram_loss_L(X_true, x_triv.entries, cfg.d)
    t_triv = time.perf_counter() - t0

    common = dict(n=cfg.n, d=cfg.d, p=p, tau=tau, seed=worker)
    return [
        ExperimentRecord(
            estimator_name="spectral-topd",
            loss_L=loss_spec,
            runtime_seconds=t_spec,
            **common,
        ),
        ExperimentRecord(
            estimator_name="identity",
            loss_L=loss_triv,
            runtime_seconds=t_triv,
            **common,
        ),
    ]


def phase_sweep(
    grid: list[tuple[int, int, float]],
    trials: int,
    seed: int = 0,
    threads: int | None = None,
    prior: Prior | str = Prior.GAUSSIAN,
    tau_samples: int = 1_000_000,
) -> tuple[list[ExperimentRecord], list[SweepSummary]]:
    """Run `trials` independent (graph, estimate, loss) evaluations per point.

    Grid entries are (n, d, p).  The latent dimension d may exceed n; the
    spectral embedding is then capped at n (an n x n adjacency matrix has
    no more than n eigenpairs) while losses and the abscissa keep the true
    d.  Trials run on a thread pool with per-trial derived streams; the
    returned record order is deterministic regardless of scheduling.
    """
    if not grid:
        raise DomainError("sweep grid must be nonempty")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    prior = _coerce_prior(prior)
    for n, d, p in grid:
        # Constructing the config validates n and d early.
        LatentConfig(n=int(n), d=int(d), prior=prior, seed=seed)
        if n < 2:
            raise DomainError(f"graphs need at least 2 vertices, got n={n}")
        if not (0.0 < p < 1.0):
            raise DomainError(f"density must lie in (0, 1), got {p}")
        if n > MAX_GRAPH_N:
            raise DomainError(f"n={n} exceeds the dense-storage cap {MAX_GRAPH_N}")

    points = []
    for i, (n, d, p) in enumerate(grid):
        cfg = LatentConfig(n=int(n), d=int(d), prior=prior, seed=seed)
        tau = calibrate_threshold(
            int(d), float(p), prior, samples=tau_samples, seed=_point_seed(seed, i)
        )
        d_embed = min(int(d), int(n))
        scale = fit_calibration_scale(
            LatentConfig(n=int(n), d=int(d), prior=prior, seed=_point_seed(seed, i)),
            tau,
            float(p),
            d_embed=d_embed,
        )
        points.append((i, cfg, float(p), tau, d_embed, scale))

    results: dict[tuple[int, int], list[ExperimentRecord]] = {}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {
            pool.submit(_run_trial, i, t, cfg, tau, p, d_embed, scale): (i, t)
            for (i, cfg, p, tau, d_embed, scale) in points
            for t in range(trials)
        }
        for fut, key in futures.items():
            results[key] = fut.result()

    records: list[ExperimentRecord] = []
    summaries: list[SweepSummary] = []
    for i, cfg, p, tau, d_embed, scale in points:
        spec_losses = np.empty(trials)
        triv_losses = np.empty(trials)
        for t in range(trials):
            rec_pair = results[(i, t)]
            records.extend(rec_pair)
            spec_losses[t] = rec_pair[0].loss_L
            triv_losses[t] = rec_pair[1].loss_L
        h = float(binary_entropy(p))
        summaries.append(
            SweepSummary(
                n=cfg.n,
                d=cfg.d,
                p=p,
                tau=tau,
                abscissa=cfg.d / (cfg.n * h),
                trials=trials,
                spectral_mean_loss=float(spec_losses.mean()),
                spectral_stderr=_stderr(spec_losses),
                trivial_mean_loss=float(triv_losses.mean()),
                trivial_stderr=_stderr(triv_losses),
            )
        )
    return records, summaries


def _point_seed(seed: int, point_index: int) -> int:
    # Distinct 64-bit base seeds per grid point, stable across runs.
    return (seed * 0x9E3779B97F4A7C15 + point_index + 1) % (1 << 64)


def _stderr(x: np.ndarray) -> float:
    if x.size < 2:
        return 0.0
    return float(x.std(ddof=1) / math.sqrt(x.size))
