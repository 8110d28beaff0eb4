"""File-based figure rendering for the CLI report paths.

Uses the Agg backend only; nothing here opens a window.  PNGs are written
without the Software metadata tag so identical runs produce identical
bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

__all__ = ["plot_bound_profile", "plot_phase_summary", "plot_rd_points"]

_SAVE_KW = dict(dpi=120, metadata={"Software": None})


def plot_phase_summary(summaries, path: str) -> None:
    """Mean loss vs d/(n*h(p)), one series per density, trivial baseline dashed."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    by_p: dict[float, list] = {}
    for s in summaries:
        by_p.setdefault(s.p, []).append(s)
    for p, rows in sorted(by_p.items()):
        rows = sorted(rows, key=lambda s: s.abscissa)
        xs = [s.abscissa for s in rows]
        ax.errorbar(
            xs,
            [s.spectral_mean_loss for s in rows],
            yerr=[s.spectral_stderr for s in rows],
            marker="o",
            label=f"spectral, p={p:g}",
        )
        ax.plot(
            xs,
            [s.trivial_mean_loss for s in rows],
            linestyle="--",
            marker=".",
            label=f"identity, p={p:g}",
        )
    ax.axvline(1.0, color="gray", linewidth=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("d / (n h(p))  [h in nats]")
    ax.set_ylabel("mean Gram loss")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_rd_points(points, path: str, reference=None) -> None:
    """Rate vs distortion for oracle output; optional analytic reference curve."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ds = [pt.distortion for pt in points]
    rs = [pt.rate for pt in points]
    ax.plot(ds, rs, marker="o", linestyle="", label="oracle points")
    if reference is not None:
        ref_d, ref_r = reference
        ax.plot(ref_d, ref_r, linestyle="-", linewidth=1.0, label="closed form")
    ax.set_xlabel("distortion")
    ax.set_ylabel("rate (nats)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_bound_profile(rows, path: str) -> None:
    """Bound value vs D on a log-x axis, one series per bound name.

    ``rows`` is an iterable of (bound_name, D, value_nats).
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series: dict[str, list] = {}
    for name, D, value in rows:
        series.setdefault(name, []).append((D, value))
    for name, pts in sorted(series.items()):
        pts = sorted(pts)
        ax.plot([q[0] for q in pts], [q[1] for q in pts], marker=".", label=name)
    ax.set_xscale("log")
    ax.set_xlabel("distortion D")
    ax.set_ylabel("lower bound (nats)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
