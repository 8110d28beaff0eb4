"""Command-line entry point.

Four subcommands share one philosophy: validated inputs, deterministic
machine-readable output (CSV or newline-delimited JSON, both carrying a
provenance header), and exit codes that scripts can branch on:

* 0 — success
* 1 — a verification suite ran and found violations
* 2 — usage or parameter validation error
* 3 — I/O failure
* 4 — internal assertion failure (a bug in this package)

Configuration precedence is CLI flags > config file > built-in defaults.
The config file is flat ``key=value`` text using the long option names
without dashes (see README).  Timing columns are written as 0.0 unless
``--timings`` is passed, so identical configurations produce byte-identical
artifacts.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .bounds import (
    BoundConstants,
    applicable_lower_bounds,
    wishart_differential_entropy,
)
from .errors import DomainError, ValidationError
from .report import (
    format_value,
    parse_config_file,
    provenance_dict,
    read_grid,
    render_csv,
    render_ndjson,
)
from .sampling import LatentConfig, Prior
from .verify import available_suites, verify_inequality_suite

__all__ = ["build_parser", "main"]

_DEMO_N = 400
_DEMO_DS = (5, 20, 80, 320, 1280)
_DEMO_PS = (0.05, 0.5)

_BOOL_TRUE = {"true", "1", "yes", "on"}
_BOOL_FALSE = {"false", "0", "no", "off"}


# ---------------------------------------------------------------------------
# parser construction


def _add_output_opts(sp: argparse.ArgumentParser, plot: bool = False) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="csv (default) or newline-delimited json")
    sp.add_argument("--output", default=None,
                    help="output path (phase-diagram: path stem); default stdout")
    sp.add_argument("--config", default=None,
                    help="flat key=value config file; CLI flags override it")
    if plot:
        sp.add_argument("--plot", action="store_true",
                        help="also render a figure next to the delimited output")


def _add_constant_opts(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("bound constants")
    g.add_argument("--c-star", type=float, default=0.01, dest="c_star",
                   help="small/middle regime split (default 0.01)")
    g.add_argument("--C0", type=float, default=16.0,
                   help="orthogonal covering constant (default 16)")
    g.add_argument("--c1", type=float, default=0.5,
                   help="net-resolution constant (default 0.5)")
    g.add_argument("--C", type=float, default=None,
                   help="override the combined covering ratio C0/c1^2")
    g.add_argument("--c", type=float, default=0.25,
                   help="spherical leading constant / distortion ceiling (default 0.25)")
    g.add_argument("--K", type=float, default=None,
                   help="quadratic slack coefficient; default derives it exactly")
    g.add_argument("--K1", type=float, default=None,
                   help="linear slack coefficient; default derives it exactly")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramrd",
        description="Gram-matrix rate-distortion bounds, oracles and experiments.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p_bounds = sub.add_parser(
        "bounds", help="evaluate every lower bound applicable at (n, d, D)"
    )
    p_bounds.add_argument("--n", type=int, default=None, help="number of latent rows")
    p_bounds.add_argument("--d", type=int, default=None, help="latent dimension")
    p_bounds.add_argument("--D", type=float, default=None, help="distortion level")
    p_bounds.add_argument("--grid", default=None,
                          help="CSV of n,d,D rows (columns may include prior)")
    p_bounds.add_argument("--prior", choices=[p.value for p in Prior],
                          default=Prior.GAUSSIAN.value)
    _add_constant_opts(p_bounds)
    _add_output_opts(p_bounds, plot=True)
    p_bounds.set_defaults(func=cmd_bounds)

    p_verify = sub.add_parser(
        "verify", help="run randomized inequality/moment verification suites"
    )
    p_verify.add_argument("--suite", default="all",
                          help="one of: " + ", ".join(available_suites()))
    p_verify.add_argument("--trials", type=int, default=None,
                          help="override the per-suite default trial count")
    p_verify.add_argument("--seed", type=int, default=0)
    _add_output_opts(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser(
        "oracle", help="numerical rate-distortion and entropy oracles"
    )
    p_oracle.add_argument("--kind", required=True,
                          choices=("ba-binary", "ba-gaussian", "wishart-entropy", "quantize"))
    p_oracle.add_argument("--p", type=float, default=0.5,
                          help="source bias for ba-binary (default 0.5)")
    p_oracle.add_argument("--D", type=float, default=None,
                          help="target distortion for the ba-* kinds")
    p_oracle.add_argument("--n", type=int, default=None)
    p_oracle.add_argument("--d", type=int, default=None)
    p_oracle.add_argument("--eta", type=float, default=None,
                          help="quantizer grid step (kind=quantize)")
    p_oracle.add_argument("--samples", type=int, default=1_000_000,
                          help="Monte Carlo samples (kind=wishart-entropy)")
    p_oracle.add_argument("--trials", type=int, default=200,
                          help="Monte Carlo trials (kind=quantize)")
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--prior", choices=[p.value for p in Prior],
                          default=Prior.GAUSSIAN.value)
    _add_output_opts(p_oracle, plot=True)
    p_oracle.set_defaults(func=cmd_oracle)

    p_phase = sub.add_parser(
        "phase-diagram", help="random-geometric-graph recovery sweep"
    )
    p_phase.add_argument("--grid", default=None,
                         help="CSV of n,d,p rows; default is the demo grid "
                              f"(n={_DEMO_N}, d in {_DEMO_DS}, p in {_DEMO_PS})")
    p_phase.add_argument("--trials", type=int, default=3,
                         help="independent trials per grid point (default 3)")
    p_phase.add_argument("--seed", type=int, default=0)
    p_phase.add_argument("--threads", type=int, default=None,
                         help="worker threads (default: hardware parallelism)")
    p_phase.add_argument("--prior", choices=[p.value for p in Prior],
                         default=Prior.GAUSSIAN.value)
    p_phase.add_argument("--samples", type=int, default=1_000_000,
                         help="Monte Carlo pairs for threshold calibration")
    p_phase.add_argument("--timings", action="store_true",
                         help="write measured runtimes instead of 0.0")
    _add_output_opts(p_phase, plot=True)
    p_phase.set_defaults(func=cmd_phase_diagram)

    return parser


# ---------------------------------------------------------------------------
# config file handling


def _expand_config(argv: list[str], parser: argparse.ArgumentParser) -> list[str]:
    """Insert config-file pairs as flags right after the subcommand.

    Later (explicit) flags win, which implements CLI > config > defaults
    without a second parsing pass.
    """
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                parser.error("--config needs a path")
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    with open(path, "r", encoding="utf-8") as fh:
        pairs = parse_config_file(fh.read())
    tokens: list[str] = []
    for key, value in pairs.items():
        if key in ("plot", "timings"):
            low = value.lower()
            if low in _BOOL_TRUE:
                tokens.append(f"--{key}")
            elif low not in _BOOL_FALSE:
                raise ValidationError(
                    f"config key {key!r} must be a boolean, got {value!r}"
                )
        else:
            tokens.append(f"--{key}={value}")
    return argv[:1] + tokens + argv[1:]


# ---------------------------------------------------------------------------
# shared output plumbing


def _provenance(args: argparse.Namespace) -> dict:
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "subcommand") and not callable(v)
    }
    return provenance_dict(args.subcommand, params)


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _figure_path(args: argparse.Namespace, suffix: str) -> str:
    if args.output:
        stem = os.path.splitext(args.output)[0]
    else:
        stem = f"gramrd-{args.subcommand}"
    return f"{stem}{suffix}"


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        label = args.subcommand
        kind = getattr(args, "kind", None)
        if kind:
            label += f" --kind {kind}"
        raise DomainError(f"{label} requires {', '.join(missing)}")


# ---------------------------------------------------------------------------
# bounds


def _constants_from_args(args: argparse.Namespace) -> BoundConstants:
    return BoundConstants(
        c_star=args.c_star,
        C0=args.C0,
        c1=args.c1,
        C=args.C,
        c=args.c,
        K=args.K,
        K_prime=args.K1,
    )


_BOUND_COLUMNS = (
    "bound", "regime", "n", "d", "D", "prior",
    "value_nats", "usable_value_nats", "valid", "terms", "failed_checks",
)


def cmd_bounds(args: argparse.Namespace) -> int:
    constants = _constants_from_args(args)
    if args.grid is not None:
        with open(args.grid, "r", encoding="utf-8") as fh:
            grid_rows = read_grid(fh.read())
        cases = []
        for row in grid_rows:
            try:
                cases.append(
                    (
                        int(row["n"]),
                        int(row["d"]),
                        float(row["D"]),
                        row.get("prior", args.prior) or args.prior,
                    )
                )
            except KeyError as e:
                raise ValidationError(f"grid row missing column {e}") from None
    else:
        _require(args, "n", "d", "D")
        cases = [(args.n, args.d, args.D, args.prior)]

    rows = []
    json_records = []
    profile_rows = []
    for n, d, D, prior in cases:
        reports = applicable_lower_bounds(n, d, D, constants, prior=prior)
        best_name, best_val = "none", 0.0
        for rep in reports:
            terms = ";".join(f"{k}={format_value(v)}" for k, v in rep.terms)
            failed = ";".join(name for name, ok, _ in rep.checks if not ok)
            rows.append(
                (
                    rep.bound_name, rep.regime.value, n, d, D, prior,
                    rep.value_nats, rep.usable_value_nats, rep.valid, terms, failed,
                )
            )
            rec = rep.to_json_dict()
            rec["record"] = "bound"
            json_records.append(rec)
            profile_rows.append((rep.bound_name, D, rep.usable_value_nats))
            if rep.valid and rep.usable_value_nats >= best_val:
                best_name, best_val = rep.bound_name, rep.usable_value_nats
        print(
            f"(n={n}, d={d}, D={format_value(float(D))}, {prior}) tightest: "
            f"{best_name} = {format_value(best_val)} nats",
            file=sys.stderr,
        )

    prov = _provenance(args)
    if args.format == "csv":
        text = render_csv(_BOUND_COLUMNS, rows, prov)
    else:
        text = render_ndjson(json_records, prov)
    _emit(text, args.output)
    if args.plot:
        from .plots import plot_bound_profile

        plot_bound_profile(profile_rows, _figure_path(args, ".png"))
    return 0


# ---------------------------------------------------------------------------
# verify


_VERIFY_COLUMNS = (
    "suite", "check", "passed", "observed", "expected", "tolerance", "detail",
)


def cmd_verify(args: argparse.Namespace) -> int:
    if args.trials is not None and args.trials < 1:
        raise DomainError(f"--trials must be >= 1, got {args.trials}")
    if args.suite == "all":
        names = [s for s in available_suites() if s != "all"]
    else:
        names = [args.suite]
    rows = []
    json_records = []
    all_passed = True
    for name in names:
        rep = verify_inequality_suite(name, trials=args.trials, seed=args.seed)
        all_passed = all_passed and rep.passed
        for c in rep.checks:
            rows.append(
                (rep.suite, c.name, c.passed, c.observed, c.expected, c.tolerance, c.detail)
            )
            rec = c.to_json_dict()
            rec.update(record="check", suite=rep.suite)
            json_records.append(rec)
        json_records.append(
            {
                "record": "suite-summary",
                "suite": rep.suite,
                "passed": rep.passed,
                "trials": rep.trials,
                "seed": rep.seed,
            }
        )
        n_pass = sum(1 for c in rep.checks if c.passed)
        print(
            f"suite {rep.suite}: {'PASS' if rep.passed else 'FAIL'} "
            f"({n_pass}/{len(rep.checks)} checks)",
            file=sys.stderr,
        )

    prov = _provenance(args)
    if args.format == "csv":
        text = render_csv(_VERIFY_COLUMNS, rows, prov)
    else:
        text = render_ndjson(json_records, prov)
    _emit(text, args.output)
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args: argparse.Namespace) -> int:
    from . import oracles
    from .specfun import binary_entropy

    prov = _provenance(args)
    plot_data = None

    if args.kind in ("ba-binary", "ba-gaussian"):
        _require(args, "D")
        if args.kind == "ba-binary":
            problem = oracles.binary_hamming_problem(args.p)
            hint = -math.log((1.0 - args.D) / args.D) if 0.0 < args.D < 0.5 else None
            point = oracles.solve_rd_at_distortion(problem, args.D, slope_hint=hint)
            ref = max(
                float(binary_entropy(args.p)) - float(binary_entropy(point.distortion)),
                0.0,
            )
        else:
            if args.D <= 0.0:
                raise DomainError(f"--D must be positive, got {args.D}")
            # Gap 1e-4 certifies the rate far beyond what the 401-point
            # discretization can resolve; tighter gaps cost minutes here.
            point = oracles.solve_rd_at_distortion(
                oracles.discretized_gaussian_problem(),
                args.D,
                ba_tol=1e-4,
                slope_hint=-1.0 / (2.0 * args.D),
            )
            ref = max(0.5 * math.log(1.0 / point.distortion), 0.0)
        columns = (
            "kind", "target_distortion", "slope", "rate_nats", "distortion",
            "reference_rate_nats", "rate_error_nats", "iterations",
            "converged", "duality_gap_bound",
        )
        rows = [
            (
                args.kind, args.D, point.slope, point.rate, point.distortion,
                ref, point.rate - ref, point.iterations,
                point.converged, point.duality_gap_bound,
            )
        ]
        plot_data = point
    elif args.kind == "wishart-entropy":
        _require(args, "n", "d")
        est = oracles.mc_differential_entropy_wishart(
            args.n, args.d, args.samples, seed=args.seed
        )
        closed = wishart_differential_entropy(args.n, args.d)
        z = (est.estimate - closed) / est.std_error if est.std_error > 0 else math.inf
        columns = (
            "kind", "n", "d", "samples_used", "rejected",
            "estimate_nats", "std_error", "closed_form_nats", "abs_error", "z_score",
        )
        rows = [
            (
                args.kind, args.n, args.d, est.samples_used, est.rejected,
                est.estimate, est.std_error, closed, abs(est.estimate - closed), z,
            )
        ]
    else:  # quantize
        _require(args, "n", "d", "eta")
        cfg = LatentConfig(n=args.n, d=args.d, prior=args.prior, seed=args.seed)
        point = oracles.quantization_upper_bound(cfg, args.eta, trials=args.trials)
        columns = (
            "kind", "n", "d", "prior", "grid_step", "levels",
            "rate_nats", "distortion", "distortion_stderr", "trials",
        )
        rows = [
            (
                args.kind, args.n, args.d, args.prior, args.eta,
                oracles.quantizer_levels(args.d, args.eta),
                point.rate, point.distortion, point.distortion_stderr, args.trials,
            )
        ]

    if args.format == "csv":
        text = render_csv(columns, rows, prov)
    else:
        records = [
            dict(zip(columns, row), record="oracle-point") for row in rows
        ]
        text = render_ndjson(records, prov)
    _emit(text, args.output)

    if args.plot and plot_data is not None:
        from .plots import plot_rd_points
        import numpy as np

        if args.kind == "ba-binary":
            dd = np.linspace(1e-4, 0.5, 200)
            rr = [
                max(float(binary_entropy(args.p)) - float(binary_entropy(x)), 0.0)
                for x in dd
            ]
        else:
            dd = np.linspace(1e-3, 1.0, 200)
            rr = [max(0.5 * math.log(1.0 / x), 0.0) for x in dd]
        plot_rd_points([plot_data], _figure_path(args, ".png"), reference=(dd, rr))
    return 0


# ---------------------------------------------------------------------------
# phase-diagram


_PHASE_COLUMNS = ("n", "d", "p", "tau", "seed", "estimator", "loss_L", "runtime_s")


def cmd_phase_diagram(args: argparse.Namespace) -> int:
    from .rgg import phase_sweep

    if args.grid is not None:
        with open(args.grid, "r", encoding="utf-8") as fh:
            grid_rows = read_grid(fh.read())
        try:
            grid = [(int(r["n"]), int(r["d"]), float(r["p"])) for r in grid_rows]
        except KeyError as e:
            raise ValidationError(f"grid row missing column {e}") from None
    else:
        grid = [(_DEMO_N, d, p) for p in _DEMO_PS for d in _DEMO_DS]

    records, summaries = phase_sweep(
        grid,
        trials=args.trials,
        seed=args.seed,
        threads=args.threads,
        prior=args.prior,
        tau_samples=args.samples,
    )

    stem = args.output if args.output else "phase-diagram"
    stem = os.path.splitext(stem)[0] if os.path.splitext(stem)[1] else stem
    records_path = f"{stem}.records.{'csv' if args.format == 'csv' else 'ndjson'}"
    summary_path = f"{stem}.summary.json"

    prov = _provenance(args)
    rows = [
        (
            r.n, r.d, r.p, r.tau, r.seed, r.estimator_name, r.loss_L,
            r.runtime_seconds if args.timings else 0.0,
        )
        for r in records
    ]
    if args.format == "csv":
        text = render_csv(_PHASE_COLUMNS, rows, prov)
    else:
        records_json = [
            dict(zip(_PHASE_COLUMNS, row), record="trial") for row in rows
        ]
        text = render_ndjson(records_json, prov)
    _emit(text, records_path)

    summary_records = [dict(s.to_json_dict(), record="summary") for s in summaries]
    _emit(render_ndjson(summary_records, prov), summary_path)

    # Monotonicity in d is an expected trend, not a guarantee; flag only.
    by_np: dict[tuple[int, float], list] = {}
    for s in summaries:
        by_np.setdefault((s.n, s.p), []).append(s)
    for (n, p), group in sorted(by_np.items()):
        group = sorted(group, key=lambda s: s.d)
        means = [g.spectral_mean_loss for g in group]
        if any(b < a for a, b in zip(means, means[1:])):
            print(
                f"note: mean loss not monotone in d at (n={n}, p={p:g}); "
                "treat as Monte Carlo noise unless systematic",
                file=sys.stderr,
            )

    if args.plot:
        from .plots import plot_phase_summary

        plot_phase_summary(summaries, f"{stem}.png")
    print(f"wrote {records_path} and {summary_path}")
    return 0


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv, parser)
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValidationError, DomainError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3
    except AssertionError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
