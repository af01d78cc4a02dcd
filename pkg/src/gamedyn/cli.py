"""Command-line front end.

Subcommands: ``generate`` (problem JSON), ``solve`` (trajectory CSV +
certificate JSON + convergence figure), ``analyze`` (spectral rate
predictions JSON), ``lowerbound`` (lower-bound report JSON) and
``experiment`` (ratio CSV + manifest + histogram figures).

Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import games, rates
from .errors import GamedynError
from .experiments import CI_PAIRS, PAPER_PAIRS, ExperimentSpec, run_experiment
from .lowerbounds import verify_lower_bound
from .solvers import MethodKind, SolverConfig, default_eta, run

PROBLEMS = ("bilinear", "in-between", "separable", "random-monotone", "quadratic")
METHODS = {
    "gd": MethodKind.GRADIENT,
    "eg": MethodKind.K_EXTRAPOLATION,
    "kextra": MethodKind.K_EXTRAPOLATION,
    "og": MethodKind.OPTIMISTIC,
    "co": MethodKind.CONSENSUS,
    "prox": MethodKind.PROXIMAL,
}


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip() != ""]


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=PROBLEMS, help="problem generator")
    p.add_argument("--problem-file", type=Path, help="load a problem JSON instead of generating")
    p.add_argument("--dim", type=int, default=2, help="m for bilinear, d for quadratic")
    p.add_argument("--d1", type=int, default=10)
    p.add_argument("--d2", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--alphas", type=_float_list, default=None)
    p.add_argument("--betas", type=_float_list, default=None)
    p.add_argument("--sigmas", type=_float_list, default=None)
    p.add_argument("--spectrum", type=_float_list, default=None)
    p.add_argument("--seed", type=int, default=0)


def _build_problem(args) -> games.GameProblem:
    if args.problem_file is not None:
        with open(args.problem_file) as fh:
            return games.problem_from_json_dict(json.load(fh))
    if args.problem is None:
        raise GamedynError("either --problem or --problem-file is required")
    if args.problem == "bilinear":
        rng = np.random.default_rng(args.seed)
        a = rng.standard_normal((args.dim, args.dim))
        return games.bilinear_game(a)
    if args.problem == "in-between":
        return games.in_between_game(args.epsilon)
    if args.problem == "separable":
        if args.alphas is None or args.betas is None or args.sigmas is None:
            raise GamedynError("separable needs --alphas, --betas and --sigmas")
        return games.adversarial_separable_game(args.alphas, args.betas, args.sigmas)
    if args.problem == "random-monotone":
        return games.random_monotone_game(args.d1, args.d2, seed=args.seed)
    if args.problem == "quadratic":
        spectrum = args.spectrum if args.spectrum is not None else list(range(1, args.dim + 1))
        return games.quadratic_game(spectrum)
    raise GamedynError(f"unknown problem {args.problem!r}")


def _write_json(doc, path: Path | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")


def _cmd_generate(args) -> int:
    problem = _build_problem(args)
    _write_json(problem.to_json_dict(), args.out)
    return 0


def _solve_certificate(args, method, problem, traj, eta, cfg):
    c = games.constants(problem)
    inputs = {
        "method": args.method,
        "eta": eta,
        "k": cfg.k,
        "mu": c.mu,
        "gamma": c.gamma,
        "L": c.lipschitz,
        "l_h_sq": c.l_h_sq,
    }
    window = max(1, min(args.window, len(traj) - 1))
    if method is MethodKind.GRADIENT:
        bounds = rates.gd_spectral_bounds(problem.spectrum())
        inputs["convergent_regime"] = bounds.convergent
        return rates.certify(
            traj, bounds.upper, window=window, theorem="gd_upper", inputs=inputs
        )
    if method is MethodKind.K_EXTRAPOLATION:
        if args.method == "eg" and eta <= 1.0 / (4.0 * c.lipschitz) * (1 + 1e-12):
            predicted = rates.global_rate(c, MethodKind.K_EXTRAPOLATION, eta)
            theorem = "eg_global"
        else:
            predicted = rates.keg_rate_bound(problem.spectrum(), eta, cfg.k)
            theorem = "keg_general"
        return rates.certify(traj, predicted, window=window, theorem=theorem, inputs=inputs)
    if method is MethodKind.OPTIMISTIC:
        predicted = rates.global_rate(c, MethodKind.OPTIMISTIC, eta)
        return rates.certify(
            traj, predicted, mode="envelope", theorem="og_envelope", inputs=inputs
        )
    if method is MethodKind.CONSENSUS:
        predicted = rates.global_rate(c, MethodKind.CONSENSUS)
        return rates.certify(
            traj, predicted, window=window, metric="h", theorem="co_global", inputs=inputs
        )
    predicted = rates.global_rate(c, MethodKind.PROXIMAL, eta)
    return rates.certify(traj, predicted, window=window, theorem="proximal_global", inputs=inputs)


def _cmd_solve(args) -> int:
    problem = _build_problem(args)
    method = METHODS[args.method]
    k = 2 if args.method == "eg" else args.k
    eta = None if args.eta in (None, "auto") else float(args.eta)
    cfg = SolverConfig(
        eta=eta,
        k=k,
        alpha=args.alpha,
        beta=args.beta,
        max_steps=args.steps,
        stop_tol=args.stop_tol,
    )
    if eta is None and method is not MethodKind.CONSENSUS:
        eta = default_eta(method, problem)
        cfg.eta = eta
    traj = run(method, problem, cfg, seed=args.seed)
    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    traj_path = out_dir / "trajectory.csv"
    traj.to_csv(traj_path)
    cert = _solve_certificate(args, method, problem, traj, eta, cfg)
    cert_doc = cert.to_json_dict()
    cert_doc["diverged"] = traj.diverged
    _write_json(cert_doc, out_dir / "certificate.json")
    written = [traj_path, out_dir / "certificate.json"]
    if not args.no_figures:
        from . import plots

        written.append(
            plots.trajectory_figure(
                traj, out_dir / "trajectory.png", title=f"{args.method} on {args.problem or 'file'}"
            )
        )
    print(
        f"{args.method}: steps={len(traj) - 1} diverged={traj.diverged} "
        f"observed={cert.observed:.6g} predicted={cert.predicted:.6g} satisfied={cert.satisfied}"
    )
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_analyze(args) -> int:
    problem = _build_problem(args)
    spectrum = problem.spectrum()
    stats = rates.spectrum_stats(spectrum)
    method = METHODS[args.method]
    k = 2 if args.method == "eg" else args.k
    predictions = []
    if method is MethodKind.GRADIENT:
        b = rates.gd_spectral_bounds(spectrum)
        predictions.append(rates.SpectralRatePrediction("gd_upper", b.eta, b.upper, stats))
        predictions.append(rates.SpectralRatePrediction("gd_lower", b.eta, b.lower, stats))
    elif method is MethodKind.K_EXTRAPOLATION:
        eta = rates.keg_eta_cap(spectrum, k) if args.eta in (None, "auto") else float(args.eta)
        predictions.append(
            rates.SpectralRatePrediction(
                "keg_general", eta, rates.keg_rate_bound(spectrum, eta, k), stats
            )
        )
        ref_eta = 1.0 / (4.0 * stats.max_abs)
        predictions.append(
            rates.SpectralRatePrediction(
                "keg_simplified", ref_eta, rates.keg_simplified_bound(spectrum), stats
            )
        )
        if problem.provenance.get("generator") == "bilinear":
            predictions.append(
                rates.SpectralRatePrediction(
                    "bilinear_corollary",
                    ref_eta,
                    1.0 - stats.min_abs**2 / (64.0 * stats.max_abs**2),
                    stats,
                )
            )
    elif method is MethodKind.PROXIMAL:
        eta = 1.0 if args.eta in (None, "auto") else float(args.eta)
        predictions.append(
            rates.SpectralRatePrediction(
                "proximal_exact", eta, rates.proximal_radius_sq(spectrum, eta), stats
            )
        )
    else:
        raise GamedynError(f"analyze supports gd, eg, kextra and prox, not {args.method!r}")
    _write_json([p.to_json_dict() for p in predictions], args.out)
    return 0


def _cmd_lowerbound(args) -> int:
    report = verify_lower_bound(args.mu, args.L, args.k, kind=args.kind, seed=args.seed)
    _write_json(report.to_json_dict(), args.out)
    if args.out is not None:
        print(
            f"lowerbound {args.kind} k={args.k}: floor={report.theorem_floor:.6g} "
            f"minimax={report.numeric_minimax_rho:.6g} consistent={report.consistent}"
        )
    return 0


def _cmd_experiment(args) -> int:
    if args.pairs is not None:
        pairs = []
        for token in args.pairs.split(","):
            d1, d2 = token.strip().split("vs")
            pairs.append((int(d1), int(d2)))
    else:
        pairs = list(PAPER_PAIRS if args.preset == "paper" else CI_PAIRS)
    spec = ExperimentSpec(
        name=args.name, pairs=pairs, trials=args.trials, seed=args.seed, out_dir=args.out_dir
    )
    result = run_experiment(spec)
    written = [result.csv_path, result.manifest_path]
    if not args.no_figures:
        from . import plots

        written.extend(plots.ratio_histograms(result.columns, spec.out_dir))
    direction = json.loads(result.manifest_path.read_text())["direction_report"]
    print(
        f"experiment {spec.name}: balanced mean={direction['balanced_mean']:.4f} "
        f"skewed mean={direction['skewed_mean']:.4f} "
        f"expected direction holds={direction['expected_direction_holds']}"
    )
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamedyn",
        description="Gradient-based methods for differentiable games: "
        "solve, analyze rates, verify lower bounds, run experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="emit a problem as JSON")
    _add_problem_args(p_gen)
    p_gen.add_argument("--out", type=Path, default=None)
    p_gen.set_defaults(func=_cmd_generate)

    p_solve = sub.add_parser("solve", help="run a method; write trajectory and certificate")
    _add_problem_args(p_solve)
    p_solve.add_argument("--method", choices=sorted(METHODS), required=True)
    p_solve.add_argument("--eta", default="auto", help="step size or 'auto'")
    p_solve.add_argument("--k", type=int, default=2, help="extrapolation count for kextra")
    p_solve.add_argument("--alpha", type=float, default=None)
    p_solve.add_argument("--beta", type=float, default=None)
    p_solve.add_argument("--steps", type=int, default=1000)
    p_solve.add_argument("--stop-tol", type=float, default=0.0)
    p_solve.add_argument("--window", type=int, default=50)
    p_solve.add_argument("--out-dir", type=Path, default=Path("gamedyn-out"))
    p_solve.add_argument("--no-figures", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_an = sub.add_parser("analyze", help="spectral rate predictions for a problem/method")
    _add_problem_args(p_an)
    p_an.add_argument("--method", choices=("gd", "eg", "kextra", "prox"), required=True)
    p_an.add_argument("--eta", default="auto")
    p_an.add_argument("--k", type=int, default=2)
    p_an.add_argument("--out", type=Path, default=None)
    p_an.set_defaults(func=_cmd_analyze)

    p_lb = sub.add_parser("lowerbound", help="build and verify a lower-bound instance")
    p_lb.add_argument("--k", type=int, required=True)
    p_lb.add_argument("--mu", type=float, required=True, help="mu (convex) or gamma (bilinear)")
    p_lb.add_argument("--L", type=float, required=True)
    p_lb.add_argument("--kind", choices=("convex", "bilinear"), default="convex")
    p_lb.add_argument("--seed", type=int, default=0)
    p_lb.add_argument("--out", type=Path, default=None)
    p_lb.set_defaults(func=_cmd_lowerbound)

    p_exp = sub.add_parser("experiment", help="improvement-ratio study")
    p_exp.add_argument("--name", default="improvement_ratio")
    p_exp.add_argument("--pairs", default=None, help='e.g. "450vs50,350vs150,250vs250"')
    p_exp.add_argument("--preset", choices=("paper", "ci"), default="ci")
    p_exp.add_argument("--trials", type=int, default=500)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--out-dir", type=Path, default=Path("gamedyn-out"))
    p_exp.add_argument("--no-figures", action="store_true")
    p_exp.set_defaults(func=_cmd_experiment)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Optional --config FILE supplies defaults for the chosen subcommand."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        parser.error("--config needs a file argument")
    with open(argv[idx + 1]) as fh:
        config = json.load(fh)
    rest = argv[:idx] + argv[idx + 2:]
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for name, sub in action.choices.items():
            if rest and rest[0] == name:
                known = {a.dest for a in sub._actions}  # noqa: SLF001
                unknown = set(config) - known
                if unknown:
                    parser.error(f"unknown config keys: {sorted(unknown)}")
                sub.set_defaults(**{k: _coerce_config(sub, k, v) for k, v in config.items()})
    return rest


def _coerce_config(sub: argparse.ArgumentParser, key: str, value):
    for action in sub._actions:  # noqa: SLF001
        if action.dest == key and action.type is not None and isinstance(value, str):
            return action.type(value)
    if key in ("out", "out_dir", "problem_file") and value is not None:
        return Path(value)
    return value


def cli_main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GamedynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
