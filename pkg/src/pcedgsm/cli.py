"""Command-line interface: ``pcedgsm {fit,analyze,reference,morris,study,report}``.

Exit status is 0 on success, 2 for configuration or input errors and 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .benchmarks import Benchmark, linear_benchmark, load_oo_data, morris_benchmark, oakley_benchmark
from .errors import DegenerateModelError, IllConditionedError, UndefinedIndicesError, UnderdeterminedError
from .inputmodel import Design, InputModel, sample, to_standard
from .pce import PCEModel, fit_lar, fit_least_squares, total_degree_set
from .reference import CountingModel, dgsm_mc, morris_screening, sobol_mc
from .sensitivity import sensitivity_report
from .study import DEFAULT_DEGREE, StudyConfig, StudyError, StudyReport, emit_report, render_report, run_study

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
NUMERIC_ERRORS = (
    UnderdeterminedError, IllConditionedError, UndefinedIndicesError, DegenerateModelError,
    FloatingPointError, np.linalg.LinAlgError,
)


class ConfigError(Exception):
    pass


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_model_args(p, with_file=False):
    choices = ["morris", "oakley", "linear"] + (["file"] if with_file else [])
    p.add_argument("--model", choices=choices, default="morris")
    p.add_argument("--oo-data", help="Oakley-O'Hagan coefficient CSV (18 rows x 15 columns)")
    p.add_argument("--linear-coefficients", type=_floats, default=(1.0, 2.0, 3.0, 4.0, 5.0),
                   help="comma-separated slopes of the linear Gaussian model")


def _benchmark(args) -> Benchmark:
    if args.model == "morris":
        return morris_benchmark()
    if args.model == "linear":
        return linear_benchmark(args.linear_coefficients)
    if args.model == "oakley":
        if not args.oo_data:
            raise ConfigError("--model oakley needs --oo-data PATH")
        return oakley_benchmark(load_oo_data(args.oo_data))
    raise ConfigError(f"model {args.model!r} is not available for this command")


def _write(text: str, out) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _load_file_model(args):
    if not (args.design and args.responses and args.marginals):
        raise ConfigError("--model file needs --design, --responses and --marginals")
    marginals = json.loads(Path(args.marginals).read_text(encoding="utf-8"))
    model = InputModel.from_dicts(marginals)
    x = np.loadtxt(args.design, delimiter=",", ndmin=2)
    y = np.loadtxt(args.responses, delimiter=",", ndmin=1)
    return model, Design(to_standard(model, x), args.seed, "file"), y


def cmd_fit(args) -> int:
    if args.model == "file":
        model, design, y = _load_file_model(args)
    else:
        bench = _benchmark(args)
        model = bench.input
        design = sample(model, args.n, args.scheme, args.seed)
        y = bench(design.physical(model))
    degree = args.degree if args.degree is not None else DEFAULT_DEGREE.get(args.model, 3)
    basis = total_degree_set(model.dim, degree)
    fit = fit_lar if args.method == "lar" else fit_least_squares
    _write(fit(design, y, basis, model).to_json() + "\n", args.out)
    return 0


def cmd_analyze(args) -> int:
    pce = PCEModel.from_json(Path(args.pce).read_text(encoding="utf-8"))
    rep = sensitivity_report(pce)
    _write(rep.to_csv() if args.format == "csv" else rep.to_json() + "\n", args.out)
    return 0


def cmd_reference(args) -> int:
    bench = _benchmark(args)
    f = CountingModel(bench.func, bench.dim)
    sob = sobol_mc(f, bench.input, args.n, args.seed)
    der = dgsm_mc(f, bench.input, args.n, args.h, args.seed)
    doc = {
        "model": bench.name,
        "n": args.n,
        "seed": args.seed,
        "mean": sob.mean,
        "variance": sob.variance,
        "variables": [
            {"name": name, "S_first": float(sob.s_first[i]), "S_total": float(sob.s_total[i]),
             "nu": float(der.nu[i]), "nu_se": float(der.nu_se[i]),
             "S_dgsm": float(der.dgsm[i]), "S_dgsm_se": float(der.dgsm_se[i])}
            for i, name in enumerate(bench.names)
        ],
        "evaluations": f.calls,
    }
    _write(json.dumps(doc, indent=1) + "\n", args.out)
    return 0


def cmd_morris(args) -> int:
    bench = _benchmark(args)
    res = morris_screening(bench, bench.input, args.n, args.delta, args.seed)
    doc = {
        "model": bench.name,
        "n": args.n,
        "delta": args.delta,
        "seed": args.seed,
        "variables": [
            {"name": name, "mu": float(res.mu[i]), "mu_star": float(res.mu_star[i]),
             "sigma": float(res.sigma[i])}
            for i, name in enumerate(bench.names)
        ],
        "evaluations": res.evaluations,
    }
    _write(json.dumps(doc, indent=1) + "\n", args.out)
    return 0


def cmd_study(args) -> int:
    cfg = {}
    if args.config:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    overrides = {
        "model": args.model, "n": args.n, "degree": args.degree, "method": args.method,
        "replications": args.replications, "seed": args.seed, "scheme": args.scheme,
        "mc_n": args.mc_n, "morris_n": args.morris_n, "oo_data": args.oo_data,
        "linear_coefficients": args.linear_coefficients,
    }
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    if cfg.get("model") == "file":
        raise ConfigError("studies need a model that can be evaluated; 'file' is fit-only")
    try:
        config = StudyConfig.from_dict(cfg)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    report = run_study(config, workers=args.workers)
    _write(render_report(report, args.format), args.out)
    return 0


def cmd_report(args) -> int:
    report = StudyReport.from_json(Path(args.input).read_text(encoding="utf-8"))
    emit_report(report, args.format, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcedgsm", description="PCE-based Sobol' and DGSM sensitivity analysis")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a PCE surrogate and write it as JSON")
    _add_model_args(p, with_file=True)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--degree", type=int)
    p.add_argument("--method", choices=["ols", "lar"], default="lar")
    p.add_argument("--scheme", choices=["lhs", "iid"], default="lhs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--design", help="file model: CSV of original-space inputs")
    p.add_argument("--responses", help="file model: CSV column of responses")
    p.add_argument("--marginals", help="file model: JSON list of marginals")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("analyze", help="Sobol' indices and DGSM of a fitted PCE")
    p.add_argument("--pce", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reference", help="Monte Carlo Sobol' indices and DGSM")
    _add_model_args(p)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("morris", help="Morris elementary-effects screening")
    _add_model_args(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_morris)

    p = sub.add_parser("study", help="replicated PCE study with confidence intervals")
    p.add_argument("--config", help="JSON StudyConfig; flags override its entries")
    p.add_argument("--model", choices=["morris", "oakley", "linear", "file"])
    p.add_argument("--oo-data")
    p.add_argument("--linear-coefficients", type=_floats)
    p.add_argument("--n", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--method", choices=["ols", "lar"])
    p.add_argument("--replications", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--scheme", choices=["lhs", "iid"])
    p.add_argument("--mc-n", type=int, help="Monte Carlo reference sample size (0 = off)")
    p.add_argument("--morris-n", type=int, help="Morris screening base points (0 = off)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv", "svg"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("report", help="render a study JSON report as json/csv/svg")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["json", "csv", "svg"], default="svg")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StudyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(exc.cause, NUMERIC_ERRORS) else EXIT_CONFIG
    except NUMERIC_ERRORS as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
