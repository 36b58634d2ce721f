"""``cevlab`` command line: simulate, tailchain, limits, estimate, verify.

Exit codes: 0 success or pass, 1 experiment fail, 2 usage error,
3 inconclusive.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import estimate, limits, verify
from ._parallel import default_threads
from .errors import DomainError, InsufficientDataError, SpecError
from .models import MODEL_TYPES, ensure_valid, read_block_csv, simulate_block, simulate_top, spec_to_dict
from .randomness import CenteredLogParetoLaw, LogNormalLaw, RandomStream
from .tailchain import TailChainSpec, simulate_tail_chain, tail_chain_for

log = logging.getLogger("cevlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_VERDICT_EXIT = {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}

GLOBAL_DEFAULTS = {"seed": 42, "threads": None, "out": None}
DEFAULTS = {
    "model": "expar1",
    "h": 1,
    "n": 100_000,
}


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------- parser

S = argparse.SUPPRESS


def _add_globals(p):
    p.add_argument("--seed", type=int, default=S, help="master seed (default 42; env CEVLAB_SEED; the flag wins)")
    p.add_argument("--threads", type=int, default=S, help="worker threads (default: available cores); never changes results")
    p.add_argument("--out", default=S, help="output path (stdout when omitted)")
    p.add_argument("--config", default=S, help="JSON file of option values; explicit flags take precedence")


def _add_model(p):
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=sorted(MODEL_TYPES), default=S, help="model family (default expar1)")
    g.add_argument("--alpha", type=float, default=S, help="tail index of the innovation exp(eps) or of X_0 (marginal tail index)")
    g.add_argument("--phi", type=float, default=S, help="AR coefficient; the lag-h scaling exponent is kappa_h = phi^h")
    g.add_argument("--eta", type=float, default=S, help="switch probability; the tail chain is absorbed at zero with G({0}) = eta")
    g.add_argument("--r-mu", dest="r_mu", type=float, default=S, help="log-mean of the switching multiplier R")
    g.add_argument("--r-sigma", dest="r_sigma", type=float, default=S, help="log-sd of the switching multiplier R")
    g.add_argument("--rule", choices=["geometric", "long_memory", "explicit"], default=S, help="linear-model coefficients; kappa_h = phi_h")
    g.add_argument("--c", type=float, default=S, help="long-memory scale c in phi_j = c (j+1)^-gamma, or the exponent c of exp(c xi^2)")
    g.add_argument("--gamma", type=float, default=S, help="long-memory decay; square summability needs gamma > 1/2")
    g.add_argument("--coeffs", type=_floats, default=S, help="comma list phi_1,phi_2,... (explicit rule) or leverage c_1,c_2,... (kappa_h = c_h)")
    g.add_argument("--truncation", type=int, default=S, help="series truncation J of the stationary presample")
    g.add_argument("--z-law", dest="z_law", choices=["gaussian", "student_t"], default=S, help="light-tailed Z of the heavy-volatility SV model")
    g.add_argument("--z-df", dest="z_df", type=float, default=S, help="student_t degrees of freedom (must exceed alpha)")
    g.add_argument("--z-alpha", dest="z_alpha", type=float, default=S, help="tail index of Z; SV models with heavy innovations have kappa_h = 0")
    g.add_argument("--vol-mean", dest="vol_mean", type=float, default=S, help="stationary mean of log sigma")
    g.add_argument("--vol-rho", dest="vol_rho", type=float, default=S, help="AR(1) coefficient of log sigma")
    g.add_argument("--vol-sd", dest="vol_sd", type=float, default=S, help="stationary sd of log sigma")
    g.add_argument("--z-sign", dest="z_sign", choices=["positive", "symmetric"], default=S, help="sign of the heavy Z")
    g.add_argument("--ar1-rho", dest="ar1_rho", type=float, default=S, help="Gaussian AR(1) coefficient of the negative control")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common)
    parser = argparse.ArgumentParser(prog="cevlab", description="Conditional extreme value toolkit for heavy-tailed time series.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate (X_0, ..., X_h) paths to CSV", description="simulate (X_0, ..., X_h) paths to CSV")
    _add_model(p)
    p.add_argument("--h", type=int, default=S, help="horizon h >= 1")
    p.add_argument("--n", type=int, default=S, help="number of replicates")
    p.add_argument("--top", type=int, default=S, help="keep only the TOP rows with the largest X_0")

    p = sub.add_parser("tailchain", parents=[common], help="simulate the tail chain Y_t = Y_{t-1}^kappa W_t", description="simulate the tail chain Y_t = Y_{t-1}^kappa W_t")
    _add_model(p)
    p.add_argument("--kappa", type=float, default=S, help="per-step exponent; overrides the model's phi")
    p.add_argument("--w-law", dest="w_law", choices=["centered-log-pareto", "lognormal"], default=S, help="law G of W (default from the model)")
    p.add_argument("--absorb-prob", dest="absorb_prob", type=float, default=S, help="G({0}): absorption probability per step")
    p.add_argument("--h", type=int, default=S, help="horizon")
    p.add_argument("--n", type=int, default=S, help="number of paths")

    p = sub.add_parser("limits", parents=[common], help="evaluate limit laws Psi_h(y) = nu_h([1,y_0] x prod [-inf,y_j]) on a grid", description="evaluate limit laws Psi_h(y) = nu_h([1,y_0] x prod [-inf,y_j]) on a grid")
    _add_model(p)
    p.add_argument("--h", type=int, default=S, help="lag horizon")
    p.add_argument("--grid", nargs="+", default=S, help="axis values such as y0=inf y1=0.5,1,2 (cartesian product)")
    p.add_argument("--quantity", choices=["cdf", "moment", "product-constant"], default=S,
                   help="cdf (default), the moment limit lim E[X_h/b_h(x) | X_0 > x] or the product tail constant E[J_h^(alpha/(1+kappa_h))]")
    p.add_argument("--n-inner", dest="n_inner", type=int, default=S, help="inner Monte Carlo sample size")
    p.add_argument("--method", choices=["tilted", "plain"], default=S, help="inner sampler for the linear model")

    p = sub.add_parser("estimate", parents=[common], help="estimators on a PathBlock CSV (or a fresh simulation)", description="estimators on a PathBlock CSV (or a fresh simulation)")
    _add_model(p)
    p.add_argument("--input", default=S, help="PathBlock CSV with header x0,...,xh")
    p.add_argument("--estimator", choices=["hill", "kappa", "cte", "cdf"], default=S, help="which estimator to run (default hill)")
    p.add_argument("--h", type=int, default=S, help="horizon when simulating")
    p.add_argument("--n", type=int, default=S, help="replicates when simulating")
    p.add_argument("--lag", type=int, default=S, help="lag h of the estimated quantity")
    p.add_argument("--column", type=int, default=S, help="hill: column to use (default 0)")
    p.add_argument("--product", action="store_true", default=S, help="hill: use X_0 X_lag, whose tail index is alpha/(1+kappa_h)")
    p.add_argument("--k", type=int, default=S, help="hill: number of upper order statistics (default floor(2 n^0.6), at most n/10)")
    p.add_argument("--levels", type=_floats, default=S, help="kappa/cte: quantile grid for the median regression")
    p.add_argument("--fit-level", dest="fit_level", type=float, default=S, help="cte: level where m_hat is fitted")
    p.add_argument("--predict-level", dest="predict_level", type=float, default=S, help="cte: level x where CTE^SP(x) = x^kappa_hat m_hat is evaluated")
    p.add_argument("--q", type=float, default=S, help="cdf: conditioning quantile level")
    p.add_argument("--kappa", type=float, default=S, help="cdf: scaling exponent for b(x) = x^kappa")
    p.add_argument("--y", type=float, default=S, help="cdf: evaluation point")
    p.add_argument("--absolute", action="store_true", default=S, help="kappa: medians of |X_h| (symmetric conditional laws)")

    p = sub.add_parser("verify", parents=[common], help="run an experiment or the acceptance suite", description="run an experiment or the acceptance suite")
    _add_model(p)
    p.add_argument("--suite", choices=["paper"], default=S, help="run every acceptance experiment and print a summary table")
    p.add_argument("--only", type=_ints, default=S, help="suite: comma list of criterion numbers")
    p.add_argument("--kind", choices=verify.KINDS, default=S, help="experiment kind")
    p.add_argument("--h", type=int, default=S, help="lag horizon")
    p.add_argument("--n", type=int, default=S, help="replicates")
    p.add_argument("--q", type=float, default=S, help="conditioning quantile level (threshold x = empirical q-quantile of X_0)")
    p.add_argument("--tol", type=float, default=S, help="tolerance for every distance")
    p.add_argument("--k", type=int, default=S, help="product-tail: Hill k")
    p.add_argument("--levels", type=_floats, default=S, help="kappa-recovery: quantile grid")
    p.add_argument("--lags", type=_ints, default=S, help="kappa-recovery/absorption: lags")
    p.add_argument("--compare", type=_ints, default=S, help="kappa-recovery: two lags whose kappa ordering is checked")
    p.add_argument("--absolute", action="store_true", default=S, help="kappa-recovery: medians of |X_h|")
    p.add_argument("--n-chain", dest="n_chain", type=int, default=S, help="tail-chain-match: tail chain sample size")
    p.add_argument("--fit-levels", dest="fit_levels", type=_floats, default=S, help="cte: kappa fit grid")
    p.add_argument("--fit-level", dest="fit_level", type=float, default=S, help="cte: m_hat level")
    p.add_argument("--predict-level", dest="predict_level", type=float, default=S, help="cte: prediction level")
    p.add_argument("--low-levels", dest="low_levels", type=_floats, default=S, help="negative-control: lower threshold grid")
    p.add_argument("--high-levels", dest="high_levels", type=_floats, default=S, help="negative-control: upper threshold grid")
    p.add_argument("--t-values", dest="t_values", type=_floats, default=S, help="homogeneity: scale factors t")
    p.add_argument("--y", type=_floats, default=S, help="homogeneity: point (y_0, y_1, ...)")
    return parser


# --------------------------------------------------------- resolution


def resolve(ns: argparse.Namespace) -> dict:
    """Merge built-in defaults, environment, config file and explicit flags (in rising precedence)."""
    explicit = {k: v for k, v in vars(ns).items() if k != "config"}
    opts = dict(GLOBAL_DEFAULTS)
    opts.update(DEFAULTS)
    env_seed = os.environ.get("CEVLAB_SEED")
    if env_seed is not None:
        try:
            opts["seed"] = int(env_seed)
        except ValueError as exc:
            raise UsageError(f"CEVLAB_SEED must be an integer, got {env_seed!r}") from exc
    cfg_path = getattr(ns, "config", None)
    if cfg_path:
        try:
            cfg = json.loads(Path(cfg_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {cfg_path}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in cfg.items():
            key = key.replace("-", "_")
            if key in explicit and explicit[key] != value:
                log.warning("flag --%s=%s overrides config value %r", key.replace("_", "-"), explicit[key], value)
            opts[key] = value
    opts.update(explicit)
    if opts["threads"] is None:
        opts["threads"] = default_threads()
    if opts["threads"] < 1:
        raise UsageError("threads must be at least 1")
    return opts


def model_from(opts: dict):
    kind = opts.get("model", "expar1")
    if kind not in MODEL_TYPES:
        raise UsageError(f"unknown model {kind!r}")
    cls = MODEL_TYPES[kind]
    kwargs = {}
    for f in fields(cls):
        if f.name in opts:
            v = opts[f.name]
            kwargs[f.name] = tuple(v) if isinstance(v, list) else v
    spec = cls(**kwargs)
    ensure_valid(spec)
    return spec


def _emit_text(text: str, out):
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_rows(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else str(v) if isinstance(v, int) else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ commands


def cmd_simulate(opts) -> int:
    spec = model_from(opts)
    stream = RandomStream(opts["seed"])
    if "top" in opts:
        blk = simulate_top(spec, opts["h"], opts["n"], stream, opts["top"], threads=opts["threads"])
    else:
        blk = simulate_block(spec, opts["h"], opts["n"], stream, threads=opts["threads"])
    if opts["out"]:
        blk.to_csv(opts["out"])
    else:
        sys.stdout.write(_csv_rows([f"x{t}" for t in range(blk.h + 1)], blk.rows))
        sys.stderr.write(json.dumps(blk.metadata(), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_tailchain(opts) -> int:
    base = None
    if opts.get("model") in ("expar1", "switching"):
        base = tail_chain_for(model_from(opts))
    alpha = opts.get("alpha", base.alpha if base else 2.0)
    kappa = opts.get("kappa", base.kappa if base else opts.get("phi", 0.5))
    law = opts.get("w_law")
    if law == "lognormal":
        w = LogNormalLaw(opts.get("r_mu", 0.0), opts.get("r_sigma", 0.5))
    elif law == "centered-log-pareto":
        w = CenteredLogParetoLaw(alpha)
    else:
        w = base.w_sampler if base else CenteredLogParetoLaw(alpha)
    absorb = opts.get("absorb_prob", base.absorb_prob if base else 0.0)
    chain = TailChainSpec(alpha, kappa, w, absorb)
    tp = simulate_tail_chain(chain, opts["h"], opts["n"], RandomStream(opts["seed"], verify.CHAIN_STREAM), opts["threads"])
    if opts["out"]:
        tp.to_csv(opts["out"])
    else:
        sys.stdout.write(_csv_rows([f"x{t}" for t in range(tp.h + 1)], tp.rows))
        sys.stderr.write(json.dumps(tp.metadata(), sort_keys=True) + "\n")
    return EXIT_OK


def _parse_grid(items, h) -> list[list[float]]:
    axes = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"grid item {item!r} must look like y1=0.5,1,2")
        name, values = item.split("=", 1)
        name = name.strip()
        if not (name.startswith("y") and name[1:].isdigit()):
            raise UsageError(f"unknown grid axis {name!r}")
        axes[int(name[1:])] = [float(v) for v in values.split(",") if v.strip()]
    for j in axes:
        if j > h:
            raise UsageError(f"axis y{j} exceeds horizon h={h}")
    return [axes.get(j, [float("inf")]) for j in range(h + 1)]


def cmd_limits(opts) -> int:
    spec = model_from(opts)
    h = opts["h"]
    quantity = opts.get("quantity", "cdf")
    if quantity == "moment":
        value = limits.cond_moment_limit(spec, h)
        _emit_text(_csv_rows(["h", "moment_limit"], [[h, value]]), opts["out"])
        return EXIT_OK
    if quantity == "product-constant":
        ptc = limits.product_tail_constant(spec, h, seed=opts["seed"])
        _emit_text(_csv_rows(["h", "value", "se", "diverging"], [[h, ptc.value, ptc.se, str(ptc.diverging).lower()]]), opts["out"])
        return EXIT_OK
    kw = {"method": opts.get("method", "tilted")}
    if "n_inner" in opts:
        kw["n_inner"] = opts["n_inner"]
    lim = limits.limit_for(spec, h, **kw)
    axes = _parse_grid(opts.get("grid", ["y0=inf", "y1=1"]), h)
    rows = []
    for point in itertools.product(*axes):
        if point[0] < 1:
            raise UsageError("y0 must be at least 1")
        rows.append(list(point) + [lim.query(point)])
    header = [f"y{j}" for j in range(h + 1)] + ["psi"]
    meta = {"spec": spec_to_dict(spec), "h": h, "limit": lim.describe(), "points": len(rows)}
    meta_text = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    if opts["out"]:
        _write(opts["out"], _csv_rows(header, rows))
        _write(str(Path(opts["out"]).with_suffix(".json")), meta_text)
    else:
        sys.stdout.write(_csv_rows(header, rows))
        sys.stderr.write(meta_text)
    return EXIT_OK


def _load_block(opts):
    if "input" in opts:
        return read_block_csv(opts["input"])
    spec = model_from(opts)
    return simulate_block(spec, opts["h"], opts["n"], RandomStream(opts["seed"]), threads=opts["threads"])


def cmd_estimate(opts) -> int:
    blk = _load_block(opts)
    which = opts.get("estimator", "hill")
    lag = opts.get("lag", 1)
    prov = {"rows": blk.n, "n": blk.n_total, "source": opts.get("input", "simulation")}
    if which == "hill":
        col = blk.rows[:, 0] * blk.rows[:, lag] if opts.get("product") else blk.rows[:, opts.get("column", 0)]
        rep = estimate.hill_report(col, opts.get("k"), "hill_product" if opts.get("product") else "hill")
        rep.provenance.update(prov)
    elif which == "kappa":
        kh = estimate.kappa_hat(blk, lag, opts.get("levels", [0.99, 0.995, 0.999, 0.9995]), absolute=bool(opts.get("absolute")))
        rep = kh.as_report(lag)
        rep.provenance.update(prov, medians=kh.medians, thresholds=kh.thresholds)
    elif which == "cte":
        kh = estimate.kappa_hat(blk, lag, opts.get("levels", [0.99, 0.995, 0.998, 0.999]))
        cond = estimate.conditional_sample(blk, opts.get("fit_level", 0.999), b=[kh.estimate] * blk.h)
        mh = estimate.m_hat(cond, lag)
        x = estimate.quantile_threshold(blk, opts.get("predict_level", 0.9999))
        pred = estimate.cte_semiparametric(x, kh.estimate, mh)
        rep = estimate.EstimateReport("cte_semiparametric", pred, 0.0, {**prov, "x": x, "kappa_hat": kh.estimate, "m_hat": mh})
        try:
            rep.provenance["cte_empirical"] = estimate.cte_plus_hat(blk, lag, x)
        except InsufficientDataError as exc:
            rep.provenance["cte_empirical"] = None
            rep.provenance["note"] = str(exc)
    else:
        kappa = opts.get("kappa", 0.0)
        cond = estimate.conditional_sample(blk, opts.get("q", 0.99), b=[kappa] * blk.h)
        value = estimate.empirical_cdf(cond, lag, opts.get("y", 1.0))
        rep = estimate.EstimateReport("empirical_cdf", value, float(np.sqrt(value * (1 - value) / cond.count)), {**prov, "exceedances": cond.count, "threshold": cond.threshold})
    text = json.dumps({"name": rep.name, "value": rep.value, "se": rep.se, "provenance": verify._plain(rep.provenance)}, indent=2, sort_keys=True) + "\n"
    _emit_text(text, opts["out"])
    return EXIT_OK


_PARAM_KEYS = ("k", "levels", "lags", "compare", "absolute", "n_chain", "fit_levels", "fit_level", "predict_level", "low_levels", "high_levels", "t_values", "y")


def cmd_verify(opts) -> int:
    if opts.get("suite") == "paper":
        return _run_paper_suite(opts)
    if "kind" not in opts:
        raise UsageError("verify needs --kind or --suite paper")
    params = {k: opts[k] for k in _PARAM_KEYS if k in opts}
    cfg = verify.ExperimentConfig(
        kind=opts["kind"],
        model=model_from(opts),
        h=opts["h"],
        n=opts["n"],
        q=opts.get("q"),
        tolerance=opts.get("tol", 0.05),
        seed=opts["seed"],
        params=params,
    )
    errs = cfg.validate()
    if errs:
        raise SpecError(errs)
    report = verify.run_experiment(cfg, threads=opts["threads"])
    if opts["out"]:
        verify.write_report(report, opts["out"])
    else:
        sys.stdout.write(report.to_json())
    sys.stderr.write(f"verdict: {report.verdict}\n")
    return _VERDICT_EXIT[report.verdict]


def _run_paper_suite(opts) -> int:
    def progress(res):
        sys.stderr.write(f"criterion {res.number:>2}: {res.verdict}  ({res.title})\n")

    results = verify.run_suite(opts["seed"], opts["threads"], opts.get("only"), progress)
    print(verify.summary_table(results))
    if opts["out"]:
        _write(opts["out"], verify.suite_json(results, include_runtime=True))
    verdicts = {r.verdict for r in results}
    if "fail" in verdicts:
        return EXIT_FAIL
    if "inconclusive" in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "tailchain": cmd_tailchain,
    "limits": cmd_limits,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = resolve(ns)
        return COMMANDS[opts["command"]](opts)
    except InsufficientDataError as exc:
        sys.stderr.write(f"cevlab: inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except (UsageError, SpecError, DomainError, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"cevlab: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
