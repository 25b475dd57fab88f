"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 numeric or
validation failure.  Every data file starts with a ``# params:`` line
recording the full parameter set, seeds included.
"""
from __future__ import annotations

import argparse
import os
import sys
import warnings

import numpy as np

from . import __version__
from ._io import atomic_write_text, csv_text, params_line, read_csv, write_csv, write_json
from .config import MissingKeyError, UnknownKeyError, build_config, read_config
from .dynamics import (DEFAULT_SEED, GammaSchedule, RatingHistogram, default_workers,
                       derive_tau_from_sigma, run_simulation)
from .errors import ConfigurationError, ParseError, TrustNetError
from .experiments import histogram_rows, steady_state_experiment
from .graph import CompletionParams, TrustMatrix, endorsement_complete, path_complete, reduce_to_matrix
from .netfile import format_network, read_network
from .robustness import attack_experiment
from .spectral import community_report, decompose, personalized_matrix
from .steady import (PowerLawWarning, SteadyStateParams, asymptote_ratio, infinite_product,
                     log_closed_form, power_law_asymptote, sample_ratings, steady_state_closed_form,
                     steady_state_recurrence)
from .tail import DEFAULT_X_MIN, fit_tail

EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- file helpers

def read_matrix_csv(path) -> TrustMatrix:
    _, header, rows = read_csv(path)
    if not header:
        raise ParseError(f"{path}: empty matrix file")
    try:
        values = np.array([[float(x) for x in r[1:]] for r in rows]).reshape(len(rows), len(header) - 1)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return TrustMatrix([r[0] for r in rows], header[1:], values)


def matrix_csv_text(m: TrustMatrix, params) -> str:
    rows = [[u] + list(m.values[k]) for k, u in enumerate(m.rows)]
    return csv_text(["recommender"] + list(m.cols), rows, params)


def read_histogram_csv(path) -> RatingHistogram:
    """Histogram from ``rating,count`` rows, or the last snapshot of ``snapshot_t,rating,count``."""
    _, header, rows = read_csv(path)
    try:
        if header[:3] == ["snapshot_t", "rating", "count"]:
            last = max(int(r[0]) for r in rows)
            pairs = [(int(r[1]), int(r[2])) for r in rows if int(r[0]) == last]
        elif header[:2] == ["rating", "count"]:
            pairs = [(int(r[0]), int(r[1])) for r in rows]
        else:
            raise ParseError(f"{path}: expected columns 'rating,count' or 'snapshot_t,rating,count'")
    except (ValueError, IndexError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return RatingHistogram.from_mapping(dict(pairs))


def read_vector(source, length=None):
    """A comma-separated list, or a file with one number per line."""
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            tokens = [t for line in fh for t in line.split("#", 1)[0].replace(",", " ").split()]
    else:
        tokens = [t for t in source.split(",") if t.strip()]
    try:
        vec = np.array([float(t) for t in tokens])
    except ValueError:
        raise ParseError(f"cannot read a vector from {source!r}") from None
    if length is not None and len(vec) != length:
        raise ConfigurationError(f"vector has {len(vec)} entries, expected {length}")
    return vec


def _schedule(args):
    params = [float(p) for p in args.gamma_params.split(",") if p.strip()]
    return GammaSchedule(args.gamma_kind, tuple(params), args.gamma_bot)


def _add_schedule_flags(p, default_params="1.0"):
    p.add_argument("--gamma-kind", default="constant", choices=("constant", "geometric", "sleeper"))
    p.add_argument("--gamma-params", default=default_params,
                   help="gamma | gamma1,rho | L (comma separated)")
    p.add_argument("--gamma-bot", type=float, default=1.0)


# ---------------------------------------------------------------- commands

def cmd_complete(args):
    net = read_network(args.input)
    params = CompletionParams(args.eta, args.epsilon, args.max_path_len)
    record = {"command": "complete", "mode": args.mode, "eta": args.eta,
              "epsilon": args.epsilon, "max_path_len": args.max_path_len}
    if args.mode == "path":
        out = path_complete(net.endorsements, params)
    else:
        out = endorsement_complete(net.recommendations, net.endorsements, params)
    atomic_write_text(args.output, format_network(out, params_line(record)[2:]))


def cmd_reduce(args):
    net = read_network(args.input)
    record = {"command": "reduce", "policy": args.policy, "which": args.which}
    target = net.recommendations
    if args.which == "endorsements":
        target = net.endorsements
    elif args.eta is not None:
        params = CompletionParams(args.eta, args.epsilon, args.max_path_len)
        record.update(eta=args.eta, epsilon=args.epsilon, max_path_len=args.max_path_len)
        target = endorsement_complete(net.recommendations, net.endorsements, params)
    m = reduce_to_matrix(target, args.policy)
    atomic_write_text(args.output, matrix_csv_text(m, record))


def cmd_simulate(args):
    try:
        raw = read_config(args.config)
    except OSError as exc:
        raise ParseError(str(exc)) from None
    for key in ("J", "alpha", "steps", "seed"):
        value = getattr(args, key)
        if value is not None:
            raw[key] = value
    tau0 = None
    if raw.get("init") == "from-sigma":
        if not args.matrix:
            raise UsageError("init = from-sigma needs --matrix")
        A = read_matrix_csv(args.matrix)
        sigma = np.ones(len(A.rows)) if args.sigma is None else read_vector(args.sigma, len(A.rows))
        tau0 = np.rint(derive_tau_from_sigma(sigma, A)).astype(np.int64)
    config = build_config(raw, tau0)
    result = run_simulation(config)
    params = config.describe()
    write_csv(args.output + ".csv", ["snapshot_t", "rating", "count"], result.csv_rows(), params)
    write_json(args.output + ".json", result.summary())


def cmd_steady(args):
    params = SteadyStateParams(args.alpha, _schedule(args))
    n = np.arange(1, args.n_max + 1)
    rec = steady_state_recurrence(params, args.n_max).values
    closed = steady_state_closed_form(params, n)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PowerLawWarning)
        asym = power_law_asymptote(params, n)
    record = {"command": "steady", "n_max": args.n_max, **params.describe()}
    write_csv(args.output + ".csv", ["n", "upsilon_recurrence", "upsilon_closed", "asymptote"],
              zip(n.tolist(), rec, closed, asym), record)
    G, bound = infinite_product(params.schedule)
    probe = [10, 100, 1000, 10000]
    ratio, limit = asymptote_ratio(params, probe)
    report = {
        "params": record,
        "c": params.c,
        "exponent": params.exponent,
        "G": G,
        "G_truncation_bound": bound,
        "power_law_applicable": not caught,
        "asymptote_ratio": {"n": probe, "ratio": ratio.tolist(), "gamma_limit": limit},
        "max_relative_gap_recurrence_closed": _max_rel_gap(params, args.n_max),
        "normalization_note": "upsilon_n are steady-state growth rates (v_n(t) = t*upsilon_n); "
                              "compare shapes after normalizing over n >= 1",
    }
    write_json(args.output + ".json", report)


def _max_rel_gap(params, n_max):
    a = steady_state_recurrence(params, n_max).log_values
    b = log_closed_form(params, np.arange(1, n_max + 1))
    both_zero = np.isneginf(a) & np.isneginf(b)
    with np.errstate(invalid="ignore"):
        gap = np.where(both_zero, 0.0, np.abs(np.expm1(a - b)))
    return float(np.nanmax(gap))


def cmd_fit(args):
    hist = read_histogram_csv(args.input)
    fit = fit_tail(hist, args.x_min)
    write_json(args.output, {"params": {"command": "fit", "x_min": args.x_min,
                                        "input": os.path.basename(args.input)},
                             **fit.to_dict()})


def cmd_communities(args):
    A = read_matrix_csv(args.matrix)
    decomp = decompose(A, max_communities=args.max_communities)
    tau = read_vector(args.tau, len(A.cols)) if args.tau else None
    report = community_report(decomp, tau, args.top)
    report["params"] = {"command": "communities", "top": args.top,
                        "max_communities": args.max_communities, "tau": None if tau is None else tau}
    write_json(args.output, report)
    if args.personalized:
        if tau is None:
            raise UsageError("--personalized needs --tau")
        Am = personalized_matrix(A, tau, decomp)
        atomic_write_text(args.personalized, matrix_csv_text(Am, report["params"]))


def cmd_attack(args):
    fractions = [float(f) for f in args.fractions.split(",")]
    seeds = list(range(args.seed, args.seed + args.seeds))
    record = {"command": "attack", "fractions": fractions, "seeds": seeds}
    if args.input:
        hist = read_histogram_csv(args.input)
        record["input"] = os.path.basename(args.input)
    else:
        params = SteadyStateParams(args.alpha, _schedule(args))
        rng = np.random.default_rng(args.seed)
        hist = RatingHistogram.from_tau(sample_ratings(params, args.n, rng))
        record.update(source="steady-state sample", n=args.n, **params.describe())
    res = attack_experiment(hist, fractions=fractions, seeds=seeds)
    write_csv(args.output + ".csv", ["strategy", "fraction", "seed", "giant_fraction"],
              res.rows(), record)
    write_json(args.output + ".json", {"params": record, **res.summary()})


def cmd_verify(args):
    os.makedirs(args.output, exist_ok=True)
    schedule = _schedule(args)
    seeds = range(args.seed, args.seed + args.seeds)
    report, results = steady_state_experiment(args.alpha, schedule, args.J, args.steps, seeds,
                                         args.x_min, workers=default_workers())
    record = report["params"]
    write_csv(os.path.join(args.output, "histograms.csv"), ["seed", "rating", "count"],
              histogram_rows(results), record)
    params = SteadyStateParams(args.alpha, schedule)
    n = np.arange(1, 1001)
    write_csv(os.path.join(args.output, "steady.csv"), ["n", "upsilon_recurrence", "upsilon_closed"],
              zip(n.tolist(), steady_state_recurrence(params, 1000).values,
                  steady_state_closed_form(params, n)), record)
    write_json(os.path.join(args.output, "report.json"), report)
    print(f"mean fitted exponent {report['mean_exponent']:.4f} vs 1+1/c = "
          f"{report['predicted_exponent']:.4f} (|diff| = {report['exponent_error']:.4f}); "
          f"verdict: {report['verdict']}")
    return 0 if report["verdict"] == "pass" else EXIT_NUMERIC


# ---------------------------------------------------------------- parser

def build_parser():
    p = _Parser(prog="trustnet", description="Trust network modeling, simulation and analysis.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("complete", help="endorsement- (or path-) complete a network file")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--eta", type=float, required=True)
    c.add_argument("--epsilon", type=float, required=True)
    c.add_argument("--max-path-len", type=int, default=8)
    c.add_argument("--mode", choices=("endorsement", "path"), default="endorsement")
    c.set_defaults(func=cmd_complete)

    r = sub.add_parser("reduce", help="reduce a network file to a matrix CSV")
    r.add_argument("input")
    r.add_argument("output")
    r.add_argument("--policy", choices=("sum", "average", "last"), default="sum")
    r.add_argument("--which", choices=("recommendations", "endorsements"), default="recommendations")
    r.add_argument("--eta", type=float, help="endorsement-complete first with this threshold")
    r.add_argument("--epsilon", type=float, default=1.0)
    r.add_argument("--max-path-len", type=int, default=8)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("simulate", help="run the trust process from a config file")
    s.add_argument("config")
    s.add_argument("output", help="output prefix; writes PREFIX.csv and PREFIX.json")
    s.add_argument("--J", type=int)
    s.add_argument("--alpha", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--matrix", help="matrix CSV for init = from-sigma")
    s.add_argument("--sigma", help="recommender trust (default all ones)")
    s.set_defaults(func=cmd_simulate)

    st = sub.add_parser("steady", help="tabulate the analytic steady state")
    st.add_argument("output", help="output prefix; writes PREFIX.csv and PREFIX.json")
    st.add_argument("--alpha", type=float, required=True)
    _add_schedule_flags(st)
    st.add_argument("--n-max", type=int, default=10000)
    st.set_defaults(func=cmd_steady)

    f = sub.add_parser("fit", help="fit power-law and geometric tails to a histogram CSV")
    f.add_argument("input")
    f.add_argument("output")
    f.add_argument("--x-min", type=int, default=DEFAULT_X_MIN)
    f.set_defaults(func=cmd_fit)

    co = sub.add_parser("communities", help="spectral trust communities of a matrix CSV")
    co.add_argument("matrix")
    co.add_argument("output")
    co.add_argument("--tau", help="trust vector over objects (comma list or file)")
    co.add_argument("--top", type=int, default=3)
    co.add_argument("--max-communities", type=int)
    co.add_argument("--personalized", help="also write the personalized matrix CSV here")
    co.set_defaults(func=cmd_communities)

    a = sub.add_parser("attack", help="random vs hub removal on a configuration-model graph")
    a.add_argument("output", help="output prefix; writes PREFIX.csv and PREFIX.json")
    a.add_argument("--input", help="histogram CSV; without it ratings are sampled from the steady state")
    a.add_argument("--n", type=int, default=10000)
    a.add_argument("--alpha", type=float, default=0.1)
    _add_schedule_flags(a)
    a.add_argument("--fractions", default="0,0.01,0.02,0.05")
    a.add_argument("--seeds", type=int, default=20)
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.set_defaults(func=cmd_attack)

    v = sub.add_parser("verify", help="simulate, fit and compare against the steady state")
    v.add_argument("output", nargs="?", default="verify-out", help="output directory")
    v.add_argument("--alpha", type=float, default=0.1)
    _add_schedule_flags(v)
    v.add_argument("--J", type=int, default=2000)
    v.add_argument("--steps", type=int, default=2_000_000)
    v.add_argument("--seeds", type=int, default=10)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED, help="first seed")
    v.add_argument("--x-min", type=int, default=DEFAULT_X_MIN)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except (UsageError, MissingKeyError, UnknownKeyError) as exc:
        print(f"trustnet {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"trustnet {args.verb}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"trustnet {args.verb}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (TrustNetError, ValueError, ArithmeticError) as exc:
        print(f"trustnet {args.verb}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
