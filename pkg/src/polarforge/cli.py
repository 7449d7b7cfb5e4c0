"""Command-line front end.

Subcommands write JSON (designs, manifests, reports) and CSV (tables).  Exit
codes: 0 success, 2 usage or parameter error, 3 malformed input data, 4 an
internal invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .codec import CodeConfig
from .construction import (
    DesignSpec,
    InfeasibleDesignError,
    compare_sets,
    construct,
    InformationSet,
    reliability_profile,
    rm_rstar,
    staircase_sweep,
)
from .monomials import MonomialSpace, is_decreasing, monomial_of
from .oracle import BudgetExceededError, EnumerationBudget, run_oracle_suite
from .reliability import ChannelModel, bec, biawgn
from .simulator import SimConfig, run_bler
from .spectrum import ml_negligibility_ratio, weight_report

SCHEMA_VERSION = 1
SEED_ENV = "POLARFORGE_SEED"

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_USAGE, message)


# ---------------------------------------------------------------- helpers


def _manifest(subcommand: str, params: dict, seed: int | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "parameters": params,
        "tool_version": __version__,
        "seed": seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit_csv(text: str, out, manifest: dict) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    _write_json(str(out) + ".manifest.json", manifest)


def _channel(kind: str, snr_db, erasure, rate) -> ChannelModel:
    try:
        if kind == "bec":
            if erasure is None:
                raise CliError(EXIT_USAGE, "--channel bec needs --erasure")
            return bec(erasure)
        if snr_db is None:
            raise CliError(EXIT_USAGE, "--channel awgn needs --snr-db")
        return biawgn(snr_db, rate)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def _channel_dict(ch: ChannelModel) -> dict:
    return {"kind": ch.kind, "erasure": ch.erasure, "ebn0_db": ch.ebn0_db, "rate": ch.rate}


def _m_of(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise CliError(EXIT_USAGE, f"--n must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def _params(args) -> dict:
    skip = {"func", "config", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(EXIT_USAGE, f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _fmt(x) -> str:
    return "" if x is None else f"{x:.6e}"


# ---------------------------------------------------------------- designs


def _design_json(design: InformationSet, summary: dict, manifest: dict) -> dict:
    space = design.space
    per_index = [
        {
            "index": int(i),
            "monomial": str(monomial_of(int(i), space)),
            "z": float(design.z[i]),
            "c": float(design.contrib[i]),
            "d": float(design.distance_penalty[i]),
            "j": float(design.cost[i]),
        }
        for i in design.indices
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "design",
        "n": design.N,
        "k": design.K,
        "m": design.m,
        "strategy": design.strategy,
        "channel": _channel_dict(design.profile.channel),
        "alpha": design.alpha,
        "max_degree": design.r,
        "decreasing": design.decreasing,
        "indices": [int(i) for i in design.indices],
        "per_index": per_index,
        "summary": summary,
        "notes": list(design.notes),
        "manifest": manifest,
    }


def _load_design(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_DATA, f"cannot read design {path}: {exc}") from None
    try:
        if data.get("kind") != "design" or data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("not a design file of a supported schema version")
        n = int(data["n"])
        m = n.bit_length() - 1
        if n < 2 or n & (n - 1):
            raise ValueError(f"n = {n} is not a power of two")
        idx = [int(i) for i in data["indices"]]
        if not idx:
            raise ValueError("empty information set")
        if len(set(idx)) != len(idx) or min(idx) < 0 or max(idx) >= n:
            raise ValueError("indices must be distinct and inside range(n)")
        if int(data.get("k", len(idx))) != len(idx):
            raise ValueError("k does not match the number of indices")
        ch = data["channel"]
        channel = ChannelModel(ch["kind"], ch.get("erasure"), ch.get("ebn0_db"), ch.get("rate"))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CliError(EXIT_DATA, f"malformed design {path}: {exc}") from None
    return {"n": n, "m": m, "k": len(idx), "indices": sorted(idx), "channel": channel,
            "strategy": str(data.get("strategy", "unknown"))}


def _analysis_channel(design: dict, args) -> ChannelModel:
    base = design["channel"]
    rate = design["k"] / design["n"]
    kind = args.channel or ("bec" if base.kind == "bec" else "awgn")
    if kind == "bec":
        eps = args.erasure if args.erasure is not None else base.erasure
        return _channel("bec", None, eps, None)
    snr = args.snr_db if args.snr_db is not None else base.ebn0_db
    return _channel("awgn", snr, None, rate)


def _figures(indices, m, channel) -> dict:
    space = MonomialSpace(m)
    profile = reliability_profile(m, channel)
    rep = weight_report(indices, space, channel, profile)
    ratios = ml_negligibility_ratio(indices, space, channel)
    return {
        "max_degree": rep.r,
        "wmin": rep.wmin,
        "awmin": rep.awmin,
        "sc_sum": rep.sc_sum,
        "ub_wmin": rep.ub_wmin,
        "decreasing": rep.decreasing,
        "negligibility_ratio": {str(d): v for d, v in ratios.items()},
    }


# ---------------------------------------------------------------- commands


def cmd_construct(args) -> int:
    m = _m_of(args.n)
    channel = _channel(args.channel, args.snr_db, args.erasure, args.k / args.n)
    if args.k == args.n:
        raise CliError(
            EXIT_USAGE, f"rate-1 design (k = n = {args.n}): maximum degree r = m gives wmin = 1, "
            "so weight analysis is meaningless"
        )
    cap = args.degree_cap if args.degree_cap == "auto" else int(args.degree_cap)
    try:
        spec = DesignSpec(m=m, K=args.k, channel=channel, alpha=args.alpha, degree_cap=cap,
                          strategy=args.strategy, method=args.method, tie_break=args.tie_break)
        design = construct(spec)
    except (InfeasibleDesignError, ValueError) as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    except FloatingPointError as exc:
        raise CliError(EXIT_INVARIANT, f"reliability computation failed: {exc}") from None
    if len(design.indices) != args.k:
        raise CliError(EXIT_INVARIANT, "construction returned the wrong number of indices")
    figs = _figures(design.indices, m, channel)
    manifest = _manifest("construct", _params(args))
    _write_json(args.out, _design_json(design, figs, manifest))
    for note in design.notes:
        print(f"note: {note}", file=sys.stderr)
    if not figs["decreasing"]:
        print("warning: design is not decreasing; weight figures are closed-form evaluations only",
              file=sys.stderr)
    print(
        f"n={design.N} k={design.K} strategy={design.strategy} r={figs['max_degree']} "
        f"wmin={figs['wmin']} awmin={figs['awmin']} sc_sum={_fmt(figs['sc_sum'])} "
        f"ub_wmin={_fmt(figs['ub_wmin'])}"
    )
    return EXIT_OK


ANALYZE_COLUMNS = ("n", "k", "strategy", "snr_db", "wmin", "awmin", "sc_sum", "ub_wmin")


def cmd_analyze(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ANALYZE_COLUMNS)
    reports = []
    for path in args.designs:
        d = _load_design(path)
        channel = _analysis_channel(d, args)
        figs = _figures(d["indices"], d["m"], channel)
        if not figs["decreasing"]:
            print(f"warning: {path} is not decreasing", file=sys.stderr)
        snr = "" if channel.kind == "bec" else repr(channel.ebn0_db)
        w.writerow([d["n"], d["k"], d["strategy"], snr, figs["wmin"], figs["awmin"],
                    _fmt(figs["sc_sum"]), _fmt(figs["ub_wmin"])])
        reports.append({"design": str(path), "channel": _channel_dict(channel), **figs})
    manifest = _manifest("analyze", _params(args))
    _emit_csv(buf.getvalue(), args.out, manifest)
    if args.json:
        _write_json(args.json, {"schema_version": SCHEMA_VERSION, "reports": reports, "manifest": manifest})
    return EXIT_OK


def _sweep_grid(args) -> list[float]:
    if args.family == "bec":
        if args.erasure_range is not None:
            hi, lo, pts = args.erasure_range
            pts = int(pts)
            if pts < 1:
                raise CliError(EXIT_USAGE, "empty grid")
            if not 0 < lo <= hi <= 1:
                raise CliError(EXIT_USAGE, "erasure range must satisfy 0 < low <= high <= 1")
            return [float(-math.log(e)) for e in np.geomspace(hi, lo, pts)]
        if args.rho_range is None:
            raise CliError(EXIT_USAGE, "bec sweep needs --erasure-range or --rho-range")
        a, b, pts = args.rho_range
    else:
        if args.snr_range is None:
            raise CliError(EXIT_USAGE, "awgn sweep needs --snr-range")
        a, b, pts = args.snr_range
    pts = int(pts)
    if pts < 1:
        raise CliError(EXIT_USAGE, "empty grid")
    if b < a:
        raise CliError(EXIT_USAGE, "grid end must not be below its start")
    return [float(x) for x in np.linspace(a, b, pts)]


def cmd_sweep(args) -> int:
    m = _m_of(args.n)
    if not 1 <= args.k <= args.n:
        raise CliError(EXIT_USAGE, f"--k must be in [1, {args.n}]")
    grid = _sweep_grid(args)
    family = "bec" if args.family == "bec" else "biawgn"
    try:
        pts = staircase_sweep(m, args.k, family, grid, args.tie_break)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    rstar = rm_rstar(m, args.k)
    plateau = 1 << (m - rstar)
    weights = [1 << t for t in range(m + 1)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "wmin"] + [f"n_{x}" for x in weights] + ["jump", "rstar", "at_plateau"])
    prev = None
    for p in pts:
        if prev is not None and p.wmin < prev:
            raise CliError(EXIT_INVARIANT, f"minimum row weight decreased at rho={p.rho}")
        prev = p.wmin
        w.writerow([repr(p.rho), p.wmin] + [p.row_weight_hist.get(x, 0) for x in weights]
                   + [int(p.jump), rstar, int(p.wmin == plateau)])
    _emit_csv(buf.getvalue(), args.out, _manifest("sweep", _params(args)))
    return EXIT_OK


def cmd_simulate(args) -> int:
    d = _load_design(args.design)
    seed = _resolve_seed(args)
    if args.decoder == "sc" and args.list_size not in (None, 1):
        raise CliError(EXIT_USAGE, "the SC decoder has a list size of 1")
    L = 1 if args.decoder == "sc" else (args.list_size or 8)
    if not args.snr_db:
        raise CliError(EXIT_USAGE, "--snr-db needs at least one value")
    try:
        code = CodeConfig(d["n"], tuple(d["indices"]), args.pretransform)
        sim = SimConfig(tuple(args.snr_db), max_blocks=args.max_blocks, target_errors=args.target_errors,
                        seed=seed, workers=args.workers, batch=args.batch, noiseless=args.noiseless)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    res = run_bler(code, L, sim, exact=args.exact)
    for p in res.points:
        if p.prune + p.ml_like != p.block_errors:
            raise CliError(EXIT_INVARIANT, f"genie partition broken at {p.ebn0_db} dB")
    params = _params(args)
    params["seed"] = seed
    manifest = _manifest("simulate", params, seed)
    _emit_csv(res.to_csv(), args.out, manifest)
    if args.json:
        _write_json(args.json, {"schema_version": SCHEMA_VERSION, **res.summary(), "manifest": manifest})
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    try:
        budget = EnumerationBudget(max_k=args.max_k, max_lta_m=args.max_lta_m)
        sampled = None if args.samples == 0 else args.sampled_m
        report = run_oracle_suite(max_m=args.max_m, sampled_m=sampled, samples=args.samples,
                                  seed=_resolve_seed(args), budget=budget)
    except (BudgetExceededError, ValueError) as exc:
        raise CliError(EXIT_USAGE, f"budget misconfiguration: {exc}") from None
    out = {"schema_version": SCHEMA_VERSION, **report.as_dict(),
           "manifest": _manifest("oracle-check", _params(args))}
    _write_json(args.out, out)
    if not report.passed:
        for f in report.failures[:20]:
            print(f"FAIL {f.check} m={f.m} {f.subject}: closed form {f.expected} vs brute force {f.observed}",
                  file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = _load_design(args.a), _load_design(args.b)
    if a["n"] != b["n"] or a["k"] != b["k"]:
        raise CliError(EXIT_USAGE, f"cannot compare ({a['n']},{a['k']}) with ({b['n']},{b['k']})")
    channel = _analysis_channel(a, args)
    m = a["m"]
    profile = reliability_profile(m, channel)

    def wrap(d):
        ok, _ = is_decreasing(d["indices"], MonomialSpace(m))
        r = max(m - i.bit_count() for i in d["indices"])
        return InformationSet(np.array(d["indices"]), m, d["strategy"], None, profile, r=r, decreasing=ok)

    c = compare_sets(wrap(a), wrap(b), channel, profile)
    out = {
        "schema_version": SCHEMA_VERSION,
        "n": a["n"],
        "k": a["k"],
        "channel": _channel_dict(channel),
        "symmetric_difference": c.symmetric_difference,
        "only_in_a": c.only_in_a,
        "only_in_b": c.only_in_b,
        "sc_sum": [c.sc_sum_a, c.sc_sum_b],
        "wmin": [c.wmin_a, c.wmin_b],
        "awmin": [c.awmin_a, c.awmin_b],
        "ub_wmin": [c.ub_a, c.ub_b],
        "delta_sc_sum": c.delta_sc_sum,
        "delta_ub_wmin": c.delta_ub,
        "delta_wmin": c.delta_wmin,
        "delta_awmin": c.delta_awmin,
        "manifest": _manifest("compare", _params(args)),
    }
    _write_json(args.out, out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_channel_flags(p, required_kind: bool):
    p.add_argument("--channel", choices=("awgn", "bec"), default="awgn" if required_kind else None)
    p.add_argument("--snr-db", type=float, help="design Eb/N0 in dB (awgn)")
    p.add_argument("--erasure", type=float, help="erasure probability (bec)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polarforge", description="Polar and monomial code design toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", help="JSON file of parameters (a manifest's 'parameters' also works)")
        p.set_defaults(func=func)
        return p

    p = add("construct", cmd_construct, "Build an information set and write design.json.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_channel_flags(p, True)
    p.add_argument("--strategy", choices=("reliability", "mixed"), default="reliability")
    p.add_argument("--alpha", type=float, default=100.0)
    p.add_argument("--degree-cap", default="auto", help="'auto' or an integer maximum degree")
    p.add_argument("--method", choices=("auto", "ranked", "greedy"), default="auto")
    p.add_argument("--tie-break", choices=("low", "high"), default=None)
    p.add_argument("--out", default="design.json")

    p = add("analyze", cmd_analyze, "Weight-spectrum figures and bounds for design files.")
    p.add_argument("designs", nargs="+")
    _add_channel_flags(p, False)
    p.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    p.add_argument("--json", help="also write a JSON report with negligibility ratios")

    p = add("sweep", cmd_sweep, "Minimum row weight of the reliability design along a channel grid.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--family", choices=("bec", "awgn"), default="bec")
    p.add_argument("--erasure-range", type=float, nargs=3, metavar=("HIGH", "LOW", "POINTS"),
                   help="log-spaced erasure grid; rho = -ln(erasure)")
    p.add_argument("--rho-range", type=float, nargs=3, metavar=("START", "STOP", "POINTS"))
    p.add_argument("--snr-range", type=float, nargs=3, metavar=("START", "STOP", "POINTS"))
    p.add_argument("--tie-break", choices=("low", "high"), default=None)
    p.add_argument("--out", default="-")

    p = add("simulate", cmd_simulate, "BPSK-AWGN Monte-Carlo BLER for a design file.")
    p.add_argument("--design", required=True)
    p.add_argument("--snr-db", type=float, nargs="+", required=True)
    p.add_argument("--decoder", choices=("sc", "scl"), default="scl")
    p.add_argument("--list-size", type=int, default=None)
    p.add_argument("--pretransform", choices=("none", "crc", "pac"), default="none")
    p.add_argument("--exact", action="store_true", help="exact box-plus instead of min-sum")
    p.add_argument("--max-blocks", type=int, default=10_000_000)
    p.add_argument("--target-errors", type=int, default=100)
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--batch", type=int, default=256)
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--out", default="-")
    p.add_argument("--json", help="JSON summary path")

    p = add("oracle-check", cmd_oracle_check, "Compare closed forms against brute-force enumeration.")
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--sampled-m", type=int, default=5)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--max-k", type=int, default=24)
    p.add_argument("--max-lta-m", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="-")

    p = add("compare", cmd_compare, "Perturbation figures between two designs.")
    p.add_argument("a")
    p.add_argument("b")
    _add_channel_flags(p, False)
    p.add_argument("--out", default="-")
    return parser


def _apply_config(parser, argv) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    subs = parser._subparsers._group_actions[0].choices
    if not known.config or command not in subs:
        return parser.parse_args(argv)
    try:
        data = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_DATA, f"cannot read config {known.config}: {exc}") from None
    if isinstance(data, dict) and isinstance(data.get("parameters"), dict):
        data = data["parameters"]
    if not isinstance(data, dict):
        raise CliError(EXIT_DATA, "config must be a JSON object")
    sub = subs[command]
    known_dests = {a.dest for a in sub._actions} - {"help", "config"}
    unknown = sorted(set(data) - known_dests)
    if unknown:
        raise CliError(EXIT_USAGE, f"unknown config keys: {', '.join(unknown)}")
    # flags given on the command line win over the config file
    sub.set_defaults(**data)
    for action in sub._actions:
        if action.dest in data and action.option_strings:
            action.required = False
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except CliError as exc:
        print(f"polarforge: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
