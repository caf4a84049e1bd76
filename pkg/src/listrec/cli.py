"""Command line interface.

Exit status is 0 on success, 1 when --assert is given and the checked
property fails, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, harness, sigma
from .codes import sample_random_linear_code
from .errors import ListRecError
from .galois import GF, field, field_of_order
from .rational import as_fraction


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return _jsonable(obj.to_dict())
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _csv(obj) -> str:
    """A flat record as a two-line CSV, or a list of flat records as rows."""
    rows = obj if isinstance(obj, list) else [obj]
    rows = [_jsonable(r) for r in rows]
    keys = list(rows[0])
    out = [",".join(keys)]
    for r in rows:
        out.append(",".join("" if r[k] is None else str(r[k]) for k in keys))
    return "\n".join(out) + "\n"


def _emit(args, payload, text: str | None = None, default_format: str = "json") -> None:
    fmt = args.format or default_format
    if text is None:
        text = _csv(payload) if fmt == "csv" else harness.dumps(_jsonable(payload))
    out = args.out
    if out is None and os.environ.get(harness.OUT_DIR_ENV):
        out = Path(os.environ[harness.OUT_DIR_ENV]) / f"{args.command}.{fmt}"
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _field(args) -> GF:
    if args.p is not None:
        return field(args.p, args.m, args.modulus)
    if args.q is None:
        raise ValueError("give --q or --p")
    return field_of_order(args.q)


# subcommands


def _cmd_gen(args) -> int:
    F = _field(args)
    R = Fraction(args.k, args.n) if args.k is not None else as_fraction(args.R)
    seed = 0 if args.seed is None else args.seed
    C = sample_random_linear_code(F, args.n, R, seed, args.full_rank)
    _emit(args, harness.code_to_json(C))
    return 0


def _cmd_check(args) -> int:
    C = harness.code_from_json(_load(args.code))
    params = {"L": args.L, "ell": args.ell}
    for name in ("rho", "alpha", "eps"):
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)
    v = harness.run_check(C, args.property, params)
    _emit(args, v.to_dict())
    return 1 if args.assert_ and not v.holds else 0


def _cmd_sigma(args) -> int:
    F, Lam = harness.lambda_from_json(_load(args.lam))
    p_max = args.p_max or Lam.shape[1]
    rng = np.random.default_rng(0 if args.seed is None else args.seed)
    prof = sigma.sigma_profile(F, Lam, p_max, samples=args.samples, rng=rng)
    _emit(args, prof.to_dict())
    return 0


def _cmd_extract(args) -> int:
    F, Lam = harness.lambda_from_json(_load(args.lam))
    d = args.d or Lam.shape[1]
    ex = sigma.extract_low_dim_subset(F, Lam, d, as_fraction(args.zeta), args.ell)
    if ex is None:
        payload = {"schema": "listrec.extraction/1", "good": True}
    else:
        payload = dict(ex.to_dict(), good=False)
    _emit(args, payload)
    return 1 if args.assert_ and ex is not None and not ex.meets_contract else 0


def _cmd_bounds(args) -> int:
    c = args.calc
    if c == "entropy":
        out = {"x": args.x, "q": args.q, "H": bounds.entropy_q(args.x, args.q)}
    elif c == "expand-uniform":
        out = {
            "x": args.x,
            "q": args.q,
            "terms": args.terms,
            "series": bounds.entropy_expansion_around_uniform(args.x, args.q, args.terms),
            "direct": bounds.entropy_q(1 - 1 / args.q - args.x, args.q),
        }
    elif c == "expand-large-q":
        out = {
            "y": args.y,
            "q": args.q,
            "terms": args.terms,
            "series": bounds.entropy_expansion_large_q(args.y, args.q, args.terms),
            "direct": bounds.entropy_q(args.y, args.q),
        }
    elif c == "volume":
        vol = bounds.hamming_volume(args.q, args.n, args.rho)
        out = {
            "q": args.q,
            "n": args.n,
            "rho": args.rho,
            "volume": str(vol),
            "rate": math.log(vol) / (args.n * math.log(args.q)),
        }
    elif c == "ld-capacity":
        out = {"q": args.q, "rho": args.rho, "capacity": bounds.ld_capacity(args.q, args.rho)}
    elif c == "lr-capacity":
        cap = bounds.lr_capacity(args.q, args.ell, args.alpha)
        out = {"q": args.q, "ell": args.ell, "alpha": args.alpha, "capacity": cap}
    elif c == "avgrad":
        P = bounds.RateBoundParams(
            args.q, args.ell, args.eps, args.eta, args.zeta, args.xi, not args.mu_bar_ell_over_q
        )
        rb = bounds.thm_avgrad_rate(P)
        out = {
            "rate": rb.value,
            "binding": rb.binding,
            "linear": rb.linear,
            "entropy": rb.entropy,
            "log_list_size": bounds.thm_avgrad_log_list_size(P, args.C_prime),
            "list_size": bounds.thm_avgrad_list_size(P, args.C_prime),
        }
    elif c == "R0":
        out = bounds.cor_avgrad_R0(args.q, args.ell, args.eps, args.zeta)
    elif c == "window":
        e0, e1 = bounds.cor_constantagr_window(args.q)
        out = {"q": args.q, "eps0": e0, "eps1": e1}
    elif c == "large-q":
        out = bounds.cor_largeq_check(args.ell, args.gamma, args.delta, args.q, args.C, args.C_prime)
    elif c == "high-rate":
        out = bounds.cor_highratelr_check(args.gamma, args.ell, args.q, args.C)
    else:
        out = bounds.thm_easy_bounds(args.q, args.ell, args.zeta, args.xi, args.base)
    _emit(args, out)
    return 0


def _cmd_rates(args) -> int:
    start = args.start
    if start is None:
        start = math.floor(args.ell / args.q * 100) / 100 + 0.01
    grid = bounds.eps_grid(start, args.stop, args.step)
    pts = bounds.rate_curve(args.q, args.ell, args.zeta, grid)
    if (args.format or "csv") == "csv":
        _emit(args, None, bounds.rate_curve_csv(pts), "csv")
    else:
        meta = {"schema": "listrec.rates/1", "q": args.q, "ell": args.ell, "zeta": args.zeta}
        _emit(args, dict(meta, points=pts))
    return 0


def _cmd_experiment(args) -> int:
    spec = harness.ExperimentSpec.from_dict(_load(args.config))
    if args.seed is not None:
        spec.master_seed = args.seed
    if args.workers is not None:
        spec.parallelism = args.workers
    if args.compare:
        res = harness.compare_random_vs_linear(spec)
        payload = {k: r.to_dict() for k, r in res.items()}
        failed = any(r.failures for r in res.values())
    else:
        r = harness.run_experiment(spec)
        payload, failed = r.to_dict(), r.failures > 0
    _emit(args, payload)
    return 1 if args.assert_ and failed else 0


# parser


def _globals(sub: bool = False) -> argparse.ArgumentParser:
    # sub-level copies must not overwrite values given before the subcommand
    dflt = {"default": argparse.SUPPRESS} if sub else {}
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, help="random seed", **dflt)
    g.add_argument(
        "--out", help="output file (default stdout, or $LISTREC_OUT_DIR/<command>.<format>)", **dflt
    )
    g.add_argument("--format", choices=["json", "csv"], help="output format", **dflt)
    g.add_argument(
        "--assert", dest="assert_", action="store_true", help="exit 1 on a violated property", **dflt
    )
    return g


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="field order (default modulus)")
    p.add_argument("--p", type=int, help="characteristic")
    p.add_argument("--m", type=int, default=1, help="extension degree")
    p.add_argument("--modulus", type=int, nargs="+", help="coefficients c_0 .. c_m")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="listrec", parents=[_globals()], description=__doc__.splitlines()[0]
    )
    g = _globals(sub=True)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[g], help="sample a random linear code")
    _field_args(p)
    p.add_argument("--n", type=int, required=True)
    rate = p.add_mutually_exclusive_group(required=True)
    rate.add_argument("--R", help="rate, e.g. 1/2")
    rate.add_argument("--k", type=int, help="dimension")
    p.add_argument("--full-rank", action="store_true", help="resample until rank k")
    p.set_defaults(run=_cmd_gen)

    p = sub.add_parser("check", parents=[g], help="run a checker on a code file")
    p.add_argument("code")
    p.add_argument("--property", required=True, choices=harness.PROPERTIES)
    p.add_argument("--rho")
    p.add_argument("--alpha")
    p.add_argument("--eps")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--L", type=int, required=True)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("sigma", parents=[g], help="sigma profile of a message-set file")
    p.add_argument("lam")
    p.add_argument("--p-max", type=int)
    p.add_argument("--samples", type=int, help="Monte Carlo samples when exact is infeasible")
    p.set_defaults(run=_cmd_sigma)

    p = sub.add_parser("extract", parents=[g], help="low-dimensional subset extraction")
    p.add_argument("lam")
    p.add_argument("--zeta", required=True)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--d", type=int)
    p.set_defaults(run=_cmd_extract)

    p = sub.add_parser("bounds", parents=[g], help="rate, list-size and entropy calculators")
    calcs = p.add_subparsers(dest="calc", required=True)

    def calc(name, *specs):
        c = calcs.add_parser(name, parents=[g])
        for flag, kw in specs:
            c.add_argument(flag, **kw)
        return c

    fq = ("--q", {"type": float, "required": True})
    iq = ("--q", {"type": int, "required": True})
    ell = ("--ell", {"type": int, "default": 1})
    terms = ("--terms", {"type": int, "default": 20})
    C = ("--C", {"type": float, "default": 1.0})
    Cp = ("--C-prime", {"type": float, "default": 1.0})

    def real(name, default=None):
        return (name, {"type": float, "required": default is None, "default": default})

    calc("entropy", fq, real("--x"))
    calc("expand-uniform", fq, real("--x"), terms)
    calc("expand-large-q", fq, real("--y"), terms)
    calc("volume", iq, ("--n", {"type": int, "required": True}), ("--rho", {"required": True}))
    calc("ld-capacity", fq, real("--rho"))
    calc("lr-capacity", fq, ell, real("--alpha"))
    c = calc("avgrad", fq, ell, real("--eps"), real("--eta", 0.0), real("--zeta"), real("--xi", 0.0), Cp)
    c.add_argument("--mu-bar-ell-over-q", action="store_true", help="use mu_bar = ell/q and beta = 2")
    calc("R0", fq, ell, real("--eps"), real("--zeta"))
    calc("window", iq)
    calc("large-q", fq, ell, real("--gamma"), real("--delta"), C, Cp)
    calc("high-rate", fq, ell, real("--gamma"), C)
    base = ("--base", {"choices": ["2ql/xi", "q"], "default": "2ql/xi"})
    calc("zero-error", fq, ell, real("--zeta"), real("--xi"), base)
    p.set_defaults(run=_cmd_bounds)

    p = sub.add_parser("rates", parents=[g], help="rate curve CSV over a grid of eps")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--start", type=float, help="first eps (default just above ell/q)")
    p.add_argument("--stop", type=float, default=0.99)
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(run=_cmd_rates)

    p = sub.add_parser("experiment", parents=[g], help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--workers", type=int, help="override parallelism")
    p.add_argument("--compare", action="store_true", help="also run the uniform-words baseline")
    p.set_defaults(run=_cmd_experiment)
    return ap


def cli(argv: list[str] | None = None) -> int:
    """Parse argv, run the command and return the exit status."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.run(args)
    except (ListRecError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"listrec {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())
