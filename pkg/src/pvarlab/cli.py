"""Command-line front end.

Subcommands: pvar, kfunc, fourier, embed, seqnorm, verify.  Numeric output is
fixed at 12 significant digits so identical configurations produce
byte-identical files.  Exit codes: 0 success, 1 computation error,
2 validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import fourier as fr
from . import seqspaces as sq
from .embeddings import (
    LambdaSequence,
    PhiSequence,
    WitnessBudget,
    embedding_criterion,
    exp_orlicz,
    power_orlicz,
    witness_generate,
)
from .functions import from_spec
from .kfunctional import kfunctional_sweep, lower_monotone_in_t
from .modulus import ModulusOfVariation
from .sampled import SampledFunction
from .variation import pvariation_dp, pvariation_profile
from .verify import run_battery

log = logging.getLogger("pvarlab")


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _setup_logging():
    level = os.environ.get("PVARLAB_LOG", "error").strip().lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        raise ValueError(f"PVARLAB_LOG must be one of {sorted(levels)}, got {level!r}")
    logging.basicConfig(level=levels[level], format="%(levelname)s %(name)s: %(message)s")


def _parse_nu(spec: str) -> ModulusOfVariation:
    s = spec.strip().lower()
    if s.startswith("power:"):
        return ModulusOfVariation.power(float(s.split(":", 1)[1]))
    if s == "log":
        return ModulusOfVariation.log()
    if s.startswith("table:"):
        return ModulusOfVariation.from_table([float(v) for v in s.split(":", 1)[1].split(",")])
    raise ValueError(f"unknown nu spec {spec!r} (power:<alpha>, log, table:v1,v2,...)")


def _parse_omega(spec: str):
    s = spec.strip().lower()
    if s.startswith("power:"):
        return fr.OmegaPower(float(s.split(":", 1)[1]))
    if s == "log":
        return fr.OmegaLog()
    raise ValueError(f"unknown omega spec {spec!r} (power:<alpha> or log)")


def _parse_phi(spec: str) -> PhiSequence:
    s = spec.strip().lower()
    if s.startswith("power:"):
        return PhiSequence.power_all(float(s.split(":", 1)[1]))
    if s == "orlicz:exp":
        return PhiSequence.orlicz_all(exp_orlicz())
    if s.startswith("orlicz:power:"):
        return PhiSequence.orlicz_all(power_orlicz(float(s.rsplit(":", 1)[1])))
    if s.startswith("lambda:"):
        # lambda:<q>:<beta> -> phi_j(x) = x^q / j^beta
        parts = s.split(":")
        q = float(parts[1])
        beta = float(parts[2]) if len(parts) > 2 else 1.0
        return PhiSequence.orlicz_over_lambda(power_orlicz(q), LambdaSequence.power(beta))
    raise ValueError(
        f"unknown phi spec {spec!r} (power:<q>, orlicz:exp, orlicz:power:<q>, lambda:<q>[:<beta>])"
    )


def _load_function(args) -> SampledFunction:
    if getattr(args, "values", None):
        vals = [float(v) for v in args.values.split(",")]
        grid = np.linspace(0.0, 1.0, len(vals))
        return SampledFunction(grid, vals)
    if getattr(args, "function", None):
        return from_spec(args.function, seed=getattr(args, "seed", 0))
    raise ValueError("provide --values or --function")


def _write(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(args, header: str, rows: list[str]):
    if args.format == "json":
        cols = header.split(",")
        data = [dict(zip(cols, r.split(","))) for r in rows]
        _write(args, json.dumps(data, sort_keys=True, indent=1) + "\n")
    else:
        _write(args, header + "\n" + "\n".join(rows) + ("\n" if rows else ""))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_pvar(args) -> int:
    f = _load_function(args)
    n_max = args.n or args.n_max
    if n_max is None or n_max < 1:
        raise ValueError("pvar needs --n or --n-max >= 1")
    prof = pvariation_profile(f, args.p, n_max)
    rows = [f"{n},{_fmt(v)}" for n, v in zip(range(1, n_max + 1), prof)]
    _emit_rows(args, "n,value", rows)
    value, sel = pvariation_dp(f, args.p, n_max)
    if args.selection_out:
        payload = {
            "p": args.p,
            "n": n_max,
            "value": float(value),
            "intervals": [[int(i), int(j)] for i, j in sel.intervals],
            "differences": [float(d) for d in sel.differences],
        }
        with open(args.selection_out, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
    return 0


def _cmd_kfunc(args) -> int:
    f = _load_function(args)
    ts = [float(t) for t in args.t.split(",")]
    for t in ts:
        if not (0.0 < t <= 1.0):
            raise ValueError(f"t = {t:g} outside (0, 1]")
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as ex:
            sandwiches = list(ex.map(lambda t: kfunctional_sweep(f, [t], args.p)[0], ts))
    else:
        sandwiches = kfunctional_sweep(f, ts, args.p)
    rows = [
        f"{_fmt(s.t)},{s.M},{_fmt(s.lower)},{_fmt(s.upper)},{_fmt(s.ratio)},{s.case}"
        for s in sandwiches
    ]
    log.info("lower bound nondecreasing in t: %s", lower_monotone_in_t(sandwiches))
    _emit_rows(args, "t,M,lower,upper,ratio,case", rows)
    return 0


def _cmd_fourier(args) -> int:
    if args.decay:
        f = _load_function(args)
        nu = _parse_nu(args.nu)
        n_max = args.n_max or 64
        c = fr.fourier_coeffs(f, n_max)
        mags = np.hypot(c.a, c.b)
        ns = np.arange(1, n_max + 1, dtype=np.float64)
        ratios = mags * ns ** (1.0 / args.p) / nu.table(n_max)
        rows = [f"{n},{_fmt(r)}" for n, r in zip(range(1, n_max + 1), ratios)]
        _emit_rows(args, "n,coeff_ratio", rows)
        return 0
    nu = _parse_nu(args.nu)
    omega = _parse_omega(args.omega)
    ns = sorted({int(v) for v in args.n_list.split(",")})
    if any(n < 2 for n in ns):
        raise ValueError("sweep indices must be >= 2")
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as ex:
            seqs = list(ex.map(lambda n: fr.convergence_sequences(nu, omega, args.p, n), ns))
    else:
        seqs = [fr.convergence_sequences(nu, omega, args.p, n) for n in ns]
    rows = [
        f"{s.n},{s.theta},{_fmt(s.rho)},{_fmt(s.sigma)},{_fmt(s.tau)},{_fmt(s.eta)}"
        for s in seqs
    ]
    _emit_rows(args, "n,theta,rho,sigma,tau,eta", rows)
    return 0


def _cmd_embed(args) -> int:
    Phi = _parse_phi(args.phi)
    nu = _parse_nu(args.nu)
    report = embedding_criterion(Phi, nu, args.p, args.horizon,
                                 growth_factor=args.growth_factor,
                                 ref_fraction=args.ref_fraction)
    payload = report.to_json_dict()
    if args.witness:
        if report.verdict != "Fails":
            raise ValueError(f"cannot generate a witness: verdict is {report.verdict}")
        witness = witness_generate(Phi, nu, args.p, args.k_max,
                                   WitnessBudget(criterion_horizon=args.horizon))
        payload["witness"] = None if witness is None else witness.to_json_dict()
    _write(args, json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return 0


def _cmd_seqnorm(args) -> int:
    rows = []
    space = args.space.lower()
    if args.x:
        x = np.array([float(v) for v in args.x.split(",")])
        label = "x"
    else:
        if args.n is None or args.n < 1:
            raise ValueError("seqnorm needs --x or --n >= 1")
        x = np.ones(args.n)
        label = str(args.n)
    if space == "marcinkiewicz":
        nu = _parse_nu(args.nu)
        val = sq.marcinkiewicz_norm(x, nu, args.p)
        params = f"nu={args.nu};p={_fmt(args.p)}"
    elif space == "lorentz":
        w = 1.0 / np.arange(1, x.size + 1, dtype=np.float64)
        val = sq.lorentz_norm(x, w, args.q)
        params = f"w=harmonic;q={_fmt(args.q)}"
    elif space == "orlicz":
        val = sq.orlicz_norm(x, power_orlicz(args.q))
        params = f"phi=power:{_fmt(args.q)}"
    elif space == "modular":
        val = sq.modular_norm(x, _parse_phi(args.phi))
        params = f"phi={args.phi}"
    else:
        raise ValueError(f"unknown space {args.space!r}")
    rows.append(f"{space},{params},{label},{_fmt(val)}")
    _emit_rows(args, "space,params,n_or_x_id,value", rows)
    return 0


def _cmd_verify(args) -> int:
    report, passed = run_battery(args.seed)
    _write(args, report)
    return 0 if passed else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pvarlab", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, function=True):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        if function:
            p.add_argument("--values", default=None, help="comma list sampled on [0,1]")
            p.add_argument("--function", default=None,
                           help="zigzag[:n] | square[:n] | sine[:n] | sawtooth[:n] | linear[:n] | random[:n]")

    p = sub.add_parser("pvar", help="modulus of p-variation profile")
    common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--selection-out", default=None, help="write the optimal selection JSON here")
    p.set_defaults(fn=_cmd_pvar)

    p = sub.add_parser("kfunc", help="K-functional sandwich sweep")
    common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--t", required=True, help="comma list of t values in (0,1]")
    p.set_defaults(fn=_cmd_kfunc)

    p = sub.add_parser("fourier", help="convergence-criterion sweep or coefficient decay")
    common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--omega", default=None)
    p.add_argument("--n-list", dest="n_list", default="8,16,32,64,128,256,512")
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--decay", action="store_true", help="emit the coefficient-decay report")
    p.set_defaults(fn=_cmd_fourier)

    p = sub.add_parser("embed", help="embedding criterion and optional witness")
    common(p, function=False)
    p.add_argument("--phi", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--k-max", dest="k_max", type=int, default=3)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--growth-factor", dest="growth_factor", type=float, default=10.0)
    p.add_argument("--ref-fraction", dest="ref_fraction", type=float, default=0.25)
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("seqnorm", help="symmetric sequence-space norms")
    common(p, function=False)
    p.add_argument("--space", required=True,
                   choices=["marcinkiewicz", "lorentz", "orlicz", "modular"])
    p.add_argument("--x", default=None, help="comma list of entries")
    p.add_argument("--n", type=int, default=None, help="indicator length instead of --x")
    p.add_argument("--nu", default="power:0.5")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--phi", default="power:2")
    p.set_defaults(fn=_cmd_seqnorm)

    p = sub.add_parser("verify", help="run the invariant battery")
    common(p, function=False)
    p.set_defaults(fn=_cmd_verify)
    return ap


def config_to_argv(path: str) -> list[str]:
    """Translate a JSON config file into an argument vector.

    Layout: {"subcommand": "fourier", "params": {"nu": "log", "n-list": "8,512",
    "decay": true}, "output": {"path": "...", "format": "csv"}}.  All violated
    constraints are reported together.
    """
    with open(path) as fh:
        cfg = json.load(fh)
    problems = []
    sub = cfg.get("subcommand")
    known = {"pvar", "kfunc", "fourier", "embed", "seqnorm", "verify"}
    if sub not in known:
        problems.append(f"subcommand must be one of {sorted(known)}, got {sub!r}")
    params = cfg.get("params", {})
    if not isinstance(params, dict):
        problems.append("params must be an object")
        params = {}
    out = cfg.get("output", {})
    if not isinstance(out, dict):
        problems.append("output must be an object")
        out = {}
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        problems.append(f"output.format must be csv or json, got {fmt!r}")
    if problems:
        raise ValueError("invalid config: " + "; ".join(problems))
    argv = [sub]
    for key, value in params.items():
        flag = "--" + str(key).replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv.extend([flag, str(value)])
    if out.get("path"):
        argv.extend(["--out", str(out["path"])])
    if fmt != "csv":
        argv.extend(["--format", fmt])
    return argv


def main(argv=None) -> int:
    try:
        _setup_logging()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    if argv[:1] == ["--config"]:
        if len(argv) != 2:
            print("error: --config takes exactly one path", file=sys.stderr)
            return 2
        try:
            argv = config_to_argv(argv[1])
        except (OSError, ValueError, json.JSONDecodeError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "omega", "x") is None and args.cmd == "fourier" and not args.decay:
        print("error: fourier sweep needs --omega (or pass --decay)", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # computation failure
        log.debug("computation error", exc_info=True)
        print(f"computation error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
