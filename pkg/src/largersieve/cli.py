"""Command line interface: one subcommand per capability, JSON on stdout.

Exit codes: 0 success, 2 a verified bound was violated, 3 invalid instance,
64 usage error.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .harness import SCHEMA_VERSION, SweepConfig

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_INVALID = 3
EXIT_USAGE = 64

POLY_TARGETS = ("thm3", "cor2", "remark", "lemma4")
LATTICE_TARGETS = ("thm2", "lemma5", "lemma6", "lemma7", "gauss")

# per-target defaults, overridden key by key by a --sweep config
VERIFY_DEFAULTS = {
    **{t: {"degrees": (2, 4), "q_range": (2, 1000), "coeff_box": 5, "samples": 10**5,
           "options": {"random_q_max": 10**4}} for t in POLY_TARGETS},
    "thm4": {"degrees": (2, 4), "q_range": (2, 3000), "options": {"two_power_alpha": 20,
                                                                  "two_power_ns": [2, 4, 8, 16]}},
    "lemma3": {"degrees": (2, 8), "q_range": (2, 5000)},
    "hensel": {"samples": 10**4, "options": {"limit": 10**6}},
    "sieve": {"samples": 10**4},
    "thm2": {"samples": 1000, "dims": (2, 3)},
    "lemma5": {"dims": (1, 5)},
    "lemma6": {"samples": 10**4},
    "lemma7": {"samples": 2000, "options": {"exhaustive": True}},
    "gauss": {"samples": 2000},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj):
    out = {"schema_version": SCHEMA_VERSION}
    out.update(obj)
    sys.stdout.write(json.dumps(out, indent=2, default=_default) + "\n")


def _default(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if hasattr(x, "value"):
        return float(x.value)
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_constants(args):
    from .constants import c_s, certify_remark_bound, lemma2_check, remark_constant

    out = {"command": "constants"}
    for s in args.c_s or []:
        v = c_s(s, args.prec)
        out.setdefault("c_s", []).append({"s": s, "value": float(v.value), "lo": str(float(v.lo)),
                                          "hi": str(float(v.hi)), "abs_error_bound": float(v.abs_error_bound)})
    if args.lemma2:
        rows = lemma2_check(args.lemma2, args.prec)
        out["lemma2"] = {"s_max": args.lemma2, "all_hold": all(r.ok for r in rows),
                         "worst_margin": min(float(r.rhs.lo - r.lhs.hi) for r in rows)}
    if args.remark:
        rc = remark_constant(args.cutoff, args.prec)
        out["remark"] = {"cutoff": args.cutoff, "lo": float(rc.enclosure.lo), "hi": float(rc.enclosure.hi),
                         "tail_bound": float(rc.tail_bound),
                         "certified_le_3_817": certify_remark_bound(prime_cutoff=args.cutoff, prec=args.prec)}
    if len(out) == 1:
        v = c_s(3, args.prec)
        out["c_s"] = [{"s": 3, "value": float(v.value), "abs_error_bound": float(v.abs_error_bound)}]
    _emit(out)
    return EXIT_OK


def cmd_sieve_bound(args):
    from .sieve1d import (
        SieveInstance1D,
        corollary1_bound,
        gallagher_bound,
        theorem1_bound,
        theorem1_lambda_variant,
        verify_instance,
    )

    inst = SieveInstance1D.from_dict(_load_json(args.instance))
    methods = {"gallagher": gallagher_bound, "theorem1": theorem1_bound,
               "lambda": theorem1_lambda_variant, "corollary1": corollary1_bound}
    chosen = list(methods) if args.method == "all" else [args.method]
    reports = {}
    for name in chosen:
        reports[name] = methods[name](inst, args.prec).to_dict()
    out = {"command": "sieve-bound", "S": inst.S, "reports": reports}
    code = EXIT_OK
    if args.verify:
        res = verify_instance(inst, args.prec)
        out["verify"] = {"ok": res.ok, "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in res.checks]}
        code = EXIT_OK if res.ok else EXIT_VIOLATION
    _emit(out)
    return code


def _poly(text):
    from .polycong import IntPoly

    try:
        return IntPoly.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad coefficient list {text!r}: {exc}") from exc


def cmd_poly_solve(args):
    from .polycong import solve_mod_q

    P = _poly(args.coeffs)
    sol = solve_mod_q(P, args.q)
    _emit({"command": "poly-solve", "coeffs": list(P.coeffs), "modulus": args.q,
           "count": len(sol), "roots": list(sol.roots)})
    return EXIT_OK


def cmd_poly_count(args):
    from .polycong import IntervalI, count_in_interval, max_admissible_points

    P = _poly(args.coeffs)
    I = IntervalI(args.start, args.length)
    W, wit = count_in_interval(P, args.q, I)
    n = P.degree
    _emit({"command": "poly-count", "coeffs": list(P.coeffs), "modulus": args.q,
           "interval": [I.start, I.stop], "points": I.count, "W": W, "witnesses": wit,
           "admissible": {"measure": I.count <= max_admissible_points(args.q, n, "measure"),
                          "count": I.count <= max_admissible_points(args.q, n, "count")}})
    return EXIT_OK


def cmd_lattice_bound(args):
    from .lattice import LatticeSieveInstance, theorem2_bound

    inst = LatticeSieveInstance.from_dict(_load_json(args.instance))
    if args.validate:
        inst.validate()
    rep = theorem2_bound(inst, args.prec)
    out = {"command": "lattice-bound", "points": len(inst.points), "report": rep.to_dict()}
    code = EXIT_OK
    if inst.points and not rep.admits(len(inst.points)):
        code = EXIT_VIOLATION
    _emit(out)
    return code


def _config(target, args):
    base = dict(VERIFY_DEFAULTS.get(target, {}))
    user = _load_json(args.sweep) if getattr(args, "sweep", None) else {}
    user.pop("target", None)
    if "options" in user:
        base["options"] = {**base.get("options", {}), **user.pop("options")}
    base.update(user)
    for key in ("seed", "samples", "workers"):
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    try:
        return SweepConfig.from_dict(base, target)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad sweep config: {exc}") from exc


def run_verify(cfg):
    """Dispatch a sweep config to its verifier and return the RunReport."""
    from . import latsweeps, polysweeps
    from .sieve1d import sieve_sweep

    t, o = cfg.target, cfg.options
    lo_n, hi_n = cfg.degrees
    if t == "thm3":
        return polysweeps.verify_theorem3(cfg)
    if t in ("remark", "lemma4"):
        return polysweeps.short_interval_sweep(cfg)
    if t == "cor2":
        return polysweeps.verify_corollary2(cfg)
    if t == "thm4":
        return polysweeps.verify_theorem4(cfg)
    if t == "lemma3":
        return polysweeps.lemma3_sweep(range(lo_n, hi_n + 1), q_min=cfg.q_range[0], q_max=cfg.q_range[1])
    if t == "hensel":
        return polysweeps.hensel_sweep(cfg.samples, cfg.seed, o.get("limit", 10**6))
    if t == "sieve":
        return sieve_sweep(cfg.samples, cfg.seed)
    if t == "thm2":
        return latsweeps.theorem2_sweep(cfg.samples, cfg.seed, tuple(range(cfg.dims[0], cfg.dims[1] + 1)))
    if t == "lemma5":
        return latsweeps.lemma5_report(range(max(1, cfg.dims[0]), min(5, cfg.dims[1]) + 1))
    if t == "lemma6":
        return latsweeps.lemma6_sweep(cfg.samples, cfg.seed)
    if t == "lemma7":
        return latsweeps.lemma7_sweep(cfg.samples, cfg.seed, o.get("exhaustive", True))
    if t == "gauss":
        return latsweeps.gauss_sweep(cfg.samples, cfg.seed)
    raise UsageError(f"no verifier for {t!r}")


def _report(cfg, args):
    t0 = time.perf_counter()
    rep = run_verify(cfg)
    rep.wall_time = time.perf_counter() - t0
    out = rep.to_dict(include_timing=args.timing)
    out["config"] = cfg.to_dict()
    sys.stdout.write(json.dumps(out, indent=2, default=_default) + "\n")
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_verify(args):
    return _report(_config(args.target, args), args)


def cmd_lattice_verify(args):
    picked = [t for t in LATTICE_TARGETS if getattr(args, t)]
    if len(picked) != 1:
        raise UsageError("choose exactly one of --thm2, --lemma5, --lemma6, --lemma7, --gauss")
    return _report(_config(picked[0], args), args)


def cmd_search(args):
    from .polysweeps import svk_search, window_search

    if args.kind == "window":
        rep = window_search(tuple(args.degrees), args.q_max, args.count, args.seed)
    else:
        rep = svk_search(tuple(args.degrees), args.q_max, args.count, args.seed)
    out = rep.to_dict()
    out["kind"] = args.kind
    sys.stdout.write(json.dumps(out, indent=2, default=_default) + "\n")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="largersieve", description="Larger sieve bounds and polynomial congruence verifiers.")
    p.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="working precision in bits")
    common.add_argument("--json", action="store_true", help="JSON output (always on; accepted for scripts)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="c_s, the Lemma 2 check and the remark constant")
    c.add_argument("--c-s", type=int, action="append", metavar="S")
    c.add_argument("--lemma2", type=int, metavar="S_MAX")
    c.add_argument("--remark", action="store_true")
    c.add_argument("--cutoff", type=int, default=10**6)
    c.set_defaults(func=cmd_constants)

    s = sub.add_parser("sieve-bound", parents=[common], help="one-dimensional bounds for an instance file")
    s.add_argument("instance")
    s.add_argument("--method", choices=["all", "gallagher", "theorem1", "lambda", "corollary1"], default="all")
    s.add_argument("--verify", action="store_true", help="check the explicit elements against every bound")
    s.set_defaults(func=cmd_sieve_bound)

    ps = sub.add_parser("poly-solve", parents=[common], help="roots of P mod q (coefficients low degree first)")
    ps.add_argument("coeffs")
    ps.add_argument("q", type=int)
    ps.set_defaults(func=cmd_poly_solve)

    pc = sub.add_parser("poly-count", parents=[common], help="roots of P mod q in [START, START+LEN-1]")
    pc.add_argument("coeffs")
    pc.add_argument("q", type=int)
    pc.add_argument("start", type=int)
    pc.add_argument("length", type=int, help="number of integers in the interval")
    pc.set_defaults(func=cmd_poly_count)

    lb = sub.add_parser("lattice-bound", parents=[common], help="m-dimensional bound for an instance file")
    lb.add_argument("instance")
    lb.add_argument("--validate", action="store_true", help="check honest nu, region and general position")
    lb.set_defaults(func=cmd_lattice_bound)

    sweep_opts = _Parser(add_help=False)
    sweep_opts.add_argument("--sweep", metavar="CONFIG.json")
    sweep_opts.add_argument("--seed", type=int)
    sweep_opts.add_argument("--samples", type=int)
    sweep_opts.add_argument("--workers", type=int)
    sweep_opts.add_argument("--timing", action="store_true", help="include wall time in the report")

    lv = sub.add_parser("lattice-verify", parents=[common, sweep_opts], help="lattice property sweeps")
    for t in LATTICE_TARGETS:
        lv.add_argument(f"--{t}", action="store_true")
    lv.set_defaults(func=cmd_lattice_verify)

    v = sub.add_parser("verify", parents=[common, sweep_opts], help="zero-violation sweeps")
    v.add_argument("target", choices=sorted(VERIFY_DEFAULTS))
    v.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", parents=[common], help="hunt for near-extremal polynomial instances")
    se.add_argument("--kind", choices=["window", "svk"], default="window")
    se.add_argument("--degrees", type=int, nargs=2, default=[2, 4], metavar=("LO", "HI"))
    se.add_argument("--q-max", type=int, default=10**4)
    se.add_argument("--count", type=int, default=5000)
    se.add_argument("--seed", type=int, default=0)
    se.set_defaults(func=cmd_search)
    return p


def run(argv=None):
    from .errors import LargerSieveError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("missing subcommand")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (LargerSieveError, KeyError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_INVALID


def main():
    sys.exit(run())
