"""Command-line front end.

JSON goes to standard output (CSV for ``trace`` without ``-o``). Failures
print ``{"code", "message", "context"}`` to standard error and exit with
2 for bad input, 3 for violated theorem hypotheses, 4 for resource caps,
1 for anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields

from .errors import InputError, LemHeightsError
from .heights import fmt_radius, fmt_real, height_report, lp_norm, mahler_closed, subordination_check, sup_norm
from .lemniscate import Lemniscate, parse_radius, trace
from .numbertheory import (
    enumerate_conjugate_sets,
    kronecker_classify,
    lehmer_scan,
    lift_measure_identity,
    no_sets_below_one,
)
from .polynomials import FACTOR_DEGREE_CAP, format_polynomial, parse_polynomial
from .search import SearchSpec, min_height_search, verify_uniqueness


@dataclass
class Config:
    """Defaults for every knob; a JSON file passed with --config overrides them."""

    n_nodes: int = 4096
    n_theta: int = 4096
    search_theta: int = 1024
    scan_cap: int = 10**7
    search_cap: int = 10**8
    degree_cap: int = FACTOR_DEGREE_CAP
    max_index: int = 300
    workers: int = 1
    output: str | None = None

    @classmethod
    def load(cls, path: str | None) -> "Config":
        cfg = cls()
        if path is None:
            return cfg
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path}: {exc}") from None
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InputError("unknown config keys", keys=unknown)
        for key, value in data.items():
            setattr(cfg, key, value)
        return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _p_value(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    try:
        p = float(t)
    except ValueError:
        raise InputError(f"cannot parse p value {text!r}") from None
    if p < 0 or math.isnan(p):
        raise InputError("p must be >= 0", p=text)
    return p


def _p_list(text: str) -> list[float]:
    return [_p_value(t) for t in text.split(",") if t.strip()]


def _lemniscate(args) -> Lemniscate:
    return Lemniscate(parse_polynomial(args.V), parse_radius(args.r))


def _emit(obj, args, cfg):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    out = getattr(args, "output", None) or cfg.output
    if out and args.command != "trace":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_curve(sp, r_default=None):
    sp.add_argument("-V", required=True, help="polynomial V defining |V(z)| = r, e.g. 'z^2-1'")
    sp.add_argument("-r", required=r_default is None, default=r_default, help="radius: decimal or p/q")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lemheights", description="Polynomial heights over lemniscates |V(z)| = r.")
    ap.add_argument("--config", help="JSON file overriding the default knobs")
    ap.add_argument("--workers", type=int, help="worker threads for scans")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("measure", help="height report for P over L")
    _add_curve(sp)
    sp.add_argument("-P", required=True, help="integer polynomial P")
    sp.add_argument("--p-grid", default="1,2,4", help="comma-separated finite p values")
    sp.add_argument("--n-nodes", type=int)
    sp.add_argument("--n-theta", type=int)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("norms", help="L_p family sweep with subordination checks")
    _add_curve(sp)
    sp.add_argument("-P", required=True)
    sp.add_argument("--p", dest="p_list", default="0,0.5,1,2,4,8,inf")
    sp.add_argument("--n-nodes", type=int)
    sp.add_argument("--n-theta", type=int)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("trace", help="CSV export of the curve")
    _add_curve(sp)
    sp.add_argument("-n", "--n-theta", type=int, default=256)
    sp.add_argument("-o", "--output", help="CSV path; a JSON summary then goes to stdout")

    sp = sub.add_parser("search-min", help="smallest height over a coefficient box")
    _add_curve(sp)
    sp.add_argument("-k", type=int, default=1, help="degree cap is k * deg V")
    sp.add_argument("-p", default="0", help="0, a positive real, or inf")
    sp.add_argument("-B", "--coeff-bound", type=int, default=2)
    sp.add_argument("--no-prune", action="store_true")
    sp.add_argument("--theorem", choices=["auto", "MinH", "Llarge", "none"], default="auto")
    sp.add_argument("--cap", type=int)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("alg-ints", help="conjugate sets on L (r = 1) or emptiness scan (r < 1)")
    _add_curve(sp, r_default="1")
    sp.add_argument("--max-index", type=int, default=12)
    sp.add_argument("--max-degree", type=int, default=6)
    sp.add_argument("-B", "--coeff-bound", type=int, default=2)
    sp.add_argument("--cap", type=int)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("lehmer", help="lift identity for Q, or a Lehmer-type scan")
    _add_curve(sp, r_default="1")
    sp.add_argument("-Q", help="lift Q(w) through V and compare measures")
    sp.add_argument("--max-degree", type=int, default=6)
    sp.add_argument("-B", "--coeff-bound", type=int, default=1)
    sp.add_argument("--gap", type=float, default=1e-6)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--progress", action="store_true", help="progress lines as JSON on stderr")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("classify", help="unit-height classification of a monic irreducible P")
    _add_curve(sp, r_default="1")
    sp.add_argument("-P", required=True)
    sp.add_argument("--max-index", type=int)
    sp.add_argument("-o", "--output")
    return ap


def _lemniscate_dict(Lm: Lemniscate) -> dict:
    return {"V": format_polynomial(Lm.V), "r": fmt_radius(Lm.r)}


def _cmd_measure(args, cfg):
    Lm = _lemniscate(args)
    P = parse_polynomial(args.P)
    rep = height_report(
        P,
        Lm,
        p_grid=_p_list(args.p_grid),
        n_nodes=args.n_nodes or cfg.n_nodes,
        n_theta=args.n_theta or cfg.n_theta,
    )
    return rep.to_dict()


def _cmd_norms(args, cfg):
    Lm = _lemniscate(args)
    P = parse_polynomial(args.P)
    n_nodes = args.n_nodes or cfg.n_nodes
    n_theta = args.n_theta or cfg.n_theta
    ps = _p_list(args.p_list)
    norms, errors = {}, {}
    for p in ps:
        key = "inf" if p == math.inf else format(p, "g")
        if p == 0:
            norms[key] = fmt_real(mahler_closed(P, Lm))
        elif p == math.inf:
            norms[key] = fmt_real(sup_norm(P, Lm, n_theta).value)
        else:
            q = lp_norm(P, Lm, p, n_nodes)
            norms[key], errors[key] = fmt_real(q.value), fmt_real(q.error)
    sub = subordination_check(P, Lm, [p for p in ps if 0 < p < math.inf] or [2], n_nodes, n_theta)
    return {
        "polynomial": format_polynomial(P),
        "lemniscate": _lemniscate_dict(Lm),
        "norms": norms,
        "errors": errors,
        "subordination": {"chain_ok": sub.chain_ok, "monotone_ok": sub.monotone_ok, "violations": sub.violations},
    }


def _cmd_trace(args, cfg):
    Lm = _lemniscate(args)
    tr = trace(Lm, args.n_theta)
    if not args.output:
        sys.stdout.write(tr.to_csv())
        for w in tr.warnings:
            sys.stderr.write(json.dumps({"warning": w}) + "\n")
        return None
    tr.to_csv(args.output)
    return {
        "lemniscate": _lemniscate_dict(Lm),
        "n_theta": args.n_theta,
        "components": len(tr.components),
        "monodromy": list(tr.monodromy),
        "max_residual": fmt_real(tr.max_residual),
        "warnings": tr.warnings,
        "csv": args.output,
    }


def _cmd_search(args, cfg):
    Lm = _lemniscate(args)
    spec = SearchSpec(
        Lm,
        args.k,
        _p_value(args.p),
        args.coeff_bound,
        prune=not args.no_prune,
        cap=args.cap or cfg.search_cap,
        theorem=args.theorem,
        n_theta=cfg.search_theta,
        n_nodes=cfg.n_nodes,
        workers=cfg.workers,
    )
    res = min_height_search(spec)
    out = res.to_dict()
    if res.theorem == "MinH":
        out["uniqueness"] = verify_uniqueness(spec, res).to_dict()
    return out


def _cmd_algints(args, cfg):
    Lm = _lemniscate(args)
    if Lm.r == 1:
        rep = enumerate_conjugate_sets(Lm, args.max_index, args.max_degree, cfg.degree_cap)
        return {"mode": "enumerate", **rep.to_dict()}
    rep = no_sets_below_one(Lm, args.coeff_bound, args.max_degree, cap=args.cap or cfg.scan_cap)
    return {"mode": "emptiness", "lemniscate": _lemniscate_dict(Lm), **rep.to_dict()}


def _cmd_lehmer(args, cfg):
    Lm = _lemniscate(args)
    if args.Q:
        rep = lift_measure_identity(parse_polynomial(args.Q), Lm)
        return {"mode": "lift", "Q": format_polynomial(parse_polynomial(args.Q), "w"), **rep.to_dict()}

    def progress(rec):
        sys.stderr.write(json.dumps({k: rec[k] for k in ("shard", "scanned", "best_so_far")}) + "\n")

    rep = lehmer_scan(
        Lm,
        args.max_degree,
        args.coeff_bound,
        args.gap,
        cap=args.cap or cfg.scan_cap,
        progress=progress if args.progress else None,
    )
    return {"mode": "scan", "lemniscate": _lemniscate_dict(Lm), **rep.to_dict()}


def _cmd_classify(args, cfg):
    Lm = _lemniscate(args)
    P = parse_polynomial(args.P)
    v = kronecker_classify(P, Lm, args.max_index or cfg.max_index)
    return {"polynomial": format_polynomial(P), "lemniscate": _lemniscate_dict(Lm), **v.to_dict()}


COMMANDS = {
    "measure": _cmd_measure,
    "norms": _cmd_norms,
    "trace": _cmd_trace,
    "search-min": _cmd_search,
    "alg-ints": _cmd_algints,
    "lehmer": _cmd_lehmer,
    "classify": _cmd_classify,
}


def _error_json(code: str, message: str, context: dict) -> str:
    return json.dumps({"code": code, "message": message, "context": context}, default=str) + "\n"


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = Config.load(args.config)
        if args.workers is not None:
            cfg.workers = args.workers
        out = COMMANDS[args.command](args, cfg)
        if out is not None:
            _emit(out, args, cfg)
        return 0
    except LemHeightsError as exc:
        sys.stderr.write(_error_json(type(exc).__name__, exc.message, exc.context))
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(_error_json("InputError", str(exc), {}))
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
