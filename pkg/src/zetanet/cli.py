"""Command-line entry point.

Machine-readable JSON goes to stdout, human prose to stderr.  Exit codes:
0 success, 1 usage, 2 domain error (an evaluation outside a convergence
region, a degenerate formula, an empty window), 3 sampling or balance
failure.  A plain-text ``key = value`` config file can seed any
subcommand's flags; explicit flags win, and every run prints its resolved
configuration (and writes it next to any file outputs).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .arith import (
    dirichlet_convolve,
    dirichlet_inverse_cm,
    epsilon_function,
    euler_phi_function,
    identity_function,
    liouville_function,
    mobius_function,
    pointwise_product,
    unit_function,
    verify_multiplicative,
)
from .degdist import (
    kmax_rule,
    make_bipartite_lgraph,
    make_degree_distribution,
    make_directed_barnes,
    make_directed_separated,
    mean_degree,
)
from .epidemics import Transmissibility, epidemic_threshold_product
from .errors import (
    BalanceFailureError,
    ClusteringRangeWarning,
    ConvergenceDomainError,
    DegenerateDenominatorError,
    EmptyWindowError,
    NoSignChangeError,
    SignedDistributionError,
    UnboundedCoefficientError,
    ZeroNormalizerError,
    ZetanetError,
)
from .lseries import DEFAULT_TOL, make_family
from .phasescan import default_window, export_scan, resolve_formula, scan
from .sampler import (
    build_bipartite,
    build_directed,
    giant_component_fraction,
    measured_clustering,
    one_mode_projection,
    read_edgelist,
    sample_degree_sequence,
    sir_percolation,
    write_edgelist,
)
from .thresholds import (
    bipartite_margin,
    clustering_coefficient,
    directed_separated_margin,
    unipartite_margin,
)

_DOMAIN_ERRORS = (
    ConvergenceDomainError,
    ZeroNormalizerError,
    UnboundedCoefficientError,
    DegenerateDenominatorError,
    EmptyWindowError,
    NoSignChangeError,
    ValueError,
)
_SAMPLING_ERRORS = (BalanceFailureError, SignedDistributionError)

_ARITH_FACTORIES = {
    "unit": unit_function,
    "one": unit_function,
    "epsilon": epsilon_function,
    "delta": epsilon_function,
    "identity": identity_function,
    "id": identity_function,
    "mobius": mobius_function,
    "mu": mobius_function,
    "liouville": liouville_function,
    "lambda": liouville_function,
    "euler_phi": euler_phi_function,
    "phi": euler_phi_function,
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_family_spec(spec: str) -> dict:
    """Parse 'zeta', 'hurwitz:k0=1', 'barnes:w=1,a=2' into a params dict."""
    tag, _, rest = spec.partition(":")
    params = {"family": tag.strip().lower()}
    for item in rest.split(","):
        item = item.strip()
        if not item:
            continue
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad family parameter {item!r} in {spec!r}")
        params[key.strip()] = float(val)
    return params


def _family_from_spec(spec: str):
    params = _parse_family_spec(spec)
    tag = params.pop("family")
    return make_family(tag, **params)


def _emit(payload: dict, prose: str = "") -> None:
    json.dump(payload, sys.stdout, indent=1)
    sys.stdout.write("\n")
    if prose:
        print(prose, file=sys.stderr)


def _resolved_config(args: argparse.Namespace) -> dict:
    skip = {"func", "command", "config"}
    out = {"command": args.command, "version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, np.generic):
            value = value.item()
        out[key] = value
    return out


def _write_config_sidecar(out_path: str, config: dict) -> str:
    sidecar = str(out_path) + ".config.json"
    with open(sidecar, "w") as fh:
        json.dump(config, fh, indent=1)
        fh.write("\n")
    return sidecar


def _thread_count(requested) -> int:
    if requested is not None:
        n = int(requested)
    else:
        env = os.environ.get("ZETANET_THREADS", "").strip()
        n = int(env) if env else (os.cpu_count() or 1)
    if n < 1:
        raise ValueError("thread count must be at least 1")
    return n


def _phase(margin: float) -> str:
    return "SUPER" if margin > 0 else "SUB"


def cmd_eval(args) -> int:
    L = _family_from_spec(args.family)
    if args.n_terms is not None:
        res = L.series_partial(args.s, args.n_terms)
    else:
        res = L.eval(args.s, args.tol)
    payload = {
        "command": "eval",
        "family": L.family_params(),
        "s": args.s,
        "value": res.value,
        "tail_bound": res.tail_bound,
        "terms_used": res.terms_used,
        "config": _resolved_config(args),
    }
    _emit(payload, f"{L.name}({args.s:g}) = {res.value:.15g} "
                   f"(tail <= {res.tail_bound:.3g}, {res.terms_used} terms)")
    return 0


def cmd_threshold(args) -> int:
    L1 = _family_from_spec(args.l1)
    L2 = _family_from_spec(args.l2 if args.l2 is not None else args.l1)
    beta = args.beta if args.beta is not None else args.alpha
    payload = {"command": "threshold", "kind": args.kind, "alpha": args.alpha}
    prose = ""
    if args.kind == "bipartite":
        r = bipartite_margin(L1, args.alpha, L2, beta, args.tol)
        payload.update(beta=beta, margin=r.margin, phase=_phase(r.margin),
                       formula=r.formula, inputs=r.inputs)
        prose = f"bipartite margin {r.margin:.9g} -> {_phase(r.margin)}"
    elif args.kind == "unipartite":
        r = unipartite_margin(L1, args.alpha, args.tol)
        payload.update(margin=r.margin, phase=_phase(r.margin),
                       formula=r.formula, inputs=r.inputs)
        prose = f"unipartite margin {r.margin:.9g} -> {_phase(r.margin)}"
    elif args.kind == "directed":
        r = directed_separated_margin(L1, args.alpha, L2, beta, args.tol)
        payload.update(beta=beta, margin=r.margin, phase=_phase(r.margin),
                       formula=r.formula, inputs=r.inputs)
        prose = f"directed margin {r.margin:.9g} -> {_phase(r.margin)}"
    elif args.kind == "epidemic":
        product = epidemic_threshold_product(L1, args.alpha, L2, beta, args.tol)
        payload.update(beta=beta, critical_product=product,
                       formula="epidemic_threshold")
        prose = f"critical transmissibility product {product:.9g}"
        if args.tmf is not None:
            tfm = args.tfm if args.tfm is not None else args.tmf
            margin = args.tmf * tfm - product
            payload.update(tmf=args.tmf, tfm=tfm, margin=margin,
                           phase=_phase(margin))
            prose += f"; at tmf*tfm = {args.tmf * tfm:.6g}: {_phase(margin)}"
    else:  # clustering
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ClusteringRangeWarning)
            c = clustering_coefficient(L1, args.alpha, L2, beta, args.tol)
        payload.update(beta=beta, value=c, in_range=bool(0.0 <= c <= 1.0),
                       formula="clustering")
        prose = f"closed-form clustering {c:.9g}"
    payload["config"] = _resolved_config(args)
    _emit(payload, prose)
    return 0


def cmd_scan(args) -> int:
    if args.eq is not None:
        formula = args.eq
    else:
        if args.kind is None:
            raise ValueError("scan needs either --eq or --kind")
        spec = {
            "kind": args.kind,
            "l1": _parse_family_spec(args.l1),
            "l2": _parse_family_spec(args.l2 if args.l2 is not None else args.l1),
        }
        if args.target is not None:
            spec["target"] = args.target
        formula = spec
    spec = resolve_formula(formula)
    window = tuple(args.window) if args.window is not None else None
    threads = _thread_count(args.threads)
    result = scan(formula, window=window, resolution=args.res,
                  tol=args.curve_tol, eval_tol=args.tol, threads=threads)
    out = args.out
    if out is None:
        ext = "csv" if args.fmt == "csv" else "json"
        out = f"{spec['tag'].replace(':', '-')}_{args.res}.{ext}"
    paths = export_scan(result, out, fmt=args.fmt)
    finite = result.margin[~np.isnan(result.margin)]
    counts = {
        "SUPER": int((finite > 0).sum()),
        "SUB": int((finite <= 0).sum()),
        "OUTSIDE": int(np.isnan(result.margin).sum()),
    }
    config = _resolved_config(args)
    config["threads"] = threads
    config["out"] = str(out)
    paths.append(_write_config_sidecar(out, config))
    payload = {
        "command": "scan",
        "formula": result.formula,
        "paths": paths,
        "cells": int(result.margin.size),
        "phases": counts,
        "curve_points": len(result.zero_curve),
        "window": list(result.window),
        "clipped_window": list(result.clipped_window),
        "config": config,
    }
    _emit(payload, f"scan {result.formula}: {counts['SUPER']} SUPER / "
                   f"{counts['SUB']} SUB / {counts['OUTSIDE']} OUTSIDE cells, "
                   f"{len(result.zero_curve)} curve points -> {paths[0]}")
    return 0


def _sample_one(args, seed: int):
    """Build one replicate and measure it; returns (sample, record)."""
    record = {"seed": seed}
    s_a, s_b, s_build = (
        int(x) for x in np.random.SeedSequence(seed).generate_state(3, np.uint64)
    )
    measures = set(args.measure.split(",")) if args.measure else set()
    analytic = {}
    if args.bipartite:
        L1 = _family_from_spec(args.l1)
        L2 = _family_from_spec(args.l2 if args.l2 is not None else args.l1)
        beta = args.beta if args.beta is not None else args.alpha
        k_max = args.kmax if args.kmax is not None else kmax_rule(args.n, min(args.alpha, beta))
        p, q = make_bipartite_lgraph(L1, args.alpha, L2, beta, k_max)
        seq_a = sample_degree_sequence(p, args.n, s_a)
        seq_b = sample_degree_sequence(q, args.n, s_b)
        g = build_bipartite(seq_a, seq_b, s_build, dist_a=p, dist_b=q)
        if "histogram" in measures:
            analytic["mean_degree_a"] = mean_degree(p)
            analytic["mean_degree_b"] = mean_degree(q)
        if "clustering" in measures:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ClusteringRangeWarning)
                analytic["clustering_formula"] = clustering_coefficient(
                    L1, args.alpha, L2, beta)
    else:
        if args.barnes_w is not None:
            k_max = args.kmax if args.kmax is not None else kmax_rule(args.n, args.alpha - 1.0)
            pi = make_directed_barnes(args.alpha, args.barnes_w, args.barnes_a, k_max)
        else:
            L1 = _family_from_spec(args.l1)
            L2 = _family_from_spec(args.l2 if args.l2 is not None else args.l1)
            beta = args.beta if args.beta is not None else args.alpha
            k_max = args.kmax if args.kmax is not None else kmax_rule(args.n, min(args.alpha, beta))
            p, q = make_bipartite_lgraph(L1, args.alpha, L2, beta, k_max)
            pi = make_directed_separated(p, q)
        g = build_directed(pi, args.n, s_build)
    record["edges"] = int(g.edges.shape[0])
    record["k_max"] = g.k_max
    if "giant" in measures:
        record["giant_fraction"] = giant_component_fraction(g)
    if "clustering" in measures:
        proj = one_mode_projection(g, "A")
        record["clustering_measured"] = measured_clustering(proj)
    if "histogram" in measures:
        if g.mode == "bipartite":
            names = ("degrees_a", "degrees_b")
        else:
            names = ("degrees_in", "degrees_out")
        for name, seq in zip(names, g.degrees):
            counts = np.bincount(seq, minlength=min(g.k_max, 64) + 1)
            record[name] = counts[: 64 + 1].tolist()
            record[name + "_tail"] = int(counts[64 + 1:].sum())
            record[name + "_mean"] = float(seq.mean())
    record.update(analytic)
    return g, record


def cmd_sample(args) -> int:
    if not args.bipartite and not args.directed:
        raise ValueError("sample needs --bipartite or --directed")
    measures = set(args.measure.split(",")) if args.measure else set()
    known = {"giant", "clustering", "histogram"}
    if not measures <= known:
        raise ValueError(f"unknown measures {sorted(measures - known)}; "
                         f"choose from {sorted(known)}")
    if "clustering" in measures and args.directed:
        raise ValueError("clustering measurement needs a bipartite sample")
    replicates = []
    written = []
    config = _resolved_config(args)
    for r in range(args.replicates):
        g, record = _sample_one(args, args.seed ^ r)
        replicates.append(record)
        if args.out is not None:
            path = str(args.out)
            if args.replicates > 1:
                root, ext = os.path.splitext(path)
                path = f"{root}.r{r}{ext}"
            written.extend(write_edgelist(g, path))
    if args.out is not None:
        written.append(_write_config_sidecar(args.out, config))
    payload = {
        "command": "sample",
        "mode": "bipartite" if args.bipartite else "directed",
        "n": args.n,
        "replicates": replicates,
        "paths": written,
        "config": config,
    }
    aggregate = {}
    for key in ("giant_fraction", "clustering_measured"):
        vals = [r[key] for r in replicates if key in r]
        if vals:
            aggregate[key + "_mean"] = float(np.mean(vals))
            aggregate[key + "_min"] = float(np.min(vals))
            aggregate[key + "_max"] = float(np.max(vals))
    payload["aggregate"] = aggregate
    prose = f"built {args.replicates} replicate(s), N = {args.n}"
    if "giant_fraction_mean" in aggregate:
        prose += f"; giant fraction mean {aggregate['giant_fraction_mean']:.4g}"
    if "clustering_measured_mean" in aggregate:
        prose += f"; measured clustering {aggregate['clustering_measured_mean']:.4g}"
    _emit(payload, prose)
    return 0


def cmd_percolate(args) -> int:
    try:
        g = read_edgelist(args.graph)
    except FileNotFoundError:
        raise ValueError(f"edge list not found: {args.graph}")
    tfm = args.tfm if args.tfm is not None else args.tmf
    t = Transmissibility(args.tmf, tfm)
    stats = sir_percolation(g, t, args.trials, args.seed,
                            giant_cutoff=args.cutoff)
    payload = {
        "command": "percolate",
        "graph": str(args.graph),
        "population": g.n_vertices,
        "tmf": t.t_mf,
        "tfm": t.t_fm,
        "trials": stats.trials,
        "mean_size": stats.mean_size,
        "giant_fraction": stats.giant_fraction,
        "cutoff": stats.cutoff,
        "config": _resolved_config(args),
    }
    _emit(payload, f"mean outbreak {stats.mean_size:.4g}, giant fraction "
                   f"{stats.giant_fraction:.4g} (cutoff {stats.cutoff})")
    return 0


def cmd_algebra(args) -> int:
    def build(name):
        key = name.strip().lower()
        if key not in _ARITH_FACTORIES:
            raise ValueError(f"unknown arithmetic function {name!r}; "
                             f"choose from {sorted(set(_ARITH_FACTORIES))}")
        return _ARITH_FACTORIES[key](args.n_max)

    f = build(args.f)
    payload = {"command": "algebra", "op": args.op, "n_max": args.n_max}
    if args.op in ("convolve", "pointwise"):
        if args.g is None:
            raise ValueError(f"--g is required for op {args.op!r}")
        g = build(args.g)
        h = dirichlet_convolve(f, g) if args.op == "convolve" else pointwise_product(f, g)
        payload.update(name=h.name, kind=h.kind, values=list(h.vals[1:]))
        prose = f"{h.name}: kind {h.kind}, first values {list(h.vals[1:9])}"
    elif args.op == "inverse":
        h = dirichlet_inverse_cm(f)
        payload.update(name=h.name, kind=h.kind, values=list(h.vals[1:]))
        prose = f"{h.name}: kind {h.kind}, first values {list(h.vals[1:9])}"
    else:  # verify
        ok, witness = verify_multiplicative(f, completely=args.completely)
        payload.update(name=f.name, multiplicative=ok,
                       witness=list(witness) if witness is not None else None)
        prose = (f"{f.name} verified multiplicative up to {f.n_max}" if ok
                 else f"{f.name} fails at {witness}")
    payload["config"] = _resolved_config(args)
    _emit(payload, prose)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, metavar="FILE",
                   help="plain-text key = value file supplying flag defaults")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="evaluation tolerance (default %(default)g)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="zetanet",
                     description="Degree-distribution models built from "
                                 "Dirichlet series: thresholds, phase scans, "
                                 "sampling, percolation.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate a series family at a point")
    _add_common(p)
    p.add_argument("--family", required=True,
                   help="family spec: zeta | mobius | liouville | "
                        "hurwitz:k0=V | barnes:w=V,a=V")
    p.add_argument("--s", type=float, required=True, help="evaluation point")
    p.add_argument("--n-terms", type=int, default=None,
                   help="force a plain partial sum with this many terms")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("threshold", help="closed-form threshold at one point")
    _add_common(p)
    p.add_argument("--kind", required=True,
                   choices=["bipartite", "unipartite", "directed",
                            "epidemic", "clustering"])
    p.add_argument("--l1", default="zeta", help="first family spec")
    p.add_argument("--l2", default=None, help="second family spec (default: --l1)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=None,
                   help="second exponent (default: --alpha)")
    p.add_argument("--tmf", type=float, default=None,
                   help="epidemic only: A-to-B transmissibility to classify")
    p.add_argument("--tfm", type=float, default=None,
                   help="epidemic only: B-to-A transmissibility (default: --tmf)")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("scan", help="grid scan of a threshold margin")
    _add_common(p)
    p.add_argument("--eq", default=None,
                   help="preset tag: bipthr | dirthr | mixthr | epidliouv")
    p.add_argument("--kind", default=None,
                   choices=["bipartite", "directed", "epidemic"],
                   help="custom scan kind (alternative to --eq)")
    p.add_argument("--l1", default="zeta", help="first family spec")
    p.add_argument("--l2", default=None, help="second family spec (default: --l1)")
    p.add_argument("--target", type=float, default=None,
                   help="epidemic scans: transmissibility product level")
    p.add_argument("--window", type=float, nargs=4, default=None,
                   metavar=("A0", "A1", "B0", "B1"),
                   help="scan window (default: convergence region + 3)")
    p.add_argument("--res", type=int, default=200, help="grid resolution per axis")
    p.add_argument("--curve-tol", dest="curve_tol", type=float, default=1e-9,
                   help="|margin| tolerance for curve points")
    p.add_argument("--out", default=None,
                   help="output path (default: <tag>_<res>.<fmt>)")
    p.add_argument("--fmt", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: ZETANET_THREADS or all cores)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sample", help="build configuration-model samples")
    _add_common(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--bipartite", action="store_true")
    mode.add_argument("--directed", action="store_true")
    p.add_argument("--l1", default="zeta", help="first family spec")
    p.add_argument("--l2", default=None, help="second family spec (default: --l1)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--barnes-w", type=float, default=None,
                   help="directed joint law: Barnes w (with --barnes-a)")
    p.add_argument("--barnes-a", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True, help="vertices per side")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=None,
                   help="truncation override (default: N^(1/(alpha-1)))")
    p.add_argument("--measure", default="giant",
                   help="comma list of giant,clustering,histogram (default giant)")
    p.add_argument("--replicates", type=int, default=1,
                   help="independent samples with seeds seed XOR index")
    p.add_argument("--out", default=None, help="edge-list output path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("percolate", help="SIR bond percolation on a saved sample")
    _add_common(p)
    p.add_argument("--graph", required=True, help="edge-list path from sample --out")
    p.add_argument("--tmf", type=float, required=True)
    p.add_argument("--tfm", type=float, default=None, help="default: --tmf")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=None,
                   help="giant-outbreak size cutoff (default: sqrt(population))")
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("algebra", help="Dirichlet algebra on arithmetic functions")
    _add_common(p)
    p.add_argument("--op", required=True,
                   choices=["convolve", "pointwise", "inverse", "verify"])
    p.add_argument("--f", required=True, help="function name (mobius, unit, ...)")
    p.add_argument("--g", default=None, help="second function for binary ops")
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--completely", action=argparse.BooleanOptionalAction,
                   default=None,
                   help="verify complete multiplicativity (default: from kind)")
    p.set_defaults(func=cmd_algebra)

    return parser


def _coerce_config_value(action: argparse.Action, raw: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)) or (
        isinstance(action, argparse.BooleanOptionalAction)
    ):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean for {action.dest}, got {raw!r}")
    parts = raw.split() if action.nargs not in (None, "?") else [raw]
    conv = action.type or str
    vals = [conv(x) for x in parts]
    return vals if action.nargs not in (None, "?") else vals[0]


def _load_config_file(path: str) -> dict:
    entries = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, val = line.partition("=")
            if not eq:
                raise ValueError(f"{path}:{ln}: expected 'key = value'")
            entries[key.strip().replace("-", "_")] = val.strip()
    return entries


def _apply_config(parser: _Parser, argv, args):
    """Re-parse with config-file values as defaults so flags keep priority."""
    sub_actions = [a for a in parser._actions
                   if isinstance(a, argparse._SubParsersAction)]
    sub_parser = sub_actions[0].choices[args.command]
    try:
        entries = _load_config_file(args.config)
    except FileNotFoundError:
        sub_parser.error(f"config file not found: {args.config}")
    known = {a.dest: a for a in sub_parser._actions
             if a.dest not in ("help", "config")}
    defaults = {}
    for key, raw in entries.items():
        if key not in known:
            sub_parser.error(f"unknown config key {key!r} for '{args.command}'")
        try:
            defaults[key] = _coerce_config_value(known[key], raw)
        except (TypeError, ValueError) as exc:
            sub_parser.error(f"bad config value for {key!r}: {exc}")
    sub_parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        args = _apply_config(parser, argv, args)
    try:
        return args.func(args)
    except _SAMPLING_ERRORS as exc:
        print(f"zetanet: sampling error: {exc}", file=sys.stderr)
        return 3
    except _DOMAIN_ERRORS as exc:
        print(f"zetanet: domain error: {exc}", file=sys.stderr)
        return 2
    except ZetanetError as exc:
        print(f"zetanet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
