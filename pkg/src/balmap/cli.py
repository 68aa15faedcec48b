"""Command-line surface.

Subcommands: catalog, verify-identities, cohomology, moment, theorem, ma.
Reports are emitted either human readable or as line-delimited JSON
(--format structured); runs with identical arguments and seeds produce byte
identical structured output.  Exit codes: 0 all checks passed, 1 at least
one check failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .exact import CRat
from .invariant import (HOLO, InvVectorField, LieModel, ModelError,
                        ParseError, load_model)
from .catalog import CATALOG_MAPS, MODELS, get_map
from .hodge import ClassObstructionError, aeppli_dim, bc_dim
from .masolver import (GridError, NewtonFailure, ScalarField, TorusGrid,
                       format_samples, parse_modes, parse_samples, solve_ma)
from .moment import (MapSpec, MomentTuple, ValidationError,
                     flow_derivative_check, load_mapspec, load_tuple,
                     mu_eval, pg_membership, well_definedness_check,
                     x_membership)
from .reports import Report
from .symalg import identity_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _all_models() -> Dict[str, LieModel]:
    return dict(MODELS)


def _resolve_map(ref: str, models) -> MapSpec:
    if ref in CATALOG_MAPS:
        return get_map(ref)
    return load_mapspec(ref, models)


def _parse_field_coeffs(model: LieModel, text: str, kind: str) -> InvVectorField:
    parts = text.split(",")
    if len(parts) != model.dim:
        raise ValidationError("field needs %d comma-separated entries" % model.dim)
    coeffs = []
    for p in parts:
        p = p.strip()
        if "i" in p:
            raise ValidationError("command-line fields take rational entries; "
                                  "use a tuple file for complex coefficients")
        coeffs.append(CRat(Fraction(p)))
    return InvVectorField(model, kind, coeffs)


def _emit(report: Report, args) -> int:
    import os
    lines = (report.to_lines(__version__) if args.format == "structured"
             else report.to_human())
    text = "\n".join(lines) + "\n"
    out = args.output
    outdir = os.environ.get("BALMAP_OUTPUT_DIR")
    if out and outdir and not os.path.isabs(out):
        out = os.path.join(outdir, out)
    elif out is None and outdir:
        ext = "jsonl" if args.format == "structured" else "txt"
        out = os.path.join(outdir, "%s-report.%s" % (report.command, ext))
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


# -- subcommands ------------------------------------------------------------------


def cmd_catalog(args) -> int:
    rep = Report(command="catalog")
    for name in sorted(MODELS):
        m = MODELS[name]
        rep.add("model-%s" % name, "catalog-entry", True,
                detail="dim %d, volume_scale %s" % (m.dim, m.volume_scale))
    for name in sorted(CATALOG_MAPS):
        e = CATALOG_MAPS[name]
        rep.add("map-%s" % name, "catalog-entry", True,
                detail="%s -> %s: %s" % (e["source"], e["target"], e["comment"]))
    return _emit(rep, args)


def cmd_verify_identities(args) -> int:
    rep = Report(command="verify-identities", seed=args.seed)
    suite = identity_suite(seed=args.seed, trials=args.trials)
    for r in suite.records:
        rep.add(r.name, r.law, r.ok, residual=float(r.failures),
                detail=(None if r.ok else (r.counterexample or "")[:400]),
                expected_failure=r.expected_failure)
    return _emit(rep, args)


def cmd_cohomology(args) -> int:
    models = _all_models()
    rep = Report(command="cohomology", seed=None)
    try:
        model = models[args.model] if args.model in models else load_model(args.model)
        if args.kind == "aeppli":
            dim = aeppli_dim(model, args.p, args.q)
            law = "aeppli-dimension-exact-rank"
        else:
            dim = bc_dim(model, args.p, args.q)
            law = "bott-chern-dimension-exact-rank"
    except (ParseError, ModelError, OSError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT_ERROR
    rep.add("%s-%s-%d-%d" % (args.kind, model.name, args.p, args.q), law, True,
            residual=float(dim), detail="dimension %d" % dim,
            provenance="exact rational elimination")
    rep.extra["dimension"] = dim
    return _emit(rep, args)


def cmd_moment(args) -> int:
    models = _all_models()
    try:
        f = _resolve_map(args.map, models)
        tuple_name, t = load_tuple(args.tuple, models)
        if args.gamma_policy:
            t = MomentTuple(t.xis, t.etabars, args.gamma_policy)
    except (ParseError, ValidationError, OSError, KeyError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT_ERROR
    rep = Report(command="moment", seed=args.seed)
    rep.extra["map"] = f.name
    rep.extra["tuple"] = tuple_name
    rep.extra["gamma_policy"] = t.gamma_policy

    xm = x_membership(f)
    rep.add("map-membership", "pullback-class-vanishing", xm.member,
            residual=xm.pulled_norm,
            detail=(xm.impossibility or xm.obstruction) if not xm.member
            else xm.scope_note)
    pg = pg_membership(t, f.source)
    rep.add("tuple-membership", "bracket-contraction-sums-vanish", pg.member,
            residual=max(pg.residual_bar, pg.residual_del),
            detail="lie-algebra certificates: %s; swap-symmetric: %s"
                   % (pg.lie_g_ok, pg.swap_symmetric))
    if not (xm.member and pg.member):
        return _emit(rep, args)
    try:
        value = mu_eval(f, t)
    except (ClassObstructionError, ValidationError) as e:
        rep.add("pairing-value", "potential-pairing", False, detail=str(e))
        return _emit(rep, args)
    rep.add("pairing-value", "potential-pairing", True,
            detail="value %r" % value)
    rep.extra["value"] = [value.real, value.imag]
    wd = well_definedness_check(f, t, trials=args.trials, seed=args.seed)
    rep.add("gauge-invariance", "pairing-invariant-under-potential-shifts",
            wd.max_deviation <= 1e-10, residual=wd.max_deviation,
            detail="%d random shifts" % args.trials)
    rep.add("reversal-signs", "contraction-reversal-identities",
            wd.reversal_ok)
    rep.add("closure", "derivatives-of-iterated-contraction-vanish",
            max(wd.closure_del_norm, wd.closure_delbar_norm) <= 1e-12,
            residual=max(wd.closure_del_norm, wd.closure_delbar_norm))
    return _emit(rep, args)


def cmd_theorem(args) -> int:
    models = _all_models()
    try:
        f = _resolve_map(args.map, models)
        xi = _parse_field_coeffs(f.source, args.xi, HOLO)
        eta = _parse_field_coeffs(f.source, args.eta, HOLO)
        steps = [float(s) for s in args.steps.split(",")]
    except (ParseError, ValidationError, ValueError, OSError, KeyError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT_ERROR
    rep = Report(command="theorem", seed=args.seed)
    rep.extra["map"] = f.name
    try:
        fr = flow_derivative_check(f, xi, eta, steps=steps)
    except (ValidationError, ClassObstructionError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT_ERROR
    for s in fr.steps:
        ok = s.obstruction is None
        rep.add("stencil-h-%g" % s.h, "mixed-flow-derivative-vs-contraction",
                ok, residual=(None if not ok else s.rel_error),
                detail=s.obstruction if not ok else None)
    if fr.trivial:
        rep.add("convergence-order", "mixed-flow-derivative-vs-contraction",
                fr.ok, detail="both sides vanish identically (trivial orbit)")
    else:
        order_ok = fr.observed_order >= 1.9
        rep.add("convergence-order", "mixed-flow-derivative-vs-contraction",
                fr.ok and order_ok,
                residual=fr.observed_order if fr.orders else None,
                detail="orders %s" % (["%.3f" % o for o in fr.orders],))
    rep.extra["target_norm"] = fr.target_norm
    return _emit(rep, args)


def cmd_ma(args) -> int:
    try:
        grid = TorusGrid(args.dim, args.res)
        if args.modes:
            with open(args.modes) as fh:
                F = parse_modes(fh.read(), grid, args.modes)
        elif args.samples:
            with open(args.samples) as fh:
                F = parse_samples(fh.read(), grid, args.samples)
        else:
            F = ScalarField.zeros(grid)
        gram = np.eye(args.dim)
    except (GridError, OSError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT_ERROR
    rep = Report(command="ma", seed=args.seed)
    rep.extra["dim"] = args.dim
    rep.extra["res"] = args.res
    rep.extra["forcing_spectral_tail"] = F.spectral_tail()
    try:
        result = solve_ma(F, gram, tol=args.tol)
    except NewtonFailure as e:
        rep.add("solve", "volume-normalization-equation", False, detail=str(e))
        return _emit(rep, args)
    d = result.diagnostics
    rep.add("solve", "volume-normalization-equation", d.converged,
            residual=d.residual_history[-1],
            detail="newton %d, inner %d" % (d.newton_iterations,
                                            d.gmres_iterations))
    rep.add("positivity", "metric-positivity-along-solution",
            d.min_eigenvalue > 0, residual=d.min_eigenvalue)
    rep.add("conservation", "volume-conservation-identity",
            d.conservation_gap <= 1e-9, residual=d.conservation_gap)
    rep.add("normalization", "sup-normalized-potential",
            abs(result.phi.values.max()) == 0.0,
            residual=abs(result.phi.values.max()))
    rep.extra["C"] = result.C
    rep.extra["residual_history"] = [float(r) for r in d.residual_history]
    rep.extra["min_eigenvalue"] = d.min_eigenvalue
    if args.solution_out:
        with open(args.solution_out, "w") as fh:
            fh.write(format_samples(result.phi))
    return _emit(rep, args)


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="balmap",
        description="Exact bigraded calculus, invariant cohomology and "
                    "moment-map checks on structure-constant models.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--format", choices=("human", "structured"),
                       default="human")
        p.add_argument("--output", default=None,
                       help="write the report to a file instead of stdout")

    p = sub.add_parser("catalog", help="list shipped models and maps")
    common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify-identities",
                       help="run the exact Lie-derivative identity suite")
    common(p)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("cohomology", help="exact invariant cohomology dimension")
    common(p)
    p.add_argument("--model", required=True,
                   help="catalog model name or model file path")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kind", choices=("aeppli", "bottchern"), required=True)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("moment", help="membership, pairing and gauge invariance")
    common(p)
    p.add_argument("--map", required=True,
                   help="catalog map name or map file path")
    p.add_argument("--tuple", required=True, help="tuple file path")
    p.add_argument("--gamma-policy", choices=("neumann", "any-solution"),
                   default=None)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("theorem",
                       help="finite-difference confirmation of the "
                            "moment-map derivative identity")
    common(p)
    p.add_argument("--map", required=True)
    p.add_argument("--xi", required=True,
                   help="comma-separated rational frame coefficients")
    p.add_argument("--eta", required=True)
    p.add_argument("--steps", default="1e-1,5e-2,2.5e-2")
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("ma", help="volume-normalization solve on a flat torus")
    common(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--res", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--modes", default=None, help="Fourier-mode input file")
    p.add_argument("--samples", default=None, help="raw sample input file")
    p.add_argument("--solution-out", default=None,
                   help="write the solution samples to this path")
    p.set_defaults(func=cmd_ma)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
