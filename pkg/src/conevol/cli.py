"""Command-line front end.

Verbs: cone-info, cone-iv, cone-polar, arr-chi, arr-regions, arr-family,
verify, suite.  Output is JSON (--format json, default) or a fixed-width
table; identical argv and seed produce byte-identical output.  Exit codes:
0 success / all pass, 1 verification failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arrangement import (
    arrangement_from_json,
    arrangement_to_json,
    char_poly,
    intersection_lattice,
    level_char_poly,
    parse_family_spec,
    regions_j,
    zaslavsky_count,
)
from .cone import cone_from_json, cone_to_json, face_lattice, polar
from .identities import (
    VerificationReport,
    render_table,
    run_suite,
    verify_crofton_probability,
    verify_euler,
    verify_face_alternation,
    verify_family_statdim,
    verify_gauss_bonnet,
    verify_generic_slice,
    verify_genfun_alternation,
    verify_hug_schneider,
    verify_kinematic,
    verify_klivans_swartz,
    verify_mcmullen_inverse,
    verify_polar_kinematic,
    verify_sommerville,
    verify_statdim_alternation,
    verify_statdim_consistency,
    verify_steiner_mgf,
    verify_zaslavsky,
)
from .volumes import SampleConfig, estimate_iv, exact_iv, statistical_dimension


def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS defaults: a flag given after the verb overrides the root
    # value instead of being reset by the subparser's own default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=argparse.SUPPRESS,
                        help="Monte Carlo samples per estimate")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="base random seed")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                        help="independent sampling substreams")
    common.add_argument("--tolerance-sigmas", type=float, default=argparse.SUPPRESS,
                        help="z tolerance for statistical checks")
    common.add_argument("--trials", type=int, default=argparse.SUPPRESS,
                        help="rotations for kinematic checks")
    common.add_argument("--format", choices=("json", "table"),
                        default=argparse.SUPPRESS)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS,
                        help="write output to FILE")
    return common


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conevol",
        description="Exact combinatorics and Monte Carlo intrinsic volumes "
        "for polyhedral cones and central hyperplane arrangements.",
        parents=[_common_flags()],
    )
    p.set_defaults(samples=100_000, seed=0, workers=1, tolerance_sigmas=4.0,
                   trials=512, format="json", output=None)
    common = _common_flags()
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("cone-info", parents=[common],
                       help="dimensions, f-vector, both representations")
    s.add_argument("file")
    s = sub.add_parser("cone-iv", parents=[common],
                       help="Monte Carlo intrinsic volumes of a cone")
    s.add_argument("file")
    s = sub.add_parser("cone-polar", parents=[common], help="polar cone as a cone file")
    s.add_argument("file")
    s = sub.add_parser("arr-chi", parents=[common],
                       help="characteristic and level polynomials")
    s.add_argument("file", nargs="?")
    s.add_argument("--family", help="family spec, e.g. braid:4 or generic:n=5,d=3,seed=1")
    s = sub.add_parser("arr-regions", parents=[common], help="region counts by dimension")
    s.add_argument("file", nargs="?")
    s.add_argument("--family")
    s.add_argument("--j", type=int, default=None)
    s = sub.add_parser("arr-family", parents=[common],
                       help="materialize a named family arrangement")
    s.add_argument("family_spec")
    s = sub.add_parser("verify", parents=[common], help="run one identity check")
    s.add_argument("identity")
    s.add_argument("targets", nargs="*")
    s.add_argument("--family")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--j", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--t-grid", default="-1,-0.5,0.5,1")
    sub.add_parser("suite", parents=[common],
                   help="full identity battery over the bundled library")
    return p


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_cone(path: str):
    return cone_from_json(_load_json(path))


def _load_arrangement(args):
    if getattr(args, "family", None):
        return parse_family_spec(args.family)
    if getattr(args, "file", None):
        return arrangement_from_json(_load_json(args.file))
    if getattr(args, "targets", None):
        return arrangement_from_json(_load_json(args.targets[0]))
    raise ValueError("an arrangement file or --family spec is required")


def _emit(args, payload, table_text: str | None = None) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2)
    else:
        text = table_text if table_text is not None else json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cfg(args) -> SampleConfig:
    return SampleConfig(
        n_samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        tolerance_sigmas=args.tolerance_sigmas,
    )


def _cmd_cone_info(args) -> int:
    from .cone import matrix_to_json

    c = _load_cone(args.file)
    fl = face_lattice(c)
    payload = {
        "d": c.d,
        "dim": c.dim,
        "lineality_dim": c.lineality_dim,
        "pointed": c.is_pointed,
        "subspace": c.is_subspace,
        "f_vector": list(fl.f_vector),
        "euler_sum": fl.euler_sum,
        "cone": cone_to_json(c),
        "generators": matrix_to_json(c.generators),
        "lineality": matrix_to_json(c.lineality.basis),
    }
    rows = [f"ambient d        {c.d}", f"dim              {c.dim}",
            f"lineality dim    {c.lineality_dim}",
            f"f-vector         {list(fl.f_vector)}",
            f"euler sum        {fl.euler_sum}"]
    _emit(args, payload, "\n".join(rows))
    return 0


def _cmd_cone_iv(args) -> int:
    c = _load_cone(args.file)
    est = estimate_iv(c, _cfg(args))
    payload = est.to_json()
    ex = exact_iv(c)
    if ex is not None:
        payload["exact_values"] = [float(v) for v in ex.values]
        payload["exact_provenance"] = ex.provenance
    payload["statistical_dimension"] = statistical_dimension(est)
    rows = [f"v_{k}  {v:.6f} +- {s:.6f}"
            for k, (v, s) in enumerate(zip(est.values, est.std_errors))]
    _emit(args, payload, "\n".join(rows))
    return 0


def _cmd_cone_polar(args) -> int:
    c = _load_cone(args.file)
    _emit(args, cone_to_json(polar(c)))
    return 0


def _cmd_arr_chi(args) -> int:
    a = _load_arrangement(args)
    lat = intersection_lattice(a)
    chi = char_poly(a, lat)
    levels = [list(level_char_poly(a, j, lat).coeffs) for j in range(a.d + 1)]
    payload = {
        "d": a.d,
        "n_hyperplanes": len(a.normals),
        "chi": list(chi.coeffs),
        "levels": levels,
        "ell": list(lat.ell),
    }
    rows = [f"chi      {list(chi.coeffs)} (lowest degree first)"]
    rows += [f"chi_{j}    {lv}" for j, lv in enumerate(levels)]
    _emit(args, payload, "\n".join(rows))
    return 0


def _cmd_arr_regions(args) -> int:
    a = _load_arrangement(args)
    lat = intersection_lattice(a)
    js = range(a.d + 1) if args.j is None else [args.j]
    counts = {}
    zas = {}
    for j in js:
        counts[j] = len(regions_j(a, j, lat))
        zas[j] = zaslavsky_count(a, j, lat)
    payload = {
        "d": a.d,
        "counts": {str(j): counts[j] for j in js},
        "zaslavsky": {str(j): zas[j] for j in js},
        "match": all(counts[j] == zas[j] for j in js),
    }
    rows = [f"r_{j}   {counts[j]}  (zaslavsky {zas[j]})" for j in js]
    _emit(args, payload, "\n".join(rows))
    return 0


def _cmd_arr_family(args) -> int:
    a = parse_family_spec(args.family_spec)
    _emit(args, arrangement_to_json(a))
    return 0


def _parse_grid(text: str):
    return [float(x) for x in text.split(",") if x.strip()]


def _cmd_verify(args) -> int:
    cfg = _cfg(args)
    ident = args.identity
    reports: list[VerificationReport] = []
    if ident == "euler":
        reports.append(verify_euler(_load_cone(args.targets[0])))
    elif ident == "gauss-bonnet":
        reports.append(verify_gauss_bonnet(_load_cone(args.targets[0]), cfg))
    elif ident == "sommerville":
        reports.append(verify_sommerville(_load_cone(args.targets[0]), cfg))
    elif ident == "face-alternation":
        reports.append(verify_face_alternation(_load_cone(args.targets[0]), args.k, cfg))
    elif ident == "statdim-alternation":
        reports.append(verify_statdim_alternation(_load_cone(args.targets[0]), cfg))
    elif ident == "statdim-consistency":
        reports.append(verify_statdim_consistency(_load_cone(args.targets[0]), cfg))
    elif ident == "genfun":
        c = _load_cone(args.targets[0])
        for t in _parse_grid(args.t_grid):
            reports.append(verify_genfun_alternation(c, t, cfg))
    elif ident == "steiner-mgf":
        reports.append(verify_steiner_mgf(_load_cone(args.targets[0]),
                                          _parse_grid(args.t_grid), cfg))
    elif ident == "mcmullen":
        reports.append(verify_mcmullen_inverse(_load_cone(args.targets[0]), cfg))
    elif ident == "kinematic":
        c1, c2 = (_load_cone(t) for t in args.targets[:2])
        reports.append(verify_kinematic(c1, c2, args.k, args.trials, cfg))
    elif ident == "polar-kinematic":
        c1, c2 = (_load_cone(t) for t in args.targets[:2])
        reports.append(verify_polar_kinematic(c1, c2, args.k, args.trials, cfg))
    elif ident == "crofton":
        c1, c2 = (_load_cone(t) for t in args.targets[:2])
        reports.append(verify_crofton_probability(c1, c2, args.trials, cfg))
    elif ident == "zaslavsky":
        reports.append(verify_zaslavsky(_load_arrangement(args)))
    elif ident == "klivans-swartz":
        a = _load_arrangement(args)
        js = range(a.d + 1) if args.j is None else [args.j]
        for j in js:
            reports.append(verify_klivans_swartz(a, j, cfg))
    elif ident == "generic-slice":
        a = _load_arrangement(args)
        reports.append(verify_generic_slice(a, args.j if args.j else a.d, seed=args.seed))
    elif ident == "hug-schneider":
        if args.n is None or args.d is None:
            raise ValueError("hug-schneider requires --n and --d")
        reports.append(verify_hug_schneider(args.n, args.d, cfg))
    elif ident == "family-statdim":
        if not args.family or args.j is None:
            raise ValueError("family-statdim requires --family and --j")
        reports.append(verify_family_statdim(args.family, args.j, cfg))
    else:
        raise ValueError(f"unknown identity {ident!r}")
    payload = [r.to_json() for r in reports]
    _emit(args, payload, render_table(reports))
    return 0 if all(r.status != "fail" for r in reports) else 1


def _cmd_suite(args) -> int:
    cfg = _cfg(args)
    reports = run_suite(cfg, trials=min(args.trials, 128))
    payload = {
        "reports": [r.to_json() for r in reports],
        "n_pass": sum(r.status == "pass" for r in reports),
        "n_fail": sum(r.status == "fail" for r in reports),
        "n_skip": sum(r.status == "skip" for r in reports),
    }
    _emit(args, payload, render_table(reports))
    return 0 if payload["n_fail"] == 0 else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.verb == "cone-info":
            return _cmd_cone_info(args)
        if args.verb == "cone-iv":
            return _cmd_cone_iv(args)
        if args.verb == "cone-polar":
            return _cmd_cone_polar(args)
        if args.verb == "arr-chi":
            return _cmd_arr_chi(args)
        if args.verb == "arr-regions":
            return _cmd_arr_regions(args)
        if args.verb == "arr-family":
            return _cmd_arr_family(args)
        if args.verb == "verify":
            return _cmd_verify(args)
        if args.verb == "suite":
            return _cmd_suite(args)
        raise ValueError(f"unknown verb {args.verb!r}")
    except (OSError, ValueError, KeyError, IndexError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
