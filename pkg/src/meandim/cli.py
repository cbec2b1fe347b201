"""Command-line interface: every computation as a subcommand with JSON/CSV IO.

Exit codes: 0 success, 2 check failure, 3 resource limit, 4 bad spec/input.
Reports are canonical JSON (sorted keys, 12 significant digits) so a fixed
configuration and seed reproduce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import carpet, grid2d, oracle, selfsim, symbolic, weighted
from .errors import MeanDimError, ResourceLimit
from .metrics import MetricDescriptor, PointCloud
from .reportio import cloud_from_csv, cloud_to_csv, write_report
from .suite import run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_RESOURCE = 3
EXIT_SPEC = 4


def _parse_tuples(text: str):
    """'00,11,20' -> [(0, 0), (1, 1), (2, 0)] (single-digit symbol pairs)."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if ":" in item:
            u, v = item.split(":")
            out.append((int(u), int(v)))
        elif len(item) == 2:
            out.append((int(item[0]), int(item[1])))
        else:
            raise ValueError(f"cannot parse tuple {item!r}")
    return out


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _subshift_arg(args) -> symbolic.SubshiftSpec:
    if getattr(args, "spec", None):
        return symbolic.spec_from_json(_load_json(args.spec))
    raise ValueError("a --spec file is required")


def _pair_system_arg(args) -> weighted.PairShiftSystem:
    if getattr(args, "tuples", None):
        rel = _parse_tuples(args.tuples)
        return weighted.pair_system_from_tuples(args.a, args.b, rel)
    if getattr(args, "spec", None):
        doc = _load_json(args.spec)
        if "omega" in doc:
            omega = symbolic.spec_from_json(doc["omega"])
            return weighted.pair_system(int(doc["a"]), int(doc["b"]), omega)
        spec = symbolic.spec_from_json(doc)
        if spec.tuple_sizes is None:
            raise ValueError("pair systems need tuple sizes (a, b)")
        a, b = spec.tuple_sizes
        return weighted.pair_system(a, b, spec)
    raise ValueError("provide --tuples or --spec")


def _emit(report: dict, args) -> None:
    text = write_report(report, getattr(args, "out", None))
    sys.stdout.write(text)


def _emit_cloud(cloud: PointCloud, args) -> None:
    """CSV rows for the points plus a JSON sidecar for the metric."""
    text = cloud_to_csv(cloud.points.tolist())
    sidecar = write_report(
        {
            "kind": cloud.metric.kind,
            "iterates": cloud.metric.iterates,
            "truncation_error": cloud.truncation_error,
        },
        args.out + ".metric.json" if args.out else None,
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    sys.stdout.write(sidecar)


def cmd_entropy(args) -> int:
    spec = _subshift_arg(args)
    rep = symbolic.entropy(spec, args.nmax, args.budget)
    table = symbolic.count_words(spec, args.nmax, args.budget)
    _emit(
        {
            "command": "entropy",
            "best_estimate": rep.best_estimate,
            "spectral_value": rep.spectral_value,
            "upper_bounds": list(rep.upper_bounds),
            "counts": {str(n): str(table[n]) for n in range(1, args.nmax + 1)},
            "provenance": "spectral" if rep.exact else "bracket",
        },
        args,
    )
    return EXIT_OK


def cmd_weighted_entropy(args) -> int:
    sys_ = _pair_system_arg(args)
    rep = weighted.weighted_entropy(sys_, args.w, args.nmax, args.budget)
    _emit(
        {
            "command": "weighted-entropy",
            "w": rep.w,
            "Z": [{"N": n, "value": rep.z_values[n]} for n in sorted(rep.z_values)],
            "upper_bounds": list(rep.upper_bounds),
            "closed_form": rep.closed_form,
            "best_estimate": rep.best_estimate,
            "provenance": "closed_form" if rep.exact else "bracket",
        },
        args,
    )
    return EXIT_OK


def cmd_carpet(args) -> int:
    if args.tuples:
        spec = carpet.carpet_from_tuples(args.a, args.b, _parse_tuples(args.tuples))
    else:
        doc = _load_json(args.spec)
        omega = symbolic.spec_from_json(doc["omega"])
        spec = carpet.CarpetSpec(
            int(doc["a"]), int(doc["b"]),
            weighted.pair_system(int(doc["a"]), int(doc["b"]), omega),
        )
    rep = carpet.mean_dims(spec, args.nmax, args.budget)
    _emit(
        {
            "command": "carpet",
            "a": spec.a,
            "b": spec.b,
            "w": rep.w,
            "mdim_h": {
                "value": rep.mdim_h.value,
                "upper": rep.mdim_h.upper,
                "status": rep.mdim_h.status,
            },
            "mdim_m": {
                "value": rep.mdim_m.value,
                "upper": rep.mdim_m.upper,
                "status": rep.mdim_m.status,
            },
            "h_omega": rep.h_omega,
            "h_omega_prime": rep.h_omega_prime,
            "classical": rep.classical,
            "provenance": "formula",
        },
        args,
    )
    return EXIT_OK


def cmd_bm_classical(args) -> int:
    rel = _parse_tuples(args.tuples)
    rep = carpet.classical_carpet_dims(args.a, args.b, rel)
    gap = carpet.gap_analysis(args.a, args.b, rel)
    rep = dict(rep)
    rep.update({"command": "bm-classical", "equal": gap["equal"], "witness": gap["witness"]})
    _emit(rep, args)
    return EXIT_OK


def cmd_beta(args) -> int:
    omega = symbolic.spec_from_json(_load_json(args.omega)) if args.omega else None
    spec = selfsim.beta_system(args.a, args.beta, omega)
    dims = selfsim.self_similar_dims(spec, args.nmax)
    gap = selfsim.min_gap(args.a, args.beta, min(args.n, 10))
    fam = selfsim.covering_lower_bound(spec, args.N, args.n)
    if args.format == "csv":
        _emit_cloud(fam.points, args)
        return EXIT_OK
    observed = fam.points.min_pairwise() if fam.count > 1 else fam.eps
    separated = observed >= fam.eps - args.tol
    _emit(
        {
            "command": "beta",
            "a": args.a,
            "beta": args.beta,
            "mdim": dims["mdim"],
            "similarity_bound": dims["similarity_bound"],
            "min_gap": gap,
            "separation_scale": fam.eps,
            "family_count": str(fam.count),
            "family_min_distance": observed,
            "family_separated": separated,
            "provenance": {"mdim": "formula", "family": "oracle"},
        },
        args,
    )
    return EXIT_OK if separated else EXIT_CHECK_FAILED


def cmd_grid2d(args) -> int:
    spec = grid2d.rule_from_json(_load_json(args.rule))
    rep = grid2d.entropy2d(spec, args.nmax, args.mmax)
    homog = grid2d.homog_mean_dims(spec, spec.alphabet, args.nmax, args.mmax)
    _emit(
        {
            "command": "grid2d",
            "counts": {f"{n},{m}": str(c) for (n, m), c in rep.counts.items()},
            "estimates": {f"{n},{m}": e for (n, m), e in rep.estimates.items()},
            "best": rep.best,
            "best_cell": list(rep.best_cell),
            "mdim": homog["mdim"],
            "provenance": "transfer_matrix",
        },
        args,
    )
    return EXIT_OK


def cmd_oracle_cover(args) -> int:
    with open(args.points) as fh:
        pts = cloud_from_csv(fh.read())
    metric_doc = _load_json(args.metric) if args.metric else {"kind": "linf_finite"}
    metric = MetricDescriptor(
        kind=metric_doc["kind"], iterates=metric_doc.get("iterates")
    )
    cloud = PointCloud(
        points=pts,
        metric=metric,
        truncation_error=float(metric_doc.get("truncation_error", 0.0)),
    )
    bounds = oracle.covering_bounds(cloud, args.eps)
    report = {
        "command": "oracle cover",
        "eps": args.eps,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "provenance": "oracle",
    }
    if len(cloud) <= 12:
        report["exact"] = oracle.exact_min_cover(cloud, args.eps)
    _emit(report, args)
    return EXIT_OK


def cmd_oracle_hdim(args) -> int:
    diams = [float(x) for x in args.diams.split(",")]
    value = oracle.hausdorff_upper_at_scale(diams, args.eps, tol=args.tol)
    _emit(
        {
            "command": "oracle hdim",
            "eps": args.eps,
            "exponent": value,
            "sets": len(diams),
            "provenance": "oracle",
        },
        args,
    )
    return EXIT_OK


def cmd_oracle_qbox(args) -> int:
    spec = carpet.carpet_from_tuples(args.a, args.b, _parse_tuples(args.tuples))
    fam = oracle.qbox_family(spec, args.N, args.M, args.budget)
    if args.format == "csv":
        _emit_cloud(fam.witness_cloud(), args)
        return EXIT_OK
    sep = oracle.verify_family_separation(fam, seed=args.seed)
    ok = (
        fam.count == fam.count_formula
        and fam.diam_certified
        and fam.separation_certified
        and sep["ok"]
    )
    _emit(
        {
            "command": "oracle qbox",
            "N": args.N,
            "M": args.M,
            "floor_wm": fam.floor_wm,
            "count": str(fam.count),
            "count_formula": str(fam.count_formula),
            "diam_bound": fam.diam_bound,
            "diam_certified": fam.diam_certified,
            "separation": sep,
            "provenance": {"count": "formula+enumeration", "separation": "oracle"},
        },
        args,
    )
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_oracle_mass(args) -> int:
    spec = carpet.carpet_from_tuples(args.a, args.b, _parse_tuples(args.tuples))
    if args.s is None:
        z1 = math.fsum(
            t**spec.w for t in weighted.tuple_fiber_sizes(spec.system).values() if t
        )
        s = math.log(z1) / math.log(spec.b) - 0.1
    else:
        s = args.s
    rep = oracle.mass_distribution_check(
        spec, args.N, range(args.mmin, args.mmax + 1), s, seed=args.seed
    )
    _emit(
        {
            "command": "oracle mass",
            "s": s,
            "all_passed": rep["all_passed"],
            "identity_ok": rep["identity_ok"],
            "identity_max_err": rep["identity_max_err"],
            "per_m": {
                str(m): {
                    "largest_s": v["largest_s"],
                    "passed": v["passed"],
                    "box_count": str(v["box_count"]),
                }
                for m, v in rep["per_m"].items()
            },
            "provenance": "oracle",
        },
        args,
    )
    return EXIT_OK if rep["all_passed"] and rep["identity_ok"] else EXIT_CHECK_FAILED


def cmd_oracle_appendix_k(args) -> int:
    report: dict = {"command": "oracle appendix-k", "provenance": "oracle"}
    ok = True
    if args.witness:
        delta = oracle.reciprocal_witness_delta(args.m, args.eps)
        tail = oracle.reciprocal_tail_depth(args.m, delta)
        x = oracle.sample_reciprocal_point(args.N + tail, args.ncap, seed=args.seed)
        wit = oracle.reciprocal_product_witness(x, args.N, args.m, args.eps)
        ok = wit["passed"]
        report["witness"] = {
            "passed": wit["passed"],
            "mass": wit["mass"],
            "diam_bound": wit["diam_bound"],
            "exponent": wit["exponent"],
            "tail_depth": wit["tail_depth"],
        }
    else:
        dims = oracle.reciprocal_set_dims(args.ncap, [args.eps])
        report["minkowski_scale"] = dims["minkowski_scale"][args.eps]
        report["hausdorff_scale_upper"] = dims["hausdorff_scale_upper"][args.eps]
    _emit(report, args)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_paper_suite(args) -> int:
    results = run_suite(verbose=not args.quiet)
    report = {
        "command": "paper-suite",
        "criteria": [
            {
                "number": r["number"],
                "name": r["name"],
                "passed": r["passed"],
                "seconds": r["seconds"],
            }
            for r in results
        ],
        "all_passed": all(r["passed"] for r in results),
    }
    write_report(report, args.out)
    if args.quiet:
        sys.stdout.write(write_report(report, None))
    return EXIT_OK if report["all_passed"] else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="meandim",
        description="dimension quantities of symbolic systems, with oracle checks",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, tol=None):
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=None)
        if tol is not None:
            p.add_argument("--tol", type=float, default=tol,
                           help="tolerance override for this command's checks")

    p = sub.add_parser("entropy", help="word counts and entropy of a subshift")
    p.add_argument("--spec", required=True)
    p.add_argument("--nmax", type=int, default=12)
    common(p)
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("weighted-entropy", help="weighted entropy of the projection")
    p.add_argument("--spec")
    p.add_argument("--tuples")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--nmax", type=int, default=8)
    common(p)
    p.set_defaults(fn=cmd_weighted_entropy)

    p = sub.add_parser("carpet", help="mean dimensions of a carpet system")
    p.add_argument("--spec")
    p.add_argument("--tuples")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--nmax", type=int, default=8)
    common(p)
    p.set_defaults(fn=cmd_carpet)

    p = sub.add_parser("bm-classical", help="classical planar carpet dimensions")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--tuples", required=True)
    common(p)
    p.set_defaults(fn=cmd_bm_classical)

    p = sub.add_parser("beta", help="beta-expansion system dimensions and separation")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--omega", help="subshift JSON for the driving system")
    p.add_argument("--n", type=int, default=3, help="digit layers in the family")
    p.add_argument("--N", type=int, default=3, help="coordinate window")
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p, tol=1e-9)
    p.set_defaults(fn=cmd_beta)

    p = sub.add_parser("grid2d", help="2d rectangle-pattern counts and entropy")
    p.add_argument("--rule", required=True, help="rule JSON file")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--mmax", type=int, default=4)
    common(p)
    p.set_defaults(fn=cmd_grid2d)

    po = sub.add_parser("oracle", help="brute-force metric geometry checks")
    osub = po.add_subparsers(dest="oracle_command", required=True)

    p = osub.add_parser("cover", help="covering-number brackets for a point cloud")
    p.add_argument("--points", required=True, help="CSV cloud")
    p.add_argument("--metric", help="metric descriptor JSON sidecar")
    p.add_argument("--eps", type=float, required=True)
    common(p)
    p.set_defaults(fn=cmd_oracle_cover)

    p = osub.add_parser("hdim", help="scale-level exponent of a cover")
    p.add_argument("--diams", required=True, help="comma-separated diameters")
    p.add_argument("--eps", type=float, required=True)
    common(p, tol=1e-10)
    p.set_defaults(fn=cmd_oracle_hdim)

    p = osub.add_parser("qbox", help="box family counts and separation")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--tuples", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(fn=cmd_oracle_qbox)

    p = osub.add_parser("mass", help="box-granular mass-distribution certificate")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--tuples", required=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--mmin", type=int, default=4)
    p.add_argument("--mmax", type=int, default=10)
    p.add_argument("--s", type=float, default=None)
    common(p)
    p.set_defaults(fn=cmd_oracle_mass)

    p = osub.add_parser(
        "appendix-k", help="reciprocal sequence space: dims and mass witnesses"
    )
    p.add_argument("--ncap", type=int, default=100_000)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    common(p)
    p.set_defaults(fn=cmd_oracle_appendix_k)

    p = sub.add_parser("paper-suite", help="run every built-in example check")
    p.add_argument("--quiet", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_paper_suite)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MeanDimError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
