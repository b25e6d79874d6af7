"""Command-line interface: expand, extend, estimate-radius, verify, basis.

Artifacts are JSON (or CSV mirrors) tagged "lieball/1", embed the run
configuration, and are written atomically (temp file + rename), so a run can
be replayed byte-for-byte from its own output.  Exit codes: 0 success,
1 check-suite failures, 2 validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from .complex_geometry import ComplexPoint
from .harmonic_basis import addition_residual, build_basis, norm_sum_complex, norm_sum_identity
from .holo_continuation import grid_extend
from .lf_transform import (DecayEstimate, FunctionSpec, LFExpansion,
                           ProfilePoly, decay_estimate, expand)
from .special_functions import (harmonic_dim, legendre_nd, legendre_upper,
                                sphere_area)
from .verification import (CheckReport, check_add3, check_harmonic_extension,
                           check_hua, random_harmonic, random_homogeneous)

FORMAT_TAG = "lieball/1"


class ValidationError(Exception):
    pass


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lieball-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"malformed JSON in {path}: line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}")


def _require_format(obj: dict, path: str):
    if obj.get("format") != FORMAT_TAG:
        raise ValidationError(
            f"{path}: field 'format' must be {FORMAT_TAG!r}, got "
            f"{obj.get('format')!r}")


# ---------------------------------------------------------------------------
# expansion artifact
# ---------------------------------------------------------------------------

def _decay_json(d: DecayEstimate | None):
    if d is None:
        return None
    return {"rho_hat": None if math.isinf(d.rho_hat) else d.rho_hat,
            "tau": d.tau, "C_hat": d.C_hat,
            "window": list(d.window), "r_squared_fit": d.r_squared_fit,
            "band_limited": d.band_limited}


def _decay_from_json(obj):
    if obj is None:
        return None
    rho = obj["rho_hat"]
    return DecayEstimate(math.inf if rho is None else rho, obj["tau"],
                         obj["C_hat"], tuple(obj["window"]),
                         obj["r_squared_fit"], obj["band_limited"])


def _expansion_json(exp: LFExpansion, config: dict) -> dict:
    rows = []
    for (k, l) in sorted(exp.profiles):
        p = exp.profiles[(k, l)]
        row = {"k": k, "l": l, "fit_residual": p.fit_residual, "source": p.source}
        if np.iscomplexobj(p.coeffs):
            row["coeffs"] = [float(c) for c in p.coeffs.real]
            row["coeffs_im"] = [float(c) for c in p.coeffs.imag]
        else:
            row["coeffs"] = [float(c) for c in p.coeffs]
        rows.append(row)
    return {"format": FORMAT_TAG, "config": config,
            "n": exp.n, "R": exp.R, "K": exp.K, "M": exp.M,
            "spec": exp.spec.to_json(),
            "quad_degree": exp.quad_degree,
            "quad_converged": exp.quad_converged,
            "decay": _decay_json(exp.decay),
            "rows": rows}


def _expansion_csv(doc: dict) -> str:
    width = max(len(r["coeffs"]) for r in doc["rows"])
    cplx = any("coeffs_im" in r for r in doc["rows"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["k", "l", "source", "fit_residual"]
    header += [f"c{m}" for m in range(width)]
    if cplx:
        header += [f"c{m}_im" for m in range(width)]
    w.writerow(header)
    for r in doc["rows"]:
        row = [r["k"], r["l"], r["source"], repr(r["fit_residual"])]
        cs = r["coeffs"] + [0.0] * (width - len(r["coeffs"]))
        row += [repr(c) for c in cs]
        if cplx:
            im = r.get("coeffs_im", [0.0] * width)
            im = im + [0.0] * (width - len(im))
            row += [repr(c) for c in im]
        w.writerow(row)
    return buf.getvalue()


def _expansion_from_json(doc: dict) -> LFExpansion:
    spec = FunctionSpec.from_json(doc["spec"])
    profiles = {}
    for r in doc["rows"]:
        if "coeffs_im" in r:
            coeffs = np.array(r["coeffs"], dtype=float) + 1j * np.array(
                r["coeffs_im"], dtype=float)
        else:
            coeffs = np.array(r["coeffs"], dtype=float)
        profiles[(r["k"], r["l"])] = ProfilePoly(
            r["k"], r["l"], coeffs, r["fit_residual"], r["source"])
    return LFExpansion(doc["n"], doc["R"], doc["K"], doc["M"], spec, profiles,
                       quad_degree=doc.get("quad_degree"),
                       quad_converged=doc.get("quad_converged", True),
                       decay=_decay_from_json(doc.get("decay")))


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_expand(args) -> int:
    spec = FunctionSpec.from_json(_load_json(args.spec))
    exp = expand(spec, K=args.K, M=args.M, radial_nodes=args.radial_nodes,
                 quad_degree=args.quad_degree)
    if args.tau is not None:
        exp = exp.with_decay(decay_estimate(exp, tau=args.tau))
    config = {"command": "expand", "spec": spec.to_json(), "K": args.K,
              "M": args.M, "quad_degree": args.quad_degree,
              "radial_nodes": args.radial_nodes, "tau": args.tau,
              "format": args.format}
    doc = _expansion_json(exp, config)
    if args.format == "csv":
        _atomic_write(args.out, _expansion_csv(doc))
    else:
        _atomic_write(args.out, _dump(doc))
    print(f"wrote {args.out} ({sum(1 for r in doc['rows'] if any(c != 0.0 for c in r['coeffs']))} "
          f"populated of {len(doc['rows'])} rows)")
    return 0


def _cmd_extend(args) -> int:
    doc = _load_json(args.expansion)
    _require_format(doc, args.expansion)
    exp = _expansion_from_json(doc)
    pts_doc = _load_json(args.points)
    _require_format(pts_doc, args.points)
    points = []
    for i, row in enumerate(pts_doc.get("points", [])):
        try:
            points.append(ComplexPoint(np.array(row["re"], dtype=float),
                                       np.array(row["im"], dtype=float)))
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"points[{i}]: {exc}")
    decay = exp.decay if args.decay else None
    if args.decay and exp.decay is None:
        raise ValidationError("--decay requested but the expansion artifact "
                              "carries no decay estimate (rerun expand with --tau)")
    try:
        results = grid_extend(exp, points, decay)
    except ValueError as exc:
        raise ValidationError(str(exc))
    rows = []
    for z, res in results:
        rows.append({"z": {"re": list(z.re), "im": list(z.im)},
                     "value": {"re": res.value.real, "im": res.value.imag},
                     "tail_bound": res.tail_bound})
    config = {"command": "extend", "expansion": args.expansion,
              "points": args.points, "decay": bool(args.decay)}
    _atomic_write(args.out, _dump({"format": FORMAT_TAG, "config": config,
                                   "rows": rows}))
    print(f"wrote {args.out} ({len(rows)} points)")
    return 0


def _cmd_estimate_radius(args) -> int:
    spec = FunctionSpec.from_json(_load_json(args.spec))
    exp = expand(spec, K=args.K, M=args.M, radial_nodes=args.radial_nodes,
                 quad_degree=args.quad_degree)
    dec = decay_estimate(exp, tau=args.tau)
    if dec.band_limited:
        print("rho_hat = inf (band-limited: no populated degrees in the "
              "regression window)")
    else:
        print(f"rho_hat = {dec.rho_hat!r}")
        print(f"C_hat = {dec.C_hat!r}")
        print(f"r_squared = {dec.r_squared_fit!r}")
    if args.out:
        config = {"command": "estimate-radius", "spec": spec.to_json(),
                  "K": args.K, "M": args.M, "tau": args.tau,
                  "quad_degree": args.quad_degree,
                  "radial_nodes": args.radial_nodes}
        _atomic_write(args.out, _dump({"format": FORMAT_TAG, "config": config,
                                       "decay": _decay_json(dec)}))
    return 0


def _legendre_suite(trials: int, seed: int) -> list:
    reports = []
    worst = 0.0
    count = 0
    for n in range(2, 9):
        for k in range(0, 41, 4):
            worst = max(worst, abs(legendre_nd(k, n, 1.0) - 1.0))
            count += 1
    reports.append(CheckReport("legendre_norming[k<=40,n<=8]", count,
                               int(worst > 1e-12), worst))
    xs = np.linspace(-1.0, 1.0, 1001)
    worst = 0.0
    fails = 0
    for n in range(2, 9):
        for k in range(0, 31):
            vals = np.abs(legendre_nd(k, n, xs))
            worst = max(worst, float(vals.max()))
            fails += int(vals.max() > 1.0 + 1e-12)
    reports.append(CheckReport("legendre_bound[|x|<=1]", 7 * 31, fails, worst))
    xs = np.linspace(1.0, 3.0, 201)
    fails = 0
    worst = 0.0
    for n in range(2, 9):
        for k in range(0, 31):
            ratio = legendre_nd(k, n, xs) / legendre_upper(k, xs)
            worst = max(worst, float(ratio.max()))
            fails += int(ratio.max() > 1.0 + 1e-12)
    reports.append(CheckReport("legendre_upper[1<=x<=3]", 7 * 31, fails, worst))
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-1.0, 1.0, max(trials, 10))
    worst = 0.0
    for n in range(2, 9):
        for k in range(0, 21):
            worst = max(worst, float(np.abs(
                legendre_nd(k, n, -xs) - (-1.0) ** k * legendre_nd(k, n, xs)).max()))
    reports.append(CheckReport("legendre_parity", 7 * 21, int(worst > 1e-12), worst))
    return reports


def _addition_suite(trials: int, seed: int) -> list:
    reports = []
    rng = np.random.default_rng(seed)
    for n in range(2, 6):
        worst = 0.0
        fails = 0
        for k in range(0, 11):
            for _ in range(trials // 10 or 1):
                x = rng.standard_normal(n)
                y = rng.standard_normal(n)
                x /= max(np.linalg.norm(x), 1e-12)
                y /= max(np.linalg.norm(y), 1e-12)
                x *= rng.uniform(0.1, 1.0)
                y *= rng.uniform(0.1, 1.0)
                r = addition_residual(n, k, ComplexPoint(x, np.zeros(n)),
                                      ComplexPoint(y, np.zeros(n)))
                worst = max(worst, r)
                fails += int(r > 1e-9)
        reports.append(CheckReport(f"addition_theorem[n={n},k<=10]",
                                   11 * (trials // 10 or 1), fails, worst))
    for n in range(2, 6):
        worst = 0.0
        fails = 0
        count = 0
        for k in range(0, 11):
            for _ in range(trials // 10 or 1):
                re = rng.standard_normal(n)
                im = rng.standard_normal(n)
                norm = math.sqrt(re @ re + im @ im)
                z = ComplexPoint(re / norm, im / norm)
                if abs(complex(np.sum(z.to_complex() ** 2))) <= 0.1:
                    continue
                lhs = norm_sum_complex(n, k, z)
                rhs = norm_sum_identity(n, k, z)
                err = abs(lhs - rhs) / abs(rhs)
                worst = max(worst, err)
                fails += int(err > 1e-9)
                count += 1
        reports.append(CheckReport(f"norm_sum_generic[n={n},k<=10]", count,
                                   fails, worst))
        worst = 0.0
        fails = 0
        count = 0
        for k in range(0, 11):
            for _ in range(trials // 10 or 1):
                i, j = rng.choice(n, size=2, replace=False)
                c = complex(rng.standard_normal(), rng.standard_normal())
                zc = np.zeros(n, dtype=complex)
                zc[i] = c
                zc[j] = 1j * c
                z = ComplexPoint(zc.real, zc.imag)
                lhs = norm_sum_complex(n, k, z)
                rhs = norm_sum_identity(n, k, z)
                err = abs(lhs - rhs) / abs(rhs)
                worst = max(worst, err)
                fails += int(err > 1e-9)
                count += 1
        reports.append(CheckReport(f"norm_sum_qzero[n={n},k<=10]", count,
                                   fails, worst))
    return reports


def _add3_suite(trials: int, seed: int) -> list:
    return [check_add3(n, 20, 1.0, trials, seed + n) for n in (2, 3, 4)]


def _hua_suite(trials: int, seed: int) -> list:
    reports = []
    rng = np.random.default_rng(seed)
    for i in range(20):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 13))
        terms = random_homogeneous(n, m, 1 + 2 * n, seed + 100 + i)
        reports.append(check_hua(terms, n, 1.0, trials, seed + 200 + i))
    return reports


def _extension_suite(trials: int, seed: int) -> list:
    reports = []
    for n in (2, 3, 4):
        for k in (0, 1, 3, 5, 8):
            terms = random_harmonic(n, k, seed + 10 * n + k)
            reports.append(check_harmonic_extension(terms, n, 1.0, trials,
                                                    seed + 17 * n + k))
    return reports


SUITES = {"legendre": _legendre_suite, "addition": _addition_suite,
          "add3": _add3_suite, "hua": _hua_suite, "extension": _extension_suite}


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        reports.extend(SUITES[name](args.trials, args.seed))
    failures = sum(r.failures for r in reports)
    for r in reports:
        status = "ok" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: trials={r.trials} failures={r.failures} "
              f"worst_margin={r.worst_margin:.3e}")
    if args.json:
        config = {"command": "verify", "suite": args.suite,
                  "seed": args.seed, "trials": args.trials}
        doc = {"format": FORMAT_TAG, "config": config,
               "reports": [r.to_json() for r in reports],
               "failures": failures}
        _atomic_write(args.json, _dump(doc))
        if failures:
            print(f"check-suite failures: see {args.json}")
    return 1 if failures else 0


def _cmd_basis(args) -> int:
    b = build_basis(args.n, args.k)
    members = []
    for l, member in enumerate(b.members, start=1):
        terms = [{"alpha": list(a), "coeff": c}
                 for a, c in sorted(member.terms.items())]
        members.append({"l": l, "terms": terms})
    config = {"command": "basis", "n": args.n, "k": args.k,
              "format": args.format}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["l"] + [f"a{i + 1}" for i in range(args.n)] + ["coeff"])
        for row in members:
            for term in row["terms"]:
                w.writerow([row["l"]] + term["alpha"] + [repr(term["coeff"])])
        text = buf.getvalue()
    else:
        text = _dump({"format": FORMAT_TAG, "config": config, "n": args.n,
                      "k": args.k, "omega": sphere_area(args.n),
                      "count": harmonic_dim(args.k, args.n),
                      "members": members})
    if args.out:
        _atomic_write(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lieball",
        description="Laplace-Fourier expansions on the ball and their "
                    "holomorphic continuation to the Lie ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a function spec")
    p.add_argument("--spec", required=True, help="function spec JSON path")
    p.add_argument("--K", type=int, required=True, help="max harmonic degree")
    p.add_argument("--M", type=int, default=24, help="profile fit degree")
    p.add_argument("--quad-degree", type=int, default=None)
    p.add_argument("--radial-nodes", type=int, default=None)
    p.add_argument("--tau", type=float, default=None,
                   help="embed a decay estimate at this tau")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("extend", help="evaluate the continuation at points")
    p.add_argument("--expansion", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--decay", action="store_true",
                   help="attach tail bounds from the embedded decay estimate")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("estimate-radius", help="estimate the decay radius")
    p.add_argument("--spec", required=True)
    p.add_argument("--K", type=int, default=30)
    p.add_argument("--M", type=int, default=24)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--quad-degree", type=int, default=None)
    p.add_argument("--radial-nodes", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_estimate_radius)

    p = sub.add_parser("verify", help="run property-check suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--json", default=None, help="write a report artifact")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("basis", help="dump an orthonormal harmonic basis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_basis)
    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
