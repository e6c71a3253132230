"""Command-line surface: closure reports, curve exports, validation suites,
and parameter sweeps.

Exit codes: 0 success, 1 validation failure, 2 parameter rejection, 3 I/O
failure.  Data files are deterministic for identical arguments; the sweep
manifest isolates its timestamp in a single top-level field so the rest can
be compared byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from datetime import datetime, timezone

import numpy as np

from . import closure, curves, framegen, hierarchy, yo_core
from .herm3 import FORM_GRAM, random_null_vector

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARAMS = 2
EXIT_IO = 3

TWO_PI = 2.0 * math.pi


def _outdir() -> str:
    return os.environ.get("YOCURVES_OUTDIR", ".")


def _solution_dict(sol: closure.ClosureSolution) -> dict:
    return {
        "p": sol.p, "q": sol.q, "k": sol.k, "lam": sol.lam, "case": sol.case,
        "m": list(sol.m), "n": list(sol.n), "a": sol.a, "b": sol.b,
        "Lambda": sol.Lambda, "eps": sol.eps,
        "omega": [sol.omega.real, sol.omega.imag],
    }


def _print_solution(sol: closure.ClosureSolution):
    print(f"closure solution for (p, q) = ({sol.p}, {sol.q}), "
          f"k = {sol.k:.17g}, lambda = {sol.lam:.17g} [{sol.case} window]")
    print(f"  m = ({sol.m[0]:.17g}, {sol.m[1]:.17g}, {sol.m[2]:.17g})")
    print(f"  n = ({sol.n[0]:.17g}, {sol.n[1]:.17g}, {sol.n[2]:.17g})")
    print(f"  a = {sol.a:.17g}")
    print(f"  b = {sol.b:.17g}")
    print(f"  Lambda = {sol.Lambda:.17g}")
    print(f"  eps = {sol.eps}, omega = {sol.omega.real:.17g} + {sol.omega.imag:.17g}i")
    print(f"  closure residual = {closure.closure_residual(sol):.3e}")


def cmd_closure(args) -> int:
    if args.k is None:
        inner, outer = closure.admissible_k_ranges(args.p, args.q)
        if args.json:
            print(json.dumps({"p": args.p, "q": args.q,
                              "inner": list(inner), "outer": [outer[0], None]}))
        else:
            print(f"admissible k windows for (p, q) = ({args.p}, {args.q}):")
            print(f"  inner: {inner[0]:g} < k < {inner[1]:g}")
            print(f"  outer: k > {outer[0]:g}")
        return EXIT_OK
    try:
        sol = closure.closure_from_pq(args.p, args.q, args.k, args.lam)
    except closure.InadmissibleK as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    if args.json:
        print(json.dumps(_solution_dict(sol)))
    else:
        _print_solution(sol)
    return EXIT_OK


def _export_with_figure(curve, fmt, out, figure_path):
    written = [curves.export(curve, fmt, out)]
    if curve.companion is not None and fmt != "json":
        root, ext = os.path.splitext(out)
        written.append(curves.export(curve.companion, fmt, root + "_companion" + ext))
    if figure_path:
        from . import plotting
        written.append(plotting.save_curve_figure(curve, figure_path))
    return written


def cmd_curve(args) -> int:
    try:
        sol = closure.closure_from_pq(args.p, args.q, args.k, args.lam)
        c = curves.curve_from_solution(sol, t=args.t, n=args.n,
                                       with_companion=args.companion)
    except (closure.InadmissibleK, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    out = args.out or os.path.join(
        _outdir(), f"curve_p{args.p}q{args.q}_k{args.k:g}.{args.format}")
    figure = args.figure
    if figure == "":
        figure = os.path.splitext(out)[0] + ".png"
    try:
        written = _export_with_figure(c, args.format, out, figure)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in written:
        print(f"wrote {path}")
    print(f"closure gap (R^3): {c.closure_gap_r3():.3e}   (C^2): {c.closure_gap_c2():.3e}")
    dets = curves.transversality_determinants(c)
    print(f"min |transversality det|: {np.abs(dets).min():.6g}")
    print(f"b = {sol.b:.17g}" + (f"   (b at lambda=0: {sol.b + sol.lam ** 2:.17g})"
                                 if sol.lam != 0 else ""))
    if args.companion:
        defect = float(np.abs(c.companion.contact_defect).max())
        print(f"companion Legendrian defect (max |Im<v_x, v>|): {defect:.3e}")
        link = curves.linking_number(c, c.companion)
        print(f"linking number primary/companion: {link.value} "
              f"(integral residual {link.residual:+.3e})")
    return EXIT_OK


class _Suite:
    def __init__(self, tol_factor: float = 1.0):
        self.rows = []
        self.tol_factor = tol_factor

    def check(self, name: str, residual: float, threshold: float):
        self.rows.append((name, residual, threshold * self.tol_factor))

    def report(self) -> int:
        width = max(len(r[0]) for r in self.rows)
        failures = 0
        for name, residual, threshold in self.rows:
            ok = residual <= threshold
            failures += 0 if ok else 1
            print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  "
                  f"residual {residual:.3e}  (tol {threshold:.1e})")
        if failures:
            print(f"{failures} check(s) failed")
            return EXIT_VALIDATION
        print("all checks passed")
        return EXIT_OK


def _frames_suite(suite: _Suite, sol, n: int, break_dispersion: bool):
    rng = np.random.default_rng(2024)
    pw = sol.plane_wave()
    if break_dispersion:
        pw = yo_core.PlaneWave.unchecked(pw.a, pw.b, pw.k, pw.lam, pw.Lambda + 1.0)
    xs = rng.uniform(0.0, TWO_PI, 32)
    ts = rng.uniform(-1.0, 1.0, 32)
    suite.check("zero curvature",
                yo_core.zero_curvature_residual(pw, sol.lam, xs, ts), 1e-10)
    worst = 0.0
    grid_x = np.linspace(0.0, TWO_PI, 64)
    for t in np.linspace(0.0, 1.0, 8):
        phi = framegen.fundamental_matrix_grid(sol, grid_x, t)
        form = np.abs(np.conj(phi).transpose(0, 2, 1) @ FORM_GRAM @ phi - FORM_GRAM).max()
        dets = np.abs(np.linalg.det(phi) - 1.0).max()
        worst = max(worst, float(form), float(dets))
    suite.check("group membership of Phi", worst, 1e-9)
    pts = [(0.5, 0.0), (2.0, 0.3), (5.0, 0.7)]
    suite.check("frame x-residual (h=1e-4)",
                max(framegen.frame_x_residual(sol, x, t) for x, t in pts), 1e-6)
    suite.check("frame t-residual (h=1e-4)",
                max(framegen.frame_t_residual(sol, x, t) for x, t in pts), 1e-6)
    grid = np.linspace(0.0, TWO_PI, 4097)
    fld = framegen.integrate_frame(lambda x: pw.z(x, 0.0), lambda x: pw.b,
                                   sol.lam, np.eye(3, dtype=complex), grid)
    suite.check("RK4 vs analytic frame (n=4096)",
                float(np.abs(fld.frames - framegen.natural_frame_grid(sol, grid, 0.0)).max()),
                1e-6)
    c = curves.curve_from_solution(sol, 0.0, n)
    sphere = np.abs(np.abs(c.s3[:, 0]) ** 2 + np.abs(c.s3[:, 1]) ** 2 - 1.0).max()
    for _ in range(1000):
        g = random_null_vector(rng)
        z1, z2 = curves.project_to_s3(g)
        sphere = max(sphere, abs(abs(z1) ** 2 + abs(z2) ** 2 - 1.0))
    suite.check("unit-sphere identity", float(sphere), 1e-10)
    suite.check("closure residual", closure.closure_residual(sol), 1e-12)
    suite.check("curve closure gap (R^3)", c.closure_gap_r3(), 1e-8)
    suite.check("flow consistency (dt=1e-4)", hierarchy.flow_consistency(sol), 1e-6)
    if sol.lam == 0.0:
        suite.check("flow identity at lambda=0",
                    framegen.flow_identity_residual(sol, np.linspace(0.0, TWO_PI, 257)),
                    1e-8)


def _hierarchy_suite(suite: _Suite, sol):
    pw = sol.plane_wave()
    windings = pw.k
    if abs(windings - round(windings)) < 1e-12:
        grid = hierarchy.InvariantGrid.from_plane_wave(pw, 256)
        label = "given wave"
    else:
        grid = hierarchy.InvariantGrid.from_plane_wave(yo_core.PlaneWave(1.3, -0.7, 3.0), 256)
        label = "reference wave (given k not grid-periodic)"
    print(f"hierarchy grid: {label}")
    pw_used = pw if label == "given wave" else yo_core.PlaneWave(1.3, -0.7, 3.0)
    charges = []
    for t in (0.0, 0.2, 0.5):
        gt = hierarchy.InvariantGrid.from_plane_wave(pw_used, 256, t=t)
        charges.append([hierarchy.charge(i, gt) for i in (1, 2, 3, 4)])
    drift = np.abs(np.asarray(charges) - np.asarray(charges[0])).max()
    suite.check("density conservation", float(drift), 1e-8)
    x2 = hierarchy.hierarchy_field(2, grid)
    w = (x2.g.imag, -x2.g.real, 0.5 * x2.h)
    got = np.asarray(hierarchy.apply_hamiltonian_p(grid, w))
    want = np.asarray(hierarchy.yo_rhs_real(grid))
    suite.check("P on X2 reproduces the evolution", float(np.abs(got - want).max()), 1e-10)
    worst = 0.0
    for i in (1, 2, 3, 4):
        worst = max(worst, *hierarchy.non_stretching_residuals(
            hierarchy.hierarchy_field(i, grid), grid))
    suite.check("non-stretching X1..X4", worst, 1e-10)
    sums = hierarchy.identity_sums(grid)
    suite.check("identity sums", max(sums.values()), 1e-8)
    u = np.stack([np.cos(2 * grid.x), np.sin(3 * grid.x), np.cos(grid.x)])
    v = np.stack([np.sin(grid.x), np.cos(4 * grid.x), np.sin(2 * grid.x)])
    qu = np.asarray(hierarchy.apply_hamiltonian_q(u, grid.period))
    qv = np.asarray(hierarchy.apply_hamiltonian_q(v, grid.period))
    skew = abs(float(np.sum(qu * v + u * qv) * grid.period / grid.n))
    suite.check("Q skew-adjointness", skew, 1e-12)


def cmd_validate(args) -> int:
    try:
        sol = closure.closure_from_pq(args.p, args.q, args.k, args.lam)
    except closure.InadmissibleK as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    suite = _Suite(tol_factor=args.tol_factor)
    if args.suite in ("all", "frames"):
        _frames_suite(suite, sol, args.n, args.break_dispersion)
    if args.suite in ("all", "hierarchy"):
        _hierarchy_suite(suite, sol)
    return suite.report()


def cmd_sweep(args) -> int:
    inner, outer = closure.admissible_k_ranges(args.p, args.q)
    if args.step <= 0:
        print("error: step must be positive", file=sys.stderr)
        return EXIT_PARAMS
    count = int(math.floor((args.k_to - args.k_from) / args.step + 1e-9)) + 1
    if args.k_to < args.k_from or count < 1:
        print("error: empty sweep range", file=sys.stderr)
        return EXIT_PARAMS
    ks = [args.k_from + i * args.step for i in range(count)]

    def window(k):
        if inner[0] < k < inner[1]:
            return "inner"
        if k > outer[0]:
            return "outer"
        return None

    windows = {window(k) for k in ks}
    if None in windows or len(windows) != 1:
        print(f"error: sweep range must stay inside one admissible window; "
              f"windows are {inner[0]:g} < k < {inner[1]:g} and k > {outer[0]:g}",
              file=sys.stderr)
        return EXIT_PARAMS
    out_dir = args.out_dir or os.path.join(_outdir(), f"sweep_p{args.p}q{args.q}")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    entries = []
    for k in ks:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", closure.DegenerateSpectrumWarning)
                sol = closure.closure_from_pq(args.p, args.q, k, args.lam)
        except closure.InadmissibleK as exc:
            # k slipped inside the boundary margin of the window edge
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARAMS
        c = curves.curve_from_solution(sol, t=args.t, n=args.n,
                                       with_companion=args.companion)
        stem = f"curve_k{k:+.6f}"
        out = os.path.join(out_dir, stem + "." + args.format)
        figure = os.path.join(out_dir, stem + ".png") if args.figures else None
        try:
            written = _export_with_figure(c, args.format, out, figure)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        entry = {
            "k": k, "a": sol.a, "b": sol.b, "Lambda": sol.Lambda,
            "closure_gap_r3": c.closure_gap_r3(),
            "closure_gap_c2": c.closure_gap_c2(),
            "min_abs_z": sol.a,
            "files": [os.path.basename(w) for w in written],
        }
        if args.companion:
            link = curves.linking_number(c, c.companion)
            entry["linking"] = link.value
            entry["linking_residual"] = link.residual
        entries.append(entry)
        print(f"k={k:+.6f}: a={sol.a:.6g} b={sol.b:.6g} "
              f"gap={c.closure_gap_r3():.2e} -> {written[0]}")
    manifest = {
        "p": args.p, "q": args.q, "lam": args.lam, "t": args.t, "n": args.n,
        "format": args.format, "window": windows.pop(),
        "entries": entries,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    manifest_path = os.path.join(out_dir, "manifest.json")
    try:
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=1)
            fh.write("\n")
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {manifest_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yocurves",
        description="Plane-wave solutions of the Yajima-Oikawa system and the "
                    "closed transverse curves they generate in S^3.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, need_k=True):
        sp.add_argument("-p", type=int, required=True, help="first lattice integer (>= 1)")
        sp.add_argument("-q", type=int, required=True, help="second lattice integer (>= 1)")
        if need_k:
            sp.add_argument("-k", type=float, required=True, help="wavenumber")
        sp.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="spectral parameter (default 0)")

    sp = sub.add_parser("closure", help="solve or report the closure conditions")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("-k", type=float, default=None,
                    help="wavenumber; omit to print the admissible windows")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("curve", help="generate and export a closed curve")
    add_common(sp)
    sp.add_argument("--t", type=float, default=0.0, help="time slice (default 0)")
    sp.add_argument("-n", type=int, default=1024, help="sample count (default 1024)")
    sp.add_argument("-f", "--format", choices=("csv", "json", "obj"), default="csv")
    sp.add_argument("-o", "--out", default=None,
                    help="output path (default derived, in $YOCURVES_OUTDIR)")
    sp.add_argument("--companion", action="store_true",
                    help="also export the companion curve and report the linking number")
    sp.add_argument("--figure", nargs="?", const="", default=None, metavar="PATH",
                    help="render a PNG figure (default path: alongside the data file)")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("validate", help="run the residual suites at one parameter set")
    add_common(sp)
    sp.add_argument("-n", type=int, default=1024, help="curve sample count")
    sp.add_argument("--suite", choices=("all", "frames", "hierarchy"), default="all")
    sp.add_argument("--break-dispersion", action="store_true",
                    help="negative control: shift the frequency by +1")
    sp.add_argument("--tol-factor", type=float, default=1.0,
                    help="scale every threshold (diagnostics only)")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("sweep", help="export a family of curves over a range of k")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("--k-from", type=float, required=True)
    sp.add_argument("--k-to", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("-n", type=int, default=1024)
    sp.add_argument("-f", "--format", choices=("csv", "json", "obj"), default="csv")
    sp.add_argument("--out-dir", default=None)
    sp.add_argument("--companion", action="store_true")
    sp.add_argument("--figures", action="store_true",
                    help="render a PNG per curve next to the data files")
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
