"""From frames to curves: null-cone lifts, projection to S^3, stereographic
images in R^3, geometric diagnostics, and file export.

The lift gamma is the first frame column; it projects to the unit sphere in
C^2 by (z1, z2) = ((g3 - i g1)/(g3 + i g1), sqrt(2) g2/(g3 + i g1)), which
lands exactly on |z1|^2 + |z2|^2 = 1 when gamma is null.  Stereographic
projection uses the fixed pole z1 = 0, z2 = i; samples close to the pole are
flagged rather than repositioned, and exporters split polylines there.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import framegen
from .herm3 import herm

TWO_PI = 2.0 * math.pi

SINGULAR_TOL = 1e-12
NEAR_POLE_TOL = 1e-9
NULL_TOL = 1e-8


class ProjectionSingular(ValueError):
    """The projection denominator g3 + i g1 vanishes."""


def _check_null(gamma):
    g = np.asarray(gamma, dtype=complex)
    form = np.abs(herm(g, g))
    scale = np.maximum(1.0, np.sum(np.abs(g) ** 2, axis=-1))
    if np.any(form > NULL_TOL * scale):
        raise ValueError("projection requires a null vector")


def project_to_s3(gamma, check_null: bool = True):
    """Map a null vector to (z1, z2) on the unit sphere of C^2.

    Broadcasts over leading axes.  Raises ProjectionSingular when the
    denominator is below 1e-12 (cannot happen for exactly null input).
    """
    g = np.asarray(gamma, dtype=complex)
    if check_null:
        _check_null(g)
    denom = g[..., 2] + 1j * g[..., 0]
    if np.any(np.abs(denom) < SINGULAR_TOL):
        raise ProjectionSingular("projection singular: g3 + i g1 ~ 0")
    z1 = (g[..., 2] - 1j * g[..., 0]) / denom
    z2 = math.sqrt(2.0) * g[..., 1] / denom
    return z1, z2


def stereographic(z1, z2):
    """Stereographic image (X, Y, Z) from the pole z1 = 0, z2 = i.

    Returns (xyz, near_pole); near-pole samples are flagged, not fatal, and
    their coordinates may be arbitrarily large.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    denom = 1.0 - z2.imag
    near = denom < NEAR_POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        xyz = np.stack([z1.real, z1.imag, z2.real], axis=-1) / denom[..., None]
    return xyz, near


def contact_planes(point):
    """The two polynomial contact-plane vector fields at an R^3 point.

    Accepts shape (3,) or (n, 3); returns a pair of like-shaped arrays
    spanning the stereographic image of the contact distribution.
    """
    pt = np.asarray(point, dtype=float)
    x, y, z = pt[..., 0], pt[..., 1], pt[..., 2]
    v1 = np.stack([-(z + x * y),
                   0.5 * (x ** 2 - y ** 2 + z ** 2 - 1.0),
                   x - y * z], axis=-1)
    v2 = np.stack([0.5 * (x ** 2 - y ** 2 - z ** 2 + 1.0),
                   x * y - z,
                   x * z + y], axis=-1)
    return v1, v2


@dataclass(frozen=True)
class CurveSample:
    """Per-point record of a generated curve."""

    x: float
    gamma: np.ndarray
    s3: tuple
    r3: tuple
    transversality: float
    near_pole: bool


@dataclass
class CurveSet:
    """Sampled curve with diagnostics; arrays share the leading axis.

    The grid covers [0, 2*pi] with the closure endpoint repeated, so arrays
    hold n + 1 samples for sample count n.
    """

    xs: np.ndarray
    gamma: np.ndarray           # (n+1, 3) lift on the null cone
    s3: np.ndarray              # (n+1, 2) complex pair on the unit sphere
    r3: np.ndarray              # (n+1, 3) stereographic image
    transversality: np.ndarray  # Re <i gamma, gamma_x> per sample
    near_pole: np.ndarray       # bool flags
    metadata: dict = field(default_factory=dict)
    contact_defect: np.ndarray | None = None  # Im <lift_x, lift>, set on companions
    companion: "CurveSet | None" = None

    @property
    def n(self) -> int:
        return len(self.xs) - 1

    def sample(self, i: int) -> CurveSample:
        return CurveSample(
            x=float(self.xs[i]), gamma=self.gamma[i],
            s3=(complex(self.s3[i, 0]), complex(self.s3[i, 1])),
            r3=tuple(float(v) for v in self.r3[i]),
            transversality=float(self.transversality[i]),
            near_pole=bool(self.near_pole[i]),
        )

    def closure_gap_r3(self) -> float:
        return float(np.linalg.norm(self.r3[-1] - self.r3[0]))

    def closure_gap_c2(self) -> float:
        return float(np.linalg.norm(self.s3[-1] - self.s3[0]))


def _assemble(xs, lift, lift_x, metadata, contact_defect=None) -> CurveSet:
    z1, z2 = project_to_s3(lift)
    r3, near = stereographic(z1, z2)
    transv = herm(1j * lift, lift_x).real
    cs = CurveSet(
        xs=xs, gamma=lift, s3=np.stack([z1, z2], axis=-1), r3=r3,
        transversality=transv, near_pole=near, metadata=dict(metadata),
        contact_defect=contact_defect,
    )
    cs.metadata["closure_gap_r3"] = cs.closure_gap_r3()
    cs.metadata["closure_gap_c2"] = cs.closure_gap_c2()
    return cs


def _base_metadata(sol, t, n, kind):
    md = {
        "kind": kind,
        "p": getattr(sol, "p", None),
        "q": getattr(sol, "q", None),
        "k": sol.k, "lam": sol.lam, "a": sol.a, "b": sol.b,
        "Lambda": sol.Lambda, "eps": getattr(sol, "eps", None),
        "t": t, "n": n,
    }
    return md


def curve_from_solution(sol, t: float = 0.0, n: int = 1024,
                        with_companion: bool = False) -> CurveSet:
    """Sample the transverse curve generated by a closure solution (or raw
    wave spectrum) at time t, on n uniform steps over [0, 2*pi].

    The lift is the first natural-frame column; its x-derivative
    lam*gamma + v is analytic, so the stored transversality values are exact
    frame identities rather than finite differences.
    """
    if n < 64:
        raise ValueError("need at least 64 samples")
    xs = np.linspace(0.0, TWO_PI, n + 1)
    fld = framegen.natural_frame_field(sol, xs, t)
    lift = fld.gamma
    lift_x = sol.lam * lift + fld.v
    cs = _assemble(xs, lift, lift_x, _base_metadata(sol, t, n, "primary"))
    if with_companion:
        cs.companion = companion_curve(sol, t, n)
    return cs


def companion_curve(sol, t: float = 0.0, n: int = 1024) -> CurveSet:
    """Curve traced by the projectivized third frame column v (also null).

    Its contact defect Im < v_x, v > equals -b pointwise, so the companion is
    Legendrian exactly when the long-wave level vanishes.
    """
    if n < 64:
        raise ValueError("need at least 64 samples")
    xs = np.linspace(0.0, TWO_PI, n + 1)
    fld = framegen.natural_frame_field(sol, xs, t)
    lift = fld.v
    lift_x = sol.b * fld.gamma + fld.z[:, None] * fld.b - sol.lam * lift
    defect = herm(lift_x, lift).imag
    return _assemble(xs, lift, lift_x, _base_metadata(sol, t, n, "companion"),
                     contact_defect=defect)


def transversality_profile(curve: CurveSet):
    """Per-sample values of <i lift, lift_x>; identically 1 for frame-generated
    transverse curves by the frame normalization."""
    return curve.transversality


def tangent_r3(curve: CurveSet):
    """Centered-difference R^3 tangent d(gamma)/dx, wrapping across the seam."""
    pts = curve.r3[:-1]
    h = curve.xs[1] - curve.xs[0]
    return (np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)) / (2.0 * h)


def transversality_determinants(curve: CurveSet):
    """det(d(gamma)/dx, v1, v2) per sample; nonvanishing means the R^3 tangent
    stays out of the contact planes."""
    tan = tangent_r3(curve)
    v1, v2 = contact_planes(curve.r3[:-1])
    return np.einsum("ij,ij->i", tan, np.cross(v1, v2))


@dataclass(frozen=True)
class LinkingNumber:
    value: int
    residual: float      # pre-rounding defect of the Gauss integral


def gauss_linking(poly1, poly2, block: int = 256) -> float:
    """Midpoint-segment discretization of the Gauss linking integral.

    Both inputs are closed polylines of shape (n, 3) WITHOUT the repeated
    endpoint; segments wrap around.
    """
    p1 = np.asarray(poly1, dtype=float)
    p2 = np.asarray(poly2, dtype=float)
    d1 = np.roll(p1, -1, axis=0) - p1
    d2 = np.roll(p2, -1, axis=0) - p2
    mid1 = p1 + 0.5 * d1
    mid2 = p2 + 0.5 * d2
    total = 0.0
    for i0 in range(0, len(mid1), block):
        m1 = mid1[i0:i0 + block]
        a1 = d1[i0:i0 + block]
        diff = m1[:, None, :] - mid2[None, :, :]
        cross = np.cross(a1[:, None, :], d2[None, :, :])
        dist3 = np.linalg.norm(diff, axis=-1) ** 3
        total += float(np.sum(np.einsum("ijk,ijk->ij", diff, cross) / dist3))
    return total / (4.0 * math.pi)


def linking_number(c1: CurveSet, c2: CurveSet, closed_tol: float = 1e-6,
                   min_dist: float = 1e-3) -> LinkingNumber:
    """Gauss linking number of two closed, disjoint sampled curves.

    Raises when either curve fails to close at closed_tol or the sampled
    minimum distance between them is at most min_dist (the discretized
    integral is unreliable there).
    """
    for c in (c1, c2):
        if c.closure_gap_r3() > closed_tol:
            raise ValueError(f"curve not closed: gap {c.closure_gap_r3():.3e}")
    p1, p2 = c1.r3[:-1], c2.r3[:-1]
    min_d = math.inf
    for i0 in range(0, len(p1), 256):
        d = np.linalg.norm(p1[i0:i0 + 256, None, :] - p2[None, :, :], axis=-1)
        min_d = min(min_d, float(d.min()))
    if min_d <= min_dist:
        raise ValueError(f"curves too close (min distance {min_d:.3e}); integral unreliable")
    raw = gauss_linking(p1, p2)
    value = int(round(raw))
    return LinkingNumber(value=value, residual=raw - value)


def circle_fit_deviation(points) -> float:
    """Max distance from the points to their best-fit circle in R^3.

    Plane by SVD of the centered cloud, then an algebraic (least-squares)
    circle fit in plane coordinates; the distance combines out-of-plane
    offset and in-plane radial defect.
    """
    pts = np.asarray(points, dtype=float)
    center = pts.mean(axis=0)
    y = pts - center
    _, _, vt = np.linalg.svd(y, full_matrices=False)
    u = y @ vt[0]
    v = y @ vt[1]
    w = y @ vt[2]
    a_mat = np.column_stack([2.0 * u, 2.0 * v, np.ones_like(u)])
    coef, *_ = np.linalg.lstsq(a_mat, u ** 2 + v ** 2, rcond=None)
    uc, vc, c0 = coef
    radius = math.sqrt(c0 + uc ** 2 + vc ** 2)
    rho = np.hypot(u - uc, v - vc)
    return float(np.sqrt(w ** 2 + (rho - radius) ** 2).max())


# ---------------------------------------------------------------------------
# export / import

_FLOAT_FMT = "%.17g"


def _fmt(x) -> str:
    return _FLOAT_FMT % x


def _csv_rows(curve: CurveSet):
    for i in range(len(curve.xs)):
        yield [
            _fmt(curve.xs[i]),
            _fmt(curve.r3[i, 0]), _fmt(curve.r3[i, 1]), _fmt(curve.r3[i, 2]),
            _fmt(curve.s3[i, 0].real), _fmt(curve.s3[i, 0].imag),
            _fmt(curve.s3[i, 1].real), _fmt(curve.s3[i, 1].imag),
            _fmt(curve.transversality[i]),
            str(int(curve.near_pole[i])),
        ]


def _write_csv(curve: CurveSet, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "X", "Y", "Z", "rez1", "imz1", "rez2", "imz2",
                         "transv", "near_pole"])
        writer.writerows(_csv_rows(curve))


def _complex_pairs(arr):
    a = np.asarray(arr)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _curve_dict(curve: CurveSet) -> dict:
    d = {
        "metadata": curve.metadata,
        "samples": {
            "x": curve.xs.tolist(),
            "gamma": _complex_pairs(curve.gamma),
            "s3": _complex_pairs(curve.s3),
            "r3": curve.r3.tolist(),
            "transversality": curve.transversality.tolist(),
            "near_pole": curve.near_pole.astype(int).tolist(),
        },
    }
    if curve.contact_defect is not None:
        d["samples"]["contact_defect"] = curve.contact_defect.tolist()
    if curve.companion is not None:
        d["companion"] = _curve_dict(curve.companion)
    return d


def _write_json(curve: CurveSet, path):
    with open(path, "w") as fh:
        json.dump({"format": "yocurves-curveset", "version": 1,
                   **_curve_dict(curve)}, fh, indent=1)
        fh.write("\n")


def _write_obj(curve: CurveSet, path):
    """Polyline OBJ: v records plus l records, split at near-pole samples."""
    lines = []
    for i in range(len(curve.xs)):
        x, y, z = curve.r3[i]
        lines.append(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}")
    runs = []
    run = []
    for i in range(len(curve.xs)):
        if curve.near_pole[i]:
            if len(run) >= 2:
                runs.append(run)
            run = []
        else:
            run.append(i + 1)  # OBJ indices are 1-based
    if len(run) >= 2:
        runs.append(run)
    for run in runs:
        lines.append("l " + " ".join(str(i) for i in run))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def export(curve: CurveSet, fmt: str, path) -> str:
    """Write the curve to path in one of {csv, json, obj}; returns the path.

    CSV columns: x,X,Y,Z,rez1,imz1,rez2,imz2,transv,near_pole.  JSON mirrors
    the full CurveSet (companion included) and round-trips bit-exactly
    through import_curveset.  I/O failures surface as OSError.
    """
    if fmt == "csv":
        _write_csv(curve, path)
    elif fmt == "json":
        _write_json(curve, path)
    elif fmt == "obj":
        _write_obj(curve, path)
    else:
        raise ValueError(f"unsupported format: {fmt!r}")
    return str(path)


def _curve_from_dict(d: dict) -> CurveSet:
    s = d["samples"]
    gamma = np.asarray(s["gamma"], dtype=float)
    s3 = np.asarray(s["s3"], dtype=float)
    cs = CurveSet(
        xs=np.asarray(s["x"], dtype=float),
        gamma=gamma[..., 0] + 1j * gamma[..., 1],
        s3=s3[..., 0] + 1j * s3[..., 1],
        r3=np.asarray(s["r3"], dtype=float),
        transversality=np.asarray(s["transversality"], dtype=float),
        near_pole=np.asarray(s["near_pole"], dtype=int).astype(bool),
        metadata=d.get("metadata", {}),
        contact_defect=(np.asarray(s["contact_defect"], dtype=float)
                        if "contact_defect" in s else None),
    )
    if "companion" in d:
        cs.companion = _curve_from_dict(d["companion"])
    return cs


def import_curveset(path) -> CurveSet:
    """Read back a JSON export."""
    with open(path) as fh:
        d = json.load(fh)
    if d.get("format") != "yocurves-curveset":
        raise ValueError("not a curveset file")
    return _curve_from_dict(d)
