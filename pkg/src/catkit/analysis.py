"""Scaling scans and power-law exponent extraction.

The physics depends only on the dimensionless combinations k a, R/a and N,
so every scan works in units of the inclusion radius (a = 1).  Fixed-ratio
scans hold Na/R constant by deriving R from N, which keeps the analogue
Fermi wavevector N pi / R exactly constant along the scan; that is the axis
on which the truncated determinant develops its N**(-eta) power law.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError
from .gaussian import log_abs_det, partial_overlap_S
from .media import Drude, Medium, PerfectConductor
from .modes import CavityGeometry, build_spectrum
from .overlap import build_overlap_matrix
from .scattering import phase_shift_curve

__all__ = [
    "ExponentFit",
    "ScalingRun",
    "fit_power_law",
    "scan_fixed_ratio",
    "contour_scan",
    "exponent_vs_phase_shift",
    "pc_overlap_check",
    "default_threads",
]


def default_threads() -> int:
    env = os.environ.get("CATKIT_THREADS")
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
    return os.cpu_count() or 1


def _pmap(fn, items, threads: int | None):
    """Map preserving order; thread pool only engaged for threads > 1."""
    n = default_threads() if threads is None else max(int(threads), 1)
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares power-law exponent from (N, log value) pairs."""

    eta: float
    stderr: float
    n_points: int
    fit_window: tuple[int, int]


def fit_power_law(points) -> ExponentFit:
    """Fit log value = -eta ln N + const by least squares.

    Parameters
    ----------
    points : iterable of (N, log_value)

    Raises
    ------
    InsufficientDataError
        With fewer than 5 points, or duplicated N values.
    """
    pts = sorted((float(n), float(v)) for n, v in points)
    if len(pts) < 5:
        raise InsufficientDataError("power-law fit needs at least 5 points")
    N = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.any(np.diff(N) <= 0.0):
        raise InsufficientDataError("power-law fit needs distinct N values")
    x = np.log(N)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    dof = max(len(pts) - 2, 1)
    s2 = float(resid @ resid) / dof
    xvar = float(np.sum((x - x.mean()) ** 2))
    stderr = float(np.sqrt(s2 / xvar)) if xvar > 0 else np.inf
    return ExponentFit(
        eta=float(-coef[0]),
        stderr=stderr,
        n_points=len(pts),
        fit_window=(int(N[0]), int(N[-1])),
    )


@dataclass(frozen=True)
class ScalingRun:
    """Fixed-ratio scan: rows of (N, R/a, log|det D|, log S)."""

    medium: Medium
    ratio: float
    rows: tuple[tuple[int, float, float, float], ...]

    @property
    def kp_a(self) -> float | None:
        return self.medium.kp if isinstance(self.medium, Drude) else None

    def det_points(self):
        return [(n, ld) for n, _, ld, _ in self.rows]

    def s_squared_points(self):
        return [(n, 2.0 * ls) for n, _, _, ls in self.rows]


def _scan_point(medium: Medium, ratio: float, N: int, a: float):
    R = N * a / ratio
    g = CavityGeometry(a=a, R=R)
    spec = build_spectrum(g, medium, N, method="shift")
    D = build_overlap_matrix(spec, source="asymptotic")
    res = partial_overlap_S(spec, D)
    return (N, R / a, res.log_abs_det_D, res.log_S)


def scan_fixed_ratio(medium: Medium, ratio: float, N_list, a: float = 1.0,
                     threads: int | None = None) -> ScalingRun:
    """Scan N at fixed Na/R, deriving R = N a / ratio for every point."""
    if ratio <= 0.0:
        raise DomainError("ratio must be positive")
    Ns = [int(n) for n in N_list]
    if any(n < 1 for n in Ns) or any(n2 <= n1 for n1, n2 in zip(Ns, Ns[1:])):
        raise DomainError("N_list must be strictly increasing positive counts")
    rows = _pmap(lambda n: _scan_point(medium, ratio, n, a), Ns, threads)
    return ScalingRun(medium=medium, ratio=float(ratio), rows=tuple(rows))


def contour_scan(medium: Medium, N_range, R_range, a: float = 1.0,
                 threads: int | None = None):
    """Grid of log|det D| over mode counts and cavity radii.

    Returns a list of rows (N, R/a, log|det D|) in row-major (N outer)
    order, suitable for contour rendering.
    """
    Ns = [int(n) for n in N_range]
    Rs = [float(r) for r in R_range]
    if len(Ns) > 200 or len(Rs) > 200:
        raise DomainError("contour grid limited to 200 x 200")

    def point(nr):
        N, R = nr
        g = CavityGeometry(a=a, R=R)
        spec = build_spectrum(g, medium, N, method="shift")
        D = build_overlap_matrix(spec, source="asymptotic")
        ld, _ = log_abs_det(D.D)
        return (N, R / a, ld)

    return _pmap(point, [(N, R) for N in Ns for R in Rs], threads)


_ETA_SCAN_N_LIST = (100, 200, 300, 400, 500)


def exponent_vs_phase_shift(medium: Medium, ratio_grid, N_list=_ETA_SCAN_N_LIST,
                            a: float = 1.0, threads: int | None = None):
    """Pair the decay exponent with the phase shift at k = pi ratio / a.

    For each ratio the exponent is fitted on a shortened fixed-ratio scan;
    the phase shift is read from the unwrapped curve at the constant
    analogue Fermi wavevector of that scan line.

    Returns a list of rows (ratio, k*a, delta, eta).
    """
    ratios = [float(r) for r in ratio_grid]
    if any(r <= 0.0 for r in ratios):
        raise DomainError("ratios must be positive")
    kmax = np.pi * max(ratios) / a
    curve = phase_shift_curve(medium, 1, a, np.geomspace(1e-3 / a, kmax * 1.05, 2048))

    def point(r):
        run = scan_fixed_ratio(medium, r, N_list, a=a, threads=1)
        fit = fit_power_law(run.det_points())
        kf = np.pi * r / a
        return (r, kf * a, float(curve.delta_at(kf)), fit.eta)

    return _pmap(point, ratios, threads)


def pc_overlap_check(ratio: float, N: int, a: float = 1.0) -> tuple[float, float]:
    """Pipeline log S for a perfect conductor against (pi/2)**(-ratio**2).

    Returns (computed_log_S, closed_form_log_S) where the closed form is
    -ratio**2 ln(pi/2).
    """
    run = scan_fixed_ratio(PerfectConductor(), ratio, [N], a=a, threads=1)
    computed = run.rows[0][3]
    closed = -(ratio**2) * np.log(np.pi / 2.0)
    return (float(computed), float(closed))
