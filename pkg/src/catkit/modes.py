"""Eigen-wavevector spectra of the empty and perturbed cavity (l = 1 TE).

Empty-cavity modes require the transverse electric field to vanish at the
outer wall, which for the l = 1 channel reduces to the transcendental
condition tan(qR) = qR (equivalently, zeros of j_1(qR)).  Inserting the
sphere shifts each root; two solvers are provided:

* the shift method, k_s = q_s + delta(q_s)/R, which costs one phase-shift
  evaluation per mode and is the production path, and
* the exact method, which brackets and polishes roots of the full matching
  condition between the interior solution and the wall-pinned exterior
  solution.  It serves as the validation oracle for the shift method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import specfun
from .errors import DomainError, RootScanError, UnsupportedOrderError
from .media import Medium, PerfectConductor, Vacuum, medium_spec
from .scattering import _interior_ratio, phase_shift, unwrap_branch

__all__ = [
    "CavityGeometry",
    "ModeSpectrum",
    "empty_cavity_wavevectors",
    "perturbed_wavevectors_shift",
    "perturbed_wavevectors_exact",
    "perturbed_root_near",
    "build_spectrum",
]


@dataclass(frozen=True)
class CavityGeometry:
    """Concentric geometry: inclusion radius a inside a cavity of radius R."""

    a: float
    R: float
    l: int = 1

    def __post_init__(self):
        if not (self.a > 0.0 and np.isfinite(self.a)):
            raise DomainError("inclusion radius a must be positive")
        if self.R < 10.0 * self.a:
            raise DomainError("geometry requires R/a >= 10")
        if self.l != 1:
            raise UnsupportedOrderError("mode spectra are implemented for the l=1 channel")


# cache of roots of sin(x) - x cos(x) = 0 (positive zeros of x**2 j_1(x))
_TANX_ROOTS: list[float] = []


def _tanx_eq_x_roots(n: int) -> np.ndarray:
    f = lambda x: np.sin(x) - x * np.cos(x)
    while len(_TANX_ROOTS) < n:
        s = len(_TANX_ROOTS) + 1
        lo, hi = (s - 0.5) * np.pi, (s + 0.5) * np.pi
        _TANX_ROOTS.append(brentq(f, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps))
    return np.array(_TANX_ROOTS[:n])


def empty_cavity_wavevectors(R: float, N: int, l: int = 1) -> np.ndarray:
    """First N resonant wavevectors of the empty cavity, q_s = x_s / R.

    The x_s are the nonzero roots of tan(x) = x, one per branch, bracketed
    in ((s - 1/2) pi, (s + 1/2) pi) and polished to near machine precision.
    """
    if l != 1:
        raise UnsupportedOrderError("empty-cavity quantization implemented for l=1")
    if N < 1:
        raise DomainError("mode count N must be >= 1")
    if R <= 0.0:
        raise DomainError("cavity radius must be positive")
    return _tanx_eq_x_roots(N) / R


def _char_F(m: Medium, l: int, k, R: float, a: float):
    """Characteristic function whose zeros are the perturbed wavevectors.

    Denominators are cleared so the function is continuous through interior
    resonances; only genuine roots produce sign changes.
    """
    karr = np.atleast_1d(np.asarray(k, dtype=float))
    S, Sp, C, Cp = specfun.riccati(l, karr * a)
    pair = specfun.sph_bessel(l, karr * R)
    J, Y = np.atleast_1d(pair.j), np.atleast_1d(pair.y)
    if isinstance(m, PerfectConductor):
        SR, _, CR, _ = specfun.riccati(l, karr * R)
        return S * CR - C * SR
    ln, ld = _interior_ratio(m, l, karr, a)
    return ld * karr * (Sp * Y - Cp * J) - ln * (S * Y - C * J)


def _bracketed_root(m: Medium, l: int, R: float, a: float, pred: float, halfwidth: float):
    """Find one root of the characteristic function near a prediction.

    Scans a local fine grid for a sign change (doubling density on failure),
    then polishes with Brent's method.
    """
    for npts in (8, 16, 32, 64):
        grid = np.linspace(pred - halfwidth, pred + halfwidth, npts + 1)
        grid = grid[grid > 0.0]
        vals = _char_F(m, l, grid, R, a)
        sign = np.sign(vals)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        if flips.size:
            # take the sign change closest to the prediction
            mid = 0.5 * (grid[flips] + grid[flips + 1])
            i = flips[np.argmin(np.abs(mid - pred))]
            return brentq(
                lambda t: float(_char_F(m, l, t, R, a)[0]),
                grid[i],
                grid[i + 1],
                xtol=1e-14,
                rtol=4 * np.finfo(float).eps,
            )
    raise RootScanError(
        "no characteristic-equation root found near prediction",
        (float(pred - halfwidth), float(pred + halfwidth)),
    )


def perturbed_root_near(m: Medium, l: int, a: float, R: float, q: float) -> float:
    """Exact perturbed root paired with the empty-cavity root q."""
    if isinstance(m, Vacuum):
        return float(q)
    kgrid = np.geomspace(min(1e-3 / a, 0.1 * q), q, 256)
    pv = phase_shift(m, l, kgrid, a)
    d = unwrap_branch(pv)[-1]
    pred = q + d / R
    return float(_bracketed_root(m, l, R, a, pred, 0.45 * np.pi / R))


def perturbed_wavevectors_shift(q: np.ndarray, m: Medium, a: float, R: float) -> np.ndarray:
    """Shift-method spectrum k_s = q_s + delta(q_s)/R for the l=1 channel.

    The phase shifts are unwrapped along the (dense) sequence of empty
    roots, anchored in the small-k region where delta vanishes.
    """
    q = np.asarray(q, dtype=float)
    if isinstance(m, Vacuum):
        return q.copy()
    pv = phase_shift(m, 1, q, a)
    delta = unwrap_branch(pv)
    return q + delta / R


def perturbed_wavevectors_exact(g: CavityGeometry, m: Medium, N: int) -> np.ndarray:
    """First N exact roots of the perturbed characteristic equation.

    Roots are located in per-mode brackets centered on the shift-method
    prediction (fine-grid sign scanning with density doubling), polished to
    near machine precision, and cross-checked for strict ordering.
    """
    q = empty_cavity_wavevectors(g.R, N, l=g.l)
    if isinstance(m, Vacuum):
        return q.copy()
    pred = perturbed_wavevectors_shift(q, m, g.a, g.R)
    out = np.empty(N)
    for s in range(N):
        out[s] = _bracketed_root(m, g.l, g.R, g.a, pred[s], 0.45 * np.pi / g.R)
    if np.any(np.diff(out) <= 0.0):
        s = int(np.argmin(np.diff(out)))
        raise RootScanError(
            "perturbed spectrum not strictly increasing (missed or duplicated root)",
            (float(out[s]), float(out[s + 1])),
        )
    return out


@dataclass(frozen=True)
class ModeSpectrum:
    """Index-paired empty and perturbed wavevectors of one cavity."""

    geometry: CavityGeometry
    medium: Medium
    q: np.ndarray
    k: np.ndarray
    method: str = "shift"

    def __post_init__(self):
        if self.method not in ("exact", "shift"):
            raise DomainError("method must be 'exact' or 'shift'")
        if self.q.shape != self.k.shape or self.q.ndim != 1:
            raise DomainError("q and k must be 1-d arrays of equal length")
        for name, arr in (("q", self.q), ("k", self.k)):
            if np.any(arr <= 0.0) or np.any(np.diff(arr) <= 0.0):
                raise DomainError(f"{name} must be positive and strictly increasing")

    @property
    def N(self) -> int:
        return self.q.size

    @property
    def delta(self) -> np.ndarray:
        """Per-mode shift (k_s - q_s) * R in radians."""
        return (self.k - self.q) * self.geometry.R

    def describe(self) -> str:
        return f"{medium_spec(self.medium)} N={self.N} R/a={self.geometry.R / self.geometry.a:g}"


def build_spectrum(g: CavityGeometry, m: Medium, N: int, method: str = "shift") -> ModeSpectrum:
    """Construct a validated spectrum with the chosen solver.

    The pairing sanity bound |k_s - q_s| R <= max|delta| + pi is enforced
    here; a violation signals a mispaired exact root.
    """
    q = empty_cavity_wavevectors(g.R, N, l=g.l)
    if method == "shift":
        k = perturbed_wavevectors_shift(q, m, g.a, g.R)
    elif method == "exact":
        k = perturbed_wavevectors_exact(g, m, N)
    else:
        raise DomainError("method must be 'exact' or 'shift'")
    if isinstance(m, Vacuum):
        dmax = 0.0
    else:
        dmax = float(np.max(np.abs(unwrap_branch(phase_shift(m, g.l, q, g.a)))))
    bound = dmax + np.pi
    worst = float(np.max(np.abs(k - q)) * g.R)
    if worst > bound + 1e-9:
        raise RootScanError(
            f"pairing bound violated: max |k-q|R = {worst:.3f} > {bound:.3f}",
            (float(q[0]), float(q[-1])),
        )
    return ModeSpectrum(geometry=g, medium=m, q=q, k=k, method=method)
