"""Single-mode overlaps and assembly of the N x N overlap matrix.

Within one angular block the angular integral of normalized vector
spherical harmonics is exactly 1, so only radial overlaps are computed.
Rows index empty-cavity modes (wavevectors q_s), columns the perturbed
modes (k_p).

Two sources are provided:

* ``asymptotic``: the closed form obtained from the large-argument mode
  shapes sin(qr - l pi/2)/qr (empty) and sin[k(r - R)]/kr (wall-pinned),
  valid for qr >> l.  This is the production path for scaling runs.
* ``quadrature``: direct integration of the exact radial solutions,
  restricted to N <= 200 by cost.  It is the bounded-N validation oracle;
  the difference against the asymptotic source is the central-cell
  correction plus the low-mode asymptotic-form error.

Sign conventions.  The asymptotic form fixes the perturbed modes to
+sin[k(r - R)] near the wall, while the empty modes keep the natural
interior convention (positive near the origin).  Per-mode sign choices are
pure convention: |det D|, row norms, and every ground-state overlap built
from D are invariant under them.  The quadrature source aligns its mode
signs to the same convention so the two sources are comparable entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, PoleError, QuadratureToleranceError
from .media import Medium, PerfectConductor, Vacuum, index_squared
from .modes import CavityGeometry, ModeSpectrum

__all__ = [
    "OverlapMatrix",
    "mode_overlap_asymptotic",
    "radial_mode_function",
    "mode_overlap_quadrature",
    "build_overlap_matrix",
]

# shifts below this (in units of 1/R) identify an unperturbed spectrum
_ZERO_SHIFT = 1e-6


def _sinc(x):
    return np.sinc(np.asarray(x) / np.pi)


def mode_overlap_asymptotic(k, q, R: float):
    """Asymptotic-form overlap <k|q> between one perturbed and one empty mode.

    Evaluates

        k R sinc(u) sinc(v) / sqrt[(1 - sin(2kR)/(2kR)) (1 + sin(2qR)/(2qR))]

    with u = (k - q) R / 2 and v = (k + q) R / 2, the product form of the
    normalized integral of sin(qr - pi/2) sin[k(r - R)]; the sinc
    factorization is exact and remains stable through the removable k -> q
    singularity of the textbook difference-of-cosines expression.  The
    empty-side normalization uses the plus sign appropriate to the odd-l
    interior asymptotic (proportional to cos(qr)); with the printed minus
    sign the matrix acquires diagonal entries above 1 and super-unit row
    norms, which the exact overlaps forbid.

    Valid for qR >> l; low-mode entries carry an O(1/(qR)**2) model error
    that is independent of R.
    """
    karr = np.asarray(k, dtype=float)
    qarr = np.asarray(q, dtype=float)
    if np.any(karr <= 0.0) or np.any(qarr <= 0.0) or R <= 0.0:
        raise DomainError("wavevectors and radius must be positive")
    u = (karr - qarr) * R / 2.0
    v = (karr + qarr) * R / 2.0
    radk = 1.0 - np.sin(2.0 * karr * R) / (2.0 * karr * R)
    radq = 1.0 + np.sin(2.0 * qarr * R) / (2.0 * qarr * R)
    return karr * R * _sinc(u) * _sinc(v) / np.sqrt(radk * radq)


def _interior_shape(m: Medium, l: int, k: float, a: float, r: np.ndarray) -> np.ndarray:
    """Real interior radial shape chi(r) with g_int(r) proportional to chi."""
    n2 = index_squared(m, k)
    x2 = n2 * (k * a) ** 2
    if x2 > 1e-12:
        arg = np.sqrt(n2) * k * r
        return specfun.sph_bessel(l, np.maximum(arg, 1e-300)).j
    if x2 < -1e-12:
        kap = np.sqrt(-n2) * k
        return specfun.mod_sph_bessel_i(l, np.maximum(kap * r, 1e-300))[0]
    return (r / a) ** l  # zero-index limit of j_l(n k r) up to scale


def radial_mode_function(g: CavityGeometry, m: Medium, k: float, r):
    """Unnormalized piecewise radial solution g_l(r), continuous at r = a.

    The exterior part is the wall-pinned combination
    j_l(kr) y_l(kR) - y_l(kr) j_l(kR) scaled to match the interior shape at
    r = a; it vanishes identically at r = R.  For a perfect conductor the
    interior is exactly zero and the exterior combination is pinned at both
    r = a and r = R.

    Raises
    ------
    PoleError
        If the exterior combination vanishes at r = a (mode decoupled from
        the interior; the printed normalization has a pole there).
    """
    rarr = np.atleast_1d(np.asarray(r, dtype=float))
    scalar = np.ndim(r) == 0
    if np.any(rarr <= 0.0) or np.any(rarr > g.R * (1 + 1e-12)):
        raise DomainError("radius must satisfy 0 < r <= R")
    pairR = specfun.sph_bessel(g.l, k * g.R)

    def ext(rv):
        p = specfun.sph_bessel(g.l, k * rv)
        return p.j * pairR.y - p.y * pairR.j

    out = np.empty_like(rarr)
    inside = rarr < g.a
    if isinstance(m, PerfectConductor):
        # field excluded from the conductor; exterior pinned at both radii
        out[inside] = 0.0
        rv = rarr[~inside]
        Sa, _, Ca, _ = specfun.riccati(g.l, k * g.a)
        Sr, _, Cr, _ = specfun.riccati(g.l, k * rv)
        out[~inside] = (Sr * Ca - Cr * Sa) / (k * rv)
    else:
        Ea = float(ext(np.array([g.a]))[0])
        scale = abs(pairR.j) + abs(pairR.y)
        if abs(Ea) < 1e-13 * scale:
            raise PoleError("exterior combination vanishes at r = a")
        chi_a = float(_interior_shape(m, g.l, k, g.a, np.array([g.a]))[0])
        out[inside] = _interior_shape(m, g.l, k, g.a, rarr[inside])
        out[~inside] = ext(rarr[~inside]) * (chi_a / Ea)
    return float(out[0]) if scalar else out


def _gl_panels(lo: float, hi: float, max_k: float, order: int = 8):
    """Composite Gauss-Legendre nodes with panel width <= pi/(4 max_k)."""
    n_panels = max(int(np.ceil(4.0 * max_k * (hi - lo) / np.pi)), 1) + 1
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def _sampled_modes(g: CavityGeometry, m: Medium, kvec: np.ndarray, perturbed: bool,
                   nodes: np.ndarray):
    """Matrix of u = r * (radial mode) sampled on nodes, unit-normalized.

    Perturbed modes are sign-aligned to +sin[k(r - R)] near the wall; empty
    modes keep the natural interior convention.
    """
    U = np.empty((kvec.size, nodes.size))
    if not perturbed:
        for i, q in enumerate(kvec):
            U[i] = nodes * specfun.sph_bessel(g.l, q * nodes).j
        return U
    for i, k in enumerate(kvec):
        U[i] = nodes * radial_mode_function(g, m, k, nodes)
    # wall convention: sin[k(r-R)] is negative just inside the wall
    last = np.argmax(nodes)
    flip = np.where(U[:, last] > 0.0, -1.0, 1.0)
    return U * flip[:, None]


def mode_overlap_quadrature(g: CavityGeometry, m: Medium, k: float, q: float,
                            tol: float = 1e-8) -> float:
    """Overlap of one exact perturbed mode with one exact empty mode.

    Both radial functions are normalized to unit radial norm; composite
    Gauss-Legendre panels resolve the faster oscillation scale.  The result
    is recomputed at doubled panel density and must agree to `tol`.

    Raises
    ------
    QuadratureToleranceError
        If the two resolutions disagree by more than `tol` (carries the
        fine-grid estimate).
    """
    kmax = max(k, q)
    mkp = getattr(m, "kp", 0.0)
    kmax = max(kmax, mkp)
    vals = []
    for boost in (1.0, 2.0):
        nin, win = _gl_panels(1e-9 * g.a, g.a, kmax * boost)
        nex, wex = _gl_panels(g.a, g.R, kmax * boost)
        nodes = np.concatenate([nin, nex])
        weights = np.concatenate([win, wex])
        uf = _sampled_modes(g, m, np.array([q]), False, nodes)[0]
        ug = _sampled_modes(g, m, np.array([k]), True, nodes)[0]
        uf = uf / np.sqrt(np.sum(weights * uf**2))
        ug = ug / np.sqrt(np.sum(weights * ug**2))
        vals.append(float(np.sum(weights * uf * ug)))
    if abs(vals[1] - vals[0]) > tol:
        raise QuadratureToleranceError(
            f"quadrature overlap not converged: {vals[0]!r} vs {vals[1]!r}", vals[1]
        )
    return vals[1]


_QUADRATURE_N_CAP = 200


@dataclass(frozen=True)
class OverlapMatrix:
    """Overlap matrix D_sp (rows: empty modes s, columns: perturbed modes p)."""

    spectrum: ModeSpectrum
    D: np.ndarray
    source: str

    def __post_init__(self):
        if self.source not in ("asymptotic", "quadrature"):
            raise DomainError("source must be 'asymptotic' or 'quadrature'")
        N = self.spectrum.N
        if self.D.shape != (N, N):
            raise DomainError("matrix shape must match the spectrum length")

    @property
    def N(self) -> int:
        return self.spectrum.N

    def row_square_norms(self) -> np.ndarray:
        return np.sum(self.D**2, axis=1)


def build_overlap_matrix(spectrum: ModeSpectrum, source: str = "asymptotic") -> OverlapMatrix:
    """Fill D_sp for s, p = 1..N from the chosen source.

    An unperturbed spectrum (every |k_p - q_p| R below 1e-6) means the
    perturbed modes coincide with the empty modes, so D is the exact
    identity by orthonormality; the asymptotic model is bypassed in that
    case.
    """
    g = spectrum.geometry
    R = g.R
    q, k = spectrum.q, spectrum.k
    if np.all(np.abs(k - q) * R < _ZERO_SHIFT):
        return OverlapMatrix(spectrum=spectrum, D=np.eye(spectrum.N), source=source)
    if source == "asymptotic":
        D = mode_overlap_asymptotic(k[None, :], q[:, None], R)
        return OverlapMatrix(spectrum=spectrum, D=D, source=source)
    if source != "quadrature":
        raise DomainError("source must be 'asymptotic' or 'quadrature'")
    if spectrum.N > _QUADRATURE_N_CAP:
        raise DomainError(f"quadrature source restricted to N <= {_QUADRATURE_N_CAP}")
    kmax = max(float(k[-1]), float(q[-1]), getattr(spectrum.medium, "kp", 0.0))
    nin, win = _gl_panels(1e-9 * g.a, g.a, kmax)
    nex, wex = _gl_panels(g.a, R, kmax)
    nodes = np.concatenate([nin, nex])
    weights = np.concatenate([win, wex])
    UF = _sampled_modes(g, spectrum.medium, q, False, nodes)
    UG = _sampled_modes(g, spectrum.medium, k, True, nodes)
    UF /= np.sqrt((UF**2) @ weights)[:, None]
    UG /= np.sqrt((UG**2) @ weights)[:, None]
    D = UF @ (weights[:, None] * UG.T)
    return OverlapMatrix(spectrum=spectrum, D=D, source=source)
