"""TE scattering phase shifts of the central sphere.

The exterior radial solution is written as A j_l(kr) + B y_l(kr); matching
the logarithmic derivative of r*g(r) at the sphere surface (continuity of
the tangential electric and magnetic fields for mu = 1) determines B/A and
hence the phase shift of the large-r asymptotic sin(kr - l*pi/2 + delta)/kr.

Sign convention.  The shift returned here is the one entering the
eigenvalue relation of the enclosing cavity,

    k_s = q_s + delta(q_s) / R,

i.e. delta = (k_s - q_s) * R exactly in the large-R limit.  This is the
*operational* definition: :func:`delta_oracle` measures the left-hand side
from exact root pairs and pins the sign and branch.  A mirror-like sphere
pushes modes up, so its delta is positive.  In terms of the Riccati
functions evaluated at beta = k a this convention reads

    tan delta = (L*S_l(beta) - k*S_l'(beta)) / (k*C_l'(beta) - L*C_l(beta)),

with L the interior logarithmic derivative of r*g at r = a, and for the
perfect conductor (Dirichlet surface) tan delta = -S_l(beta)/C_l(beta).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, PoleError, ResolutionError
from .media import Medium, PerfectConductor, Vacuum, index_squared

__all__ = [
    "PhaseShiftCurve",
    "interior_log_derivative",
    "phase_shift",
    "phase_shift_curve",
    "delta_oracle",
    "unwrap_branch",
]

# below this, |n*beta|**2 is treated as zero and the small-argument limit
# L = (l+1)/a of the interior log-derivative is used
_SQ_ARG_FLOOR = 1e-12
# switch the evanescent branch to exp-scaled arithmetic beyond this argument
_SCALED_CUTOFF = 30.0


def _interior_ratio(m: Medium, l: int, k, a: float):
    """Interior log-derivative L of r*g at r = a, as a ratio (num, den).

    L = num/den with den > 0 in the evanescent branch; the representation
    stays finite at interior resonances where L itself has poles.
    """
    karr = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(karr <= 0.0):
        raise DomainError("wavevector must be positive")
    if a <= 0.0:
        raise DomainError("inclusion radius must be positive")
    n2 = np.atleast_1d(np.asarray(index_squared(m, karr), dtype=float))
    x2 = n2 * (karr * a) ** 2  # signed squared interior argument
    num = np.empty_like(karr)
    den = np.empty_like(karr)

    ev = x2 < -_SQ_ARG_FLOOR   # evanescent interior, imaginary index
    osc = x2 > _SQ_ARG_FLOOR   # oscillatory interior, real index
    lim = ~(ev | osc)

    if np.any(osc):
        x = np.sqrt(x2[osc])
        S, Sp, _, _ = specfun.riccati(l, x)
        num[osc] = (x / a) * Sp
        den[osc] = S
    if np.any(ev):
        xi = np.sqrt(-x2[ev])
        if np.all(xi <= _SCALED_CUTOFF):
            iv, ivp = specfun.mod_sph_bessel_i(l, xi)
            Si = xi * iv
            Sip = iv + xi * ivp
        else:
            Si, Sip = specfun.riccati_mod_scaled(l, xi)
        num[ev] = (xi / a) * Sip
        den[ev] = Si
    if np.any(lim):
        num[lim] = (l + 1) / a
        den[lim] = 1.0
    return num, den


def interior_log_derivative(m: Medium, l: int, k: float, a: float) -> float:
    """d/dr ln[r g_l(r)] at r = a for the interior solution, always real.

    Raises
    ------
    PoleError
        At a zero of the interior Riccati function, where the logarithmic
        derivative diverges (perturb k slightly to step off the pole).
    """
    num, den = _interior_ratio(m, l, float(k), a)
    n, d = float(num[0]), float(den[0])
    if d == 0.0 or abs(d) < 1e-300 * abs(n):
        raise PoleError(f"interior log-derivative has a pole at k={k!r}")
    return n / d


def _fold_principal(d):
    """Fold angles (mod pi) into the principal interval (-pi/2, pi/2]."""
    out = d - np.pi * np.round(d / np.pi)
    return np.where(out <= -np.pi / 2, out + np.pi, out)


def phase_shift(m: Medium, l: int, k, a: float = 1.0):
    """Principal-value TE phase shift delta_l(k) in (-pi/2, pi/2].

    Accepts scalar or array k; vacuum returns exact zeros.
    """
    karr = np.atleast_1d(np.asarray(k, dtype=float))
    scalar = np.ndim(k) == 0
    if np.any(karr <= 0.0):
        raise DomainError("wavevector must be positive")
    if isinstance(m, Vacuum):
        out = np.zeros_like(karr)
        return float(out[0]) if scalar else out
    beta = karr * a
    S, Sp, C, Cp = specfun.riccati(l, beta)
    if isinstance(m, PerfectConductor):
        num = -S
        den = C
    else:
        ln, ld = _interior_ratio(m, l, karr, a)
        num = ln * S - ld * karr * Sp
        den = ld * karr * Cp - ln * C
    out = _fold_principal(np.arctan2(num, den))
    return float(out[0]) if scalar else out


def unwrap_branch(pv: np.ndarray) -> np.ndarray:
    """Continuously unwrap a sequence of principal values (mod pi).

    The branch is anchored at the first sample, so the input should start
    where delta is known to be near zero (small k).
    """
    pv = np.asarray(pv, dtype=float)
    out = np.empty_like(pv)
    if pv.size == 0:
        return out
    out[0] = pv[0]
    for i in range(1, pv.size):
        out[i] = pv[i] + np.pi * np.round((out[i - 1] - pv[i]) / np.pi)
    return out


@dataclass(frozen=True)
class PhaseShiftCurve:
    """Continuously unwrapped delta_l(k) on a strictly increasing grid."""

    l: int
    medium: Medium
    a: float
    k: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        if self.k.size != self.delta.size:
            raise DomainError("k and delta grids must have equal length")
        if np.any(np.diff(self.k) <= 0.0):
            raise DomainError("k grid must be strictly increasing")

    def delta_at(self, k):
        """Linear interpolation of the unwrapped branch (k inside the grid)."""
        arr = np.asarray(k, dtype=float)
        if np.any(arr < self.k[0]) or np.any(arr > self.k[-1]):
            raise DomainError("requested wavevector outside the tabulated grid")
        return np.interp(arr, self.k, self.delta)


_MAX_REFINE = 30


def phase_shift_curve(m: Medium, l: int, a: float, k_grid) -> PhaseShiftCurve:
    """Unwrapped phase-shift curve with adaptive grid refinement.

    Midpoints are inserted wherever adjacent unwrapped values differ by more
    than pi/2, until the branch is unambiguous everywhere.

    Raises
    ------
    ResolutionError
        If a jump survives the maximum refinement depth (carries the
        offending interval).
    """
    k = np.asarray(k_grid, dtype=float)
    if k.ndim != 1 or k.size < 2:
        raise DomainError("k_grid must be a 1-d grid with at least 2 points")
    if k[0] <= 0.0 or np.any(np.diff(k) <= 0.0):
        raise DomainError("k_grid must be strictly increasing and positive")
    pv = phase_shift(m, l, k, a)
    for _ in range(_MAX_REFINE):
        d = unwrap_branch(pv)
        jumps = np.abs(np.diff(d)) > np.pi / 2
        if not np.any(jumps):
            return PhaseShiftCurve(l=l, medium=m, a=a, k=k, delta=d)
        mids = 0.5 * (k[:-1][jumps] + k[1:][jumps])
        k = np.sort(np.concatenate([k, mids]))
        pv = phase_shift(m, l, k, a)
    d = unwrap_branch(pv)
    bad = int(np.argmax(np.abs(np.diff(d))))
    raise ResolutionError(
        "unresolved phase-shift branch jump after maximum refinement",
        (float(k[bad]), float(k[bad + 1])),
    )


def delta_oracle(m: Medium, l: int, a: float, R: float, s: int) -> float:
    """Ground-truth shift (k_s - q_s) * R from exact cavity root pairs.

    q_s is the s-th empty-cavity root and k_s the matching root of the
    perturbed characteristic equation.  This operational quantity fixes the
    sign and branch convention of :func:`phase_shift`; the two agree up to
    O(1/R) corrections.

    Raises
    ------
    PairingAmbiguityError
        When the measured shift sits within 0.02 rad of a nonzero multiple
        of pi, where index pairing can slip by one mode.
    """
    from . import modes  # deferred: modes builds on this module

    if s < 1:
        raise DomainError("mode index s must be >= 1")
    if R < 10.0 * a:
        raise DomainError("oracle requires R/a >= 10")
    if isinstance(m, Vacuum):
        return 0.0
    q = modes.empty_cavity_wavevectors(R, s, l=l)[-1]
    k_exact = modes.perturbed_root_near(m, l, a, R, q)
    delta = (k_exact - q) * R
    wraps = np.round(delta / np.pi)
    if wraps != 0 and abs(delta - wraps * np.pi) < 0.02:
        from .errors import PairingAmbiguityError

        raise PairingAmbiguityError(
            f"shift {delta:.4f} rad is within 0.02 of {int(wraps)}*pi; "
            "root-to-mode pairing ambiguous",
            (float(q), float(k_exact)),
        )
    return float(delta)
