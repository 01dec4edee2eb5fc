"""Spherical Bessel and Riccati-Bessel functions with derivatives.

The radial matching conditions of a spherical scatterer are most naturally
written in terms of the Riccati-Bessel functions

    S_l(x) = x j_l(x),     C_l(x) = x y_l(x),

and their first derivatives.  The orders that dominate every pipeline here
are l = 0 and l = 1, so those are evaluated from closed forms (with series
guards against cancellation at small argument); higher orders are delegated
to scipy's stable implementations.  Purely imaginary arguments, which occur
inside a sub-plasma-frequency Drude medium, are handled by the modified
functions i_l(x) so that the arithmetic stays real throughout.

All derivatives are analytic (recurrence identities), never finite
differences: they enter transcendental matching conditions where derivative
noise shifts roots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError, UnsupportedOrderError

MAX_ORDER = 50

__all__ = [
    "BesselPair",
    "sph_bessel",
    "mod_sph_bessel_i",
    "riccati",
    "riccati_mod_scaled",
]


@dataclass(frozen=True)
class BesselPair:
    """Values and first derivatives of j_l and y_l at one argument (or grid).

    Satisfies the Wronskian identity j*yp - jp*y = 1/x**2 for x > 0.
    """

    j: np.ndarray | float
    jp: np.ndarray | float
    y: np.ndarray | float
    yp: np.ndarray | float


def _as_positive_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("argument must be a positive finite real")
    return arr, scalar


def _j0(x):
    return np.sin(x) / x


def _j1(x):
    # sin(x)/x**2 - cos(x)/x cancels catastrophically below x ~ 1e-3
    out = np.empty_like(x)
    small = x < 1e-3
    xl = x[~small]
    out[~small] = np.sin(xl) / xl**2 - np.cos(xl) / xl
    xs = x[small]
    out[small] = xs / 3.0 - xs**3 / 30.0 + xs**5 / 840.0
    return out


def _y0(x):
    return -np.cos(x) / x


def _y1(x):
    return -np.cos(x) / x**2 - np.sin(x) / x


def _jp_from_recurrence(l, j_lm1, j_l, x):
    # f_l' = f_{l-1} - (l+1)/x * f_l  (holds for j and y alike)
    return j_lm1 - (l + 1) / x * j_l


def sph_bessel(l: int, x) -> BesselPair:
    """Spherical Bessel functions j_l, y_l and derivatives at x > 0.

    Parameters
    ----------
    l : int
        Order, 0 <= l <= 50.
    x : float or array_like
        Positive argument(s).

    Returns
    -------
    BesselPair

    Raises
    ------
    DomainError
        If x <= 0.
    UnsupportedOrderError
        If l is negative or exceeds 50.
    """
    if not isinstance(l, (int, np.integer)) or l < 0 or l > MAX_ORDER:
        raise UnsupportedOrderError(f"order l={l} outside supported range 0..{MAX_ORDER}")
    arr, scalar = _as_positive_array(x)
    if l == 0:
        j, y = _j0(arr), _y0(arr)
        # j0' = -j1, y0' = -y1
        jp, yp = -_j1(arr), -_y1(arr)
    elif l == 1:
        j, y = _j1(arr), _y1(arr)
        jp = _jp_from_recurrence(1, _j0(arr), j, arr)
        yp = _jp_from_recurrence(1, _y0(arr), y, arr)
    else:
        # scipy uses stable schemes (downward recurrence for j at x < l)
        j = _sp.spherical_jn(l, arr)
        jp = _sp.spherical_jn(l, arr, derivative=True)
        y = _sp.spherical_yn(l, arr)
        yp = _sp.spherical_yn(l, arr, derivative=True)
    if scalar:
        return BesselPair(float(j[0]), float(jp[0]), float(y[0]), float(yp[0]))
    return BesselPair(j, jp, y, yp)


def _i0(x):
    return np.sinh(x) / x


def _i1(x):
    # cosh(x)/x - sinh(x)/x**2 cancels at small x
    out = np.empty_like(x)
    small = x < 0.2
    xl = x[~small]
    out[~small] = np.cosh(xl) / xl - np.sinh(xl) / xl**2
    xs = x[small]
    out[small] = xs / 3.0 * (1.0 + xs**2 / 10.0 + xs**4 / 280.0)
    return out


# np.sinh overflows just above this; callers needing larger arguments must
# use the exponentially scaled Riccati path instead.
_I_OVERFLOW = 700.0


def mod_sph_bessel_i(l: int, x):
    """Modified spherical Bessel i_l(x) and its derivative, x > 0.

    Related to the ordinary function by j_l(i x) = i**l i_l(x); computing
    i_l directly keeps interior logarithmic derivatives real when the
    refractive index is purely imaginary.

    Raises
    ------
    DomainError
        If x <= 0, or if x is large enough that i_l overflows a double
        (use the scaled Riccati path in that regime).
    UnsupportedOrderError
        If l is negative or exceeds 50.
    """
    if not isinstance(l, (int, np.integer)) or l < 0 or l > MAX_ORDER:
        raise UnsupportedOrderError(f"order l={l} outside supported range 0..{MAX_ORDER}")
    arr, scalar = _as_positive_array(x)
    if np.any(arr > _I_OVERFLOW):
        raise DomainError(
            f"i_{l}(x) overflows for x > {_I_OVERFLOW:g}; use riccati_mod_scaled"
        )
    if l == 0:
        v = _i0(arr)
        # i0' = i1
        vp = _i1(arr)
    elif l == 1:
        v = _i1(arr)
        vp = _i0(arr) - 2.0 / arr * v
    else:
        v = _sp.spherical_in(l, arr)
        vp = _sp.spherical_in(l, arr, derivative=True)
    if scalar:
        return float(v[0]), float(vp[0])
    return v, vp


def riccati(l: int, x):
    """Riccati-Bessel S_l = x j_l, C_l = x y_l and their derivatives.

    Returns
    -------
    (S, Sp, C, Cp) : tuple of floats or arrays
        S_l(x), S_l'(x), C_l(x), C_l'(x).  The pair satisfies the Wronskian
        S*Cp - Sp*C = 1.
    """
    pair = sph_bessel(l, x)
    arr = np.asarray(x, dtype=float)
    S = arr * pair.j
    Sp = pair.j + arr * pair.jp
    C = arr * pair.y
    Cp = pair.y + arr * pair.yp
    return S, Sp, C, Cp


def riccati_mod_scaled(l: int, x):
    """exp(-x)-scaled modified Riccati functions x i_l(x) and d/dx[x i_l(x)].

    Returns (Si, Sip) both multiplied by exp(-x).  The common positive scale
    cancels in logarithmic derivatives and characteristic functions, so this
    is safe arbitrarily deep into the evanescent regime.  Only l <= 1 is
    needed there in practice.
    """
    if l not in (0, 1):
        raise UnsupportedOrderError("scaled modified Riccati implemented for l in {0, 1}")
    arr, scalar = _as_positive_array(x)
    # exp(-x)*sinh(x) and exp(-x)*cosh(x) without overflow
    em2 = np.exp(-2.0 * arr)
    sh = 0.5 * (1.0 - em2)
    ch = 0.5 * (1.0 + em2)
    small = arr < 0.2
    if l == 0:
        Si = sh  # x * i0 = sinh
        Sip = ch  # d/dx sinh = cosh
    else:
        i1s = ch / arr - sh / arr**2
        if np.any(small):
            xs = arr[small]
            i1s[small] = np.exp(-xs) * (xs / 3.0) * (1.0 + xs**2 / 10.0 + xs**4 / 280.0)
        Si = arr * i1s
        Sip = sh - i1s  # d/dx[x i1] = x i0 - i1
    if scalar:
        return float(Si[0]), float(Sip[0])
    return Si, Sip
