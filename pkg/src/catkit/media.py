"""Permittivity models for the central inclusion.

Natural units are used throughout the package: lengths in units of the
inclusion radius a, wavevectors in 1/a, and c = 1, so frequency and
wavevector coincide.  A medium therefore carries at most one scale of its
own (the Drude plasma wavevector k_p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoFinitePermittivityError

__all__ = [
    "Medium",
    "Vacuum",
    "Drude",
    "Dielectric",
    "PerfectConductor",
    "permittivity",
    "index_squared",
    "parse_medium",
    "medium_spec",
]


class Medium:
    """Base class for inclusion media (use the concrete variants)."""

    __slots__ = ()


@dataclass(frozen=True)
class Vacuum(Medium):
    """No inclusion: eps identically 1 (not an epsilon-close dielectric)."""


@dataclass(frozen=True)
class Drude(Medium):
    """Free-electron metal, eps(k) = 1 - (k_p/k)**2.

    Below k_p the refractive index is purely imaginary and the sphere acts
    as a mirror; far above k_p it becomes transparent.
    """

    kp: float

    def __post_init__(self):
        if not (self.kp > 0.0 and np.isfinite(self.kp)):
            raise DomainError("Drude plasma wavevector kp must be positive")


@dataclass(frozen=True)
class Dielectric(Medium):
    """Non-dispersive dielectric with constant eps > 0."""

    eps: float

    def __post_init__(self):
        if not (self.eps > 0.0 and np.isfinite(self.eps)):
            raise DomainError("dielectric constant eps must be positive")


@dataclass(frozen=True)
class PerfectConductor(Medium):
    """Idealized mirror inclusion.

    This is a boundary-condition flag, not a material: no finite
    permittivity exists (a diverging eps would violate causality), and
    downstream modules implement it as a Dirichlet condition at r = a.
    """


def _check_k(k) -> np.ndarray:
    arr = np.asarray(k, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise DomainError("wavevector k must be positive and finite")
    return arr


def permittivity(m: Medium, k):
    """Permittivity eps of medium `m` at wavevector `k` (may be negative).

    Raises
    ------
    NoFinitePermittivityError
        For a perfect conductor.
    DomainError
        If k <= 0.
    """
    arr = _check_k(k)
    scalar = np.ndim(k) == 0
    if isinstance(m, PerfectConductor):
        raise NoFinitePermittivityError("a perfect conductor has no finite permittivity")
    if isinstance(m, Vacuum):
        out = np.ones_like(arr)
    elif isinstance(m, Dielectric):
        out = np.full_like(arr, m.eps)
    elif isinstance(m, Drude):
        out = 1.0 - (m.kp / arr) ** 2
    else:
        raise TypeError(f"unknown medium {m!r}")
    return float(out) if scalar else out


def index_squared(m: Medium, k):
    """Squared refractive index n**2 = eps at wavevector k.

    Callers branch on the sign: n real for n**2 > 0, purely imaginary for
    n**2 < 0 (lossless media guarantee n**2 is real).
    """
    return permittivity(m, k)


def parse_medium(spec: str) -> Medium:
    """Parse the CLI medium syntax.

    Accepted forms: ``vacuum``, ``drude:kp=<float>``, ``dielectric:eps=<float>``,
    ``pec``.
    """
    s = spec.strip().lower()
    if s == "vacuum":
        return Vacuum()
    if s == "pec":
        return PerfectConductor()
    head, _, tail = s.partition(":")
    try:
        if head == "drude":
            key, _, val = tail.partition("=")
            if key != "kp":
                raise ValueError
            return Drude(kp=float(val))
        if head == "dielectric":
            key, _, val = tail.partition("=")
            if key != "eps":
                raise ValueError
            return Dielectric(eps=float(val))
    except ValueError:
        pass
    raise DomainError(
        f"cannot parse medium spec {spec!r}; expected vacuum | drude:kp=<v> | "
        f"dielectric:eps=<v> | pec"
    )


def medium_spec(m: Medium) -> str:
    """Inverse of :func:`parse_medium` (stable textual form for metadata)."""
    if isinstance(m, Vacuum):
        return "vacuum"
    if isinstance(m, PerfectConductor):
        return "pec"
    if isinstance(m, Drude):
        return f"drude:kp={m.kp:.12g}"
    if isinstance(m, Dielectric):
        return f"dielectric:eps={m.eps:.12g}"
    raise TypeError(f"unknown medium {m!r}")
