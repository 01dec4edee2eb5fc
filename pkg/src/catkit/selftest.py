"""Built-in oracle suites for the `catkit selftest` subcommand.

Each suite cross-checks a production path against an independent route:
Gaussian overlaps against direct quadrature, shift spectra against exact
characteristic-equation roots, asymptotic overlaps against exact-mode
quadrature, and the special-function Wronskians.
"""

from __future__ import annotations

import numpy as np

from . import gaussian, modes, overlap, specfun
from .media import Drude
from .modes import CavityGeometry


def _suite_gaussian() -> tuple[bool, str]:
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(1, 4))
        q = rng.uniform(0.5, 3.0, n)
        k = rng.uniform(0.5, 3.0, n)
        th = rng.uniform(-0.4, 0.4)
        if n == 1:
            D = np.array([[1.0 + 0.2 * th]])
        else:
            D = np.eye(n)
            D[0, 0] = np.cos(th)
            D[0, 1] = -np.sin(th)
            D[1, 0] = np.sin(th)
            D[1, 1] = np.cos(th)
        ref = gaussian.overlap_quadrature_oracle(q, k, D)
        got = np.exp(gaussian.log_partial_overlap(q, k, D).log_S)
        worst = max(worst, abs(got - ref))
    return worst < 1e-8, f"max |formula - quadrature| = {worst:.3e}"


def _suite_spectra() -> tuple[bool, str]:
    g = CavityGeometry(a=1.0, R=100.0)
    m = Drude(kp=5.0)
    spec_shift = modes.build_spectrum(g, m, 25, method="shift")
    spec_exact = modes.build_spectrum(g, m, 25, method="exact")
    worst = float(np.max(np.abs(spec_shift.k - spec_exact.k)) * g.R)
    return worst < 0.02, f"max |k_shift - k_exact| R = {worst:.3e}"


def _suite_overlap_sources() -> tuple[bool, str]:
    g = CavityGeometry(a=1.0, R=26.6)
    m = Drude(kp=5.0)
    spec = modes.build_spectrum(g, m, 30, method="shift")
    Da = overlap.build_overlap_matrix(spec, source="asymptotic").D
    Dq = overlap.build_overlap_matrix(spec, source="quadrature").D
    # the fixed low-mode corner carries an R-independent asymptotic-form
    # error; the bulk must agree tightly
    bulk = np.abs(Da - Dq)[4:, 4:]
    worst = float(bulk.max())
    return worst < 0.05, f"max bulk |asymptotic - quadrature| = {worst:.3e}"


def _suite_wronskian() -> tuple[bool, str]:
    x = np.geomspace(1e-2, 1e3, 200)
    worst = 0.0
    for l in range(0, 6):
        p = specfun.sph_bessel(l, x)
        w = p.j * p.yp - p.jp * p.y
        worst = max(worst, float(np.max(np.abs(w * x**2 - 1.0))))
    return worst < 1e-10, f"max Wronskian defect = {worst:.3e}"


_SUITES = [
    ("gaussian-overlap-oracle", _suite_gaussian),
    ("exact-vs-shift-spectra", _suite_spectra),
    ("overlap-source-agreement", _suite_overlap_sources),
    ("wronskian-identities", _suite_wronskian),
]


def run(threads: int | None = None) -> bool:
    all_ok = True
    for name, fn in _SUITES:
        ok, detail = fn()
        all_ok &= ok
        print(f"selftest {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return all_ok
