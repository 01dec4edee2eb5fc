"""Log-determinants and the partial ground-state overlap S(N).

The two photon ground states are products of harmonic-oscillator Gaussians
in the empty-cavity coordinates U (frequencies q_i) and the perturbed
coordinates Q (frequencies k_i), linked by U = D Q.  Carrying out the
Gaussian integrals for the normalized states gives

    S(N) = 2**(N/2) * prod_i (q_i k_i)**(1/4)
           * sqrt( |det D| / det(diag(k) + C) ),      C = D^T diag(q) D.

The prefactor 2**(N/2) is forced by the identity test S = 1 for q = k,
D = I (normalized states), and the formula is verified against direct
tensor-product quadrature of the defining integrals for N <= 3.

Everything is evaluated in log space: the determinants themselves are
representable at N ~ 1000, but the intermediate frequency products are
not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as _la

from .errors import DegenerateGaussianError, DomainError, QuadratureToleranceError
from .modes import ModeSpectrum

__all__ = [
    "OverlapResult",
    "log_abs_det",
    "log_partial_overlap",
    "partial_overlap_S",
    "overlap_quadrature_oracle",
]


@dataclass(frozen=True)
class OverlapResult:
    """Log-determinant and log-overlap for one truncated mode set."""

    N: int
    log_abs_det_D: float
    log_S: float
    sign_det: int


def log_abs_det(M) -> tuple[float, int]:
    """log |det M| and the sign of det M via pivoted LU factorization.

    Returns (-inf, 0) for an exactly singular matrix.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix must be finite-valued")
    sign, logabs = np.linalg.slogdet(M)
    return float(logabs), int(sign)


def _logdet_spd(M: np.ndarray) -> float:
    """log det of a symmetric positive definite matrix via Cholesky."""
    try:
        L = _la.cholesky(M, lower=True)
    except _la.LinAlgError as exc:
        raise DegenerateGaussianError(
            "diag(k) + C is not positive definite; spectrum/overlap pairing is bad"
        ) from exc
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def log_partial_overlap(q, k, D) -> OverlapResult:
    """Evaluate log S for arbitrary frequency lists and overlap matrix.

    Low-level entry point used by the oracle tests; `q` are the empty-mode
    frequencies, `k` the perturbed ones (c = 1 units, so frequency and
    wavevector coincide).
    """
    q = np.asarray(q, dtype=float)
    k = np.asarray(k, dtype=float)
    D = np.atleast_2d(np.asarray(D, dtype=float))
    N = q.size
    if N == 0:
        return OverlapResult(N=0, log_abs_det_D=0.0, log_S=0.0, sign_det=1)
    if k.size != N or D.shape != (N, N):
        raise DomainError("q, k and D must share one dimension N")
    if np.any(q <= 0.0) or np.any(k <= 0.0):
        raise DomainError("frequencies must be positive")
    ld, sign = log_abs_det(D)
    if sign == 0:
        return OverlapResult(N=N, log_abs_det_D=ld, log_S=-np.inf, sign_det=0)
    C = D.T @ (q[:, None] * D)
    ldM = _logdet_spd(np.diag(k) + C)
    logS = (
        0.5 * N * np.log(2.0)
        + 0.25 * float(np.sum(np.log(q) + np.log(k)))
        + 0.5 * ld
        - 0.5 * ldM
    )
    return OverlapResult(N=N, log_abs_det_D=ld, log_S=logS, sign_det=sign)


def partial_overlap_S(spectrum: ModeSpectrum, D) -> OverlapResult:
    """Partial ground-state overlap for the first N modes of a spectrum.

    `D` may be an :class:`~catkit.overlap.OverlapMatrix` or a plain array
    matching the spectrum.
    """
    mat = getattr(D, "D", D)
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (spectrum.N, spectrum.N):
        raise DomainError("overlap matrix does not match the spectrum")
    return log_partial_overlap(spectrum.q, spectrum.k, mat)


def _tensor_overlap(q, k, D, n_nodes: int) -> float:
    """Tensor-product Gauss-Legendre evaluation of the defining integrals."""
    N = q.size
    half = 8.0 / np.sqrt(min(q.min(), k.min()))
    x1, w1 = np.polynomial.legendre.leggauss(n_nodes)
    x1 = x1 * half
    w1 = w1 * half
    grids = np.meshgrid(*([x1] * N), indexing="ij")
    Q = np.stack(grids, axis=-1)            # (...: N)
    W = np.ones_like(grids[0])
    for axis, _ in enumerate(grids):
        shape = [1] * N
        shape[axis] = n_nodes
        W = W * w1.reshape(shape)
    U = Q @ D.T
    eU = np.einsum("...i,i,...i->...", U, q, U)
    eQ = np.einsum("...i,i,...i->...", Q, k, Q)
    numer = float(np.sum(W * np.exp(-0.5 * (eU + eQ))))
    den_u = float(np.sum(W * np.exp(-eU)))
    den_q = float(np.sum(W * np.exp(-eQ)))
    return numer / np.sqrt(den_u * den_q)


def overlap_quadrature_oracle(q, k, D, n_nodes: int = 96) -> float:
    """Direct quadrature of the Gaussian overlap integrals, N <= 3.

    Integrates numerator and both normalization integrals over the box of
    half-width 8/sqrt(min frequency) with the substitution U = D Q in the
    numerator exponent, and checks convergence by repeating at higher node
    count.

    Raises
    ------
    QuadratureToleranceError
        If the two node counts disagree beyond 1e-10 (carries the finer
        estimate).
    """
    q = np.asarray(q, dtype=float)
    k = np.asarray(k, dtype=float)
    D = np.atleast_2d(np.asarray(D, dtype=float))
    N = q.size
    if N > 3:
        raise DomainError("quadrature oracle supports N <= 3")
    if k.size != N or D.shape != (N, N):
        raise DomainError("q, k and D must share one dimension N")
    if abs(np.linalg.det(D)) < 1e-12:
        raise DomainError("oracle requires an invertible D")
    coarse = _tensor_overlap(q, k, D, n_nodes)
    fine = _tensor_overlap(q, k, D, n_nodes + 16)
    if abs(fine - coarse) > 1e-10 * max(1.0, abs(fine)):
        raise QuadratureToleranceError(
            f"oracle quadrature not converged: {coarse!r} vs {fine!r}", fine
        )
    return fine
