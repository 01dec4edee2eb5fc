import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catkit import gaussian, modes, overlap
from catkit.errors import DegenerateGaussianError, DomainError
from catkit.media import Drude


def cofactor_det(M):
    """Brute-force determinant by permutation expansion (oracle)."""
    n = M.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        sign = 1.0
        seen = list(perm)
        for i in range(n):
            while seen[i] != i:
                j = seen[i]
                seen[i], seen[j] = seen[j], seen[i]
                sign = -sign
        total += sign * np.prod([M[i, perm[i]] for i in range(n)])
    return total


class TestLogAbsDet:
    def test_identity(self):
        la, sign = gaussian.log_abs_det(np.eye(5))
        assert la == pytest.approx(0.0, abs=1e-14)
        assert sign == 1

    def test_diagonal(self):
        la, sign = gaussian.log_abs_det(np.diag([2.0, 3.0]))
        assert la == pytest.approx(np.log(6.0), rel=1e-14)
        assert sign == 1

    def test_singular(self):
        la, sign = gaussian.log_abs_det(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert sign == 0 and la == -np.inf

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            gaussian.log_abs_det(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    @given(st.lists(st.floats(-1.0, 1.0), min_size=9, max_size=9))
    @settings(max_examples=60, deadline=None)
    def test_matches_cofactor_expansion(self, entries):
        M = np.array(entries).reshape(3, 3)
        ref = cofactor_det(M)
        la, sign = gaussian.log_abs_det(M)
        if abs(ref) < 1e-12:
            assert la < -20 or sign == 0
        else:
            assert sign == np.sign(ref)
            assert la == pytest.approx(np.log(abs(ref)), abs=1e-10)


class TestPartialOverlap:
    def test_identity_spectrum_gives_unit_overlap(self):
        q = np.array([0.7, 1.3, 2.9])
        res = gaussian.log_partial_overlap(q, q, np.eye(3))
        assert res.log_S == pytest.approx(0.0, abs=1e-12)

    def test_one_mode_closed_form(self):
        res = gaussian.log_partial_overlap([1.0], [2.0], [[1.0]])
        expect = np.sqrt(2.0) * 2.0**0.25 / np.sqrt(3.0)
        assert np.exp(res.log_S) == pytest.approx(expect, rel=1e-10)
        assert np.exp(res.log_S) == pytest.approx(0.97098, abs=5e-6)

    def test_two_mode_rotation_matches_oracle(self):
        th = 0.2
        D = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        q = np.array([1.0, 2.0])
        k = np.array([1.3, 2.1])
        ref = gaussian.overlap_quadrature_oracle(q, k, D)
        got = np.exp(gaussian.log_partial_overlap(q, k, D).log_S)
        assert got == pytest.approx(ref, abs=1e-8)

    def test_block_additivity(self):
        q1, k1 = np.array([1.0, 2.0]), np.array([1.1, 2.3])
        th = 0.3
        D1 = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        q2, k2 = np.array([0.8]), np.array([1.4])
        D2 = np.array([[0.95]])
        whole = gaussian.log_partial_overlap(
            np.concatenate([q1, q2]),
            np.concatenate([k1, k2]),
            np.block([[D1, np.zeros((2, 1))], [np.zeros((1, 2)), D2]]),
        )
        parts = (
            gaussian.log_partial_overlap(q1, k1, D1).log_S
            + gaussian.log_partial_overlap(q2, k2, D2).log_S
        )
        assert whole.log_S == pytest.approx(parts, abs=1e-12)

    def test_empty_truncation(self):
        res = gaussian.log_partial_overlap([], [], np.zeros((0, 0)))
        assert res.log_S == 0.0 and res.N == 0

    def test_monotone_decreasing_in_N(self):
        g = modes.CavityGeometry(a=1.0, R=200 / 1.88)
        spec = modes.build_spectrum(g, Drude(kp=5.0), 200)
        D = overlap.build_overlap_matrix(spec).D
        vals = []
        for n in range(20, 201, 20):
            vals.append(
                gaussian.log_partial_overlap(spec.q[:n], spec.k[:n], D[:n, :n]).log_S
            )
        assert np.all(np.diff(vals) <= 1e-12)

    def test_log_S_never_positive(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(1, 4))
            q = rng.uniform(0.3, 4.0, n)
            k = rng.uniform(0.3, 4.0, n)
            A = rng.uniform(-0.3, 0.3, (n, n))
            D = np.eye(n) + A - A.T  # well-conditioned, near-rotation
            res = gaussian.log_partial_overlap(q, k, D)
            assert res.log_S <= 1e-12

    def test_spd_guard(self):
        with pytest.raises(DegenerateGaussianError):
            gaussian._logdet_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_shape_guard(self):
        with pytest.raises(DomainError):
            gaussian.log_partial_overlap([1.0, 2.0], [1.0], np.eye(2))


class TestOracle:
    def test_identity_case(self):
        assert gaussian.overlap_quadrature_oracle([1.5], [1.5], [[1.0]]) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_two_gaussian_closed_form(self):
        # overlap of exp(-q x^2/2) and exp(-k x^2/2), both normalized
        got = gaussian.overlap_quadrature_oracle([1.0], [4.0], [[1.0]])
        expect = np.sqrt(2.0 * np.sqrt(4.0) / 5.0)
        assert got == pytest.approx(expect, rel=1e-9)
        assert got == pytest.approx(0.89443, abs=5e-6)

    def test_diagonal_separability(self):
        q = np.array([1.0, 2.0])
        k = np.array([2.5, 0.9])
        D = np.diag([1.0, 1.0])
        whole = gaussian.overlap_quadrature_oracle(q, k, D)
        parts = gaussian.overlap_quadrature_oracle(
            q[:1], k[:1], [[1.0]]
        ) * gaussian.overlap_quadrature_oracle(q[1:], k[1:], [[1.0]])
        assert whole == pytest.approx(parts, rel=1e-9)

    def test_size_cap(self):
        with pytest.raises(DomainError):
            gaussian.overlap_quadrature_oracle([1, 1, 1, 1], [1, 1, 1, 1], np.eye(4))

    def test_singular_rejected(self):
        with pytest.raises(DomainError):
            gaussian.overlap_quadrature_oracle([1.0, 1.0], [1.0, 1.0], np.ones((2, 2)))
