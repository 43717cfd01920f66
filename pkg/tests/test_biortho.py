import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhgeo.biortho import build_biortho, gauge_rescale
from nhgeo.errors import DegenerateSpectrumWarning, NearDefective
from nhgeo.ssh import SSHParams, bloch, ssh_eigenstates

from conftest import maxdev


def random_diagonalizable(rng, N=6):
    K = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    return K + np.diag(3.0 * np.arange(N))


class TestBuildBiortho:
    def test_hermitian_left_equals_right(self, rng):
        B = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        K = B + B.conj().T + np.diag(4.0 * np.arange(5))
        sys = build_biortho(K)
        # left and right columns agree up to the (unimodular) column phases
        for n in range(5):
            o = sys.left[:, n].conj() @ sys.right[:, n]
            assert abs(abs(o) - 1.0) < 1e-10
            assert maxdev(sys.left[:, n], sys.right[:, n] / o) < 1e-9
        assert maxdev(sys.gram_right, np.eye(5)) < 1e-10

    def test_two_level_gram_analytic(self):
        a, b = 1.3, 0.4
        sys = build_biortho(np.array([[0.0, a], [b, 0.0]]))
        expected = (a - b) / (a + b)
        assert abs(abs(sys.gram_right[0, 1]) - abs(expected)) < 1e-12

    def test_ssh_bloch_matches_closed_forms(self):
        p = SSHParams(0.7, 0.4, 4)
        k = 1.3
        sys = build_biortho(bloch(p, k))
        (prp, prm), (plp, plm) = ssh_eigenstates(p, k)
        # match by eigenvalue sign: closed forms ordered (+sqrt, -sqrt)
        e = sys.eigenvalues
        for closed_r, closed_l, ev in ((prp, plp, "+"), (prm, plm, "-")):
            target = np.argmax(e.real) if ev == "+" else np.argmin(e.real)
            r = sys.right[:, target]
            l = sys.left[:, target]
            # proportional up to the biorthogonal gauge
            ratio = closed_r / r
            assert np.abs(ratio - ratio[0]).max() < 1e-9
            ratio_l = closed_l / l
            assert np.abs(ratio_l - ratio_l[0]).max() < 1e-9
            # products are gauge independent
            assert maxdev(np.outer(r, l.conj()), np.outer(closed_r, closed_l.conj())) < 1e-9

    def test_biorthonormality_random(self, rng):
        for _ in range(50):
            sys = build_biortho(random_diagonalizable(rng))
            assert maxdev(sys.left.conj().T @ sys.right, np.eye(6)) <= 1e-10

    def test_gram_matrices_inverse_pair(self, rng):
        sys = build_biortho(random_diagonalizable(rng))
        assert maxdev(sys.gram_left @ sys.gram_right, np.eye(6)) <= 1e-8

    def test_left_eigenvectors_of_adjoint(self, rng):
        K = random_diagonalizable(rng)
        sys = build_biortho(K)
        for n in range(6):
            res = K.conj().T @ sys.left[:, n] - sys.eigenvalues[n].conj() * sys.left[:, n]
            assert np.linalg.norm(res) < 1e-8 * np.linalg.norm(K)

    def test_near_defective_raises(self):
        with pytest.raises(NearDefective):
            build_biortho(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_degenerate_spectrum_warns(self):
        with pytest.warns(DegenerateSpectrumWarning):
            build_biortho(np.diag([1.0, 1.0, 2.0]))


class TestGaugeRescale:
    def test_zero_gauge_identity(self, rng):
        sys = build_biortho(random_diagonalizable(rng))
        out = gauge_rescale(sys, np.zeros(6))
        assert maxdev(out.right, sys.right) == 0.0
        assert maxdev(out.left, sys.left) == 0.0

    def test_pure_phase_on_hermitian_keeps_gram(self, rng):
        B = rng.normal(size=(4, 4))
        K = (B + B.T) + np.diag(4.0 * np.arange(4))
        sys = build_biortho(K)
        out = gauge_rescale(sys, 1j * np.array([0.3, -1.1, 0.7, 2.0]))
        assert maxdev(np.abs(out.gram_right), np.abs(sys.gram_right)) < 1e-12
        assert maxdev(np.diag(out.gram_right), np.diag(sys.gram_right)) < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_random_gauge_preserves_biorthonormality(self, seed):
        rng = np.random.default_rng(seed)
        sys = build_biortho(random_diagonalizable(rng, 4))
        r = rng.normal(size=4) + 1j * rng.normal(size=4)
        out = gauge_rescale(sys, r)
        # diagonal is exact by construction; off-diagonal at solve precision
        prod = out.left.conj().T @ out.right
        assert maxdev(np.diag(prod), np.ones(4)) < 1e-13
        assert maxdev(prod, np.eye(4)) < 1e-9
