import numpy as np
import pytest

from nhgeo.errors import ContinuationAmbiguous, DegenerateSpectrum, NotHermitian
from nhgeo.tensors import (
    OperatorFamily,
    agp_elements,
    agp_residual,
    berry_connection,
    chi_hermitian,
    eta_tensor,
    projector_deformation,
    projector_fd,
    zeta_limited,
    zeta_tensor,
)
from nhgeo.verify import random_family, random_gauge, random_hermitian_family

from conftest import maxdev

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@pytest.fixture
def qubit():
    return OperatorFamily(
        2, 1,
        lambda l: np.cos(l[0]) * SZ + np.sin(l[0]) * SX,
        lambda mu, l: -np.sin(l[0]) * SZ + np.cos(l[0]) * SX,
    )


@pytest.fixture
def nh6(rng):
    return random_family(rng, N=6, d=2)


class TestOperatorFamily:
    def test_analytic_fd_consistency(self, nh6, rng):
        lam = rng.uniform(-0.1, 0.1, size=2)
        assert nh6.derivative_consistency(lam) <= 1e-5

    def test_fd_fallback(self, qubit):
        bare = OperatorFamily(2, 1, qubit.func)
        lam = np.array([0.4])
        assert maxdev(bare.derivative(0, lam), qubit.derivative(0, lam)) < 1e-9


class TestChiHermitian:
    def test_qubit_quarter(self, qubit):
        for th in (0.0, 0.3, 1.1, 2.7):
            chi = chi_hermitian(qubit, [th], 0)
            assert abs(chi.values[0, 0] - 0.25) < 1e-9

    def test_one_parameter_curvature_vanishes(self, qubit):
        chi = chi_hermitian(qubit, [0.4], 0)
        assert abs(chi.berry_curvature[0, 0]) < 1e-12

    def test_parameter_independent_family_zero(self):
        fam = OperatorFamily(3, 2, lambda l: np.diag([0.0, 1.0, 2.0]))
        chi = chi_hermitian(fam, [0.1, 0.2], 1)
        assert np.abs(chi.values).max() < 1e-12

    def test_hermitian_psd(self, rng):
        fam = random_hermitian_family(rng)
        chi = chi_hermitian(fam, [0.03, -0.06], 0)
        assert chi.hermiticity_defect() < 1e-9
        assert chi.min_eigenvalue() > -1e-9

    def test_not_hermitian_rejected(self, nh6):
        with pytest.raises(NotHermitian):
            chi_hermitian(nh6, [0.0, 0.0], 0)


class TestAgpElements:
    def test_commuting_family_zero(self):
        fam = OperatorFamily(
            2, 1, lambda l: np.diag([l[0], 2 * l[0]]),
            lambda mu, l: np.diag([1.0, 2.0]),
        )
        A = agp_elements(fam, [0.7], 0)
        assert np.abs(A.elements).max() < 1e-14

    def test_two_level_forced_element(self):
        w1, w2, v = 0.3, 1.9, 0.8

        def f(l):
            K = np.diag([w1, w2]).astype(complex)
            K[0, 1] = l[0] * v
            return K

        A = agp_elements(OperatorFamily(2, 1, f), [0.0], 0)
        # element (m=1, n=2) in the basis ordered by eigenvalue
        assert abs(A.elements[0, 1] - v / (w2 - w1)) < 1e-9
        assert np.abs(np.diag(A.elements)).max() == 0.0

    def test_transport_equation_residual(self, rng):
        fam = random_family(rng, N=5, d=1)
        assert agp_residual(fam, [0.05], 0) <= 1e-8

    def test_degenerate_requires_regularization(self):
        fam = OperatorFamily(
            2, 1,
            lambda l: np.array([[1.0, l[0]], [l[0], 1.0]], dtype=complex),
        )
        with pytest.raises(DegenerateSpectrum):
            agp_elements(fam, [0.0], 0)
        A = agp_elements(fam, [0.0], 0, mu_reg=1e-6)
        assert np.all(np.isfinite(A.elements))


class TestEta:
    def test_hermitian_collapse(self, rng):
        fam = random_hermitian_family(rng, N=6)
        lam = np.array([0.04, -0.08])
        chi = chi_hermitian(fam, lam, 0).values
        assert maxdev(eta_tensor(fam, lam, 0).values, chi) <= 1e-9

    def test_ssh_closed_form_oracle(self):
        # direct evaluation from the closed-form eigenstates
        from nhgeo.ssh import SSHParams, bloch_family, ssh_eigenstates

        t, d, k = 0.7, 0.4, 1.3
        fam = bloch_family(SSHParams(t, d, 4), k)
        sysfam = eta_tensor(fam, [t, d], 0).values

        h = 1e-6

        def minus_branch(tt, dd):
            # canonical state 0 (ascending real part) is the -sqrt(eps) branch
            (_, rm), (_, lm) = ssh_eigenstates(SSHParams(tt, dd, 4), k)
            return rm, lm

        r0, l0 = minus_branch(t, d)
        dr, dl = [], []
        for dt, dd in ((h, 0.0), (0.0, h)):
            rp, lp = minus_branch(t + dt, d + dd)
            rm_, lm_ = minus_branch(t - dt, d - dd)
            dr.append((rp - rm_) / (2 * h))
            dl.append((lp - lm_) / (2 * h))
        ref = np.empty((2, 2), dtype=complex)
        for mu in range(2):
            for nu in range(2):
                ref[mu, nu] = dl[mu].conj() @ dr[nu] - (dl[mu].conj() @ r0) * (
                    l0.conj() @ dr[nu]
                )
        assert maxdev(sysfam, ref) < 1e-7


class TestZetaRoutes:
    def test_hermitian_collapse(self, rng):
        fam = random_hermitian_family(rng, N=8)
        lam = np.array([0.02, -0.05])
        chi = chi_hermitian(fam, lam, 0).values
        assert maxdev(zeta_tensor(fam, lam, 0).values, chi) <= 1e-9

    def test_routes_agree(self, nh6, rng):
        lam = rng.uniform(-0.1, 0.1, size=2)
        z_ov = zeta_tensor(nh6, lam, 1, route="overlap").values
        z_pr = zeta_tensor(nh6, lam, 1, route="projector").values
        z_ag = zeta_tensor(nh6, lam, 1, route="agp").values
        scale = np.abs(z_ov).max()
        assert maxdev(z_ov, z_pr) <= 1e-8 * scale
        assert maxdev(z_ov, z_ag) <= 1e-8 * scale

    def test_routes_agree_under_gauge(self, nh6, rng):
        lam = rng.uniform(-0.1, 0.1, size=2)
        gauge = random_gauge(rng, 6, lam)
        z_ov = zeta_tensor(nh6, lam, 1, route="overlap", gauge=gauge).values
        z_pr = zeta_tensor(nh6, lam, 1, route="projector", gauge=gauge).values
        assert maxdev(z_ov, z_pr) <= 1e-8 * np.abs(z_ov).max()

    def test_unknown_route_rejected(self, nh6):
        with pytest.raises(ValueError):
            zeta_tensor(nh6, [0.0, 0.0], 0, route="nope")

    def test_sum_rule_generator_norm(self, rng):
        from nhgeo.biortho import build_biortho

        fam = random_family(rng, N=5, d=1)
        lam = np.array([0.07])
        total = sum(
            zeta_tensor(fam, lam, n, route="agp").values[0, 0] for n in range(5)
        )
        sys = build_biortho(fam(lam), warn_degenerate=False)
        A_op = agp_elements(fam, lam, 0, sys=sys).operator(sys)
        assert abs(total - np.linalg.norm(A_op) ** 2) <= 1e-8 * abs(total)
        assert total.real >= 0.0


class TestZetaLimited:
    def test_hermitian_collapse(self, rng):
        fam = random_hermitian_family(rng, N=6)
        lam = np.array([0.03, -0.01])
        chi = chi_hermitian(fam, lam, 0).values
        assert maxdev(zeta_limited(fam, lam, 0).values, chi) <= 1e-9

    def test_positive_semidefinite(self, nh6, rng):
        lam = rng.uniform(-0.1, 0.1, size=2)
        zt = zeta_limited(nh6, lam, 3)
        assert zt.hermiticity_defect() <= 1e-9 * max(1.0, np.abs(zt.values).max())
        assert zt.min_eigenvalue() >= -1e-10


class TestBerryConnection:
    def test_parameter_independent_zero(self):
        fam = OperatorFamily(3, 1, lambda l: np.diag([0.0, 1.0, 3.0]) + 0.4j * np.eye(3))
        assert abs(berry_connection(fam, [0.2], 1, 0)) < 1e-12

    def test_dual_expression(self, nh6, rng):
        from nhgeo.tensors import _stencil

        lam = rng.uniform(-0.1, 0.1, size=2)
        st = _stencil(nh6, lam, [2])
        for mu in range(2):
            direct = st.connection(mu, 2)
            dual = -(st.dleft(mu, 2).conj() @ st.sys0.right[:, 2])
            assert abs(direct - dual) <= 1e-8

    def test_gauge_shift(self, nh6):
        lam = np.array([0.1, -0.07])
        coeff = np.linspace(0.02, 0.12, 6) + 1j * np.linspace(-0.05, 0.05, 6)

        def gauge(l):
            return coeff * (l[0] - lam[0]) + 2.0 * coeff * (l[1] - lam[1])

        n = 2
        base = berry_connection(nh6, lam, n, 0)
        shifted = berry_connection(nh6, lam, n, 0, gauge=gauge)
        assert abs((shifted - base) - coeff[n]) <= 1e-8


class TestProjectorDeformation:
    def test_parameter_independent_zero(self):
        fam = OperatorFamily(3, 1, lambda l: np.diag([0.0, 1.0, 3.0]) + 0.2j * np.eye(3))
        assert projector_deformation(fam, [0.1], 0, 0) < 1e-12

    def test_hermitian_qubit_half(self, qubit):
        val = projector_deformation(qubit, [0.3], 0, 0)
        assert abs(val - 0.5) < 1e-6

    def test_matches_direct_fd(self, rng):
        fam = random_family(rng, N=5, d=1)
        lam = np.array([0.06])
        a = projector_deformation(fam, lam, 2, 0)
        b = projector_fd(fam, lam, 2, 0)
        assert abs(a - b) <= 1e-6 * max(1.0, abs(a))
        assert a >= 0.0

    def test_gauge_invariant(self, rng):
        fam = random_family(rng, N=5, d=2)
        lam = np.array([0.02, 0.09])
        gauge = random_gauge(rng, 5, lam)
        a = projector_deformation(fam, lam, 1, 0)
        b = projector_deformation(fam, lam, 1, 0, gauge=gauge)
        assert abs(a - b) <= 1e-8 * max(1.0, abs(a))


class TestContinuation:
    def test_scrambled_stencil_detected(self):
        # stencil eigenbasis equally mixes all center states: no overlap
        # reaches the matching threshold
        from nhgeo.biortho import build_biortho
        from nhgeo.tensors import _matched_system

        d = np.diag([1.0, 2.0, 3.0, 4.0, 5.0]).astype(complex)
        sys0 = build_biortho(d, warn_degenerate=False)
        F = np.fft.fft(np.eye(5)) / np.sqrt(5)
        sysp = build_biortho(F @ d @ F.conj().T, warn_degenerate=False)
        with pytest.raises(ContinuationAmbiguous):
            _matched_system(sys0, sysp, [0, 1, 2, 3, 4], None)

    def test_richardson_refinement_improves(self, qubit):
        coarse = chi_hermitian(qubit, [0.3], 0, h=1e-3)
        fine = chi_hermitian(qubit, [0.3], 0, h=1e-3, richardson=True)
        err_c = abs(coarse.values[0, 0] - 0.25)
        err_f = abs(fine.values[0, 0] - 0.25)
        assert err_f < err_c
