"""Quadratic fermionic Liouvillians in the Majorana representation.

A Hamiltonian ``H = w^T Hmat w`` (``Hmat`` antisymmetric, purely imaginary)
with linear jump operators ``L_k = l_k^T w`` closes on two structure
matrices

    X = 4i Hmat + 2 Re(M),      Y = -4i Im(M),      M = sum_k l_k l_k^+,

whose eigenvalues (rapidities) build the full relaxation spectrum.  The
steady-state Majorana correlation matrix ``Gamma`` (Hermitian, antisymmetric,
purely imaginary, eigenvalues in [-1, 1]) solves ``X Gamma + Gamma X^T = Y``.

The steady-state mixed geometric tensor is evaluated at the matrix level,

    zeta_{mu nu} = 1/2 Tr(d_mu Gamma d_nu Gamma) + Tr(Xcal^mu Gamma d_nu Gamma),

with ``Xcal^mu`` obtained spectrally from ``d_mu X``; normal-mode operators
are never materialized.  A translation-invariant variant works per momentum
block.  Gaussian-state closed forms (logarithmic derivative, Bures metric,
purity-weighted response) operate directly on ``Gamma`` and its derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    BadBath,
    BadHamiltonian,
    DegenerateRapidities,
    NonUniqueSteadyState,
    PureStateSingular,
    ShapeMismatch,
)
from .linalg import as_square, eig_general, solve_sylvester, solve_sylvester_pair
from .tensors import GeoTensor

_EPS_THIRD = float(np.finfo(float).eps) ** (1.0 / 3.0)


@dataclass(frozen=True)
class QuadraticLiouvillian:
    """Validated (Hmat, M) pair with the derived structure matrices X, Y."""

    n: int
    H_mat: np.ndarray
    M: np.ndarray
    X: np.ndarray
    Y: np.ndarray


@dataclass(frozen=True)
class MajoranaCorrelation:
    """Steady-state two-point matrix: Gamma_{ij} = <[w_i, w_j]> / 2."""

    Gamma: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        """Real occupancy eigenvalues (Gamma is Hermitian)."""
        return np.linalg.eigvalsh(self.Gamma)

    def physicality_defect(self) -> float:
        """How far the spectrum leaves [-1, 1]."""
        ev = self.eigenvalues()
        return float(max(0.0, ev.max() - 1.0, -1.0 - ev.min()))


@dataclass(frozen=True)
class AGPQuadratic:
    """Quadratic transport generator: real ``Xcal`` and imaginary antisymmetric ``Ycal``."""

    direction: int
    Xcal: np.ndarray
    Ycal: np.ndarray


def bath_matrix(bath_vectors: Sequence[np.ndarray], dim: int) -> np.ndarray:
    M = np.zeros((dim, dim), dtype=complex)
    for l in bath_vectors:
        l = np.asarray(l, dtype=complex)
        if l.shape != (dim,):
            raise ShapeMismatch(f"bath vector shape {l.shape}, expected ({dim},)")
        M += np.outer(l, l.conj())
    return M


def build_liouvillian(n: int, H_mat, bath_vectors=None, *, M=None) -> QuadraticLiouvillian:
    """Validate inputs and derive X, Y.

    Either a list of bath vectors ``l_k`` or the bath matrix ``M`` directly
    may be given (only ``Re M`` and ``Im M`` enter X and Y).
    """
    dim = 2 * n
    H_mat = as_square(H_mat, "H_mat")
    if H_mat.shape[0] != dim:
        raise ShapeMismatch(f"H_mat must be {dim}x{dim}")
    if np.abs(H_mat + H_mat.T).max() > 1e-12 * max(1.0, np.abs(H_mat).max()):
        raise BadHamiltonian("H_mat must be antisymmetric")
    if np.abs(H_mat - H_mat.conj().T).max() > 1e-12 * max(1.0, np.abs(H_mat).max()):
        raise BadHamiltonian("H_mat must be Hermitian (purely imaginary entries)")
    if (bath_vectors is None) == (M is None):
        raise ValueError("pass exactly one of bath_vectors or M")
    if M is None:
        M = bath_matrix(bath_vectors, dim)
    else:
        M = as_square(M, "M")
        if M.shape[0] != dim:
            raise ShapeMismatch(f"M must be {dim}x{dim}")
    scale = max(1.0, np.abs(M).max())
    if np.abs(M - M.conj().T).max() > 1e-10 * scale:
        raise BadBath("bath matrix must be Hermitian")
    if np.linalg.eigvalsh((M + M.conj().T) / 2).min() < -1e-10 * scale:
        raise BadBath("bath matrix must be positive semidefinite")
    X = 4j * H_mat + 2 * M.real
    Y = -4j * M.imag
    return QuadraticLiouvillian(n, H_mat, M, X, Y)


def rapidities(liou: QuadraticLiouvillian):
    """Eigenvalues of X (canonical order) and the diagonalizing transform U."""
    dec = eig_general(liou.X)
    return dec.eigenvalues, dec.right_vectors


def steady_state_gamma(liou: QuadraticLiouvillian) -> MajoranaCorrelation:
    """Unique steady-state correlation matrix from the Sylvester equation.

    Raises
    ------
    NonUniqueSteadyState
        If min Re(x_j) is not strictly positive (kernel not one-dimensional).
    """
    x, _ = rapidities(liou)
    tol = 1e-12 * max(1.0, np.linalg.norm(liou.X, 2))
    if x.real.min() <= tol:
        raise NonUniqueSteadyState(
            f"min Re(rapidity) = {x.real.min():.3e}: steady state not unique"
        )
    return MajoranaCorrelation(solve_sylvester(liou.X, liou.Y))


# ---------------------------------------------------------------------------
# parameterized families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiouvillianFamily:
    """lambda -> QuadraticLiouvillian, with optional analytic dX/dY.

    ``deriv_func(mu, lam)`` must return ``(dX, dY)``; when absent both are
    obtained by central differences of the (entrywise smooth) X(lam), Y(lam).
    """

    n: int
    num_params: int
    func: Callable[[np.ndarray], QuadraticLiouvillian]
    deriv_func: Optional[Callable[[int, np.ndarray], tuple]] = None
    name: str = ""

    def __call__(self, lam) -> QuadraticLiouvillian:
        return self.func(self._lam(lam))

    def _lam(self, lam) -> np.ndarray:
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if lam.shape != (self.num_params,):
            raise ShapeMismatch(f"expected {self.num_params} parameters")
        return lam

    def dxy(self, mu: int, lam):
        lam = self._lam(lam)
        if self.deriv_func is not None:
            return self.deriv_func(mu, lam)
        h = _EPS_THIRD * max(1.0, abs(lam[mu]))
        e = np.zeros(self.num_params)
        e[mu] = h
        lp, lm = self(lam + e), self(lam - e)
        return (lp.X - lm.X) / (2 * h), (lp.Y - lm.Y) / (2 * h)


def _offdiag_generator(x, U, dX, *, gap_rtol=1e-8):
    """Off-diagonal part of (dU^-1) U from the spectral formula.

    Entry (i, j) is ``-(U^-1 dX U)_{ij} / (x_j - x_i)``.  Degenerate pairs
    are tolerated when the coupling element vanishes (symmetry-decoupled
    sectors); a coupled degenerate pair raises.
    """
    Ui = np.linalg.inv(U)
    num = Ui @ dX @ U
    gaps = x[None, :] - x[:, None]
    scale = max(np.abs(x).max(), 1.0)
    cscale = max(np.abs(num).max(), 1.0)
    A = np.zeros_like(num)
    m = len(x)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if abs(gaps[i, j]) < gap_rtol * scale:
                if abs(num[i, j]) > gap_rtol * cscale:
                    raise DegenerateRapidities(
                        f"rapidities {i},{j} degenerate with coupling "
                        f"{abs(num[i, j]):.3e}"
                    )
                continue
            A[i, j] = -num[i, j] / gaps[i, j]
    return A


def steady_state_dgamma(liou: QuadraticLiouvillian, Gamma: np.ndarray, dX, dY) -> np.ndarray:
    """Derivative of the steady-state correlation matrix.

    Differentiates the defining relation analytically:
    ``X dGamma + dGamma X^T = dY - dX Gamma - Gamma dX^T``.  This avoids
    finite differences of Gamma, which lose accuracy near critical regions;
    a finite-difference fallback remains available through the family object
    for validation.
    """
    rhs = dY - dX @ Gamma - Gamma @ dX.T
    return solve_sylvester(liou.X, rhs)


def agp_quadratic(fam: LiouvillianFamily, lam, mu_dir: int) -> AGPQuadratic:
    """Quadratic-form transport generator (Xcal, Ycal) along one direction."""
    lam = fam._lam(lam)
    liou = fam(lam)
    x, U = rapidities(liou)
    dX, dY = fam.dxy(mu_dir, lam)
    A = _offdiag_generator(x, U, dX)
    Xcal = U @ A @ np.linalg.inv(U)
    Gamma = steady_state_gamma(liou).Gamma
    dG = steady_state_dgamma(liou, Gamma, dX, dY)
    Ycal = dG + Xcal @ Gamma + Gamma @ Xcal.T
    return AGPQuadratic(mu_dir, Xcal, Ycal)


def zeta_ness(fam: LiouvillianFamily, lam) -> GeoTensor:
    """Steady-state mixed tensor over all parameter directions."""
    lam = fam._lam(lam)
    liou = fam(lam)
    x, U = rapidities(liou)
    tol = 1e-12 * max(1.0, np.linalg.norm(liou.X, 2))
    if x.real.min() <= tol:
        raise NonUniqueSteadyState("steady state not unique in this neighborhood")
    Gamma = solve_sylvester(liou.X, liou.Y)
    d = fam.num_params
    dG, Xcal = [], []
    for mu in range(d):
        dX, dY = fam.dxy(mu, lam)
        dG.append(steady_state_dgamma(liou, Gamma, dX, dY))
        Xcal.append(U @ _offdiag_generator(x, U, dX) @ np.linalg.inv(U))
    vals = np.empty((d, d), dtype=complex)
    for mu in range(d):
        for nu in range(d):
            vals[mu, nu] = 0.5 * np.trace(dG[mu] @ dG[nu]) + np.trace(
                Xcal[mu] @ Gamma @ dG[nu]
            )
    return GeoTensor("zeta", "ness", vals, lam, {"n": fam.n})


# ---------------------------------------------------------------------------
# translation-invariant (momentum block) variant
# ---------------------------------------------------------------------------

class TranslationInvariantModel:
    """Two-band translation-invariant model defined by momentum blocks.

    Subclasses / instances provide ``h_block(k, lam)`` and ``m_block(k, lam)``
    (2x2) plus optional analytic derivatives ``dh_block`` and ``dm_block``.
    """

    num_params = 0
    bands = 2

    def h_block(self, k: float, lam) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def m_block(self, k: float, lam) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def dh_block(self, mu: int, k: float, lam):
        return None

    def dm_block(self, mu: int, k: float, lam):
        return None

    # -- derived quantities ------------------------------------------------

    def x_block(self, k: float, lam) -> np.ndarray:
        return 4j * self.h_block(k, lam) + self.m_block(k, lam) + self.m_block(-k, lam).T

    def y_block(self, k: float, lam) -> np.ndarray:
        return -2.0 * (self.m_block(k, lam) - self.m_block(-k, lam).T)

    def dx_block(self, mu: int, k: float, lam) -> np.ndarray:
        dh = self.dh_block(mu, k, lam)
        dm = self.dm_block(mu, k, lam)
        dmT = self.dm_block(mu, -k, lam)
        if dh is None or dm is None or dmT is None:
            return _fd_block(lambda l: self.x_block(k, l), mu, lam)
        return 4j * dh + dm + dmT.T

    def dy_block(self, mu: int, k: float, lam) -> np.ndarray:
        dm = self.dm_block(mu, k, lam)
        dmT = self.dm_block(mu, -k, lam)
        if dm is None or dmT is None:
            return _fd_block(lambda l: self.y_block(k, l), mu, lam)
        return -2.0 * (dm - dmT.T)


def _fd_block(f, mu, lam):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    h = _EPS_THIRD * max(1.0, abs(lam[mu]))
    e = np.zeros(lam.shape)
    e[mu] = h
    return (f(lam + e) - f(lam - e)) / (2 * h)


def kspace_blocks(model: TranslationInvariantModel, k: float, lam):
    """(x(k), y(k)) momentum blocks."""
    return model.x_block(k, lam), model.y_block(k, lam)


def gamma_k(model: TranslationInvariantModel, k: float, lam) -> np.ndarray:
    """Momentum-block correlation: solves x(k) g + g x(-k)^T = y(k)."""
    x = model.x_block(k, lam)
    xmT = model.x_block(-k, lam).T
    return solve_sylvester_pair(x, xmT, model.y_block(k, lam))


def _dgamma_k(model, k, lam, mu, gk):
    dx = model.dx_block(mu, k, lam)
    dxmT = model.dx_block(mu, -k, lam).T
    dy = model.dy_block(mu, k, lam)
    rhs = dy - dx @ gk - gk @ dxmT
    return solve_sylvester_pair(
        model.x_block(k, lam), model.x_block(-k, lam).T, rhs
    )


def zeta_ness_k(model: TranslationInvariantModel, lam, L: int) -> GeoTensor:
    """Steady-state tensor as a Brillouin-zone sum of per-block traces."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    d = model.num_params
    vals = np.zeros((d, d), dtype=complex)
    for m in range(L):
        k = 2.0 * np.pi * m / L
        x = model.x_block(k, lam)
        dec = eig_general(x)
        xe, U = dec.eigenvalues, dec.right_vectors
        gk = gamma_k(model, k, lam)
        dgs, xcals = [], []
        for mu in range(d):
            dgs.append(_dgamma_k(model, k, lam, mu, gk))
            A = _offdiag_generator(xe, U, model.dx_block(mu, k, lam))
            xcals.append(U @ A @ np.linalg.inv(U))
        for mu in range(d):
            for nu in range(d):
                vals[mu, nu] += 0.5 * np.trace(dgs[mu] @ dgs[nu]) + np.trace(
                    xcals[mu] @ gk @ dgs[nu]
                )
    return GeoTensor("zeta", "ness", vals, lam, {"L": L, "route": "kspace"})


def assemble_real_space(model: TranslationInvariantModel, lam, L: int) -> QuadraticLiouvillian:
    """Build the length-L real-space Liouvillian from the momentum blocks.

    Blocks are Fourier-assembled site-major:
    ``A[(j, a), (r, b)] = (1/L) sum_k e^{i k (j - r)} block(k)_{ab}``.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    b = model.bands
    dim = b * L
    H = np.zeros((dim, dim), dtype=complex)
    M = np.zeros((dim, dim), dtype=complex)
    ks = 2.0 * np.pi * np.arange(L) / L
    hks = [model.h_block(k, lam) for k in ks]
    mks = [model.m_block(k, lam) for k in ks]
    for j in range(L):
        for r in range(L):
            ph = np.exp(1j * ks * (j - r))
            hjr = sum(p * blk for p, blk in zip(ph, hks)) / L
            mjr = sum(p * blk for p, blk in zip(ph, mks)) / L
            H[b * j : b * j + b, b * r : b * r + b] = hjr
            M[b * j : b * j + b, b * r : b * r + b] = mjr
    # project out Fourier round-off so validation sees clean structure
    H = (H - H.T) / 2
    H = (H + H.conj().T) / 2
    M = (M + M.conj().T) / 2
    return build_liouvillian(dim // 2, H, M=M)


def real_space_family(model: TranslationInvariantModel, L: int) -> LiouvillianFamily:
    """Real-space LiouvillianFamily wrapping :func:`assemble_real_space`."""
    return LiouvillianFamily(
        n=model.bands * L // 2,
        num_params=model.num_params,
        func=lambda lam: assemble_real_space(model, lam, L),
        name="real-space",
    )


# ---------------------------------------------------------------------------
# Gaussian-state closed forms
# ---------------------------------------------------------------------------

def _gamma_eigenbasis(Gamma):
    Gamma = as_square(Gamma, "Gamma")
    herm_defect = np.abs(Gamma - Gamma.conj().T).max()
    if herm_defect > 1e-8 * max(1.0, np.abs(Gamma).max()):
        raise ShapeMismatch("Gamma must be Hermitian (imaginary antisymmetric)")
    g, V = np.linalg.eigh(Gamma)
    return g, V


def log_derivative(Gamma, dGamma) -> np.ndarray:
    """Kernel K of the Gaussian logarithmic derivative: Gamma K Gamma - K = dGamma.

    Solved elementwise in the eigenbasis of Gamma:
    ``K_{jk} = (dGamma)_{jk} / (g_j g_k - 1)``.

    Raises
    ------
    PureStateSingular
        If some eigenvalue product g_j g_k reaches 1 (pure-state direction).
    """
    g, V = _gamma_eigenbasis(Gamma)
    den = g[:, None] * g[None, :] - 1.0
    if np.abs(den).min() < 1e-10:
        raise PureStateSingular("correlation spectrum touches a pure-state direction")
    dG = V.conj().T @ np.asarray(dGamma, dtype=complex) @ V
    return V @ (dG / den) @ V.conj().T


def bures_metric(Gamma, dGamma_mu, dGamma_nu) -> float:
    """Bures metric component of a Gaussian state from correlation data.

    ``(1/8) sum_{jk} (dG_mu)_{jk} (dG_nu)_{kj} / (1 - g_j g_k)`` in the
    eigenbasis of Gamma.
    """
    g, V = _gamma_eigenbasis(Gamma)
    den = 1.0 - g[:, None] * g[None, :]
    if np.abs(den).min() < 1e-10:
        raise PureStateSingular("correlation spectrum touches a pure-state direction")
    dGm = V.conj().T @ np.asarray(dGamma_mu, dtype=complex) @ V
    dGn = V.conj().T @ np.asarray(dGamma_nu, dtype=complex) @ V
    return float((0.125 * np.sum(dGm * dGn.T / den)).real)


def zeta_tilde_gaussian(Gamma, dGamma_mu, dGamma_nu) -> float:
    """Purity-weighted response form
    ``(1/2) sum_{jk} (dG_mu)_{jk} (dG_nu)_{kj} / ((1+g_j^2)(1+g_k^2))``.

    Equivalently ``(1/2) Tr[(1+Gamma^2)^-1 dG_mu (1+Gamma^2)^-1 dG_nu]``.
    This is the printed closed form; see :func:`zeta_tilde_ness_from_gamma`
    for the variant that reproduces ``2^n Tr(d_mu rho d_nu rho)`` exactly.
    """
    g, V = _gamma_eigenbasis(Gamma)
    den = (1.0 + g[:, None] ** 2) * (1.0 + g[None, :] ** 2)
    dGm = V.conj().T @ np.asarray(dGamma_mu, dtype=complex) @ V
    dGn = V.conj().T @ np.asarray(dGamma_nu, dtype=complex) @ V
    return float((0.5 * np.sum(dGm * dGn.T / den)).real)


def zeta_tilde_ness_from_gamma(Gamma, dGamma_mu, dGamma_nu) -> float:
    """Exact correlation-matrix form of ``2^n Tr(d_mu rho d_nu rho)``.

    Derived from the Gaussian overlap ``Tr(rho_1 rho_2) = 2^-n
    sqrt(det(1 + Gamma_1 Gamma_2))`` by differentiating both arguments:

    ``S [ 1/2 Tr(P dGm dGn) - 1/2 Tr(P G dGn P dGm G)
          + 1/4 Tr(P G dGm) Tr(P G dGn) ]``

    with ``P = (1 + Gamma^2)^-1`` and ``S = sqrt(det(1 + Gamma^2))``
    (= ``2^n Tr(rho^2)``, the inverse participation weight).
    """
    G = as_square(Gamma, "Gamma")
    dGm = np.asarray(dGamma_mu, dtype=complex)
    dGn = np.asarray(dGamma_nu, dtype=complex)
    eye = np.eye(G.shape[0])
    P = np.linalg.inv(eye + G @ G)
    S = np.sqrt(np.linalg.det(eye + G @ G).real)
    t1 = 0.5 * np.trace(P @ dGm @ dGn)
    t2 = -0.5 * np.trace(P @ G @ dGn @ P @ dGm @ G)
    t3 = 0.25 * np.trace(P @ G @ dGm) * np.trace(P @ G @ dGn)
    return float((S * (t1 + t2 + t3)).real)
