"""Geometric tensors of parameterized (non-Hermitian) operator families.

Everything here is built on one primitive: differentiating the biorthogonal
eigensystem of ``K(lambda)`` along parameter directions.  Eigenvectors at
stencil points carry an arbitrary solver gauge, so each stencil system is

1. matched state-by-state to the center point by largest left-right overlap,
2. phase-fixed so the overlap with the center left vector is real positive
   (a smooth reference gauge that passes exactly through the center), and
3. optionally rescaled by a user-supplied gauge function, applied relative
   to the center so its derivative survives into the connection.

The tensors themselves are algebraically gauge invariant; the optional gauge
hook exists so that invariance is a testable property rather than an
assumption.

Tensor kinds
------------
``chi``
    Hermitian reference tensor (Fubini-Study metric + curvature), computed
    through an independent Hermitian eigensolver path.
``eta``
    Left-right generalization; vanishes identically on Liouvillian steady
    states because their left eigenvector is the identity.
``zeta``
    The gauge-invariant mixed tensor, available through three routes that
    must agree: ``projector`` (Gram-weighted projector counterterms),
    ``agp`` (matrix elements of the adiabatic transport generator), and
    ``overlap`` (Gram-weighted covariant-derivative overlaps; default).
``zeta_limited`` / ``zeta_limited_rescaled``
    The single-state Hermitian positive-semidefinite member of the overlap
    sum, optionally divided by <n_L|n_L><n_R|n_R>.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .biortho import BiorthogonalSystem, build_biortho
from .errors import (
    ContinuationAmbiguous,
    DegenerateSpectrum,
    NotHermitian,
    ShapeMismatch,
)
from .linalg import as_square

_EPS_THIRD = float(np.finfo(float).eps) ** (1.0 / 3.0)

#: smallest acceptable matching overlap |<n_L(0)|m_R(lam')>| across a stencil
MATCH_THRESHOLD = 0.5

GaugeFunc = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OperatorFamily:
    """A parameter-dependent complex square matrix ``K(lambda)``.

    Parameters
    ----------
    dim : matrix dimension N
    num_params : number of real parameters d
    func : lambda-vector -> (N, N) complex ndarray
    deriv_func : optional; (direction, lambda-vector) -> (N, N) ndarray.
        When absent, derivatives fall back to central differences of ``func``.
    """

    dim: int
    num_params: int
    func: Callable[[np.ndarray], np.ndarray]
    deriv_func: Optional[Callable[[int, np.ndarray], np.ndarray]] = None
    name: str = ""

    def __call__(self, lam) -> np.ndarray:
        lam = self._lam(lam)
        K = as_square(self.func(lam), f"{self.name or 'family'}(lambda)")
        if K.shape[0] != self.dim:
            raise ShapeMismatch(f"family returned dim {K.shape[0]}, declared {self.dim}")
        return K

    def _lam(self, lam) -> np.ndarray:
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if lam.shape != (self.num_params,):
            raise ShapeMismatch(
                f"expected {self.num_params} parameters, got shape {lam.shape}"
            )
        return lam

    def fd_step(self, mu: int, lam) -> float:
        lam = self._lam(lam)
        return _EPS_THIRD * max(1.0, abs(lam[mu]))

    def derivative(self, mu: int, lam, step: float | None = None) -> np.ndarray:
        """d K / d lambda_mu, analytic when available, else central difference."""
        lam = self._lam(lam)
        if self.deriv_func is not None:
            return as_square(self.deriv_func(mu, lam), "dK")
        h = step if step is not None else self.fd_step(mu, lam)
        e = np.zeros(self.num_params)
        e[mu] = h
        return (self(lam + e) - self(lam - e)) / (2 * h)

    def derivative_consistency(self, lam) -> float:
        """Max relative deviation between analytic and finite-difference derivatives."""
        if self.deriv_func is None:
            return 0.0
        worst = 0.0
        lam = self._lam(lam)
        for mu in range(self.num_params):
            ana = self.derivative(mu, lam)
            h = self.fd_step(mu, lam)
            e = np.zeros(self.num_params)
            e[mu] = h
            fd = (self(lam + e) - self(lam - e)) / (2 * h)
            scale = max(np.linalg.norm(ana), 1e-300)
            worst = max(worst, float(np.linalg.norm(ana - fd) / scale))
        return worst


@dataclass
class GeoTensor:
    """A d x d tensor over parameter directions with provenance metadata."""

    kind: str
    state_index: object  # int eigenstate index or "ness"
    values: np.ndarray
    lam: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def fubini_study(self) -> np.ndarray:
        """Real part (metric)."""
        return self.values.real

    @property
    def berry_curvature(self) -> np.ndarray:
        """-1/2 of the imaginary part (antisymmetric curvature)."""
        return -0.5 * self.values.imag

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.values - self.values.conj().T).max())

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitized tensor (PSD check)."""
        H = (self.values + self.values.conj().T) / 2
        return float(np.linalg.eigvalsh(H).min())


@dataclass(frozen=True)
class AGPMatrix:
    """Transport-generator matrix elements in the instantaneous biorthogonal basis.

    ``elements[m, n]`` is ``<m_L|A|n_R>``; the diagonal is gauge-fixed to zero.
    """

    direction: int
    elements: np.ndarray
    mu_reg: float

    def operator(self, sys: BiorthogonalSystem) -> np.ndarray:
        """Dense operator ``sum_{mn} elements[m,n] |m_R><n_L|``."""
        return sys.right @ self.elements @ sys.left.conj().T


# ---------------------------------------------------------------------------
# stencil machinery
# ---------------------------------------------------------------------------

class _Stencil:
    """Center eigensystem plus matched derivative columns for selected states."""

    def __init__(self, sys0, needed, dR, dL, dlam, conn):
        self.sys0 = sys0
        self.needed = list(needed)
        self._pos = {n: i for i, n in enumerate(self.needed)}
        self.dR = dR          # (d, N, K)
        self.dL = dL          # (d, N, K)
        self.dlam = dlam      # (d, K) eigenvalue derivatives
        self.conn = conn      # (d, K) connections <n_L|d_mu n_R>

    def dright(self, mu, n):
        return self.dR[mu][:, self._pos[n]]

    def dleft(self, mu, n):
        return self.dL[mu][:, self._pos[n]]

    def connection(self, mu, n):
        return self.conn[mu, self._pos[n]]

    def cov_right(self, mu, n):
        """|D_mu n_R> = |d_mu n_R> - A_mu^(n) |n_R>."""
        return self.dright(mu, n) - self.connection(mu, n) * self.sys0.right[:, n]

    def cov_left(self, mu, n):
        """|D_mu n_L> as a ket: |d_mu n_L> + conj(A_mu^(n)) |n_L>."""
        return self.dleft(mu, n) + np.conj(self.connection(mu, n)) * self.sys0.left[:, n]


def _matched_system(sys0, sysp, needed, gauge_delta):
    """Match stencil system ``sysp`` to center ``sys0`` for the given states.

    Returns (right columns, left columns, eigenvalues) ordered as ``needed``,
    phase-fixed against the center left vectors and rescaled by
    ``exp(gauge_delta[n])`` when a gauge offset is supplied.
    """
    N = sys0.dim
    ov = np.abs(sys0.left.conj().T @ sysp.right)  # stencil right columns are unit norm
    K = len(needed)
    rcols = np.empty((N, K), dtype=complex)
    lcols = np.empty((N, K), dtype=complex)
    evals = np.empty(K, dtype=complex)
    taken: dict[int, int] = {}
    for i, n in enumerate(needed):
        m = int(np.argmax(ov[n]))
        if ov[n, m] < MATCH_THRESHOLD:
            raise ContinuationAmbiguous(
                f"state {n}: best stencil overlap {ov[n, m]:.3f} below "
                f"{MATCH_THRESHOLD} (crossing inside stencil?)"
            )
        if m in taken:
            raise ContinuationAmbiguous(
                f"states {taken[m]} and {n} both match stencil state {m}"
            )
        taken[m] = n
        o = sys0.left[:, n].conj() @ sysp.right[:, m]
        g = abs(o) / o
        rc = sysp.right[:, m] * g
        lc = sysp.left[:, m] * g
        if gauge_delta is not None:
            f = np.exp(gauge_delta[i])
            rc = rc * f
            lc = lc * np.conj(1.0 / f)
        rcols[:, i] = rc
        lcols[:, i] = lc
        evals[i] = sysp.eigenvalues[m]
    return rcols, lcols, evals


def _stencil(
    fam: OperatorFamily,
    lam,
    needed: Sequence[int],
    *,
    h: float | None = None,
    gauge: GaugeFunc | None = None,
    richardson: bool = False,
    sys0: BiorthogonalSystem | None = None,
) -> _Stencil:
    lam = fam._lam(lam)
    if sys0 is None:
        sys0 = build_biortho(fam(lam), warn_degenerate=False)
    needed = sorted(set(int(n) for n in needed))
    if needed and (needed[0] < 0 or needed[-1] >= sys0.dim):
        raise ShapeMismatch(f"state indices {needed} out of range for dim {sys0.dim}")
    d = fam.num_params
    N, K = sys0.dim, len(needed)
    dR = np.empty((d, N, K), dtype=complex)
    dL = np.empty((d, N, K), dtype=complex)
    dlam = np.empty((d, K), dtype=complex)
    g0 = np.asarray(gauge(lam), dtype=complex) if gauge is not None else None

    def columns_at(lamp):
        sysp = build_biortho(fam(lamp), warn_degenerate=False)
        gdvec = None
        if gauge is not None:
            gdvec = (np.asarray(gauge(lamp), dtype=complex) - g0)[needed]
        return _matched_system(sys0, sysp, needed, gdvec)

    for mu in range(d):
        hmu = h if h is not None else fam.fd_step(mu, lam)
        e = np.zeros(d)
        e[mu] = hmu
        rp, lp, wp = columns_at(lam + e)
        rm, lm, wm = columns_at(lam - e)
        dr = (rp - rm) / (2 * hmu)
        dl = (lp - lm) / (2 * hmu)
        dw = (wp - wm) / (2 * hmu)
        if richardson:
            rp2, lp2, wp2 = columns_at(lam + e / 2)
            rm2, lm2, wm2 = columns_at(lam - e / 2)
            dr = (4 * (rp2 - rm2) / hmu - dr) / 3
            dl = (4 * (lp2 - lm2) / hmu - dl) / 3
            dw = (4 * (wp2 - wm2) / hmu - dw) / 3
        dR[mu], dL[mu], dlam[mu] = dr, dl, dw

    conn = np.empty((d, K), dtype=complex)
    for i, n in enumerate(needed):
        for mu in range(d):
            conn[mu, i] = sys0.left[:, n].conj() @ dR[mu][:, i]
    return _Stencil(sys0, needed, dR, dL, dlam, conn)


# ---------------------------------------------------------------------------
# transport-generator matrix elements
# ---------------------------------------------------------------------------

def agp_elements(
    fam: OperatorFamily,
    lam,
    mu_dir: int,
    mu_reg: float = 0.0,
    *,
    sys: BiorthogonalSystem | None = None,
) -> AGPMatrix:
    """Off-diagonal transport-generator elements in the biorthogonal basis.

    With a spectral gap, element (m, n) is ``<m_L|dK|n_R> / (w_n - w_m)``.
    A positive ``mu_reg`` switches to the regularized kernel
    ``conj(w_n - w_m) / (|w_n - w_m|^2 + mu_reg^2)`` which stays finite
    through degeneracies.

    Raises
    ------
    DegenerateSpectrum
        If ``mu_reg == 0`` and some eigenvalue gap is below ``1e-10 * ||K||``.
    """
    lam = fam._lam(lam)
    if mu_reg < 0:
        raise ValueError("mu_reg must be >= 0")
    K = fam(lam)
    if sys is None:
        sys = build_biortho(K, warn_degenerate=False)
    dK = fam.derivative(mu_dir, lam)
    num = sys.left.conj().T @ dK @ sys.right
    w = sys.eigenvalues
    diff = w[None, :] - w[:, None]  # (m, n) -> w_n - w_m
    scale = max(np.linalg.norm(K, 2), 1.0)
    if mu_reg == 0.0:
        off = ~np.eye(len(w), dtype=bool)
        if np.abs(diff[off]).min() < 1e-10 * scale:
            raise DegenerateSpectrum(
                "spectrum degenerate within 1e-10*||K||; pass mu_reg > 0"
            )
        elements = num / np.where(off, diff, 1.0)
    else:
        elements = np.conj(diff) * num / (np.abs(diff) ** 2 + mu_reg ** 2)
    np.fill_diagonal(elements, 0.0)
    return AGPMatrix(mu_dir, elements, mu_reg)


# ---------------------------------------------------------------------------
# Hermitian reference tensor
# ---------------------------------------------------------------------------

def chi_hermitian(
    fam: OperatorFamily,
    lam,
    n: int,
    *,
    h: float | None = None,
    richardson: bool = False,
) -> GeoTensor:
    """Geometric tensor of eigenstate ``n`` of a Hermitian family.

    Computed through an independent Hermitian eigensolver path (not the
    biorthogonal machinery), so it can serve as the reference in Hermitian
    collapse checks.  Real part is the Fubini-Study metric; the curvature is
    ``-1/2`` of the imaginary part (``GeoTensor.berry_curvature``).
    """
    lam = fam._lam(lam)
    K = fam(lam)
    scale = max(np.linalg.norm(K, 2), 1.0)
    if np.abs(K - K.conj().T).max() > 1e-12 * scale:
        raise NotHermitian("family is not Hermitian at this parameter point")
    d = fam.num_params
    w0, V0 = np.linalg.eigh(K)

    def matched(lamp):
        Kp = fam(lamp)
        if np.abs(Kp - Kp.conj().T).max() > 1e-12 * scale:
            raise NotHermitian("family leaves the Hermitian domain inside the stencil")
        _, V = np.linalg.eigh(Kp)
        ov = np.abs(V0.conj().T @ V)
        cols = np.empty_like(V0)
        taken = set()
        for j in range(V0.shape[1]):
            m = int(np.argmax(ov[j]))
            if ov[j, m] < MATCH_THRESHOLD or m in taken:
                raise ContinuationAmbiguous(f"state {j} match ambiguous in chi stencil")
            taken.add(m)
            o = V0[:, j].conj() @ V[:, m]
            cols[:, j] = V[:, m] * (abs(o) / o)
        return cols

    dV = []
    for mu in range(d):
        hmu = h if h is not None else fam.fd_step(mu, lam)
        e = np.zeros(d)
        e[mu] = hmu
        dv = (matched(lam + e) - matched(lam - e)) / (2 * hmu)
        if richardson:
            dv = (4 * (matched(lam + e / 2) - matched(lam - e / 2)) / hmu - dv) / 3
        dV.append(dv)

    v = V0[:, n]
    vals = np.empty((d, d), dtype=complex)
    for mu in range(d):
        for nu in range(d):
            vals[mu, nu] = dV[mu][:, n].conj() @ dV[nu][:, n] - (
                dV[mu][:, n].conj() @ v
            ) * (v.conj() @ dV[nu][:, n])
    return GeoTensor("chi", n, vals, lam, {"fd_step": h, "richardson": richardson})


# ---------------------------------------------------------------------------
# non-Hermitian tensors
# ---------------------------------------------------------------------------

def eta_tensor(
    fam: OperatorFamily,
    lam,
    n: int,
    *,
    h: float | None = None,
    gauge: GaugeFunc | None = None,
    richardson: bool = False,
) -> GeoTensor:
    """Left-right tensor <d_mu n_L|d_nu n_R> - <d_mu n_L|n_R><n_L|d_nu n_R>."""
    lam = fam._lam(lam)
    st = _stencil(fam, lam, [n], h=h, gauge=gauge, richardson=richardson)
    d = fam.num_params
    rn = st.sys0.right[:, n]
    ln = st.sys0.left[:, n]
    vals = np.empty((d, d), dtype=complex)
    for mu in range(d):
        dLmu = st.dleft(mu, n)
        for nu in range(d):
            dRnu = st.dright(nu, n)
            vals[mu, nu] = dLmu.conj() @ dRnu - (dLmu.conj() @ rn) * (ln.conj() @ dRnu)
    return GeoTensor("eta", n, vals, lam, {"fd_step": h, "richardson": richardson})


def zeta_tensor(
    fam: OperatorFamily,
    lam,
    n: int,
    *,
    route: str = "overlap",
    mu_reg: float = 0.0,
    h: float | None = None,
    gauge: GaugeFunc | None = None,
    richardson: bool = False,
) -> GeoTensor:
    """Gauge-invariant mixed tensor for eigenstate ``n``.

    ``route='overlap'`` (default) sums Gram-weighted covariant-derivative
    overlaps; ``route='projector'`` evaluates the explicit counterterm form;
    ``route='agp'`` contracts transport-generator matrix elements and needs
    no stencil (``mu_reg`` applies only there).  All routes agree on
    nondegenerate input.
    """
    lam = fam._lam(lam)
    d = fam.num_params
    vals = np.empty((d, d), dtype=complex)

    if route == "agp":
        sys0 = build_biortho(fam(lam), warn_degenerate=False)
        mats = [
            agp_elements(fam, lam, mu, mu_reg, sys=sys0).elements for mu in range(d)
        ]
        C = sys0.gram_right
        Cinv = sys0.gram_left
        for mu in range(d):
            for nu in range(d):
                vals[mu, nu] = Cinv[:, n].conj() @ mats[mu].conj().T @ C @ mats[nu][:, n]
        meta = {"route": route, "mu_reg": mu_reg}
        return GeoTensor("zeta", n, vals, lam, meta)

    st = _stencil(
        fam, lam, range(fam.dim), h=h, gauge=gauge, richardson=richardson
    )
    sys0 = st.sys0
    N = sys0.dim
    Cinv = sys0.gram_left

    if route == "overlap":
        for nu in range(d):
            Dn = st.cov_right(nu, n)
            for mu in range(d):
                acc = 0.0 + 0.0j
                for m in range(N):
                    acc += Cinv[n, m] * (st.cov_right(mu, m).conj() @ Dn)
                vals[mu, nu] = acc
    elif route == "projector":
        C = sys0.gram_right
        rn = sys0.right[:, n]
        ln = sys0.left[:, n]
        for nu in range(d):
            dn = st.dright(nu, n)
            ln_dn = ln.conj() @ dn
            for mu in range(d):
                acc = 0.0 + 0.0j
                for m in range(N):
                    dm = st.dright(mu, m)
                    lm = sys0.left[:, m]
                    rm = sys0.right[:, m]
                    term = dm.conj() @ dn
                    term -= (dm.conj() @ lm) * (rm.conj() @ dn)
                    term -= (dm.conj() @ rn) * ln_dn
                    term += C[m, n] * (dm.conj() @ lm) * ln_dn
                    acc += Cinv[n, m] * term
                vals[mu, nu] = acc
    else:
        raise ValueError(f"unknown route {route!r}")
    meta = {"route": route, "fd_step": h, "richardson": richardson}
    return GeoTensor("zeta", n, vals, lam, meta)


def zeta_limited(
    fam: OperatorFamily,
    lam,
    n: int,
    *,
    rescaled: bool = False,
    h: float | None = None,
    gauge: GaugeFunc | None = None,
    richardson: bool = False,
) -> GeoTensor:
    """Single-state tensor <n_L|n_L><D_mu n_R|D_nu n_R> (Hermitian, PSD).

    With ``rescaled=True`` the result is divided by <n_L|n_L><n_R|n_R>.
    """
    lam = fam._lam(lam)
    st = _stencil(fam, lam, [n], h=h, gauge=gauge, richardson=richardson)
    d = fam.num_params
    ln = st.sys0.left[:, n]
    rn = st.sys0.right[:, n]
    lnln = (ln.conj() @ ln).real
    vals = np.empty((d, d), dtype=complex)
    for mu in range(d):
        Dmu = st.cov_right(mu, n)
        for nu in range(d):
            vals[mu, nu] = lnln * (Dmu.conj() @ st.cov_right(nu, n))
    kind = "zeta_limited"
    if rescaled:
        vals = vals / (lnln * (rn.conj() @ rn).real)
        kind = "zeta_limited_rescaled"
    return GeoTensor(kind, n, vals, lam, {"fd_step": h, "richardson": richardson})


def berry_connection(
    fam: OperatorFamily,
    lam,
    n: int,
    mu_dir: int,
    *,
    h: float | None = None,
    gauge: GaugeFunc | None = None,
) -> complex:
    """Connection ``A_mu = <n_L|d_mu n_R>`` for eigenstate ``n``."""
    st = _stencil(fam, lam, [n], h=h, gauge=gauge)
    return complex(st.connection(mu_dir, n))


def projector_deformation(
    fam: OperatorFamily,
    lam,
    n: int,
    mu_dir: int,
    *,
    h: float | None = None,
    gauge: GaugeFunc | None = None,
) -> float:
    """Relative deformation rate ``||d_mu P_n||^2 / ||P_n||^2`` of ``P_n = |n_R><n_L|``.

    Evaluated through the covariant four-term form; agrees with a direct
    finite difference of the (gauge-invariant) projector.
    """
    st = _stencil(fam, lam, [n], h=h, gauge=gauge)
    rn = st.sys0.right[:, n]
    ln = st.sys0.left[:, n]
    Dr = st.cov_right(mu_dir, n)
    Dl = st.cov_left(mu_dir, n)
    rr = (rn.conj() @ rn).real
    ll = (ln.conj() @ ln).real
    cross = (Dr.conj() @ rn) * (Dl.conj() @ ln)
    val = (Dr.conj() @ Dr).real / rr + (Dl.conj() @ Dl).real / ll + 2 * cross.real / (rr * ll)
    return float(val)


def projector_fd(fam: OperatorFamily, lam, n: int, mu_dir: int, *, h: float | None = None) -> float:
    """Direct finite-difference oracle for :func:`projector_deformation`.

    The projector is gauge invariant, so matched raw eigenvector columns can
    be differenced without any phase fixing.
    """
    lam = fam._lam(lam)
    sys0 = build_biortho(fam(lam), warn_degenerate=False)
    hmu = h if h is not None else fam.fd_step(mu_dir, lam)
    e = np.zeros(fam.num_params)
    e[mu_dir] = hmu

    def proj(lamp):
        sysp = build_biortho(fam(lamp), warn_degenerate=False)
        ov = np.abs(sys0.left.conj().T @ sysp.right)
        m = int(np.argmax(ov[n]))
        if ov[n, m] < MATCH_THRESHOLD:
            raise ContinuationAmbiguous("projector stencil match ambiguous")
        return np.outer(sysp.right[:, m], sysp.left[:, m].conj())

    dP = (proj(lam + e) - proj(lam - e)) / (2 * hmu)
    P0 = np.outer(sys0.right[:, n], sys0.left[:, n].conj())
    return float(np.linalg.norm(dP) ** 2 / np.linalg.norm(P0) ** 2)


def agp_residual(fam: OperatorFamily, lam, mu_dir: int) -> float:
    """Residual ``||dK - F - [A, K]|| / ||dK||`` of the transport equation.

    ``F`` carries the eigenvalue derivatives via the Hellmann-Feynman
    diagonal; ``A`` is the dense generator from :func:`agp_elements`.
    """
    lam = fam._lam(lam)
    K = fam(lam)
    sys = build_biortho(K, warn_degenerate=False)
    dK = fam.derivative(mu_dir, lam)
    A = agp_elements(fam, lam, mu_dir, sys=sys).operator(sys)
    dw = np.diag(sys.left.conj().T @ dK @ sys.right)
    F = sys.right @ np.diag(dw) @ sys.left.conj().T
    resid = dK - F - (A @ K - K @ A)
    return float(np.linalg.norm(resid) / max(np.linalg.norm(dK), 1e-300))
