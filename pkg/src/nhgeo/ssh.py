"""Non-Hermitian Su-Schrieffer-Heeger chain (momentum space).

Two-band Bloch matrices with asymmetric intracell hopping ``t +- delta``
(intercell hopping fixed to 1), the band function ``eps(k)``, phase labels
from the two gap conditions ``|t -+ delta| = 1``, Brillouin-zone sums of the
mixed geometric tensor over the (t, delta) plane, and the corresponding
thermodynamic-limit expressions.

All computations are per-k on 2x2 blocks; no real-space Hamiltonian (open
boundaries and skin-effect physics are out of scope).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriticalKPoint, FSingular, OnCriticalLine
from .tensors import GeoTensor, OperatorFamily

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_DX_DDELTA = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class SSHParams:
    """Mean intracell hopping ``t``, imbalance ``delta``, chain length ``L``."""

    t: float
    delta: float
    L: int

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("L must be >= 2")

    @property
    def k_grid(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.L) / self.L


@dataclass(frozen=True)
class SSHPhase:
    """Region labels: s1 = '+' iff |t - delta| > 1, s2 = '+' iff |t + delta| > 1."""

    s1: str
    s2: str

    def astuple(self) -> tuple[str, str]:
        return (self.s1, self.s2)


def bloch(params: SSHParams, k: float) -> np.ndarray:
    """2x2 Bloch matrix with off-diagonals t - delta + e^{-ik}, t + delta + e^{ik}."""
    t, d = params.t, params.delta
    return np.array(
        [[0.0, t - d + np.exp(-1j * k)], [t + d + np.exp(1j * k), 0.0]],
        dtype=complex,
    )


def eps(t: float, delta: float, k) -> np.ndarray | complex:
    """Band function: eigenvalues of the Bloch matrix are +-sqrt(eps)."""
    return 1.0 + t * t - delta * delta + 2.0 * t * np.cos(k) - 2j * delta * np.sin(k)


def bloch_family(params: SSHParams, k: float) -> OperatorFamily:
    """The fixed-k Bloch matrix as a two-parameter family over (t, delta)."""

    def f(lam):
        return bloch(SSHParams(lam[0], lam[1], params.L), k)

    def df(mu, lam):
        return _SX if mu == 0 else _DX_DDELTA

    return OperatorFamily(2, 2, f, df, name=f"nh-ssh(k={k:.6g})")


def classify_phase(t: float, delta: float) -> SSHPhase:
    """Phase labels (s1, s2) from |t - delta| and |t + delta| vs 1."""
    for v in (abs(t - delta), abs(t + delta)):
        if abs(v - 1.0) < 1e-12:
            raise OnCriticalLine(f"|t -+ delta| = {v} is on a gap-closing line")
    return SSHPhase(
        "+" if abs(t - delta) > 1 else "-",
        "+" if abs(t + delta) > 1 else "-",
    )


def zeta_summand(t: float, delta: float, k) -> np.ndarray:
    """Per-k contribution to the Brillouin-zone tensor sum over (t, delta).

    This is the k-symmetrized value: the full per-k block tensor also carries
    an off-diagonal imaginary part odd in k that cancels between k and -k.
    """
    ae = np.abs(eps(t, delta, k)) ** 2
    ztt = (delta ** 2 + np.sin(k) ** 2) / (4 * ae)
    zdd = (t + np.cos(k)) ** 2 / (4 * ae)
    ztd = -(t + np.cos(k)) * delta / (4 * ae)
    return np.array([[ztt, ztd], [ztd, zdd]])


def zeta_finite_sum(params: SSHParams) -> GeoTensor:
    """Tensor over (t, delta) summed over the k-grid ``k_m = 2 pi m / L``."""
    ks = params.k_grid
    e = eps(params.t, params.delta, ks)
    ae = np.abs(e) ** 2
    if np.min(np.abs(e)) < 1e-12:
        kbad = ks[int(np.argmin(np.abs(e)))]
        raise CriticalKPoint(f"eps(k) vanishes on the grid at k = {kbad:.6g}")
    ztt = float(np.sum((params.delta ** 2 + np.sin(ks) ** 2) / (4 * ae)))
    zdd = float(np.sum((params.t + np.cos(ks)) ** 2 / (4 * ae)))
    ztd = float(np.sum(-(params.t + np.cos(ks)) * params.delta / (4 * ae)))
    vals = np.array([[ztt, ztd], [ztd, zdd]], dtype=complex)
    return GeoTensor(
        "zeta", "band-sum", vals, np.array([params.t, params.delta]), {"L": params.L}
    )


def phase_function(t: float, delta: float) -> float:
    """Phase-dependent part of the thermodynamic tensor.

    Piecewise over the (s1, s2) regions; has poles at delta = 0 and
    delta = -+t inside the phases where it is nonzero.
    """
    ph = classify_phase(t, delta).astuple()
    if ph == ("-", "-"):
        return 0.0
    if ph == ("+", "+"):
        den = (delta - t) * (delta + t)
    elif ph == ("-", "+"):
        den = delta * (delta + t)
    else:  # ("+", "-")
        den = delta * (delta - t)
    if abs(den) < 1e-14:
        raise FSingular(
            f"phase {ph} requires the pole-bearing term and delta*(delta -+ t) = 0"
        )
    return (2.0 if ph == ("+", "+") else 1.0) / den


def zeta_thermodynamic(t: float, delta: float) -> GeoTensor:
    """Large-L tensor per unit length over (t, delta).

    Diverges on the gap-closing lines; raises there instead of returning inf.
    """
    f = phase_function(t, delta)  # raises OnCriticalLine / FSingular first
    A = 1.0 / abs((delta + t) ** 2 - 1.0)
    B = 1.0 / abs((delta - t) ** 2 - 1.0)
    vals = np.array(
        [[(A + B + f), (A - B)], [(A - B), (A + B - f)]], dtype=complex
    ) / 16.0
    return GeoTensor(
        "zeta", "band-sum", vals, np.array([t, delta]), {"per_unit_L": True}
    )


def ssh_eigenstates(params: SSHParams, k: float):
    """Closed-form right/left eigenstate pairs of the Bloch matrix.

    Returns ``(psi_R_plus, psi_R_minus), (psi_L_plus, psi_L_minus)`` as kets,
    biorthonormal pairwise, for the bands ``+-sqrt(eps)`` in that order.
    """
    t, d = params.t, params.delta
    a = t - d + np.exp(-1j * k)
    b = t + d + np.exp(1j * k)
    e = a * b
    if abs(e) < 1e-12:
        raise CriticalKPoint(f"eps = 0 at k = {k:.6g}")
    se = np.sqrt(e)
    psi_r = (
        np.array([1.0, b / se]) / np.sqrt(2.0),
        np.array([-1.0, b / se]) / np.sqrt(2.0),
    )
    # bras are (+-1, a/sqrt(eps))/sqrt(2); kets are their conjugates
    psi_l = (
        np.array([1.0, a / se]).conj() / np.sqrt(2.0),
        np.array([-1.0, a / se]).conj() / np.sqrt(2.0),
    )
    return psi_r, psi_l
