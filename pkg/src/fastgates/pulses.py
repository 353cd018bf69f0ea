"""Pulse unitaries: ideal RWA kicks, finite-duration pulses, imperfect areas.

Each operation acts on one motional mode joined to the two-qubit internal
space (dimension 4*dim, internal index ordering |gg>, |ge>, |eg>, |ee>).
The public operations return full dense unitaries built by matrix
exponentiation. Every model couples to the motion only through the
quadrature X = a + adag, so each also exposes its per-eigenvalue 2x2
factors (one per ion) for the fast evolution path in `gatesim`; tests
hold the two routes against each other.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ModeData
from .fock import FockBasis, kron, ladder, matrix_exp, position_eigenbasis, rotation

INTERNAL_STATES = ("gg", "ge", "eg", "ee")
# sigma-z eigenvalues (s1, s2) for each internal basis state, e -> +1
SECTOR_SIGNS = ((-1, -1), (-1, +1), (+1, -1), (+1, +1))

_SP = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |e><g| with ordering (g, e)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class Ideal:
    """Instantaneous perfect pi-pulse pairs (pure momentum kicks)."""


@dataclass(frozen=True)
class NonRWA:
    """Finite-duration resonant pulse keeping counter-rotating terms.

    tau is the single-pulse duration (s), phi the optical phase (rad),
    omega_at the atomic transition angular frequency (rad/s).
    """

    tau: float
    phi: float
    omega_at: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"pulse duration must be positive, got {self.tau}")


@dataclass(frozen=True)
class PulseArea:
    """Systematically imperfect pulse area: Omega*tau = xi*pi, phi = 0."""

    xi: float

    def __post_init__(self):
        if not 0 < self.xi <= 1.05:
            raise ValueError(f"xi must be in (0, 1.05], got {self.xi}")


ErrorModel = Ideal | NonRWA | PulseArea


class SectorSpace:
    """One mode's truncated space with the two qubits' kx couplings.

    kx_i = b_i * eta_p * (a + adag) is the single-mode expansion of the
    laser phase operator at ion i; `ions` picks which two chain sites
    carry the qubits (relevant only for L > 2 coupling vectors).
    """

    def __init__(self, mode: ModeData, basis: FockBasis, ions=(0, 1)):
        self.mode = mode
        self.basis = basis
        self.coeffs = (mode.b[ions[0]] * mode.eta_p, mode.b[ions[1]] * mode.eta_p)
        x = _quadrature(basis.dim)
        self.kx = (self.coeffs[0] * x, self.coeffs[1] * x)
        self.lam, self.v = position_eigenbasis(basis)


def _quadrature(dim: int) -> np.ndarray:
    n = np.arange(1, dim)
    x = np.zeros((dim, dim))
    x[n - 1, n] = np.sqrt(n)
    x[n, n - 1] = np.sqrt(n)
    return x


def free_evolution(space: SectorSpace, dt: float) -> np.ndarray:
    """Free motional rotation over dt, identity on the internal states."""
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    return kron(np.eye(4), rotation(space.mode.nu_p * dt, space.basis))


def ideal_kick(space: SectorSpace, z: int, n_max: int = 0) -> np.ndarray:
    """Momentum kick of z pulse pairs: exp(-2i z (kx1 s1 + kx2 s2)).

    Block-diagonal over internal states; each sector (s1, s2) receives
    the displacement exp(-2i z (c1 s1 + c2 s2) X). Raises if the kick
    would push more than 1e-8 population into the top 10% of the basis
    from any number state up to n_max.
    """
    if z == 0:
        raise ValueError("kick needs z != 0")
    dim = space.basis.dim
    out = np.zeros((4 * dim, 4 * dim), dtype=complex)
    guard = slice(int(np.ceil(0.9 * dim)), dim)
    for i, (s1, s2) in enumerate(SECTOR_SIGNS):
        w = space.coeffs[0] * s1 + space.coeffs[1] * s2
        d = matrix_exp(-2j * z * w * _quadrature(dim))
        tail = np.abs(d[guard, : n_max + 1]) ** 2
        if tail.sum(axis=0).max() > 1e-8:
            raise TruncationOverflow(
                f"kick z={z} leaks {tail.sum(axis=0).max():.2e} past 90% of dim={dim}")
        out[i * dim:(i + 1) * dim, i * dim:(i + 1) * dim] = d
    return out


class TruncationOverflow(RuntimeError):
    """Population reached the top of the truncated basis; enlarge dim."""


def nonrwa_pulse(space: SectorSpace, direction: int, t_start: float, model: NonRWA) -> np.ndarray:
    """Finite-duration resonant pulse on both ions over [t_start, t_start+tau].

    Exponential of the time-integrated interaction Hamiltonian: the
    co-rotating terms contribute tau * sigma_i^+ e^{i(z kx_i + phi)}, the
    counter-rotating terms the analytically integrated
    -i/(2 omega_at) (e^{2i omega_at t_f} - e^{2i omega_at t_i}) factor
    with the opposite phase sign; everything is scaled by -i pi/(2 tau).
    The propagation direction flips the sign of kx only.
    """
    if direction not in (1, -1):
        raise ValueError(f"direction must be +1 or -1, got {direction}")
    tau = model.tau
    t_end = t_start + tau
    cr = -0.5j / model.omega_at * (np.exp(2j * model.omega_at * t_end)
                                   - np.exp(2j * model.omega_at * t_start))
    dim = space.basis.dim
    h = np.zeros((4 * dim, 4 * dim), dtype=complex)
    for ion in (0, 1):
        plus = matrix_exp(1j * (direction * space.kx[ion] + model.phi * np.eye(dim)))
        up = tau * plus + cr * plus.conj().T
        sp_full = kron(_SP, _I2) if ion == 0 else kron(_I2, _SP)
        h += kron(sp_full, up) + kron(sp_full.conj().T, up.conj().T)
    return matrix_exp(-1j * np.pi / (2 * tau) * h)


def pair_pulse_xi(space: SectorSpace, z_dir: int, model: PulseArea) -> np.ndarray:
    """Counter-propagating pulse pair with fractional area xi (phi = 0).

    Product U(-z_dir) U(z_dir) of two-ion single-pulse unitaries
    exp(-i xi pi/2 (sigma1^+ e^{i z kx1} + sigma2^+ e^{i z kx2} + h.c.)).
    """
    return _single_pulse_xi(space, -z_dir, model.xi) @ _single_pulse_xi(space, z_dir, model.xi)


def _single_pulse_xi(space: SectorSpace, z: int, xi: float) -> np.ndarray:
    dim = space.basis.dim
    h = np.zeros((4 * dim, 4 * dim), dtype=complex)
    for ion in (0, 1):
        plus = matrix_exp(1j * z * space.kx[ion])
        sp_full = kron(_SP, _I2) if ion == 0 else kron(_I2, _SP)
        h += kron(sp_full, plus) + kron(sp_full.conj().T, plus.conj().T)
    return matrix_exp(-1j * xi * np.pi / 2 * h)


def rotation_fidelity(xi: float) -> float:
    """Worst-case single-pulse state fidelity sin^2(xi pi/2).

    The overlap of the ideal and xi-scaled pulses on a state |psi> is
    sin(xi pi/2) + i cos(xi pi/2) <sigma_theta>, minimized over states
    at <sigma_theta> = 0, giving exactly sin^2(xi pi/2). A quadratic
    expansion is available via rotation_fidelity_quadratic.
    """
    if not 0 <= xi <= 1.1:
        raise ValueError(f"xi must be in [0, 1.1], got {xi}")
    return float(np.sin(xi * np.pi / 2) ** 2)


def rotation_fidelity_quadratic(xi: float) -> float:
    """Small-error expansion 1 - (1-xi)^2 pi^2 / 4 of rotation_fidelity."""
    return 1.0 - (1.0 - xi) ** 2 * np.pi**2 / 4


def xi_for_rotation_infidelity(infidelity: float) -> float:
    """Invert rotation_fidelity: the xi <= 1 with 1 - sin^2(xi pi/2) = infidelity."""
    if not 0 <= infidelity < 1:
        raise ValueError(f"infidelity must be in [0, 1), got {infidelity}")
    return float(2 / np.pi * np.arcsin(np.sqrt(1.0 - infidelity)))


# ---------------------------------------------------------------------------
# Per-eigenvalue factors for the fast evolution path.
#
# In the X eigenbasis every pulse unitary splits into one 2x2 per ion per
# eigenvalue lam: exp(-i [[0, w], [conj(w), 0]]) with a model-specific w.
# `gatesim` applies these to (2, 2, dim)-shaped state tensors.


def kick_phases(space: SectorSpace, z: int) -> np.ndarray:
    """Ideal-kick phases e^{-2i z (c1 s1 + c2 s2) lam}, shape (4, dim)."""
    w = np.array([space.coeffs[0] * s1 + space.coeffs[1] * s2 for s1, s2 in SECTOR_SIGNS])
    return np.exp(-2j * z * np.outer(w, space.lam))


def xi_pulse_blocks(space: SectorSpace, z: int, xi: float):
    """Per-ion 2x2 factors of the single xi-pulse, each shaped (dim, 2, 2)."""
    return tuple(_blocks_from_w(xi * np.pi / 2 * np.exp(1j * z * c * space.lam))
                 for c in space.coeffs)


def nonrwa_pulse_blocks(space: SectorSpace, direction: int, t_start: float, model: NonRWA):
    """Per-ion 2x2 factors of the finite-duration pulse, each (dim, 2, 2)."""
    t_end = t_start + model.tau
    cr = -0.5j / model.omega_at * (np.exp(2j * model.omega_at * t_end)
                                   - np.exp(2j * model.omega_at * t_start))
    out = []
    for c in space.coeffs:
        phase = np.exp(1j * (direction * c * space.lam + model.phi))
        w = np.pi / (2 * model.tau) * (model.tau * phase + cr / phase)
        out.append(_blocks_from_w(w))
    return tuple(out)


def _blocks_from_w(w: np.ndarray) -> np.ndarray:
    """exp(-i [[0, w], [conj(w), 0]]) per entry of w, in (g, e) ordering.

    The exponent has sigma^+ coefficient w, i.e. entry [e, g] = w; rows
    and columns are ordered (g, e).
    """
    mag = np.abs(w)
    phase = np.where(mag > 0, w / np.where(mag > 0, mag, 1.0), 1.0)
    blocks = np.zeros(w.shape + (2, 2), dtype=complex)
    blocks[..., 0, 0] = np.cos(mag)
    blocks[..., 1, 1] = np.cos(mag)
    blocks[..., 1, 0] = -1j * np.sin(mag) * phase
    blocks[..., 0, 1] = -1j * np.sin(mag) * np.conj(phase)
    return blocks
