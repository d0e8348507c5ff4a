"""Momentum-space pulse matrices and Fourier transforms of walker states.

The pulse matrix is

    M(phi, theta) = i [[e^{-i phi} cos(theta),  e^{-i phi} sin(theta)],
                       [e^{ i phi} sin(theta), -e^{ i phi} cos(theta)]]

which lies in SU(2) and decomposes as ``cos(theta) sin(phi) I + i u.sigma``
with ``u = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta) cos(phi))``.

Transform convention: ``F(phi) = sum_n e^{i n phi} a[n]`` (same for ``G``
with ``b``). Under this kernel one walk step acts on each momentum component
as ``-i * M(phi, theta)`` exactly; the global phase ``-i`` per step is a
scalar and drops out of every trace relation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidIndexError, NonSU2Error
from .schedule import CoinSchedule
from .walk import WalkerState

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

WALK_STEP_PHASE = -1j
TRACE_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class SpinMatrix:
    """2x2 complex matrix with optional ``(phi, theta)`` provenance.

    Products of pulse matrices carry ``phi = theta = None``.
    """

    entries: np.ndarray
    phi: float | None = None
    theta: float | None = None

    def __matmul__(self, other):
        return SpinMatrix(self.entries @ other.entries)

    @property
    def det(self):
        return complex(np.linalg.det(self.entries))

    def is_unitary(self, tol=1e-12):
        return bool(np.allclose(self.entries @ self.entries.conj().T, IDENTITY, rtol=0, atol=tol))

    def bloch(self):
        """Return ``(scalar, u)`` with ``entries = scalar * I + i * u . sigma``.

        Exact for SU(2) elements, where both parts are real.
        """
        m = self.entries
        scalar = 0.5 * (m[0, 0] + m[1, 1])
        ux = -0.5j * (m[0, 1] + m[1, 0])
        uy = 0.5 * (m[0, 1] - m[1, 0])
        uz = -0.5j * (m[0, 0] - m[1, 1])
        return scalar, np.array([ux, uy, uz])

    def to_reals(self):
        """Row-major entries as 8 reals, real and imaginary parts interleaved."""
        flat = self.entries.reshape(-1)
        return [float(v) for z in flat for v in (z.real, z.imag)]

    def __str__(self):
        return " ".join(f"{v:.17g}" for v in self.to_reals())


def coin_matrix(phi, theta):
    e_minus = np.exp(-1j * phi)
    e_plus = np.exp(1j * phi)
    c, s = np.cos(theta), np.sin(theta)
    m = 1j * np.array([[e_minus * c, e_minus * s], [e_plus * s, -e_plus * c]], dtype=complex)
    return SpinMatrix(m, float(phi), float(theta))


def bloch_vector(phi, theta):
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta) * np.cos(phi)]
    )


def bloch_matrix(phi, theta):
    """Rebuild ``M(phi, theta)`` from its scalar part and Bloch vector."""
    u = bloch_vector(phi, theta)
    return np.cos(theta) * np.sin(phi) * IDENTITY + 1j * (
        u[0] * SIGMA_X + u[1] * SIGMA_Y + u[2] * SIGMA_Z
    )


def half_trace(m, tol=TRACE_IMAG_TOL):
    entries = m.entries if isinstance(m, SpinMatrix) else np.asarray(m)
    tr = complex(entries[0, 0] + entries[1, 1])
    if abs(tr.imag) > tol:
        raise NonSU2Error(f"trace has imaginary part {tr.imag:.3g}; matrix is not in SU(2)")
    return tr.real / 2


def fibonacci_matrix(k, phi1, theta1, phi2, theta2):
    """``M[k]`` from ``M[1] = M(phi1, theta1)``, ``M[2] = M(phi2, theta2)``, ``M[k+1] = M[k] M[k-1]``."""
    if k < 1:
        raise InvalidIndexError(f"Fibonacci index must be >= 1, got {k}")
    m1 = coin_matrix(phi1, theta1)
    if k == 1:
        return m1
    m2 = coin_matrix(phi2, theta2)
    prev, cur = m1.entries, m2.entries
    for _ in range(k - 2):
        prev, cur = cur, cur @ prev
    return SpinMatrix(cur, phi2, theta2) if k == 2 else SpinMatrix(cur)


def word_matrix(word, phi1, theta1, phi2, theta2):
    """Product of pulse matrices for a time-ordered word, later letters on the left."""
    letters = word.letters if isinstance(word, CoinSchedule) else str(word)
    pulses = {"1": coin_matrix(phi1, theta1).entries, "2": coin_matrix(phi2, theta2).entries}
    out = IDENTITY.copy()
    for letter in letters:
        out = pulses[letter] @ out
    return SpinMatrix(out)


def momentum_grid(n):
    """``phi_j = 2 pi (j - n//2) / n``, uniform on [-pi, pi) and n-periodic in the site index."""
    return 2 * np.pi * (np.arange(n) - n // 2) / n


@dataclass
class MomentumState:
    phi: np.ndarray
    F: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.F = np.asarray(self.F, dtype=complex)
        self.G = np.asarray(self.G, dtype=complex)
        if not (self.phi.shape == self.F.shape == self.G.shape):
            raise DimensionError("phi, F and G must have the same shape")

    @property
    def size(self):
        return self.phi.size

    def norm(self):
        """Parseval norm ``sum(|F|^2 + |G|^2) / N``."""
        return float((np.sum(np.abs(self.F) ** 2) + np.sum(np.abs(self.G) ** 2)) / self.size)


def _ring_sites(state):
    if not state.periodic:
        raise DimensionError("momentum transforms need a cyclic lattice state")
    return state.positions


def to_momentum(state):
    """Transform a cyclic-lattice state with an FFT and a per-site phase twist."""
    n = state.capacity
    sites = _ring_sites(state)
    twist = np.exp(-2j * np.pi * sites * (n // 2) / n)
    # sum_n e^{i n phi_j} a_n = n * ifft(a_n * twist)_j for phi_j = 2 pi (j - n//2) / n
    idx = sites % n
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    a[idx] = state.a * twist
    b[idx] = state.b * twist
    return MomentumState(momentum_grid(n), n * np.fft.ifft(a), n * np.fft.ifft(b))


def from_momentum(ms, template):
    """Inverse of ``to_momentum`` onto the ring layout of ``template``."""
    n = ms.size
    if template.capacity != n:
        raise DimensionError(f"grid of {n} points does not match ring of {template.capacity} sites")
    sites = _ring_sites(template)
    idx = sites % n
    twist = np.exp(2j * np.pi * sites * (n // 2) / n)
    a = np.fft.fft(ms.F)[idx] / n * twist
    b = np.fft.fft(ms.G)[idx] / n * twist
    return WalkerState(a, b, template.origin_index, template.time, True)


def evolve_momentum(ms, word, theta1, theta2, phi_offset=0.0, walk_phase=False):
    """Multiply every momentum component by the ordered product of pulse matrices.

    Both letters use the component's own momentum ``phi_j + phi_offset``.
    With ``walk_phase=True`` the scalar ``(-i)^len(word)`` is included, which
    makes the result the exact transform of the position-space walk.
    """
    letters = word.letters if isinstance(word, CoinSchedule) else str(word)
    phi = ms.phi + phi_offset
    F, G = ms.F.copy(), ms.G.copy()
    for letter in letters:
        theta = theta1 if letter == "1" else theta2
        e_minus = 1j * np.exp(-1j * phi)
        e_plus = 1j * np.exp(1j * phi)
        c, s = np.cos(theta), np.sin(theta)
        F, G = e_minus * (c * F + s * G), e_plus * (s * F - c * G)
    if walk_phase:
        phase = WALK_STEP_PHASE ** (len(letters) % 4)
        F, G = F * phase, G * phase
    return MomentumState(ms.phi.copy(), F, G)
