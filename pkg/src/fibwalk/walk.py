"""Discrete-time quantum walk on the line with a two-angle coin.

One step is the map

    a[n](t+1) = a[n+1](t) cos(theta) + b[n+1](t) sin(theta)
    b[n](t+1) = a[n-1](t) sin(theta) - b[n-1](t) cos(theta)

with ``a`` the left-moving (upper) and ``b`` the right-moving (lower) chirality
component. The open line is realized as a finite array sized to the light
cone; a cyclic lattice is available for transform checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityExceededError, InvalidCapacityError, NormalizationError
from .schedule import CoinSchedule, schedule_for_horizon

NORM_TOL = 1e-12
DEFAULT_CHIRALITY = (1 / np.sqrt(2), 1j / np.sqrt(2))


@dataclass
class WalkerState:
    """Spinor amplitudes over lattice sites ``n = index - origin_index``."""

    a: np.ndarray
    b: np.ndarray
    origin_index: int
    time: int = 0
    periodic: bool = False

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex)
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("a and b must be 1-d arrays of equal length")
        if not 0 <= self.origin_index < self.capacity:
            raise InvalidCapacityError(
                f"origin index {self.origin_index} outside lattice of {self.capacity} sites"
            )

    @property
    def capacity(self):
        return self.a.size

    @property
    def positions(self):
        return np.arange(self.capacity) - self.origin_index

    def norm(self):
        return float(np.sum(np.abs(self.a) ** 2) + np.sum(np.abs(self.b) ** 2))

    def copy(self):
        return WalkerState(self.a.copy(), self.b.copy(), self.origin_index, self.time, self.periodic)


@dataclass(frozen=True)
class CoinAngle:
    theta: float

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise ValueError(f"coin angle must be finite, got {self.theta}")


def _check_chirality(chirality):
    alpha, beta = (complex(c) for c in chirality)
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"chirality has norm {norm!r}, expected 1")
    return alpha, beta


def make_localized_state(capacity, chirality=DEFAULT_CHIRALITY):
    """Walker at ``n = 0`` with chirality ``(alpha, beta)`` on an odd-sized open lattice."""
    if capacity < 1 or capacity % 2 == 0:
        raise InvalidCapacityError(f"capacity must be odd and >= 1, got {capacity}")
    alpha, beta = _check_chirality(chirality)
    a = np.zeros(capacity, dtype=complex)
    b = np.zeros(capacity, dtype=complex)
    origin = capacity // 2
    a[origin] = alpha
    b[origin] = beta
    return WalkerState(a, b, origin)


def make_cyclic_state(n_sites, chirality=DEFAULT_CHIRALITY, site=0):
    """Localized walker on a ring of ``n_sites``; site 0 sits at array index 0."""
    if n_sites < 1:
        raise InvalidCapacityError(f"ring needs at least one site, got {n_sites}")
    alpha, beta = _check_chirality(chirality)
    a = np.zeros(n_sites, dtype=complex)
    b = np.zeros(n_sites, dtype=complex)
    a[site % n_sites] = alpha
    b[site % n_sites] = beta
    return WalkerState(a, b, 0, periodic=True)


def capacity_for(T):
    """Lattice size holding the light cone of ``T`` steps with one spare site per side."""
    return 2 * T + 3


def _apply(a, b, out_a, out_b, c, s):
    # a moves left, b moves right; out_a[-1] and out_b[0] are the vacated ends
    out_a[:-1] = a[1:] * c + b[1:] * s
    out_a[-1] = 0
    out_b[1:] = a[:-1] * s - b[:-1] * c
    out_b[0] = 0


def step(state, coin):
    """Advance one time step with coin angle ``coin`` (``CoinAngle`` or float)."""
    theta = coin.theta if isinstance(coin, CoinAngle) else float(coin)
    c, s = np.cos(theta), np.sin(theta)
    a, b = state.a, state.b
    if state.periodic:
        sa, sb = np.roll(a, -1), np.roll(b, -1)
        ra, rb = np.roll(a, 1), np.roll(b, 1)
        return WalkerState(sa * c + sb * s, ra * s - rb * c, state.origin_index, state.time + 1, True)
    if a[0] != 0 or b[0] != 0 or a[-1] != 0 or b[-1] != 0:
        raise CapacityExceededError(
            f"amplitude at the lattice edge at t={state.time}; capacity {state.capacity} too small"
        )
    new_a = np.empty_like(a)
    new_b = np.empty_like(b)
    _apply(a, b, new_a, new_b, c, s)
    return WalkerState(new_a, new_b, state.origin_index, state.time + 1, False)


def position_distribution(state):
    """Sites with nonzero probability and their probabilities ``|a|^2 + |b|^2``."""
    p = np.abs(state.a) ** 2 + np.abs(state.b) ** 2
    mask = p > 0
    return state.positions[mask], p[mask]


def standard_deviation(positions, probabilities):
    positions = np.asarray(positions, dtype=float)
    probabilities = np.asarray(probabilities, dtype=float)
    mean = probabilities @ positions
    var = probabilities @ (positions - mean) ** 2
    return float(np.sqrt(max(var, 0.0)))


def _sigma_window(a, b, n):
    p = a.real**2 + a.imag**2 + b.real**2 + b.imag**2
    mean = p @ n
    var = p @ (n - mean) ** 2
    return np.sqrt(max(var, 0.0))


@dataclass
class WalkResult:
    times: np.ndarray
    sigma: np.ndarray
    state: WalkerState
    angles: tuple = field(default=(None, None))


def evolve(state, schedule, angles, record_every=1, n_steps=None):
    """Run the walk over ``schedule`` and record sigma(t) every ``record_every`` steps.

    ``schedule`` is a ``CoinSchedule`` or a plain letter string; letter "1"
    uses ``angles[0]``, letter "2" uses ``angles[1]``. Only the active light
    cone is updated, so a run of T steps costs O(T^2) rather than O(T * capacity).
    """
    letters = schedule.letters if isinstance(schedule, CoinSchedule) else str(schedule)
    if n_steps is None:
        n_steps = len(letters)
    if n_steps > len(letters):
        raise ValueError(f"schedule has {len(letters)} letters, {n_steps} steps requested")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    theta1, theta2 = (float(t) for t in angles)
    coins = {"1": (np.cos(theta1), np.sin(theta1)), "2": (np.cos(theta2), np.sin(theta2))}

    if state.periodic:
        cur = state
        times, sig = [], []
        for k in range(n_steps):
            cur = step(cur, theta1 if letters[k] == "1" else theta2)
            if cur.time % record_every == 0:
                times.append(cur.time)
                sig.append(standard_deviation(*position_distribution(cur)))
        return WalkResult(np.array(times, dtype=int), np.array(sig), cur, (theta1, theta2))

    a, b = state.a.copy(), state.b.copy()
    nz = np.flatnonzero((a != 0) | (b != 0))
    if nz.size == 0:
        raise ValueError("state has no amplitude")
    lo, hi = int(nz[0]), int(nz[-1])
    if lo - n_steps < 0 or hi + n_steps > state.capacity - 1:
        raise CapacityExceededError(
            f"{n_steps} steps from support [{lo}, {hi}] overflow a lattice of {state.capacity} sites"
        )
    n_all = np.arange(state.capacity, dtype=float) - state.origin_index
    buf_a, buf_b = np.zeros_like(a), np.zeros_like(b)
    times, sig = [], []
    t0 = state.time
    for k in range(n_steps):
        c, s = coins[letters[k]]
        lo -= 1
        hi += 1
        sl = slice(max(lo - 1, 0), min(hi + 2, state.capacity))
        _apply(a[sl], b[sl], buf_a[sl], buf_b[sl], c, s)
        a, buf_a = buf_a, a
        b, buf_b = buf_b, b
        t = t0 + k + 1
        if t % record_every == 0:
            win = slice(lo, hi + 1)
            times.append(t)
            sig.append(_sigma_window(a[win], b[win], n_all[win]))
    final = WalkerState(a, b, state.origin_index, t0 + n_steps, False)
    return WalkResult(np.array(times, dtype=int), np.array(sig, dtype=float), final, (theta1, theta2))


SCHEDULE_MODES = ("fibonacci", "constant1", "constant2")


def run_walk(theta1, theta2, T, mode="fibonacci", chirality=DEFAULT_CHIRALITY, record_every=1):
    """Evolve a walker localized at the origin for ``T`` steps.

    Returns ``(WalkResult, CoinSchedule)``; ``mode`` picks the Fibonacci
    prefix schedule or a constant single-letter schedule.
    """
    if mode == "fibonacci":
        sched = schedule_for_horizon(T)
    elif mode == "constant1":
        sched = CoinSchedule.constant("1", T)
    elif mode == "constant2":
        sched = CoinSchedule.constant("2", T)
    else:
        raise ValueError(f"unknown schedule mode {mode!r}; choose from {SCHEDULE_MODES}")
    state = make_localized_state(capacity_for(T), chirality)
    return evolve(state, sched, (theta1, theta2), record_every=record_every), sched
