"""Classical trace map ``(x, y, z) -> (y, z, 2yz - x)`` and its Poincare sections.

Orbits live on the level set of ``C = x^2 + y^2 + z^2 - 2xyz - 1``. Nothing
here projects back onto that surface; drift is measured and reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DivergenceError, InvalidInvariantError

DIVERGENCE_LIMIT = 1e6
DEFAULT_TRANSIENT = 100
HEMISPHERES = {"front": "y >= 0", "back": "y < 0"}


class TraceState(NamedTuple):
    x: float
    y: float
    z: float


def trace_step(s):
    x, y, z = s
    return TraceState(y, z, 2 * y * z - x)


def trace_step_inverse(s):
    """Predecessor of ``(x', y', z')`` is ``(2x'y' - z', x', y')``."""
    x, y, z = s
    return TraceState(2 * x * y - z, x, y)


def invariant(s):
    x, y, z = s
    return x * x + y * y + z * z - 2 * x * y * z - 1


def initial_condition(theta1, theta2, phi2):
    """Half-traces of ``(M1, M2, M2 M1)`` with ``M1`` at ``phi1 = pi/2``."""
    return TraceState(
        float(np.cos(theta1)),
        float(np.sin(phi2) * np.cos(theta2)),
        float(np.sin(phi2) * np.cos(theta2 + theta1)),
    )


def invariant_closed_form(theta1, phi2):
    return -((np.sin(theta1) * np.cos(phi2)) ** 2)


@dataclass
class OrbitRecord:
    points: np.ndarray  # (n + 1, 3)
    C0: float
    max_drift: float
    params: dict | None = None

    @property
    def invariants(self):
        x, y, z = self.points.T
        return x * x + y * y + z * z - 2 * x * y * z - 1

    def __len__(self):
        return len(self.points)


def orbit(s0, n, params=None):
    if n < 0:
        raise ValueError(f"iteration count must be >= 0, got {n}")
    pts = np.empty((n + 1, 3))
    x, y, z = (float(v) for v in s0)
    pts[0] = x, y, z
    for k in range(1, n + 1):
        x, y, z = y, z, 2 * y * z - x
        if abs(z) > DIVERGENCE_LIMIT or not np.isfinite(z):
            raise DivergenceError(k, abs(z))
        pts[k] = x, y, z
    C0 = invariant(TraceState(*pts[0]))
    px, py, pz = pts.T
    drift = np.abs(px * px + py * py + pz * pz - 2 * px * py * pz - 1 - C0)
    return OrbitRecord(pts, float(C0), float(drift.max()), params)


def orbit_from_angles(theta1, theta2, phi2, n):
    s0 = initial_condition(theta1, theta2, phi2)
    return orbit(s0, n, params={"theta1": float(theta1), "theta2": float(theta2), "phi2": float(phi2)})


def _iterate_many(states, n):
    """Iterate an (m, 3) batch of states; returns an (n + 1, m, 3) array."""
    out = np.empty((n + 1,) + states.shape)
    out[0] = states
    x, y, z = states.T.copy()
    for k in range(1, n + 1):
        x, y, z = y, z, 2 * y * z - x
        if np.any(np.abs(z) > DIVERGENCE_LIMIT) or not np.all(np.isfinite(z)):
            raise DivergenceError(k, float(np.nanmax(np.abs(z))))
        out[k, :, 0] = x
        out[k, :, 1] = y
        out[k, :, 2] = z
    return out


def surface_angles(C, n_orbits, seed=0):
    """Draw ``(theta1, theta2, phi2)`` whose initial condition has invariant ``C``.

    ``theta1`` is uniform over the interval where ``sin(theta1) >= sqrt(-C)``,
    ``phi2 = arccos(sqrt(-C) / sin(theta1))`` and ``theta2`` is uniform on [0, pi].
    """
    if not -1.0 <= C <= 0.0:
        raise InvalidInvariantError(f"invariant must lie in [-1, 0], got {C}")
    r = np.sqrt(-C)
    lo = np.arcsin(r)
    rng = np.random.default_rng(seed)
    theta1 = rng.uniform(lo, np.pi - lo, size=n_orbits)
    theta2 = rng.uniform(0.0, np.pi, size=n_orbits)
    ratio = np.clip(r / np.sin(theta1), -1.0, 1.0)
    phi2 = np.arccos(ratio)
    return theta1, theta2, phi2


@dataclass
class PoincareSection:
    C: float
    front: np.ndarray  # rows (orbit_id, x, z) with y >= 0
    back: np.ndarray  # rows (orbit_id, x, z) with y < 0
    metadata: dict = field(default_factory=dict)


def poincare_section(C, n_orbits, n_iters, transient=DEFAULT_TRANSIENT, seed=0):
    """Project orbits on the ``C`` surface to the (x, z) plane, split by the sign of y."""
    if not -1.0 <= C <= 0.0:
        raise InvalidInvariantError(f"invariant must lie in [-1, 0], got {C}")
    if n_orbits < 1 or n_iters < 1:
        raise ValueError("n_orbits and n_iters must be positive")
    if transient < 0 or transient > n_iters:
        raise ValueError(f"transient must be in [0, n_iters], got {transient}")
    meta = {
        "C": float(C),
        "n_orbits": int(n_orbits),
        "n_iters": int(n_iters),
        "transient": int(transient),
        "seed": int(seed),
        "hemispheres": dict(HEMISPHERES),
        "sampling": "theta1 ~ U[arcsin(sqrt(-C)), pi - arcsin(sqrt(-C))], "
        "phi2 = arccos(sqrt(-C)/sin(theta1)), theta2 ~ U[0, pi]",
    }
    if C == -1.0:
        # the surface collapses to the fixed point at the origin
        pt = np.array([[0.0, 0.0, 0.0]])
        meta.update(degenerate=True, n_orbits=1)
        return PoincareSection(float(C), pt.copy(), pt.copy(), meta)

    theta1, theta2, phi2 = surface_angles(C, n_orbits, seed)
    s0 = np.column_stack(
        [np.cos(theta1), np.sin(phi2) * np.cos(theta2), np.sin(phi2) * np.cos(theta2 + theta1)]
    )
    full = _iterate_many(s0, n_iters)
    x, y, z = full[..., 0], full[..., 1], full[..., 2]
    drift = np.abs(x * x + y * y + z * z - 2 * x * y * z - 1 - C)
    traj = full[transient:]
    ids = np.broadcast_to(np.arange(n_orbits, dtype=float), traj.shape[:2])
    # orbit-major ordering: all points of orbit 0, then orbit 1, ...
    ids = ids.T.reshape(-1)
    pts = traj.transpose(1, 0, 2).reshape(-1, 3)
    rows = np.column_stack([ids, pts[:, 0], pts[:, 2]])
    front = pts[:, 1] >= 0
    meta.update(
        degenerate=False,
        max_drift=float(drift.max()),
        theta1=theta1.tolist(),
        theta2=theta2.tolist(),
        phi2=phi2.tolist(),
    )
    return PoincareSection(float(C), rows[front], rows[~front], meta)
