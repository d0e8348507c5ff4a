"""Power-law fits of spreading series and orbit autocorrelations."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateSeriesError, InsufficientDataError, LogDomainError

MIN_FIT_POINTS = 10
DEFAULT_SKIP_FRACTION = 0.1

CORRELATION_DEFINITION = (
    "rho(tau) = [sum_k (v_k - mean)(v_{k+tau} - mean) / (N - tau)] / variance, "
    "variance = sum_k (v_k - mean)^2 / N, v = orbit x-coordinate"
)


@dataclass
class SeriesRecord:
    times: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape or self.times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return self.times.size


@dataclass
class FitResult:
    exponent: float
    prefactor: float
    r_squared: float
    window: tuple
    n_points: int

    def to_dict(self):
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def default_window(times, skip_fraction=DEFAULT_SKIP_FRACTION):
    """Drop the first ``skip_fraction`` of the time span."""
    t_max = float(times[-1])
    return (max(float(times[0]), skip_fraction * t_max), t_max)


def _r_squared(y, resid):
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0 or ss_tot < 1e-30 * max(1.0, float(y @ y)):
        # flat data: a perfect fit if residuals vanish too
        return 1.0 if ss_res <= 1e-20 * max(1.0, float(y @ y)) else 0.0
    return float(min(max(1.0 - ss_res / ss_tot, 0.0), 1.0))


def fit_power_law(series, window=None):
    """Least-squares line through ``log(value)`` against ``log(time)`` inside ``window``.

    ``window`` defaults to dropping the first 10% of the time span. Returns
    ``FitResult`` with ``value ~ prefactor * time**exponent``.
    """
    if len(series) == 0:
        raise InsufficientDataError("empty series")
    if window is None:
        window = default_window(series.times)
    t_min, t_max = window
    mask = (series.times >= t_min) & (series.times <= t_max)
    t, v = series.times[mask], series.values[mask]
    if t.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"{t.size} points in window [{t_min}, {t_max}]; need at least {MIN_FIT_POINTS}"
        )
    if np.any(v <= 0) or np.any(t <= 0):
        raise LogDomainError("power-law fit needs positive times and values in the window")
    X = np.log(t)
    Y = np.log(v)
    A = np.column_stack([X, np.ones_like(X)])
    (slope, intercept), *_ = np.linalg.lstsq(A, Y, rcond=None)
    resid = Y - A @ np.array([slope, intercept])
    return FitResult(
        exponent=float(slope),
        prefactor=float(np.exp(intercept)),
        r_squared=_r_squared(Y, resid),
        window=(float(t[0]), float(t[-1])),
        n_points=int(t.size),
    )


def autocorrelation(values, max_lag):
    """Normalized autocovariance at lags ``0..max_lag``.

    Lag products are averaged over the ``N - tau`` available pairs; the
    variance uses all ``N`` samples, so ``rho(0) == 1`` exactly.
    """
    v = np.asarray(values.values if isinstance(values, SeriesRecord) else values, dtype=float)
    n = v.size
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    if n <= max_lag + 10:
        raise InsufficientDataError(f"series of length {n} too short for max_lag={max_lag}")
    d = v - v.mean()
    var = float(d @ d) / n
    if var <= 1e-28 * max(1.0, float(v @ v) / n):
        raise DegenerateSeriesError("series has zero variance")
    lags = np.arange(max_lag + 1)
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for tau in range(1, max_lag + 1):
        rho[tau] = float(d[: n - tau] @ d[tau:]) / (n - tau) / var
    return lags, rho


def upper_envelope(rho):
    """Non-increasing envelope: ``env[tau] = max |rho[tau']|`` over ``tau' >= tau``."""
    return np.maximum.accumulate(np.abs(rho)[::-1])[::-1]


@dataclass
class DecayReport:
    lags: np.ndarray
    rho: np.ndarray
    envelope: np.ndarray
    power_law_exponent: float
    power_law_r2: float
    exponential_rate: float
    exponential_r2: float
    mid_lag_max: float
    mid_lag_window: tuple
    metadata: dict = field(default_factory=dict)

    def summary(self):
        return {
            "power_law": {"exponent": self.power_law_exponent, "r_squared": self.power_law_r2},
            "exponential": {"rate": self.exponential_rate, "r_squared": self.exponential_r2},
            "preferred_model": "power_law" if self.power_law_r2 >= self.exponential_r2 else "exponential",
            "mid_lag_max_abs_rho": self.mid_lag_max,
            "mid_lag_window": list(self.mid_lag_window),
            "max_lag": int(self.lags[-1]),
            **self.metadata,
        }


def _line_fit(X, Y):
    A = np.column_stack([X, np.ones_like(X)])
    (slope, intercept), *_ = np.linalg.lstsq(A, Y, rcond=None)
    return float(slope), _r_squared(Y, Y - A @ np.array([slope, intercept]))


def decay_report(orbit, max_lag):
    """Correlogram of an orbit's x-series plus competing power-law and exponential envelope fits.

    Both fits run over lags ``1..max_lag`` on the upper envelope of ``|rho|``.
    The power-law exponent is the log-log slope; the exponential rate is minus
    the semi-log slope. ``mid_lag_max`` is ``max |rho|`` over lags in
    ``[max_lag/4, 3*max_lag/4]``.
    """
    xs = orbit.points[:, 0] if hasattr(orbit, "points") else np.asarray(orbit, dtype=float)
    if xs.size < 10 * max_lag:
        raise InsufficientDataError(f"orbit of length {xs.size} shorter than 10 * max_lag")
    lags, rho = autocorrelation(xs, max_lag)
    env = upper_envelope(rho)
    tau = lags[1:].astype(float)
    log_env = np.log(np.maximum(env[1:], np.finfo(float).tiny))
    pl_slope, pl_r2 = _line_fit(np.log(tau), log_env)
    ex_slope, ex_r2 = _line_fit(tau, log_env)
    lo, hi = max_lag // 4, (3 * max_lag) // 4
    mid = float(np.abs(rho[lo : hi + 1]).max())
    meta = {"observable": "x", "correlation": CORRELATION_DEFINITION}
    if getattr(orbit, "params", None):
        meta["params"] = orbit.params
    return DecayReport(lags, rho, env, pl_slope, pl_r2, -ex_slope, ex_r2, mid, (lo, hi), meta)
