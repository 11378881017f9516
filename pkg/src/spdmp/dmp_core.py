"""Euclidean DMP building blocks: phase, radial basis, weight fitting, scalar rollout.

The scalar DMP is integrated with the same explicit Euler ordering as the SPD
variant in :mod:`spdmp.spd_dmp`, so a scalar rollout in log-eigenvalue
coordinates is an exact oracle for diagonal SPD problems.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateActivation, InvalidParameter, RankDeficiency

DEFAULT_ALPHA_Z = 48.0
DEFAULT_BETA_Z = 12.0
DEFAULT_ALPHA_X = 2.0
DEFAULT_N_BASIS = 25
DEFAULT_RIDGE = 1e-8


@dataclass(frozen=True)
class CanonicalSystem:
    alpha_x: float = DEFAULT_ALPHA_X
    tau: float = 1.0

    def __post_init__(self):
        if not self.alpha_x > 0:
            raise InvalidParameter(f"alpha_x must be > 0, got {self.alpha_x}")
        if not self.tau > 0:
            raise InvalidParameter(f"tau must be > 0, got {self.tau}")


@dataclass(frozen=True)
class DmpGains:
    alpha_z: float = DEFAULT_ALPHA_Z
    beta_z: float = DEFAULT_BETA_Z

    def __post_init__(self):
        if not (self.alpha_z > 0 and self.beta_z > 0):
            raise InvalidParameter(f"gains must be positive, got {self.alpha_z}, {self.beta_z}")

    @classmethod
    def critically_damped(cls, alpha_z=DEFAULT_ALPHA_Z):
        return cls(alpha_z, alpha_z / 4.0)


@dataclass(frozen=True, eq=False)
class BasisSet:
    centers: np.ndarray
    widths: np.ndarray

    @property
    def n_basis(self):
        return self.centers.size


def phase(cs, t):
    """Closed-form canonical phase ``exp(-alpha_x t / tau)``; works on arrays."""
    return np.exp(-cs.alpha_x * np.asarray(t, dtype=float) / cs.tau)


def make_basis(n_basis, alpha_x=DEFAULT_ALPHA_X):
    """Gaussian centers spread evenly in time along the phase.

    ``c_i = exp(-alpha_x (i-1)/(N-1))``, ``h_i = 1/(c_{i+1} - c_i)^2`` and the
    last width repeats the one before it.
    """
    if int(n_basis) != n_basis or n_basis < 2:
        raise InvalidParameter(f"number of basis functions must be an integer >= 2, got {n_basis}")
    if not alpha_x > 0:
        raise InvalidParameter(f"alpha_x must be > 0, got {alpha_x}")
    n_basis = int(n_basis)
    c = np.exp(-alpha_x * np.arange(n_basis) / (n_basis - 1))
    h = np.empty(n_basis)
    h[:-1] = 1.0 / np.diff(c) ** 2
    h[-1] = h[-2]
    c.setflags(write=False)
    h.setflags(write=False)
    return BasisSet(c, h)


def activations(basis, x):
    """Raw activations, shape ``x.shape + (N,)``."""
    x = np.asarray(x, dtype=float)[..., None]
    return np.exp(-basis.widths * (x - basis.centers) ** 2)


def _features(basis, x):
    # normalized activations times the phase: f(x) = features(x) @ w
    psi = activations(basis, x)
    total = psi.sum(axis=-1, keepdims=True)
    if np.any(total == 0.0):
        bad = np.atleast_1d(np.asarray(x, dtype=float))[np.atleast_1d(total[..., 0] == 0.0)]
        raise DegenerateActivation(f"all basis activations underflow at phase {bad[0]:.6g}")
    return psi / total * np.asarray(x, dtype=float)[..., None]


def forcing_value(basis, weights, x):
    """Forcing term ``sum(w_i psi_i(x)) / sum(psi_i(x)) * x``.

    ``weights`` may be ``(N,)`` for a scalar system or ``(N, n)`` for ``n``
    dimensions sharing the phase.
    """
    return _features(basis, x) @ np.asarray(weights, dtype=float)


def fit_weights(basis, phases, targets, ridge=DEFAULT_RIDGE):
    """Ridge least-squares forcing weights.

    Parameters
    ----------
    basis : BasisSet
    phases : array_like, shape (L,)
    targets : array_like, shape (L,) or (L, n)
        One column per output dimension; columns are solved independently
        (they share the design matrix).
    ridge : float
        Tikhonov regularizer added to the normal equations.

    Returns
    -------
    ndarray, shape (N,) or (N, n)
    """
    phases = np.asarray(phases, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if phases.ndim != 1 or targets.shape[0] != phases.size:
        raise InvalidParameter("phases must be 1-D and match the number of targets")
    if phases.size < basis.n_basis:
        raise RankDeficiency(f"{phases.size} samples cannot determine {basis.n_basis} weights")
    Phi = _features(basis, phases)
    A = Phi.T @ Phi + ridge * np.eye(basis.n_basis)
    if np.linalg.cond(A) > 1e14:
        raise RankDeficiency("normal equations are singular; add samples or increase the ridge")
    return np.linalg.solve(A, Phi.T @ targets)


def finite_differences(values, dt):
    """Backward first difference (zero at the first sample) and forward second
    difference with the last value held, along axis 0."""
    values = np.asarray(values, dtype=float)
    vel = np.zeros_like(values)
    vel[1:] = np.diff(values, axis=0) / dt
    acc = np.empty_like(values)
    acc[:-1] = np.diff(vel, axis=0) / dt
    acc[-1] = acc[-2]
    return vel, acc


def forcing_targets(times, y, gains, cs, goal=None):
    """Forcing values that make the DMP reproduce the samples ``y``.

    Uses the scaled velocity ``z = tau * y'``:
    ``f = tau^2 y'' - alpha_z (beta_z (g - y) - tau y')``.
    """
    times = np.asarray(times, dtype=float)
    y = np.asarray(y, dtype=float)
    dt = times[1] - times[0]
    g = y[-1] if goal is None else goal
    vel, acc = finite_differences(y, dt)
    tau = cs.tau
    return tau * tau * acc - gains.alpha_z * (gains.beta_z * (g - y) - tau * vel)


@dataclass(frozen=True, eq=False)
class ScalarDmp:
    gains: DmpGains
    basis: BasisSet
    canonical: CanonicalSystem
    weights: np.ndarray
    y0: float
    g: float


def train_scalar(times, y, n_basis=DEFAULT_N_BASIS, gains=None, alpha_x=DEFAULT_ALPHA_X,
                 ridge=DEFAULT_RIDGE):
    """Fit a one-dimensional DMP to uniformly sampled data."""
    times = np.asarray(times, dtype=float)
    y = np.asarray(y, dtype=float)
    if times.size < 3:
        raise InvalidParameter("need at least 3 samples")
    gains = gains or DmpGains()
    cs = CanonicalSystem(alpha_x, times[-1] - times[0])
    basis = make_basis(n_basis, alpha_x)
    targets = forcing_targets(times, y, gains, cs)
    w = fit_weights(basis, phase(cs, times - times[0]), targets, ridge)
    return ScalarDmp(gains, basis, cs, w, float(y[0]), float(y[-1]))


def scalar_dmp_rollout(dmp, dt, T, y0=None, g=None):
    """Integrate the DMP with explicit Euler.

    Returns an array with columns ``(t, y, z)``; row ``k`` is time ``k*dt``.
    """
    if not dt > 0 or not T > 0:
        raise InvalidParameter("dt and T must be positive")
    y = dmp.y0 if y0 is None else y0
    g = dmp.g if g is None else g
    a, b, tau = dmp.gains.alpha_z, dmp.gains.beta_z, dmp.canonical.tau
    n_steps = int(round(T / dt))
    out = np.empty((n_steps + 1, 3))
    z = 0.0
    for k in range(n_steps + 1):
        t = k * dt
        out[k] = t, y, z
        if k == n_steps:
            break
        f = forcing_value(dmp.basis, dmp.weights, phase(dmp.canonical, t))
        zdot = (a * (b * (g - y) - z) + f) / tau
        y = y + z * dt / tau
        z = z + zdot * dt
    return out
