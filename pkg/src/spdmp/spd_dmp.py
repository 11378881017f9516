"""DMPs whose state lives on the SPD manifold.

Training moves every finite-difference velocity of a demonstration into the
tangent space of its first sample, where the DMP transformation system runs in
Mandel coordinates.  Reproduction integrates that velocity back onto the
manifold with the exponential map, so every intermediate point stays SPD.
"""
import logging
from dataclasses import dataclass

import numpy as np

from . import manifold as mf
from .dmp_core import (
    DEFAULT_ALPHA_X,
    DEFAULT_N_BASIS,
    DEFAULT_RIDGE,
    BasisSet,
    CanonicalSystem,
    DmpGains,
    fit_weights,
    forcing_value,
    make_basis,
    phase,
)
from .errors import DefinitenessError, InvalidParameter

log = logging.getLogger(__name__)

UNIFORM_DT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpdDemonstration:
    """Uniformly sampled sequence of SPD matrices, ``points[l]`` at ``times[l]``."""

    times: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = np.asarray(self.points, dtype=float)
        if times.ndim != 1 or times.size < 3:
            raise InvalidParameter("a demonstration needs at least 3 samples")
        if points.ndim != 3 or points.shape[0] != times.size or points.shape[1] != points.shape[2]:
            raise InvalidParameter(f"points must have shape (T, m, m), got {points.shape}")
        steps = np.diff(times)
        if np.any(steps <= 0):
            raise InvalidParameter("times must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > UNIFORM_DT_TOL:
            raise InvalidParameter("times must be uniformly spaced")
        for l, X in enumerate(points):
            try:
                mf.eigh_spd(X, f"sample {l}")
            except DefinitenessError as exc:
                exc.step = l
                raise
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    @property
    def duration(self):
        return float(self.times[-1] - self.times[0])

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.times.size


@dataclass(frozen=True, eq=False)
class PreprocessedDemo:
    """Tangent-space derivatives of a demonstration, in Mandel form.

    ``sigma[l]`` is the velocity ``Log_{X_{l-1}}(X_l)/dt`` transported to the
    anchor ``X_1``; ``sigma_dot`` its forward difference.  Neither is scaled
    by ``tau``.
    """

    times: np.ndarray
    phases: np.ndarray
    points: np.ndarray
    sigma: np.ndarray
    sigma_dot: np.ndarray
    anchor: np.ndarray
    goal: np.ndarray
    tau: float


def preprocess(demo, alpha_x=DEFAULT_ALPHA_X):
    X = demo.points
    dt = demo.dt
    anchor = X[0]
    n = mf.mandel_dim(demo.dim)
    sigma = np.zeros((len(demo), n))
    for l in range(1, len(demo)):
        if np.array_equal(X[l - 1], X[l]):
            log.info("samples %d and %d coincide; velocity set to zero", l - 1, l)
            continue
        velocity = mf.log_map(X[l - 1], X[l]) / dt
        sigma[l] = mf.mandel_vec(mf.parallel_transport(X[l - 1], anchor, velocity))
    sigma_dot = np.empty_like(sigma)
    sigma_dot[:-1] = np.diff(sigma, axis=0) / dt
    sigma_dot[-1] = sigma_dot[-2]
    cs = CanonicalSystem(alpha_x, demo.duration)
    rel_t = demo.times - demo.times[0]
    return PreprocessedDemo(rel_t, phase(cs, rel_t), X, sigma, sigma_dot, anchor, X[-1], demo.duration)


def goal_term(X, goal, anchor):
    """``vec(B_{X -> anchor}(Log_X(goal)))``: the attractor pull seen from the anchor."""
    if np.array_equal(X, goal):
        return np.zeros(mf.mandel_dim(X.shape[0]))
    return mf.mandel_vec(mf.parallel_transport(X, anchor, mf.log_map(X, goal)))


def compute_forcing_targets(pre, gains, cs):
    """Forcing values per sample, shape ``(T, n)``.

    The transformation system runs on the scaled velocity ``tau * sigma``,
    hence ``target = tau^2 sigma_dot - alpha_z (beta_z goal_term - tau sigma)``.
    """
    tau = cs.tau
    pull = np.array([goal_term(X, pre.goal, pre.anchor) for X in pre.points])
    return tau * tau * pre.sigma_dot - gains.alpha_z * (gains.beta_z * pull - tau * pre.sigma)


def _matrix(value, name):
    A = np.asarray(value, dtype=float)
    mf.eigh_spd(A, name)
    return A


@dataclass(frozen=True, eq=False)
class SpdDmpModel:
    gains: DmpGains
    canonical: CanonicalSystem
    basis: BasisSet
    weights: np.ndarray
    anchor: np.ndarray
    goal: np.ndarray
    start: np.ndarray
    alpha_g: float
    dt: float

    def __post_init__(self):
        for name in ("anchor", "goal", "start"):
            object.__setattr__(self, name, _matrix(getattr(self, name), name))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if not np.all(np.isfinite(self.weights)):
            raise InvalidParameter("weights must be finite")
        if self.weights.shape != (self.basis.n_basis, mf.mandel_dim(self.m)):
            raise InvalidParameter(f"weights have shape {self.weights.shape}, "
                                   f"expected {(self.basis.n_basis, mf.mandel_dim(self.m))}")
        if self.goal.shape != self.anchor.shape or self.start.shape != self.anchor.shape:
            raise InvalidParameter("anchor, goal and start must have the same size")
        if not self.alpha_g > 0 or not self.dt > 0:
            raise InvalidParameter("alpha_g and dt must be positive")

    @property
    def m(self):
        return self.anchor.shape[0]

    @property
    def n(self):
        return self.weights.shape[1]

    @property
    def tau(self):
        return self.canonical.tau

    def to_dict(self):
        return {
            "m": self.m,
            "n": self.n,
            "tau": self.tau,
            "dt": self.dt,
            "alpha_z": self.gains.alpha_z,
            "beta_z": self.gains.beta_z,
            "alpha_x": self.canonical.alpha_x,
            "alpha_g": self.alpha_g,
            "N": self.basis.n_basis,
            "centers": self.basis.centers.tolist(),
            "widths": self.basis.widths.tolist(),
            "weights": self.weights.tolist(),
            "anchor": self.anchor.tolist(),
            "goal": self.goal.tolist(),
            "start": self.start.tolist(),
            "mandel_convention": mf.MANDEL_CONVENTION,
        }

    @classmethod
    def from_dict(cls, d):
        convention = d.get("mandel_convention", mf.MANDEL_CONVENTION)
        if convention != mf.MANDEL_CONVENTION:
            raise InvalidParameter(f"unsupported Mandel convention {convention!r}")
        centers = np.array(d["centers"], dtype=float)
        widths = np.array(d["widths"], dtype=float)
        if centers.size != d["N"] or widths.size != d["N"]:
            raise InvalidParameter("centers/widths length does not match N")
        weights = np.array(d["weights"], dtype=float).reshape(d["N"], d["n"])
        model = cls(
            gains=DmpGains(d["alpha_z"], d["beta_z"]),
            canonical=CanonicalSystem(d["alpha_x"], d["tau"]),
            basis=BasisSet(centers, widths),
            weights=weights,
            anchor=d["anchor"],
            goal=d["goal"],
            start=d["start"],
            alpha_g=d["alpha_g"],
            dt=d["dt"],
        )
        if model.m != d["m"]:
            raise InvalidParameter("matrix size does not match m")
        return model


def train(demo, n_basis=DEFAULT_N_BASIS, gains=None, alpha_x=DEFAULT_ALPHA_X, alpha_g=None,
          ridge=DEFAULT_RIDGE):
    """Learn an SPD-DMP from a single demonstration.

    ``alpha_g`` defaults to ``alpha_z / 2``.
    """
    gains = gains or DmpGains()
    alpha_g = gains.alpha_z / 2.0 if alpha_g is None else alpha_g
    pre = preprocess(demo, alpha_x)
    cs = CanonicalSystem(alpha_x, pre.tau)
    basis = make_basis(n_basis, alpha_x)
    targets = compute_forcing_targets(pre, gains, cs)
    weights = fit_weights(basis, pre.phases, targets, ridge)
    return SpdDmpModel(gains, cs, basis, weights, pre.anchor, pre.goal, demo.points[0],
                       alpha_g, demo.dt)


@dataclass(frozen=True, eq=False)
class ReproductionState:
    t: float
    X: np.ndarray
    sigma: np.ndarray
    g: np.ndarray


def initial_state(model, start=None, goal=None):
    X = model.start if start is None else _matrix(start, "start")
    g = model.goal if goal is None else _matrix(goal, "goal")
    if X.shape != model.anchor.shape or g.shape != model.anchor.shape:
        raise InvalidParameter("start/goal size does not match the model")
    return ReproductionState(0.0, X, np.zeros(model.n), g)


def _abort(exc, index):
    detail = "non-finite values" if exc.min_eigenvalue is None else \
        f"min eigenvalue {exc.min_eigenvalue:.3e}"
    return DefinitenessError(f"rollout left the SPD cone at step {index} ({detail})",
                             min_eigenvalue=exc.min_eigenvalue, step=index)


def step(model, state, dt, tau=None, index=None):
    """Advance one explicit Euler step of the SPD transformation system.

    The goal pull is evaluated at the current point ``state.X``.  The point is
    moved with the pre-update velocity, transported from the anchor to ``X``.
    The new point is symmetrized and checked for definiteness; a failure
    raises :class:`DefinitenessError` carrying ``index`` as ``step``.
    """
    if not dt > 0:
        raise InvalidParameter("dt must be positive")
    tau = model.tau if tau is None else tau
    X, sigma = state.X, state.sigma
    try:
        x = phase(CanonicalSystem(model.canonical.alpha_x, tau), state.t)
        f = forcing_value(model.basis, model.weights, x)
        pull = goal_term(X, state.g, model.anchor)
        scaled_accel = model.gains.alpha_z * (model.gains.beta_z * pull - sigma) + f
        velocity = mf.parallel_transport(model.anchor, X, mf.mandel_mat(sigma))
        X_next = mf.symmetrize(mf.exp_map(X, velocity * (dt / tau)))
        mf.eigh_spd(X_next)
    except DefinitenessError as exc:
        raise _abort(exc, index) from exc
    sigma_next = sigma + scaled_accel * (dt / tau)
    return ReproductionState(state.t + dt, X_next, sigma_next, state.g)


@dataclass(frozen=True)
class GoalSwitch:
    """Replace the goal at ``t_switch`` seconds, converging at rate ``alpha_g``."""

    t_switch: float
    new_goal: np.ndarray
    alpha_g: float = None


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    points: np.ndarray
    goals: np.ndarray

    def __len__(self):
        return self.times.size


def _advance_goal(g, g_new, rate):
    # bitwise-equal goals are left untouched so no-op switches stay exact
    if np.array_equal(g, g_new):
        return g
    return mf.exp_map(g, rate * mf.log_map(g, g_new))


def reproduce(model, start=None, goal=None, dt=None, duration=None, goal_switch=None, tau=None):
    """Roll the model out from ``start`` towards ``goal``.

    Parameters
    ----------
    dt, duration : float, optional
        Default to the demonstration sampling step and duration.
    goal_switch : GoalSwitch, optional
        From ``t_switch`` on, the goal follows ``tau g' = alpha_g Log_g(g_new)``.
    tau : float, optional
        Override the temporal scale.  Weights are not renormalized, so this is
        experimental.
    """
    dt = model.dt if dt is None else float(dt)
    duration = model.tau if duration is None else float(duration)
    tau = model.tau if tau is None else float(tau)
    if not dt > 0 or not duration > 0 or not tau > 0:
        raise InvalidParameter("dt, duration and tau must be positive")
    state = initial_state(model, start, goal)
    if goal_switch is not None:
        new_goal = _matrix(goal_switch.new_goal, "new goal")
        if new_goal.shape != state.g.shape:
            raise InvalidParameter("new goal size does not match the model")
        alpha_g = model.alpha_g if goal_switch.alpha_g is None else goal_switch.alpha_g
        goal_rate = alpha_g * dt / tau
    n_steps = int(round(duration / dt))
    times = np.arange(n_steps + 1) * dt
    points = np.empty((n_steps + 1, model.m, model.m))
    goals = np.empty_like(points)
    for k in range(n_steps + 1):
        points[k] = state.X
        goals[k] = state.g
        if k == n_steps:
            break
        state = step(model, state, dt, tau, index=k + 1)
        if goal_switch is not None and times[k] >= goal_switch.t_switch:
            state = ReproductionState(state.t, state.X, state.sigma,
                                      _advance_goal(state.g, new_goal, goal_rate))
    return Trajectory(times, points, goals)
