"""Synthetic rotating-stiffness demonstrations from a planar mass-spring-damper."""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter
from .manifold import eigh_spd, symmetrize
from .spd_dmp import SpdDemonstration


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate_stiffness(K, theta):
    """``R(theta)^T K R(theta)``."""
    R = rotation(theta)
    return symmetrize(R.T @ K @ R)


def minimum_jerk(s):
    """Quintic 10-15-6 profile on ``s`` in [0, 1]; zero velocity and acceleration at both ends."""
    s = np.clip(s, 0.0, 1.0)
    return s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)


THETA_PROFILES = {
    "minimum-jerk": minimum_jerk,
    "linear": lambda s: np.clip(s, 0.0, 1.0),
}


def _default_pulses():
    return ((0.5, 1.5, (20.0, 0.0)), (2.0, 3.0, (0.0, 20.0)))


@dataclass(frozen=True, eq=False)
class MsdScenario:
    """Planar mass-spring-damper whose stiffness ellipsoid turns by ``theta_end``.

    ``force_pulses`` is a tuple of ``(t_start, t_end, (fx, fy))``; the external
    force is the sum of the pulses active at ``t``.
    """

    K0: np.ndarray = field(default_factory=lambda: np.diag([500.0, 100.0]))
    theta_end: float = np.pi / 2
    theta_profile: str = "minimum-jerk"
    mass: float = 1.0
    damping: np.ndarray = field(default_factory=lambda: np.diag([50.0, 50.0]))
    force_pulses: tuple = field(default_factory=_default_pulses)
    duration: float = 4.0
    dt: float = 0.01

    def __post_init__(self):
        K0 = np.asarray(self.K0, dtype=float)
        if K0.shape != (2, 2):
            raise InvalidParameter("K0 must be 2x2")
        w, _ = eigh_spd(K0, "K0")
        if np.isclose(w[0], w[1], rtol=1e-9):
            raise InvalidParameter("K0 must be anisotropic for the rotation to be observable")
        eigh_spd(np.asarray(self.damping, dtype=float), "damping")
        if not self.dt > 0:
            raise InvalidParameter(f"dt must be > 0, got {self.dt}")
        if not self.duration > 0:
            raise InvalidParameter(f"duration must be > 0, got {self.duration}")
        if not self.mass > 0:
            raise InvalidParameter(f"mass must be > 0, got {self.mass}")
        if self.theta_profile not in THETA_PROFILES:
            raise InvalidParameter(f"unknown theta profile {self.theta_profile!r}")
        if int(round(self.duration / self.dt)) < 2:
            raise InvalidParameter("duration must span at least two steps")
        object.__setattr__(self, "K0", K0)
        object.__setattr__(self, "damping", np.asarray(self.damping, dtype=float))

    @property
    def times(self):
        return np.arange(int(round(self.duration / self.dt)) + 1) * self.dt

    def theta(self, t):
        return self.theta_end * THETA_PROFILES[self.theta_profile](np.asarray(t) / self.duration)

    def force(self, t):
        f = np.zeros(2)
        for start, end, value in self.force_pulses:
            if start <= t < end:
                f += value
        return f


def gen_stiffness_demo(sc):
    times = sc.times
    points = np.array([rotate_stiffness(sc.K0, th) for th in sc.theta(times)])
    return SpdDemonstration(times, points)


def simulate_msd(sc, K_profile):
    """Integrate ``m x'' = f(t) - K(t) x - D x'`` from rest.

    Semi-implicit Euler: velocity first, then position with the new velocity.
    ``K_profile`` is a sequence of stiffness matrices, one per sample time.

    Returns
    -------
    times : (T,) ndarray
    pos, vel : (T, 2) ndarrays
    """
    times = sc.times
    K_profile = np.asarray(K_profile, dtype=float)
    if K_profile.shape != (times.size, 2, 2):
        raise InvalidParameter(f"stiffness profile must have shape {(times.size, 2, 2)}")
    pos = np.zeros((times.size, 2))
    vel = np.zeros((times.size, 2))
    for l in range(times.size - 1):
        acc = (sc.force(times[l]) - K_profile[l] @ pos[l] - sc.damping @ vel[l]) / sc.mass
        vel[l + 1] = vel[l] + sc.dt * acc
        pos[l + 1] = pos[l] + sc.dt * vel[l + 1]
    return times, pos, vel
