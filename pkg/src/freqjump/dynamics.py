"""Symplectic phase-space dynamics of the frequency-jump protocol.

Quadratures are scaled by the unperturbed frequency, ``q -> sqrt(omega0) q`` and
``p -> p / sqrt(omega0)``, so the ground state has covariance ``I / 2``.  In this
frame free evolution at ``omega0`` is a rotation and a segment spent at
``omega1 = omega0 + delta`` is the exact solution of the shifted Hamiltonian,
which squeezes the state.

All matrices act on column vectors ``(q, p)``; for a product ``A @ B`` the
right factor acts first.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError

VACUUM_COVARIANCE = 0.5 * np.eye(2)


@dataclass(frozen=True)
class ProtocolConfig:
    """Full description of one run of the protocol.

    The total time is split into ``n_jumps`` identical cycles.  Each cycle
    spends ``alpha * total_time / n_jumps`` at the shifted frequency and then
    ``(1 - alpha) * total_time / n_jumps`` back at ``omega0``.
    """

    omega0: float
    delta: float
    alpha: float
    total_time: float
    n_jumps: int = 1

    def __post_init__(self):
        if not np.isfinite(self.omega0) or self.omega0 <= 0:
            raise DomainError(f"omega0 must be positive, got {self.omega0}")
        if not np.isfinite(self.delta) or self.omega0 + self.delta <= 0:
            raise DomainError(
                f"shifted frequency omega0 + delta must be positive, got {self.omega0 + self.delta}"
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not np.isfinite(self.total_time) or self.total_time <= 0:
            raise DomainError(f"total_time must be positive, got {self.total_time}")
        if int(self.n_jumps) != self.n_jumps or self.n_jumps < 1:
            raise DomainError(f"n_jumps must be a positive integer, got {self.n_jumps}")

    @property
    def omega1(self) -> float:
        return self.omega0 + self.delta

    @property
    def eta0(self) -> float:
        """Coupling of the squeezing term, ``(omega1**2 - omega0**2) / (2 omega0)``."""
        return (self.omega1**2 - self.omega0**2) / (2.0 * self.omega0)

    @property
    def jump_duration(self) -> float:
        return self.alpha * self.total_time / self.n_jumps

    @property
    def free_duration(self) -> float:
        return (1.0 - self.alpha) * self.total_time / self.n_jumps

    def replace(self, **changes) -> "ProtocolConfig":
        return dataclasses.replace(self, **changes)

    def segments(self) -> Iterator[tuple[str, float]]:
        """Yield ``(kind, duration)`` for every segment, in time order."""
        for _ in range(self.n_jumps):
            yield "jump", self.jump_duration
            yield "free", self.free_duration


@dataclass(frozen=True)
class Symplectic2:
    """Real 2x2 matrix with unit determinant."""

    m11: float
    m12: float
    m21: float
    m22: float

    @classmethod
    def from_matrix(cls, m) -> "Symplectic2":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "Symplectic2") -> "Symplectic2":
        return Symplectic2.from_matrix(self.matrix @ other.matrix)

    def __pow__(self, n: int) -> "Symplectic2":
        return Symplectic2.from_matrix(np.linalg.matrix_power(self.matrix, n))


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean single-mode Gaussian state, described by its covariance."""

    covariance: np.ndarray

    def __post_init__(self):
        cov = np.array(self.covariance, dtype=float)
        if cov.shape != (2, 2):
            raise ValueError(f"covariance must be 2x2, got shape {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12 * max(1.0, np.abs(cov).max())):
            raise ValueError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)
        # at strong squeezing det is a cancellation of O(tr^2) terms, so allow roundoff
        slack = 16 * np.finfo(float).eps * np.trace(cov) ** 2
        if cov[0, 0] <= 0 or cov[1, 1] <= 0 or np.linalg.det(cov) <= -slack:
            raise ValueError("covariance must be positive definite")
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)

    @property
    def mean(self) -> np.ndarray:
        return np.zeros(2)

    @property
    def det(self) -> float:
        c = self.covariance
        return c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]

    @property
    def purity(self) -> float:
        return 1.0 / (2.0 * np.sqrt(self.det))

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return bool(np.array_equal(self.covariance, other.covariance))


def _check_frequency(name, value):
    if not np.all(np.isfinite(value)) or np.any(np.asarray(value) <= 0):
        raise DomainError(f"{name} must be positive, got {value}")


def _check_duration(t):
    if not np.all(np.isfinite(t)) or np.any(np.asarray(t) < 0):
        raise DomainError(f"duration must be nonnegative, got {t}")


def rotation_matrix(omega0, t) -> np.ndarray:
    """Stack of rotation matrices ``R(omega0 t)`` with shape ``(..., 2, 2)``."""
    theta = np.multiply(omega0, t)
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], -2)


def jump_matrix(omega0, omega1, t) -> np.ndarray:
    """Stack of propagators for time ``t`` at frequency ``omega1``.

    Exact flow of ``H = p**2/2 + omega1**2 q**2/2`` written in quadratures
    scaled by ``omega0``.
    """
    omega0, omega1, t = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (omega0, omega1, t)))
    k = omega0 / omega1
    c, s = np.cos(omega1 * t), np.sin(omega1 * t)
    return np.stack([np.stack([c, k * s], -1), np.stack([-s / k, c], -1)], -2)


def cycle_matrix(omega0, delta, alpha, total_time, n_jumps: int = 1) -> np.ndarray:
    """Propagator of one jump-then-free cycle; broadcasts over array inputs."""
    omega0, delta, alpha, total_time = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (omega0, delta, alpha, total_time))
    )
    tau = alpha * total_time / n_jumps
    t_free = (1.0 - alpha) * total_time / n_jumps
    return rotation_matrix(omega0, t_free) @ jump_matrix(omega0, omega0 + delta, tau)


def schedule_matrix(omega0, delta, alpha, total_time, n_jumps: int = 1) -> np.ndarray:
    return np.linalg.matrix_power(cycle_matrix(omega0, delta, alpha, total_time, n_jumps), n_jumps)


def covariance_matrix(omega0, delta, alpha, total_time, n_jumps: int = 1) -> np.ndarray:
    """Final covariance of the vacuum after the whole schedule, ``M (I/2) M^T``."""
    m = schedule_matrix(omega0, delta, alpha, total_time, n_jumps)
    return 0.5 * m @ np.swapaxes(m, -1, -2)


def rotation_propagator(omega0: float, t: float) -> Symplectic2:
    _check_frequency("omega0", omega0)
    _check_duration(t)
    return Symplectic2.from_matrix(rotation_matrix(omega0, t))


def jump_propagator(omega0: float, omega1: float, t: float) -> Symplectic2:
    _check_frequency("omega0", omega0)
    _check_frequency("omega1", omega1)
    _check_duration(t)
    return Symplectic2.from_matrix(jump_matrix(omega0, omega1, t))


def cycle_propagator(cfg: ProtocolConfig) -> Symplectic2:
    return Symplectic2.from_matrix(
        cycle_matrix(cfg.omega0, cfg.delta, cfg.alpha, cfg.total_time, cfg.n_jumps)
    )


def schedule_propagator(cfg: ProtocolConfig) -> Symplectic2:
    return Symplectic2.from_matrix(
        schedule_matrix(cfg.omega0, cfg.delta, cfg.alpha, cfg.total_time, cfg.n_jumps)
    )


def evolve_vacuum(cfg: ProtocolConfig) -> GaussianState:
    return GaussianState(
        covariance_matrix(cfg.omega0, cfg.delta, cfg.alpha, cfg.total_time, cfg.n_jumps)
    )


def propagator_until(cfg: ProtocolConfig, t: float) -> np.ndarray:
    """Propagator from time 0 to an intermediate time ``0 <= t <= total_time``."""
    if not 0 <= t <= cfg.total_time * (1 + 1e-12):
        raise DomainError(f"t must lie in [0, {cfg.total_time}], got {t}")
    m = np.eye(2)
    remaining = t
    for kind, duration in cfg.segments():
        if remaining <= 0:
            break
        step = min(duration, remaining)
        if kind == "jump":
            m = jump_matrix(cfg.omega0, cfg.omega1, step) @ m
        else:
            m = rotation_matrix(cfg.omega0, step) @ m
        remaining -= step
    return m


def covariance_at(cfg: ProtocolConfig, t: float) -> np.ndarray:
    m = propagator_until(cfg, t)
    return 0.5 * m @ m.T
