"""Squeezing amplitude and phase generated by a frequency jump.

Convention: a squeezed vacuum with amplitude ``r`` and phase ``phi`` is
``S(xi)|0>`` with ``xi = r exp(i phi)`` and ``S(xi) = exp[(xi* a^2 - xi a^dag^2)/2]``.
Its covariance is ``(cosh 2r I - sinh 2r (cos phi Z + sin phi X)) / 2`` so that
``phi = 0`` squeezes the position quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import GaussianState
from .errors import DomainError, NonPureStateError


@dataclass(frozen=True)
class SqueezeParams:
    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.r >= 0:
            raise DomainError(f"squeezing amplitude must be nonnegative, got {self.r}")

    def covariance(self) -> np.ndarray:
        return squeezed_covariance(self.r, self.phi)

    def state(self) -> GaussianState:
        return GaussianState(self.covariance())


@dataclass(frozen=True)
class ResourceAccount:
    nbar: float
    var_n: float


@dataclass(frozen=True)
class AlphaMax:
    value: float
    clamped: bool
    unclamped: float


def squeezed_covariance(r, phi=0.0) -> np.ndarray:
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    return 0.5 * np.array(
        [
            [ch - sh * np.cos(phi), -sh * np.sin(phi)],
            [-sh * np.sin(phi), ch + sh * np.cos(phi)],
        ]
    )


def squeeze_params(omega0: float, omega1: float, t: float) -> SqueezeParams:
    """Amplitude and phase after spending time ``t`` at ``omega1``, starting from vacuum.

    The closed form is multiplied through by ``|sin(omega1 t)|`` so the
    ``cot`` singularity at ``omega1 t = k pi`` never appears; there ``r = 0``.
    """
    if omega0 <= 0 or omega1 <= 0:
        raise DomainError(f"frequencies must be positive, got {omega0}, {omega1}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    s, c = math.sin(omega1 * t), math.cos(omega1 * t)
    w0s, w1s = omega0 * omega0, omega1 * omega1
    num = abs(w0s - w1s) * abs(s)
    den = math.hypot((w0s + w1s) * s, 2.0 * omega0 * omega1 * c)
    r = math.atanh(num / den)
    if r == 0.0:
        return SqueezeParams(0.0, 0.0)
    sign = 1.0 if omega1 >= omega0 else -1.0
    phi = math.atan2(sign * 2.0 * omega0 * omega1 * c * s, sign * (w0s + w1s) * s * s)
    return SqueezeParams(r, _principal(phi))


def _principal(phi: float) -> float:
    # atan2 returns [-pi, pi]; fold -pi onto pi
    return math.pi if phi == -math.pi else phi


def r_max(omega0: float, delta: float) -> float:
    """Largest amplitude reachable by a single jump, ``|log(1 + delta/omega0)|``."""
    if omega0 <= 0 or omega0 + delta <= 0:
        raise DomainError(f"invalid frequencies omega0={omega0}, delta={delta}")
    return abs(math.log1p(delta / omega0))


def alpha_max(omega0: float, delta: float, total_time: float) -> AlphaMax:
    """Time fraction that maximizes the single-jump squeezing amplitude."""
    if omega0 <= 0 or omega0 + delta <= 0 or total_time <= 0:
        raise DomainError("alpha_max needs positive frequencies and total time")
    raw = 0.5 * math.pi / (total_time * (omega0 + delta))
    value = min(max(raw, 0.0), 1.0)
    return AlphaMax(value=value, clamped=value != raw, unclamped=raw)


def nbar_from_squeeze(sp: SqueezeParams) -> ResourceAccount:
    nbar = math.sinh(sp.r) ** 2
    return ResourceAccount(nbar=nbar, var_n=2.0 * nbar * (nbar + 1.0))


def extract_squeeze(state: GaussianState | np.ndarray, tol: float = 1e-8) -> SqueezeParams:
    """Invert the squeezed-vacuum parametrization for a pure zero-mean state."""
    cov = state.covariance if isinstance(state, GaussianState) else np.asarray(state, dtype=float)
    det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
    scale = max(1.0, float(np.trace(cov)) ** 2)
    if abs(4.0 * det - 1.0) > tol * scale:
        raise NonPureStateError(f"state is not pure: det(covariance) = {det}, expected 0.25")
    diff = cov[1, 1] - cov[0, 0]
    off = -2.0 * cov[0, 1]
    sh = math.hypot(diff, off)
    r = 0.5 * math.asinh(sh)
    if r == 0.0:
        return SqueezeParams(0.0, 0.0)
    return SqueezeParams(r, _principal(math.atan2(off, diff)))
