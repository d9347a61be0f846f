"""Optimization of the squeezing time fraction and derived sweeps."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .estimation import FD_RESIDUAL_TOL, qfi_curve
from .squeezing import alpha_max

DEFAULT_GRID = 512
MIN_GRID = 64
# grid points per oscillation of Q(alpha); oscillations have period ~ pi / (omega T) in alpha
POINTS_PER_PERIOD = 16
GOLDEN_TOL = 1e-8
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AlphaScan:
    omega0: float
    delta: float
    total_time: float
    n_jumps: int
    alphas: np.ndarray
    qfi: np.ndarray
    qsnr: np.ndarray
    fd_residual: np.ndarray

    @property
    def warn(self) -> np.ndarray:
        return self.fd_residual > FD_RESIDUAL_TOL


@dataclass(frozen=True)
class OptimizationResult:
    omega0: float
    delta: float
    total_time: float
    n_jumps: int
    alpha_opt: float
    q_opt: float
    alpha_max_marker: float
    boundary: bool
    degenerate: bool = False
    ratio_rho: float | None = None
    grid_size: int = DEFAULT_GRID


def grid_size_for(omega0: float, delta: float, total_time: float, minimum: int = DEFAULT_GRID) -> int:
    fastest = max(omega0, omega0 + delta)
    return max(minimum, math.ceil(POINTS_PER_PERIOD * fastest * total_time / math.pi) + 1)


def _check(omega0, delta, total_time, n_jumps):
    if omega0 <= 0 or omega0 + delta <= 0:
        raise DomainError(f"invalid frequencies omega0={omega0}, delta={delta}")
    if total_time <= 0:
        raise DomainError(f"total_time must be positive, got {total_time}")
    if int(n_jumps) != n_jumps or n_jumps < 1:
        raise DomainError(f"n_jumps must be a positive integer, got {n_jumps}")


def qsnr_at(omega0, delta, total_time, n_jumps, alphas):
    g, residual, _ = qfi_curve(omega0, delta, total_time, n_jumps, alphas)
    return omega0 * omega0 * g, residual


def scan_alpha(
    omega0: float, delta: float, total_time: float, n_jumps: int = 1, grid_size: int = DEFAULT_GRID
) -> AlphaScan:
    """QSNR on a uniform grid of ``alpha`` in [0, 1], endpoints included."""
    _check(omega0, delta, total_time, n_jumps)
    if grid_size < MIN_GRID:
        raise DomainError(f"grid_size must be at least {MIN_GRID}, got {grid_size}")
    alphas = np.linspace(0.0, 1.0, grid_size)
    if delta == 0:
        zeros = np.zeros(grid_size)
        return AlphaScan(omega0, delta, total_time, n_jumps, alphas, zeros, zeros, zeros.copy())
    g, residual, _ = qfi_curve(omega0, delta, total_time, n_jumps, alphas)
    return AlphaScan(
        omega0, delta, total_time, n_jumps, alphas, g, omega0 * omega0 * g, residual
    )


def golden_section_max(f, a: float, b: float, tol: float = GOLDEN_TOL):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def optimize_alpha(
    omega0: float,
    delta: float,
    total_time: float,
    n_jumps: int = 1,
    grid_size: int | None = None,
) -> OptimizationResult:
    """Maximize the QSNR over ``alpha``: coarse scan, then golden-section refinement.

    The grid widens automatically when ``(omega0 + delta) T`` makes Q(alpha)
    oscillate quickly.  Equal maxima resolve to the smallest ``alpha``.
    """
    _check(omega0, delta, total_time, n_jumps)
    if grid_size is None:
        grid_size = grid_size_for(omega0, delta, total_time)
    marker = alpha_max(omega0, delta, total_time).value
    if delta == 0:
        return OptimizationResult(
            omega0, delta, total_time, n_jumps, alpha_opt=0.0, q_opt=0.0,
            alpha_max_marker=marker, boundary=True, degenerate=True, grid_size=grid_size,
        )
    scan = scan_alpha(omega0, delta, total_time, n_jumps, grid_size)
    i = int(np.argmax(scan.qsnr))
    best_alpha, best_q = float(scan.alphas[i]), float(scan.qsnr[i])

    def q(a):
        return float(qsnr_at(omega0, delta, total_time, n_jumps, np.array(a))[0])

    lo = float(scan.alphas[max(i - 1, 0)])
    hi = float(scan.alphas[min(i + 1, grid_size - 1)])
    a_ref, q_ref = golden_section_max(q, lo, hi)
    if q_ref > best_q:
        best_alpha, best_q = a_ref, q_ref
    return OptimizationResult(
        omega0, delta, total_time, n_jumps,
        alpha_opt=best_alpha,
        q_opt=best_q,
        alpha_max_marker=marker,
        boundary=best_alpha in (0.0, 1.0),
        degenerate=False,
        grid_size=grid_size,
    )


def rho_n(omega0: float, delta: float, total_time: float, n_jumps: int) -> OptimizationResult:
    """Optimized n-cycle QSNR relative to the optimized single-jump QSNR."""
    if delta == 0:
        raise DomainError("rho_n is undefined without detuning")
    single = optimize_alpha(omega0, delta, total_time, 1)
    if n_jumps == 1:
        return replace(single, ratio_rho=1.0)
    multi = optimize_alpha(omega0, delta, total_time, n_jumps)
    return replace(multi, ratio_rho=multi.q_opt / single.q_opt)


def scaling_fit(xs, qs) -> float:
    """Least-squares slope of ``log q`` against ``log x``."""
    xs = np.asarray(xs, dtype=float)
    qs = np.asarray(qs, dtype=float)
    if len(xs) < 8 or len(xs) != len(qs):
        raise DomainError("scaling_fit needs at least 8 paired samples")
    keep = (qs > 0) & (xs > 0)
    if not keep.all():
        warnings.warn(f"dropping {int((~keep).sum())} nonpositive samples from the fit", stacklevel=2)
    if keep.sum() < 2:
        raise DomainError("fewer than two positive samples left to fit")
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(qs[keep]), 1)
    return float(slope)


def scaling_sweep(axis: str, values, omega0: float, delta: float = 1.0, total_time: float = 1.0, n_jumps: int = 1):
    """Maximized QSNR along ``axis`` ("T" or "delta"); returns ``(q_opts, slope)``."""
    q_opts = []
    for v in values:
        if axis == "T":
            res = optimize_alpha(omega0, delta, float(v), n_jumps)
        elif axis == "delta":
            res = optimize_alpha(omega0, float(v), total_time, n_jumps)
        else:
            raise DomainError(f"axis must be 'T' or 'delta', got {axis!r}")
        q_opts.append(res.q_opt)
    q_opts = np.array(q_opts)
    return q_opts, scaling_fit(values, q_opts)
