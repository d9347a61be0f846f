"""Truncated Fock-space model of the protocol, used to cross-check the Gaussian route.

States are amplitude vectors on the number basis of the ``omega0`` oscillator.
Both Hamiltonians conserve parity, so by default evolution runs in the
even-number sector and is embedded back into the full vector afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal, expm

from ._fd import central_derivative, default_step
from .dynamics import ProtocolConfig
from .errors import DomainError, TruncationError
from .squeezing import SqueezeParams

MIN_CUTOFF = 64
MAX_CUTOFF = 16384
TAIL_TOL = 1e-12
LEAK_TOL = 1e-12
# above this many basis states the dense Pade exponential gets slow
EXPM_MAX_DIM = 257


@dataclass(frozen=True, eq=False)
class FockVector:
    coeffs: np.ndarray

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def mean_number(self) -> float:
        k = np.arange(len(self.coeffs))
        return float(np.sum(k * np.abs(self.coeffs) ** 2))

    def number_variance(self) -> float:
        k = np.arange(len(self.coeffs))
        p = np.abs(self.coeffs) ** 2
        mean = np.sum(k * p)
        return float(np.sum(k * k * p) - mean * mean)

    def covariance(self) -> np.ndarray:
        """Symmetrized second moments of the scaled quadratures."""
        c = self.coeffs
        k = np.arange(len(c) - 2)
        a2 = np.sum(np.conj(c[k]) * np.sqrt((k + 1.0) * (k + 2.0)) * c[k + 2])
        n = self.mean_number()
        return np.array(
            [[a2.real + n + 0.5, a2.imag], [a2.imag, n + 0.5 - a2.real]]
        )

    def overlap(self, other: "FockVector") -> complex:
        m = min(len(self.coeffs), len(other.coeffs))
        return complex(np.vdot(self.coeffs[:m], other.coeffs[:m]))


def _even_weights(r: float, m_max: int) -> np.ndarray:
    """``|c_{2m}|**2`` for m = 0..m_max of the squeezed vacuum, by recurrence."""
    t2 = math.tanh(r) ** 2
    m = np.arange(m_max)
    ratios = t2 * (2 * m + 1.0) / (2 * m + 2.0)
    w = np.empty(m_max + 1)
    w[0] = 1.0 / math.cosh(r)
    w[1:] = w[0] * np.cumprod(ratios)
    return w


def _tail_bound(r: float, m_first: int) -> float:
    """Upper bound on ``sum_{m >= m_first} |c_{2m}|**2``; successive terms shrink by < tanh(r)**2."""
    if r == 0.0:
        return 0.0 if m_first > 0 else 1.0
    t2 = math.tanh(r) ** 2
    return float(_even_weights(r, m_first)[-1]) / (1.0 - t2)


def required_cutoff(r: float, tol: float = 1e-14, minimum: int = MIN_CUTOFF) -> int:
    """Smallest even cutoff N (at least ``minimum``) leaving less than ``tol`` of the norm above N."""
    if r == 0.0:
        return minimum
    t2 = math.tanh(r) ** 2
    # crude start from the geometric bound, then walk up
    m = max(1, int(math.log(tol * (1 - t2)) / math.log(t2)) // 2) if t2 > 0 else 1
    while _tail_bound(r, m + 1) >= tol:
        m += max(1, m // 8)
    while m > 1 and _tail_bound(r, m) < tol:
        m -= 1
    return max(minimum, 2 * m)


def squeezed_vacuum_coeffs(sp: SqueezeParams, N: int | None = None) -> FockVector:
    """Number-basis amplitudes of ``S(r e^{i phi})|0>`` with ``c_0 > 0``."""
    if N is None:
        N = required_cutoff(sp.r)
    if N < 2 or N % 2:
        raise DomainError(f"cutoff must be an even integer >= 2, got {N}")
    m_max = N // 2
    # the top two stored even levels and everything above must be negligible
    tail = _tail_bound(sp.r, m_max - 1)
    if tail >= TAIL_TOL:
        need = required_cutoff(sp.r, tol=TAIL_TOL, minimum=2) + 4
        raise TruncationError(
            f"cutoff N={N} too small for r={sp.r:.6g}; need N >= {need}", required_cutoff=need
        )
    m = np.arange(m_max)
    t = -np.exp(1j * sp.phi) * math.tanh(sp.r)
    ratios = t * np.sqrt((2 * m + 1.0) / (2 * m + 2.0))
    even = np.empty(m_max + 1, dtype=complex)
    even[0] = 1.0 / math.sqrt(math.cosh(sp.r))
    even[1:] = even[0] * np.cumprod(ratios)
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[0::2] = even
    return FockVector(coeffs)


def _even_hamiltonians(omega0: float, eta0: float, m_max: int):
    """Diagonal of H0 and the full H1 restricted to |0>, |2>, ..., |2 m_max>."""
    k = 2.0 * np.arange(m_max + 1)
    h0 = omega0 * (k + 0.5)
    off = 0.5 * eta0 * np.sqrt((k[:-1] + 1.0) * (k[:-1] + 2.0))
    h1 = np.diag((omega0 + eta0) * (k + 0.5)) + np.diag(off, 1) + np.diag(off, -1)
    return h0, h1


def _full_hamiltonians(omega0: float, eta0: float, N: int):
    k = np.arange(N + 1, dtype=float)
    h0 = omega0 * (k + 0.5)
    off = 0.5 * eta0 * np.sqrt((k[:-2] + 1.0) * (k[:-2] + 2.0))
    h1 = np.diag((omega0 + eta0) * (k + 0.5)) + np.diag(off, 2) + np.diag(off, -2)
    return h0, h1


def _edge_mass(vec: np.ndarray) -> float:
    top = len(vec) - max(2, len(vec) // 4)
    return float(np.sum(np.abs(vec[top:]) ** 2))


def _propagator(h: np.ndarray, t: float, method: str, tridiagonal: bool) -> np.ndarray:
    """``exp(-i h t)`` for a real symmetric ``h``."""
    if method == "auto":
        method = "expm" if len(h) <= EXPM_MAX_DIM else "eigh"
    if method == "expm":
        return expm(-1j * t * h)
    if method == "eigh":
        if tridiagonal:
            w, v = eigh_tridiagonal(np.diag(h).copy(), np.diag(h, 1).copy())
        else:
            w, v = np.linalg.eigh(h)
        return (v * np.exp(-1j * t * w)) @ v.T
    raise ValueError(f"unknown exponential method {method!r}")


def _evolve(cfg: ProtocolConfig, N: int, even_sector: bool, method: str = "auto") -> np.ndarray:
    if even_sector:
        h0, h1 = _even_hamiltonians(cfg.omega0, cfg.eta0, N // 2)
    else:
        h0, h1 = _full_hamiltonians(cfg.omega0, cfg.eta0, N)
    psi = np.zeros(len(h0), dtype=complex)
    psi[0] = 1.0
    u_jump = None
    if cfg.jump_duration > 0:
        u_jump = _propagator(h1, cfg.jump_duration, method, tridiagonal=even_sector)
    phase_free = np.exp(-1j * cfg.free_duration * h0)
    for _ in range(cfg.n_jumps):
        if u_jump is not None:
            psi = u_jump @ psi
        psi = phase_free * psi
        leak = _edge_mass(psi)
        if leak > LEAK_TOL:
            raise TruncationError(
                f"cutoff N={N} leaks {leak:.3g} of the norm into the top levels",
                required_cutoff=2 * N,
            )
    if not even_sector:
        return psi
    full = np.zeros(N + 1, dtype=complex)
    full[0::2] = psi
    return full


def evolve_fock(
    cfg: ProtocolConfig, N: int | None = None, even_sector: bool = True, method: str = "auto"
) -> FockVector:
    """Apply ``exp(-i H1 tau_n)`` then ``exp(-i H0 T_n)`` to the ground state, ``n_jumps`` times.

    With ``N=None`` the cutoff starts at 64 and doubles until no more than
    ``LEAK_TOL`` of the norm sits in the top quarter of the basis after any
    cycle.  An explicit ``N`` that is too small raises ``TruncationError``.

    ``method`` selects the jump propagator: ``"expm"`` (scaling and squaring),
    ``"eigh"`` (spectral, for the large cutoffs strong squeezing needs) or
    ``"auto"``, which uses ``expm`` up to ``EXPM_MAX_DIM`` basis states.
    """
    if N is not None:
        if N < 4 or N % 2:
            raise DomainError(f"cutoff must be an even integer >= 4, got {N}")
        return FockVector(_evolve(cfg, N, even_sector, method))
    N = MIN_CUTOFF
    while True:
        try:
            return FockVector(_evolve(cfg, N, even_sector, method))
        except TruncationError:
            N *= 2
            if N > MAX_CUTOFF:
                raise


def fix_gauge(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    idx = int(np.argmax(np.abs(vec) > 1e-300))
    c = vec[idx]
    return vec * (np.conj(c) / abs(c))


def qfi_pure_family(family: Callable[[float], np.ndarray], x: float, h: float) -> float:
    """Pure-state QFI ``4 (<d psi|d psi> - |<psi|d psi>|**2)`` by finite differences.

    ``family`` maps a parameter value to an amplitude vector; every call must
    use the same basis and length.
    """
    psi = fix_gauge(np.asarray(family(x), dtype=complex))
    dpsi = central_derivative(lambda y: fix_gauge(np.asarray(family(y), dtype=complex)), x, h)
    g = 4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(psi, dpsi)) ** 2)
    return float(g)


def cutoff_for(cfg: ProtocolConfig, even_sector: bool = True) -> int:
    return evolve_fock(cfg, even_sector=even_sector).truncation


def qfi_pure(cfg: ProtocolConfig, h: float | None = None, N: int | None = None) -> float:
    """QFI for ``omega0`` from the Fock route, holding delta, alpha, T and n fixed."""
    if h is None:
        h = default_step(cfg.omega0, cfg.omega1)
    if N is None:
        N = cutoff_for(cfg)
    while True:
        try:
            return qfi_pure_family(
                lambda w: evolve_fock(cfg.replace(omega0=w), N).coeffs, cfg.omega0, h
            )
        except TruncationError:
            N *= 2
            if N > MAX_CUTOFF:
                raise
