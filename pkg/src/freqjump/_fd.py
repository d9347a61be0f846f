"""Fourth-order central finite differences."""

import numpy as np

REL_STEP = 1e-4


def default_step(omega0: float, omega1: float | None = None) -> float:
    """Step ``1e-4 * max(omega0, 1)``, shrunk so the stencil keeps every frequency positive."""
    h = REL_STEP * max(omega0, 1.0)
    lowest = omega0 if omega1 is None else min(omega0, omega1)
    return min(h, lowest / 4.0)


def central_derivative(f, x: float, h: float):
    """Five-point stencil; truncation error O(h**4)."""
    return (
        -np.asarray(f(x + 2 * h))
        + 8 * np.asarray(f(x + h))
        - 8 * np.asarray(f(x - h))
        + np.asarray(f(x - 2 * h))
    ) / (12.0 * h)
