"""Correlated uniform sampling through a Gaussian copula.

A vector ``z ~ N(0, R)`` is mapped coordinate-wise through the standard
normal CDF. The resulting coordinates are uniform on [0, 1) and their
Pearson correlation is ``(6/pi) * arcsin(r / 2)``, so the normal
correlation is pre-adjusted to ``r = 2 sin(pi * rho / 6)`` to hit a target
uniform correlation ``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import InfeasibleCorrelation

# Largest double below 1; the CDF rounds to exactly 1.0 for z > ~8.3.
_ONE_MINUS = np.nextafter(1.0, 0.0)
_EIG_FLOOR = 1e-10


@dataclass(frozen=True)
class CorrelationMatrix:
    """Constant off-diagonal correlation matrix of dimension ``m``."""

    m: int
    rho: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InfeasibleCorrelation(f"objective count must be >= 1, got {self.m}")

    @property
    def lower_bound(self) -> float:
        """Exclusive lower bound on ``rho``; ``-inf`` when ``m == 1``."""
        if self.m == 1:
            return -np.inf
        return -1.0 / (self.m - 1)

    def to_array(self) -> np.ndarray:
        c = np.full((self.m, self.m), float(self.rho))
        np.fill_diagonal(c, 1.0)
        return c


def validate(matrix: CorrelationMatrix) -> None:
    """Raise :class:`InfeasibleCorrelation` unless ``rho`` is in (-1/(m-1), 1].

    Any ``rho`` is accepted for ``m == 1``.
    """
    if matrix.m == 1:
        return
    rho = float(matrix.rho)
    if not np.isfinite(rho) or rho > 1.0 or rho <= matrix.lower_bound:
        raise InfeasibleCorrelation(
            f"rho={rho!r} outside ({matrix.lower_bound!r}, 1] for m={matrix.m}"
        )


def normal_correlation(rho: float) -> float:
    """Normal-space correlation whose copula image has Pearson correlation ``rho``."""
    return 2.0 * np.sin(np.pi * rho / 6.0)


def copula_factor(matrix: CorrelationMatrix) -> np.ndarray | None:
    """Lower factor ``L`` with ``L @ L.T`` equal to the adjusted normal correlation.

    Returns ``None`` for the degenerate ``rho == 1`` case (all coordinates
    share one draw). When the adjusted matrix is not positive definite
    (only near the feasibility boundary, where the sine adjustment can push
    the normal correlation past ``-1/(m-1)``), eigenvalues are floored at
    1e-10 and the diagonal is renormalised to ones.
    """
    validate(matrix)
    m = matrix.m
    if m == 1:
        return np.ones((1, 1))
    if matrix.rho == 1.0:
        return None
    r = normal_correlation(float(matrix.rho))
    adjusted = np.full((m, m), r)
    np.fill_diagonal(adjusted, 1.0)
    try:
        return np.linalg.cholesky(adjusted)
    except np.linalg.LinAlgError:
        pass
    w, v = np.linalg.eigh(adjusted)
    fixed = (v * np.maximum(w, _EIG_FLOOR)) @ v.T
    d = np.sqrt(np.diag(fixed))
    fixed = fixed / np.outer(d, d)
    np.fill_diagonal(fixed, 1.0)
    return np.linalg.cholesky(fixed)


def _to_uniform(z: np.ndarray) -> np.ndarray:
    return np.minimum(ndtr(z), _ONE_MINUS)


def sample_correlated_uniform_many(
    matrix: CorrelationMatrix, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``count`` rows of correlated uniforms, shape ``(count, m)``.

    Rows are produced in order from a single block of standard normals, so
    the result equals ``count`` successive calls of
    :func:`sample_correlated_uniform` on the same stream.
    """
    factor = copula_factor(matrix)
    m = matrix.m
    if factor is None:
        z = rng.standard_normal((count, 1))
        return np.repeat(_to_uniform(z), m, axis=1)
    z = rng.standard_normal((count, m))
    return _to_uniform(z @ factor.T)


def sample_correlated_uniform(
    matrix: CorrelationMatrix, rng: np.random.Generator
) -> np.ndarray:
    """One vector of ``m`` uniforms on [0, 1) with pairwise correlation ``rho``."""
    return sample_correlated_uniform_many(matrix, 1, rng)[0]
