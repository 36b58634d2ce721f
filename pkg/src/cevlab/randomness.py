"""Deterministic random sources and the laws the models are built from.

Every random number in the package is addressed by a triple
``(seed, stream_id, index)`` and produced by numpy's Philox counter-based
bit generator keyed with ``(seed, stream_id)``.  Nothing carries hidden
state, so a block of draws can be regenerated from its address alone and
the result never depends on how work was split between threads.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0**-53


@dataclass(frozen=True)
class RandomStream:
    """Address of a uniform stream: ``seed``, ``stream_id`` and a counter offset."""

    seed: int
    stream_id: int = 0
    counter: int = 0

    def child(self, offset: int) -> "RandomStream":
        """Stream ``offset`` ids further along, same seed and counter."""
        return RandomStream(self.seed, self.stream_id + offset, self.counter)

    def uniforms(self, slot: int, start: int, count: int) -> np.ndarray:
        """Uniforms of stream ``stream_id + slot`` at ``counter + start ...``."""
        return uniform_block(self.seed, self.stream_id + slot, self.counter + start, count)


def _key(seed: int, stream_id: int) -> np.ndarray:
    return np.array([seed & _MASK64, stream_id & _MASK64], dtype=np.uint64)


def uniform_block(seed: int, stream_id: int, start: int, count: int) -> np.ndarray:
    """Uniforms at indices ``start, ..., start + count - 1`` of one stream.

    Values lie strictly inside (0, 1): the top 53 bits of each 64-bit Philox
    output are shifted by half a unit, so the extremes are 2**-54 and
    1 - 2**-54.
    """
    if count < 0 or start < 0:
        raise DomainError("start and count must be non-negative")
    if count == 0:
        return np.empty(0)
    # Philox4x64 emits four words per counter value.
    block, lane = divmod(start, 4)
    gen = np.random.Generator(np.random.Philox(key=_key(seed, stream_id), counter=block))
    # random() gives (word >> 11) * 2**-53; the half-unit shift keeps 0 out
    out = gen.random(lane + count)[lane:]
    out += 0.5 * _TWO_M53
    return out


def uniform_at(seed: int, stream_id: int, index: int) -> float:
    """Single uniform at address ``(seed, stream_id, index)``; pure."""
    return float(uniform_block(seed, stream_id, index, 1)[0])


def normal_from_uniform(u):
    return special.ndtri(u)


@dataclass(frozen=True)
class ParetoLaw:
    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0 or not self.scale > 0:
            raise DomainError("Pareto law needs alpha > 0 and scale > 0")

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= self.scale, (np.maximum(x, self.scale) / self.scale) ** -self.alpha, 1.0)

    def cdf(self, x):
        return 1.0 - self.sf(x)

    def from_uniform(self, u):
        # u and 1 - u have the same law; using u directly keeps full precision
        # in the far tail.
        return self.scale * np.asarray(u) ** (-1.0 / self.alpha)

    def moment(self, s: float) -> float:
        if s >= self.alpha:
            return math.inf
        return self.alpha * self.scale**s / (self.alpha - s)


def pareto_quantile(law: ParetoLaw, u):
    """Quantile ``scale * (1 - u) ** (-1/alpha)`` for ``0 <= u < 1``."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr >= 1.0) or np.any(u_arr < 0.0) or np.any(np.isnan(u_arr)):
        raise DomainError("pareto_quantile needs 0 <= u < 1")
    out = law.scale * (1.0 - u_arr) ** (-1.0 / law.alpha)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class CenteredLogParetoLaw:
    """Law of ``eps = E - 1/alpha`` with ``E`` exponential of rate ``alpha``.

    ``exp(eps)`` is a standard Pareto(alpha) variable times ``exp(-1/alpha)``,
    hence ``P(exp(eps) > x) = exp(-1) x**-alpha`` for ``x >= exp(-1/alpha)``,
    and ``E[eps] = 0``.
    """

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")

    def from_uniform(self, u):
        return -np.log(u) / self.alpha - 1.0 / self.alpha

    def exp_from_uniform(self, u):
        return np.exp(self.from_uniform(u))

    # alias so the law can serve as a tail-chain W distribution
    sample_from_uniform = exp_from_uniform

    @property
    def exp_lower(self) -> float:
        return math.exp(-1.0 / self.alpha)

    def exp_sf(self, x):
        """Survival function of ``exp(eps)``."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            tail = math.exp(-1.0) * np.where(x > 0, x, 1.0) ** -self.alpha
        return np.where(x >= self.exp_lower, tail, 1.0)

    def exp_cdf(self, x):
        return 1.0 - self.exp_sf(x)

    def mgf(self, s: float) -> float:
        return innovation_log_mgf(self.alpha, s)

    def tilted(self, s: float) -> "ShiftedExponential":
        """Law of eps under the exponential tilt ``exp(s * eps)``, ``s < alpha``."""
        if s >= self.alpha:
            raise DomainError("tilt exponent must be below alpha")
        return ShiftedExponential(rate=self.alpha - s, shift=-1.0 / self.alpha)


@dataclass(frozen=True)
class ShiftedExponential:
    """``E + shift`` with ``E`` exponential of the given rate."""

    rate: float
    shift: float

    def from_uniform(self, u):
        return -np.log(u) / self.rate + self.shift


@dataclass(frozen=True)
class LogNormalLaw:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")

    def sample_from_uniform(self, u):
        return np.exp(self.mu + self.sigma * special.ndtri(u))

    def moment(self, s: float) -> float:
        return math.exp(s * self.mu + 0.5 * (s * self.sigma) ** 2)

    def log_mean(self) -> float:
        return self.mu


def innovation_log_mgf(alpha: float, s: float) -> float:
    """``E[exp(s * eps)]`` for the centered log-Pareto innovation.

    Equals ``exp(-s/alpha) * alpha / (alpha - s)`` for ``s < alpha`` and
    ``math.inf`` otherwise.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if s >= alpha:
        return math.inf
    return math.exp(-s / alpha) * alpha / (alpha - s)


def _coefficient_list(phi_coeffs, count: int) -> list[float]:
    if callable(phi_coeffs):
        return [float(phi_coeffs(j)) for j in range(count)]
    return [float(c) for c in list(phi_coeffs)[:count]]


def stationary_log_moment(
    alpha: float,
    phi_coeffs: Sequence[float] | Callable[[int], float],
    s: float,
    truncation: int,
    return_diagnostics: bool = False,
):
    """``E[exp(s * xi)]`` for ``xi = sum_j phi_j eps_{-j}``, truncated at ``truncation`` terms.

    ``phi_coeffs`` is either the sequence ``(phi_0, phi_1, ...)`` or a
    callable ``j -> phi_j``.  With ``return_diagnostics=True`` the relative
    change between truncation ``T`` and ``2T`` is returned as well (computed
    from whatever coefficients are available when a finite list is given).
    """
    if truncation < 1:
        raise DomainError("truncation must be at least 1")
    coeffs = _coefficient_list(phi_coeffs, 2 * truncation)

    def product(terms):
        log_value = 0.0
        for c in terms:
            m = innovation_log_mgf(alpha, s * c)
            if math.isinf(m):
                raise DomainError(f"moment of order {s} is infinite (coefficient {c})")
            log_value += math.log(m)
        return math.exp(log_value)

    value = product(coeffs[:truncation])
    if not return_diagnostics:
        return value
    doubled = product(coeffs)
    return value, abs(doubled - value) / doubled
