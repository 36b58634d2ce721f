"""Limiting conditional laws, moment limits and product-tail constants.

Every family here has a limit measure of the polar form

    nu((y_0, inf] x prod [-inf, y_j]) = E[ int_{y_0}^inf 1{v**kappa_j J_j <= y_j for all j} alpha v**(-alpha-1) dv ]

for a random vector ``J`` independent of the Pareto radius ``v``.  The
v-integral has a closed form once ``J`` is drawn (the feasible set is an
interval), so evaluators built on a sample of ``J`` are exact in ``v`` and
Monte Carlo only in ``J``.  The exponential AR(1) at lag one is handled by
one-dimensional quadrature against the explicit law of ``exp(eps)``.

``survival(y0, y)`` returns the measure of the set above and ``query(y)``
the probability ``Psi(y) = nu([1, y_0] x prod [-inf, y_j])``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import DomainError
from .models import (
    ExpAR1,
    ExpLinear,
    GaussianSquareExp,
    SVHeavyInnov,
    SVHeavyVol,
    SVLeverage,
    SwitchingExpAR1,
    ensure_valid,
    geometric_truncation,
    spec_json,
    theoretical_alpha,
    theoretical_kappa,
)
from .randomness import (
    CenteredLogParetoLaw,
    RandomStream,
    innovation_log_mgf,
    stationary_log_moment,
)
from .tailchain import TailChainSpec, j_vector_from_w

INNER_SEED = 20_231
INNER_SAMPLES = 1 << 22
QUAD_ACCURACY = 1e-4
MC_ACCURACY = 1e-3
_MOMENT_TOL = 1e-15


# ------------------------------------------------------------ helpers


def _power_tail_mean(values: np.ndarray, weights: np.ndarray | None, p: float, total: int):
    """Return ``f(y) = sum_i w_i * min(1, (v_i / y)**p) / total`` for positive ``v``.

    Built once from sorted values with log-domain prefix sums so it can be
    evaluated at many ``y`` without overflow.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = np.ones_like(v) if weights is None else weights[order]
    logw = np.log(w)
    cum_w = np.concatenate([[0.0], np.cumsum(w)])
    with np.errstate(divide="ignore"):
        log_terms = logw + p * np.log(v)
    log_cum = np.concatenate([[-np.inf], np.logaddexp.accumulate(log_terms)]) if len(v) else np.array([-np.inf])
    w_total = cum_w[-1]

    def f(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        idx = np.searchsorted(v, y, side="left")  # count of v < y
        upper = w_total - cum_w[idx]
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lower = np.exp(log_cum[idx] - p * np.log(y))
        lower = np.where(idx > 0, lower, 0.0)
        return (upper + lower) / total

    return f


@dataclass
class LimitCdf:
    """Base class for limit evaluators; subclasses provide ``survival`` and ``marginal_sf``."""

    family: str
    alpha: float
    kappas: tuple
    method: str
    n_inner: int | None = None
    seed: int | None = None
    accuracy: float = MC_ACCURACY
    diagnostics: dict = field(default_factory=dict)

    @property
    def h(self) -> int:
        return len(self.kappas)

    def _check_y(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float).ravel()
        if len(y) != self.h:
            raise ValueError(f"expected {self.h} coordinates after y_0, got {len(y)}")
        return y

    def survival(self, y0: float, y) -> float:
        raise NotImplementedError

    def query(self, y) -> float:
        """``Psi(y_0, ..., y_h)``; needs ``y_0 >= 1``."""
        y = np.asarray(y, dtype=float).ravel()
        y0, rest = float(y[0]), y[1:]
        if not y0 >= 1.0:
            raise DomainError("y_0 must be at least 1")
        if y0 == 1.0:
            return 0.0
        value = self.survival(1.0, rest) - self.survival(y0, rest)
        return float(min(1.0, max(0.0, value)))

    def marginal_sf(self, coord: int, y):
        """``P(Y_coord > y)`` under the limit law (``Y_0`` standard Pareto(alpha))."""
        if coord == 0:
            y = np.asarray(y, dtype=float)
            with np.errstate(divide="ignore"):
                return np.where(y >= 1.0, np.maximum(y, 1.0) ** -self.alpha, 1.0)
        if not 1 <= coord <= self.h:
            raise ValueError(f"coordinate {coord} out of range")
        return self._marginal_sf(coord, np.asarray(y, dtype=float))

    def marginal_cdf(self, coord: int, y):
        return 1.0 - self.marginal_sf(coord, y)

    def _marginal_sf(self, coord, y):
        raise NotImplementedError

    def describe(self) -> dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "kappas": list(self.kappas),
            "method": self.method,
            "n_inner": self.n_inner,
            "seed": self.seed,
            "accuracy": self.accuracy,
            **self.diagnostics,
        }


class QuadratureLimit(LimitCdf):
    """Exponential AR(1) at lag one: ``Y_1 = v**phi * W`` with ``W = exp(eps)``."""

    def __init__(self, alpha: float, phi: float):
        super().__init__("expar1", float(alpha), (float(phi),), "quadrature", accuracy=QUAD_ACCURACY)
        self.phi = float(phi)
        self.law = CenteredLogParetoLaw(alpha)

    def _vstar(self, y: float) -> float:
        # F_W(y v**-phi) vanishes beyond v*
        if self.phi == 0.0:
            return math.inf
        with np.errstate(over="ignore"):
            return float(np.power(y / self.law.exp_lower, 1.0 / self.phi))

    def survival(self, y0, y) -> float:
        y1 = float(self._check_y(y)[0])
        a, alpha = float(y0), self.alpha
        if not a > 0:
            raise DomainError("y_0 must be positive")
        if math.isinf(a) or y1 == -math.inf:
            return 0.0
        if y1 == math.inf:
            return a**-alpha
        if y1 <= 0.0:
            return 0.0
        if self.phi == 0.0:
            return a**-alpha * float(self.law.exp_cdf(y1))
        vstar = self._vstar(y1)
        if a >= vstar:
            return 0.0
        # substitute v = exp(s)
        def integrand(s):
            return float(self.law.exp_cdf(y1 * math.exp(-self.phi * s))) * alpha * math.exp(-alpha * s)

        value, _ = integrate.quad(integrand, math.log(a), math.log(vstar), epsabs=1e-13, epsrel=1e-11, limit=200)
        return value

    def _sf_point(self, y1: float) -> float:
        if y1 <= 0.0:
            return 1.0
        if self.phi == 0.0:
            return float(self.law.exp_sf(y1))
        alpha = self.alpha
        vstar = self._vstar(y1)
        if vstar <= 1.0:
            return 1.0
        c = math.exp(-1.0) * y1**-alpha

        def integrand(s):
            return alpha * math.exp(alpha * (self.phi - 1.0) * s)

        body, _ = integrate.quad(integrand, 0.0, math.log(vstar), epsabs=1e-14, epsrel=1e-11, limit=200)
        return c * body + vstar**-alpha

    def _marginal_sf(self, coord, y):
        flat = np.array([self._sf_point(float(v)) for v in np.ravel(y)])
        return flat.reshape(np.shape(y)) if np.ndim(y) else float(flat[0])


class SampledLimit(LimitCdf):
    """Polar-form evaluator over a stored sample of ``J`` (optionally weighted)."""

    def __init__(self, family, alpha, kappas, J, weights=None, method="inner-mc", seed=None, diagnostics=None):
        kappas = tuple(float(k) for k in kappas)
        if any(k < 0 for k in kappas):
            raise DomainError("negative scaling exponents are not supported")
        J = np.ascontiguousarray(J, dtype=float)
        # per-sample masses have standard deviation below 1/2
        accuracy = max(MC_ACCURACY, 1.5 / math.sqrt(J.shape[1]))
        super().__init__(family, float(alpha), kappas, method, J.shape[1], seed, accuracy, dict(diagnostics or {}))
        self.J = J
        self.weights = weights
        self._marginals = {}

    def survival(self, y0, y) -> float:
        y = self._check_y(y)
        a, alpha = float(y0), self.alpha
        if not a > 0:
            raise DomainError("y_0 must be positive")
        N = self.J.shape[1]
        if math.isinf(a) or np.any(y == -np.inf):
            return 0.0
        lo = np.full(N, a)
        hi = np.full(N, np.inf)
        ok = np.ones(N, dtype=bool)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            for j, (k, yj) in enumerate(zip(self.kappas, y)):
                if yj == np.inf:
                    continue
                Jj = self.J[j]
                if k == 0.0:
                    ok &= Jj <= yj
                    continue
                pos = Jj > 0
                if yj > 0:
                    hi = np.minimum(hi, np.where(pos, (yj / np.where(pos, Jj, 1.0)) ** (1.0 / k), np.inf))
                elif yj == 0:
                    ok &= ~pos
                else:
                    neg = Jj < 0
                    ok &= neg
                    lo = np.maximum(lo, np.where(neg, (yj / np.where(neg, Jj, -1.0)) ** (1.0 / k), 0.0))
            mass = np.where(ok & (lo < hi), lo**-alpha - hi**-alpha, 0.0)
        if self.weights is not None:
            mass = mass * self.weights
        return float(np.mean(mass))

    def _marginal(self, coord):
        if coord in self._marginals:
            return self._marginals[coord]
        k = self.kappas[coord - 1]
        Jj = self.J[coord - 1]
        w = self.weights
        N = len(Jj)
        if k == 0.0:
            order = np.argsort(Jj, kind="stable")
            vals = Jj[order]
            cw = np.concatenate([[0.0], np.cumsum(np.ones(N) if w is None else w[order])])

            def sf(y):
                idx = np.searchsorted(vals, y, side="right")
                return (cw[-1] - cw[idx]) / N

        else:
            p = self.alpha / k
            pos = Jj > 0
            neg = Jj < 0
            upper = _power_tail_mean(Jj[pos], None if w is None else w[pos], p, N)
            lower = _power_tail_mean(-Jj[neg], None if w is None else w[neg], p, N)
            total = 1.0 if w is None else float(np.sum(w)) / N
            at_or_below_zero = np.count_nonzero(~pos) / N if w is None else float(np.sum(w[~pos])) / N

            def sf(y):
                y = np.atleast_1d(y)
                out = np.empty_like(y)
                p_mask = y > 0
                out[p_mask] = upper(y[p_mask])
                n_mask = y < 0
                out[n_mask] = total - lower(-y[n_mask])
                z_mask = y == 0
                out[z_mask] = total - at_or_below_zero
                return out

        self._marginals[coord] = sf
        return sf

    def _marginal_sf(self, coord, y):
        out = self._marginal(coord)(np.atleast_1d(y).astype(float).ravel())
        return out.reshape(np.shape(y)) if np.ndim(y) else float(out[0])


class SVInnovLimit(LimitCdf):
    """Heavy-innovation SV: ``kappa = 0`` and ``Y_j = sigma~_j Z_j`` with a tilted volatility path."""

    def __init__(self, spec: SVHeavyInnov, sigma: np.ndarray, seed=None, diagnostics=None):
        accuracy = max(MC_ACCURACY, 1.5 / math.sqrt(sigma.shape[1]))
        super().__init__("sv_heavy_innov", float(spec.z_alpha), (0.0,) * sigma.shape[0], "inner-mc", sigma.shape[1], seed, accuracy, dict(diagnostics or {}))
        self.spec = spec
        self.sigma = sigma
        self._marginals = {}

    def _z_cdf(self, z):
        a = self.alpha
        with np.errstate(divide="ignore", over="ignore"):
            tail = np.abs(z) ** -a
        if self.spec.z_sign == "positive":
            return np.where(z >= 1.0, 1.0 - tail, 0.0)
        return np.where(z >= 1.0, 1.0 - 0.5 * tail, np.where(z <= -1.0, 0.5 * tail, 0.5))

    def survival(self, y0, y) -> float:
        y = self._check_y(y)
        a = float(y0)
        if not a > 0:
            raise DomainError("y_0 must be positive")
        if math.isinf(a):
            return 0.0
        prod = np.ones(self.sigma.shape[1])
        for j, yj in enumerate(y):
            if yj == np.inf:
                continue
            prod *= self._z_cdf(yj / self.sigma[j])
        return a**-self.alpha * float(np.mean(prod))

    def _marginal_sf(self, coord, y):
        if coord not in self._marginals:
            self._marginals[coord] = _power_tail_mean(self.sigma[coord - 1], None, self.alpha, self.sigma.shape[1])
        f = self._marginals[coord]
        yy = np.atleast_1d(y).astype(float).ravel()
        out = np.empty_like(yy)
        half = 1.0 if self.spec.z_sign == "positive" else 0.5
        pos = yy > 0
        out[pos] = half * f(yy[pos])
        if self.spec.z_sign == "positive":
            out[~pos] = 1.0
        else:
            neg = yy < 0
            out[neg] = 1.0 - 0.5 * f(-yy[neg])
            out[yy == 0] = 0.5
        return out.reshape(np.shape(y)) if np.ndim(y) else float(out[0])


# -------------------------------------------------------- J samplers


def _columns(stream, slot, n):
    return stream.uniforms(slot, 0, n)


def sample_j(spec, h: int, n: int, stream: RandomStream, method: str = "tilted"):
    """Draw ``n`` copies of ``(J_1, ..., J_h)`` for the limit of ``spec``.

    Returns ``(kappas, J, weights)`` with ``J`` of shape ``(h, n)``;
    ``weights`` is ``None`` except for the plain (untilted) linear method.
    """
    if isinstance(spec, TailChainSpec):
        return _sample_chain(spec, h, n, stream)
    ensure_valid(spec)
    if isinstance(spec, ExpAR1):
        return _sample_chain(TailChainSpec(spec.alpha, spec.phi, CenteredLogParetoLaw(spec.alpha)), h, n, stream)
    if isinstance(spec, SwitchingExpAR1):
        return _sample_chain(TailChainSpec(spec.alpha, spec.phi, spec.r_law, spec.eta), h, n, stream)
    if isinstance(spec, ExpLinear):
        return _sample_explinear(spec, h, n, stream, method)
    if isinstance(spec, SVHeavyVol):
        return _sample_sv_vol(spec, h, n, stream)
    if isinstance(spec, SVHeavyInnov):
        sigma = _tilted_sigma(spec, h, n, stream)
        z = np.empty_like(sigma)
        for t in range(h):
            z[t] = _columns(stream, h + 1 + t, n) ** (-1.0 / spec.z_alpha)
            if spec.z_sign == "symmetric":
                z[t] *= np.where(_columns(stream, 2 * h + 1 + t, n) < 0.5, -1.0, 1.0)
        return (0.0,) * h, sigma * z, None
    if isinstance(spec, SVLeverage):
        return _sample_leverage(spec, h, n, stream)
    raise DomainError(f"{getattr(spec, 'kind', type(spec).__name__)} has no conditional limit law")


def _sample_chain(chain: TailChainSpec, h, n, stream):
    w = np.empty((n, h))
    for t in range(1, h + 1):
        w[:, t - 1] = chain.w_sampler.sample_from_uniform(_columns(stream, 2 * t - 1, n))
        if chain.absorb_prob > 0:
            dead = _columns(stream, 2 * t, n) < chain.absorb_prob
            w[dead, t - 1] = 0.0
    J = j_vector_from_w(chain.kappa, w)
    if chain.absorb_prob > 0:
        # keep absorbed coordinates at zero even when kappa == 0
        J[np.cumprod(w != 0.0, axis=1) == 0] = 0.0
    return tuple(chain.kappa**t for t in range(1, h + 1)), J.T.copy(), None


def _explin_coeffs(spec: ExpLinear, h: int) -> np.ndarray:
    J = spec.J
    return np.concatenate([spec.coefficients(J), np.zeros(h + 1)])


def _sample_explinear(spec: ExpLinear, h, n, stream, method):
    a = spec.alpha
    J = spec.J
    phis = _explin_coeffs(spec, h)
    law = CenteredLogParetoLaw(a)
    logj = np.zeros((h, n))
    # future innovations eps_1..eps_h (slots 0..h-1)
    for m in range(1, h + 1):
        eps = law.from_uniform(_columns(stream, m - 1, n))
        for t in range(m, h + 1):
            logj[t - 1] += phis[t - m] * eps
    xi0 = np.zeros(n) if method == "plain" else None
    for k in range(1, J):
        u = _columns(stream, h + k - 1, n)
        if method == "tilted":
            eps = -np.log(u) / (a * (1.0 - phis[k])) - 1.0 / a
        elif method == "plain":
            eps = law.from_uniform(u)
            xi0 += phis[k] * eps
        else:
            raise ValueError(f"unknown method {method!r}")
        for t in range(1, h + 1):
            logj[t - 1] += (phis[t + k] - phis[t] * phis[k]) * eps
    kappas = tuple(float(phis[t]) for t in range(1, h + 1))
    weights = None
    if method == "plain":
        norm = stationary_log_moment(a, phis[1:J], a, J - 1)
        weights = np.exp(a * xi0) / norm
    return kappas, np.exp(logj), weights


def _tilted_z_gaussian(alpha, u):
    # density proportional to z**alpha * exp(-z**2 / 2) on z > 0
    return np.sqrt(special.chdtri(alpha + 1.0, u))


def _tilted_z_student(alpha, df, u):
    # z**alpha times the t density: z**2 / df = B / (1 - B), B ~ Beta((1+alpha)/2, (df-alpha)/2)
    b = special.betaincinv((1.0 + alpha) / 2.0, (df - alpha) / 2.0, u)
    return np.sqrt(df * b / (1.0 - b))


def _sample_sv_vol(spec: SVHeavyVol, h, n, stream):
    a, phi = spec.alpha, spec.phi
    u0 = _columns(stream, 0, n)
    z0 = _tilted_z_gaussian(a, u0) if spec.z_law == "gaussian" else _tilted_z_student(a, spec.z_df, u0)
    law = CenteredLogParetoLaw(a)
    xi = np.zeros(n)
    J = np.empty((h, n))
    for t in range(1, h + 1):
        xi = phi * xi + law.from_uniform(_columns(stream, t, n))
        ut = _columns(stream, h + t, n)
        zt = special.ndtri(ut) if spec.z_law == "gaussian" else special.stdtrit(spec.z_df, ut)
        J[t - 1] = z0 ** (-(phi**t)) * np.exp(xi) * zt
    return tuple(phi**t for t in range(1, h + 1)), J, None


def _tilted_sigma(spec: SVHeavyInnov, h, n, stream):
    m, rho, v = spec.vol_mean, spec.vol_rho, spec.vol_sd
    ls = m + spec.z_alpha * v * v + v * special.ndtri(_columns(stream, 0, n))
    innov = v * math.sqrt(1.0 - rho * rho)
    sigma = np.empty((h, n))
    for t in range(1, h + 1):
        ls = m + rho * (ls - m) + innov * special.ndtri(_columns(stream, t, n))
        sigma[t - 1] = np.exp(ls)
    return sigma


def _sample_leverage(spec: SVLeverage, h, n, stream):
    a = spec.z_alpha
    c = spec.c
    T = len(c)

    def coef(j):
        return c[j - 1] if 1 <= j <= T else 0.0

    logj = np.zeros((h, n))
    for k in range(1, T + 1):
        u = _columns(stream, k - 1, n)
        eta = -np.log(u) / (a * (1.0 - c[k - 1])) - 1.0 / a
        for t in range(1, h + 1):
            logj[t - 1] += (coef(t + k) - coef(t) * coef(k)) * eta
    J = np.empty((h, n))
    for s in range(1, h + 1):
        u = _columns(stream, T + s - 1, n)
        eta = -np.log(u) / a - 1.0 / a
        for t in range(s + 1, h + 1):
            logj[t - 1] += coef(t - s) * eta
        sign = np.where(_columns(stream, T + h + s - 1, n) < 0.5, -1.0, 1.0)
        J[s - 1] = sign * u ** (-1.0 / a)
    for t in range(1, h + 1):
        J[t - 1] *= np.exp(logj[t - 1] - coef(t) / a)
    return tuple(coef(t) for t in range(1, h + 1)), J, None


# ------------------------------------------------------- evaluators


def _default_inner(spec) -> int:
    if isinstance(spec, ExpLinear):
        return int(min(INNER_SAMPLES, max(1 << 16, (1 << 29) // (spec.J + 8))))
    return INNER_SAMPLES


@functools.lru_cache(maxsize=16)
def _cached_limit(spec_key: str, spec, h: int, n_inner: int, seed: int, method: str) -> LimitCdf:
    stream = RandomStream(seed, 0)
    diag = {"spec": spec_key}
    if isinstance(spec, ExpLinear):
        diag["truncation"] = spec.J
        diag["tail_coefficient_sum"] = float(np.sum(spec.coefficients(2 * spec.J)[spec.J :]))
    if isinstance(spec, SVHeavyInnov):
        return SVInnovLimit(spec, _tilted_sigma(spec, h, n_inner, stream), seed, diag)
    kappas, J, w = sample_j(spec, h, n_inner, stream, method)
    return SampledLimit(spec.kind, theoretical_alpha(spec), kappas, J, w, f"inner-mc/{method}", seed, diag)


def limit_for(spec, h: int, *, n_inner: int | None = None, seed: int = INNER_SEED, method: str = "tilted") -> LimitCdf:
    """Evaluator of the lag-``h`` limit law of ``spec``."""
    ensure_valid(spec)
    if h < 1:
        raise ValueError("h must be at least 1")
    if isinstance(spec, GaussianSquareExp):
        raise DomainError("gauss_sq_exp has no nondegenerate conditional limit")
    if isinstance(spec, ExpAR1) and h == 1:
        return QuadratureLimit(spec.alpha, spec.phi)
    n_inner = _default_inner(spec) if n_inner is None else int(n_inner)
    return _cached_limit(spec_json(spec), spec, h, n_inner, seed, method)


def expar1_limit(alpha: float, phi: float, h: int, **kw) -> LimitCdf:
    return limit_for(ExpAR1(alpha, phi), h, **kw)


def expar1_limit_cdf(alpha: float, phi: float, h: int, y, **kw) -> float:
    """``Psi_h(y)`` for the exponential AR(1) (quadrature at ``h = 1``)."""
    return expar1_limit(alpha, phi, h, **kw).query(y)


def _as_explinear(alpha, coeffs) -> ExpLinear:
    if isinstance(coeffs, ExpLinear):
        if alpha is not None and coeffs.alpha != alpha:
            raise ValueError("alpha disagrees with the supplied ExpLinear spec")
        return coeffs
    if isinstance(coeffs, dict):
        return ExpLinear(alpha=alpha, **coeffs)
    return ExpLinear(alpha=alpha, rule="explicit", coeffs=tuple(float(c) for c in coeffs))


def explin_limit(alpha, coeffs, h: int, **kw) -> LimitCdf:
    """``coeffs`` is an ExpLinear spec, a dict of its coefficient fields or the list ``phi_1, phi_2, ...``."""
    return limit_for(_as_explinear(alpha, coeffs), h, **kw)


def explin_limit_cdf(alpha, coeffs, h: int, y, **kw) -> float:
    return explin_limit(alpha, coeffs, h, **kw).query(y)


def sv_innov_limit_cdf(spec: SVHeavyInnov, h: int, y, **kw) -> float:
    return limit_for(spec, h, **kw).query(y)


def homogeneity_residual(limit_cdf: LimitCdf, t: float, y) -> float:
    """``|nu(t y_0, t**kappa y) - t**-alpha nu(y_0, y)|`` on survival-form sets."""
    y = np.asarray(y, dtype=float).ravel()
    if not t > 0 or not y[0] > 0:
        raise DomainError("need t > 0 and y_0 > 0")
    scaled = np.array([t**k for k in limit_cdf.kappas]) * y[1:]
    lhs = limit_cdf.survival(t * y[0], scaled)
    rhs = t**-limit_cdf.alpha * limit_cdf.survival(y[0], y[1:])
    return abs(lhs - rhs)


# ---------------------------------------------------------- moments


def _mgf(alpha, s):
    value = innovation_log_mgf(alpha, s)
    if math.isinf(value):
        raise DomainError(f"innovation moment of order {s} is infinite")
    return value


def _geo_moment(alpha, phi, s):
    """``E[exp(s * xi_0)]`` for the stationary exponential AR(1)."""
    J = geometric_truncation(phi, _MOMENT_TOL)
    return stationary_log_moment(alpha, lambda j: phi**j, s, J)


def cond_moment_limit(spec, h: int) -> float:
    """``lim E[(X_h)_+ / x**kappa_h | X_0 > x]`` from the model's closed form."""
    ensure_valid(spec)
    if isinstance(spec, GaussianSquareExp):
        raise DomainError("gauss_sq_exp has no conditional limit")
    a = theoretical_alpha(spec)
    if not a > 1:
        raise DomainError("moment limits need alpha > 1")
    k = theoretical_kappa(spec, h)
    if isinstance(spec, ExpAR1):
        return a * _geo_moment(a, spec.phi, 1.0) / ((a - k) * _geo_moment(a, spec.phi, k))
    if isinstance(spec, SwitchingExpAR1):
        out = a / (a - k)
        for j in range(1, h + 1):
            out *= (1.0 - spec.eta) * spec.r_law.moment(spec.phi ** (h - j))
        return out
    if isinstance(spec, ExpLinear):
        phis = _explin_coeffs(spec, h)
        J = spec.J
        log_val = math.log(a / (a - k))
        for m in range(1, h + 1):
            log_val += math.log(_mgf(a, phis[h - m]))
        for j in range(1, J):
            log_val += math.log(_mgf(a, phis[h + j] + (a - k) * phis[j])) - math.log(_mgf(a, a * phis[j]))
        return math.exp(log_val)
    if isinstance(spec, SVHeavyVol):
        zp = _z_positive_moment(spec)
        ev = _geo_moment(a, spec.phi, 1.0) / _geo_moment(a, spec.phi, k)
        return a * zp(a - k) * zp(1.0) * ev / ((a - k) * zp(a))
    if isinstance(spec, SVHeavyInnov):
        ez = a / (a - 1.0) * (1.0 if spec.z_sign == "positive" else 0.5)
        v2 = spec.vol_sd**2
        return ez * math.exp(spec.vol_mean + 0.5 * v2 + a * spec.vol_rho**h * v2)
    if isinstance(spec, SVLeverage):
        c = spec.c
        T = len(c)

        def coef(j):
            return c[j - 1] if 1 <= j <= T else 0.0

        log_val = math.log(a / (a - k)) + math.log(0.5 * a / (a - 1.0)) - k / a
        for s in range(1, h):
            log_val += math.log(_mgf(a, coef(h - s)))
        for j in range(1, T + 1):
            log_val += math.log(_mgf(a, coef(h + j) + (a - k) * c[j - 1])) - math.log(_mgf(a, a * c[j - 1]))
        return math.exp(log_val)
    raise DomainError(f"unsupported model {type(spec).__name__}")


def _z_positive_moment(spec: SVHeavyVol):
    """``s -> E[(Z)_+**s]``."""
    if spec.z_law == "gaussian":
        return lambda s: 2 ** (s / 2) * special.gamma((s + 1) / 2) / (2 * math.sqrt(math.pi))
    df = spec.z_df

    def moment(s):
        if s >= df:
            return math.inf
        return 0.5 * df ** (s / 2) * special.gamma((s + 1) / 2) * special.gamma((df - s) / 2) / (
            math.sqrt(math.pi) * special.gamma(df / 2)
        )

    return moment


# ------------------------------------------------- product tail constant


@dataclass(frozen=True)
class ProductTailConstant:
    value: float
    se: float
    diverging: bool
    exponent: float
    summand_tail_index: float
    running_change: float
    n: int


def _w_power_moment(sampler, p: float):
    """``E[W**p]`` when the step law has a closed form, else ``None``."""
    if isinstance(sampler, CenteredLogParetoLaw):
        return sampler.mgf(p)
    moment = getattr(sampler, "moment", None)
    return float(moment(p)) if callable(moment) else None


def _chain_of(spec):
    if isinstance(spec, TailChainSpec):
        return spec
    if isinstance(spec, ExpAR1):
        return TailChainSpec(spec.alpha, spec.phi, CenteredLogParetoLaw(spec.alpha))
    if isinstance(spec, SwitchingExpAR1):
        return TailChainSpec(spec.alpha, spec.phi, spec.r_law, spec.eta)
    return None


def _summand_diagnostics(summand, value, n):
    half = float(np.mean(summand[: n // 2]))
    change = abs(value - half) / abs(value) if value != 0 else 0.0
    pos = summand[summand > 0]
    tail_index = math.inf
    if len(pos) > 100 and np.ptp(pos) > 0:
        kk = min(int(2 * len(pos) ** 0.6), len(pos) // 10)
        top = np.sort(pos)[-(kk + 1) :]
        excess = np.log(top[1:] / top[0])
        if excess.sum() > 0:
            tail_index = float(kk / excess.sum())
    return tail_index, change


def product_tail_constant(spec, h: int, n: int = 1 << 20, seed: int = INNER_SEED) -> ProductTailConstant:
    """Monte Carlo estimate of ``E[(J_h)_+ ** (alpha / (1 + kappa_h))]``.

    ``spec`` is a model spec or a :class:`TailChainSpec`.  For Markov tail
    chains whose step law has a closed-form moment the last step is
    integrated exactly, ``E[J_h**p] = (1 - eta) E[W**p] E[J_{h-1}**(kappa p)]``,
    which removes the heaviest factor from the Monte Carlo.  The estimate is
    flagged as diverging when a moment is infinite, the summand looks too
    heavy for a mean (Hill index at or below one) or the running mean has
    not settled.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    stream = RandomStream(seed, 1)
    chain = _chain_of(spec)
    if chain is not None:
        if chain is not spec:
            ensure_valid(spec)
        kappa = chain.kappa
        p = chain.alpha / (1.0 + kappa**h)
        mw = _w_power_moment(chain.w_sampler, p)
        if mw is not None:
            last = (1.0 - chain.absorb_prob) * mw
            if math.isinf(last):
                return ProductTailConstant(math.inf, math.inf, True, p, math.nan, math.nan, n)
            if h == 1:
                return ProductTailConstant(float(last), 0.0, False, p, math.inf, 0.0, n)
            _, J, _ = _sample_chain(chain, h - 1, n, stream)
            prev = J[h - 2]
            with np.errstate(divide="ignore"):
                summand = np.where(prev > 0, np.maximum(prev, 0.0) ** (kappa * p), 0.0) * last
        else:
            _, J, _ = _sample_chain(chain, h, n, stream)
            summand = np.maximum(J[h - 1], 0.0) ** p
    else:
        if theoretical_kappa(spec, h) is None:
            raise DomainError("kappa_h undefined for this model")
        kappas, J, w = sample_j(spec, h, n, stream)
        p = theoretical_alpha(spec) / (1.0 + kappas[h - 1])
        summand = np.maximum(J[h - 1], 0.0) ** p
        if w is not None:
            summand = summand * w
    value = float(np.mean(summand))
    se = float(np.std(summand, ddof=1) / math.sqrt(n))
    tail_index, change = _summand_diagnostics(summand, value, n)
    diverging = tail_index <= 1.0 or change > 0.05
    return ProductTailConstant(value, se, bool(diverging), p, tail_index, change, n)
