"""Model families, their simulators and their theoretical tail metadata.

Seven families are available.  Six satisfy the conditional extreme value
property with known scaling exponents; ``GaussianSquareExp`` is the
negative control whose conditional laws have no nondegenerate limit.

Random numbers are addressed as ``(seed, stream_id + slot, counter + r)``
where ``slot`` names one random input of the recursion (an innovation at
a given time, a sign, a switch mark...) and ``r`` is the replicate index.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import ClassVar

import numpy as np
from scipy import special

from . import _parallel
from .errors import SpecError
from .randomness import CenteredLogParetoLaw, LogNormalLaw, RandomStream

GEOMETRIC_TAIL_TOL = 1e-6
LONG_MEMORY_TRUNCATION = 2000
_FMAX = np.finfo(np.float64).max
# Slot banks keep every slot independent of the horizon h, so the first
# columns of a longer simulation coincide with a shorter one.
BANK = 1 << 20


def geometric_truncation(phi: float, tol: float = GEOMETRIC_TAIL_TOL) -> int:
    """Smallest ``J`` with ``sum_{j >= J} phi**j < tol``."""
    if phi <= 0.0:
        return 1
    # phi**J / (1 - phi) < tol
    j = math.ceil(math.log(tol * (1.0 - phi)) / math.log(phi))
    return max(1, j)


# ---------------------------------------------------------------- specs


@dataclass(frozen=True)
class ExpAR1:
    """``V_t = exp(xi_t)``, ``xi_t = phi * xi_{t-1} + eps_t``."""

    alpha: float = 2.0
    phi: float = 0.5
    kind: ClassVar[str] = "expar1"

    @property
    def presample(self) -> int:
        return geometric_truncation(self.phi)


@dataclass(frozen=True)
class SwitchingExpAR1:
    """``X_{t+1} = R_{t+1} * (X_t**phi if U_{t+1} >= eta else 1)``, ``X_0 ~ Pareto(alpha)``."""

    alpha: float = 2.0
    phi: float = 0.5
    eta: float = 0.3
    r_mu: float = 0.0
    r_sigma: float = 0.5
    kind: ClassVar[str] = "switching"

    @property
    def r_law(self) -> LogNormalLaw:
        return LogNormalLaw(self.r_mu, self.r_sigma)


@dataclass(frozen=True)
class ExpLinear:
    """``exp(xi_t)`` with ``xi_t = sum_{j < J} phi_j eps_{t-j}`` and ``phi_0 = 1``.

    ``rule`` selects the coefficients: ``"geometric"`` (``phi**j``),
    ``"long_memory"`` (``c * (j + 1) ** -gamma`` for ``j >= 1``) or
    ``"explicit"`` (``coeffs`` lists ``phi_1, phi_2, ...``).
    """

    alpha: float = 2.0
    rule: str = "geometric"
    phi: float = 0.5
    c: float = 0.8
    gamma: float = 0.8
    coeffs: tuple[float, ...] = ()
    truncation: int | None = None
    kind: ClassVar[str] = "explinear"

    @property
    def J(self) -> int:
        if self.truncation is not None:
            return int(self.truncation)
        if self.rule == "geometric":
            return geometric_truncation(self.phi)
        if self.rule == "long_memory":
            return LONG_MEMORY_TRUNCATION
        return len(self.coeffs) + 1

    def phi_at(self, j: int) -> float:
        if j == 0:
            return 1.0
        if self.rule == "geometric":
            return self.phi**j
        if self.rule == "long_memory":
            return self.c * (j + 1) ** (-self.gamma)
        return float(self.coeffs[j - 1]) if j - 1 < len(self.coeffs) else 0.0

    def coefficients(self, count: int | None = None) -> np.ndarray:
        count = self.J if count is None else count
        return np.array([self.phi_at(j) for j in range(count)])


@dataclass(frozen=True)
class SVHeavyVol:
    """``X_t = exp(xi_t) * Z_t`` with ``xi`` the exponential AR(1) log-volatility."""

    alpha: float = 2.0
    phi: float = 0.5
    z_law: str = "gaussian"
    z_df: float | None = None
    kind: ClassVar[str] = "sv_heavy_vol"

    @property
    def presample(self) -> int:
        return geometric_truncation(self.phi)


@dataclass(frozen=True)
class SVHeavyInnov:
    """``X_t = sigma_t * Z_t``; ``log sigma`` Gaussian AR(1), ``|Z|`` Pareto(z_alpha).

    ``vol_mean`` and ``vol_sd`` are the stationary mean and standard
    deviation of ``log sigma_t``.  ``z_sign`` is ``"positive"`` (Z >= 1) or
    ``"symmetric"`` (independent Rademacher sign).
    """

    z_alpha: float = 3.0
    vol_mean: float = 0.0
    vol_rho: float = 0.5
    vol_sd: float = 0.5
    z_sign: str = "positive"
    kind: ClassVar[str] = "sv_heavy_innov"


@dataclass(frozen=True)
class SVLeverage:
    """``X_t = sigma_t Z_t``, ``sigma_t = exp(sum_j c_j eta_{t-j})``, ``eta = log|Z| - E log|Z|``.

    ``|Z|`` is Pareto(z_alpha) with an independent Rademacher sign.
    """

    z_alpha: float = 3.0
    coeffs: tuple[float, ...] = (0.6, 0.2)
    truncation: int | None = None
    kind: ClassVar[str] = "sv_leverage"

    @property
    def c(self) -> tuple[float, ...]:
        t = len(self.coeffs) if self.truncation is None else self.truncation
        return tuple(float(x) for x in self.coeffs[:t])


@dataclass(frozen=True)
class GaussianSquareExp:
    """``X_t = exp(c * xi_t**2)`` with ``xi`` a standard Gaussian AR(1) (negative control)."""

    c: float = 0.25
    ar1_rho: float = 0.5
    kind: ClassVar[str] = "gauss_sq_exp"


MODEL_TYPES = {cls.kind: cls for cls in (ExpAR1, SwitchingExpAR1, ExpLinear, SVHeavyVol, SVHeavyInnov, SVLeverage, GaussianSquareExp)}
ModelSpec = ExpAR1 | SwitchingExpAR1 | ExpLinear | SVHeavyVol | SVHeavyInnov | SVLeverage | GaussianSquareExp


def spec_to_dict(spec) -> dict:
    d = {"model": spec.kind}
    for f in fields(spec):
        v = getattr(spec, f.name)
        d[f.name] = list(v) if isinstance(v, tuple) else v
    return d


def spec_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("model")
    cls = MODEL_TYPES[kind]
    names = {f.name for f in fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise SpecError([f"unknown parameter(s) for {kind}: {sorted(unknown)}"])
    for k, v in d.items():
        if isinstance(v, list):
            d[k] = tuple(v)
    return cls(**d)


# ---------------------------------------------------------- validation


def _check(cond, msg, out):
    if not cond:
        out.append(msg)


def validate_spec(spec) -> list[str]:
    """Return the list of violated constraints (empty when the model is valid)."""
    errs: list[str] = []
    if isinstance(spec, ExpAR1):
        _check(spec.alpha > 0, "alpha must be positive", errs)
        _check(0 <= spec.phi < 1, "phi out of [0,1)", errs)
    elif isinstance(spec, SwitchingExpAR1):
        _check(spec.alpha > 0, "alpha must be positive", errs)
        _check(spec.phi > 0, "phi must be positive", errs)
        _check(0 <= spec.eta <= 1, "eta out of [0,1]", errs)
        _check(spec.r_sigma > 0, "r_sigma must be positive", errs)
    elif isinstance(spec, ExpLinear):
        _check(spec.alpha > 0, "alpha must be positive", errs)
        if spec.rule == "geometric":
            _check(0 <= spec.phi < 1, "phi out of [0,1)", errs)
        elif spec.rule == "long_memory":
            _check(spec.gamma > 0.5, "gamma ≤ 1/2", errs)
            _check(0 < spec.c < 1, "c out of (0,1)", errs)
        elif spec.rule == "explicit":
            _check(len(spec.coeffs) > 0, "explicit rule needs coefficients", errs)
            _check(all(0 <= c < 1 for c in spec.coeffs), "coefficient out of [0,1)", errs)
        else:
            errs.append(f"unknown coefficient rule {spec.rule!r}")
        if spec.truncation is not None:
            _check(spec.truncation >= 1, "truncation must be at least 1", errs)
        if not errs:
            tail = spec.coefficients()[1:]
            _check(np.all((tail >= 0) & (tail < 1)), "coefficient out of [0,1)", errs)
            _check(np.isfinite(np.sum(tail**2)), "coefficients not square summable", errs)
    elif isinstance(spec, SVHeavyVol):
        _check(spec.alpha > 0, "alpha must be positive", errs)
        _check(0 <= spec.phi < 1, "phi out of [0,1)", errs)
        if spec.z_law == "student_t":
            _check(spec.z_df is not None and spec.z_df > spec.alpha, "z_df must exceed alpha", errs)
        elif spec.z_law != "gaussian":
            errs.append(f"unknown z_law {spec.z_law!r}")
    elif isinstance(spec, SVHeavyInnov):
        _check(spec.z_alpha > 0, "z_alpha must be positive", errs)
        _check(-1 < spec.vol_rho < 1, "vol_rho out of (-1,1)", errs)
        _check(spec.vol_sd >= 0, "vol_sd must be non-negative", errs)
        _check(spec.z_sign in ("positive", "symmetric"), f"unknown z_sign {spec.z_sign!r}", errs)
    elif isinstance(spec, SVLeverage):
        _check(spec.z_alpha > 0, "z_alpha must be positive", errs)
        _check(len(spec.coeffs) > 0, "leverage needs coefficients", errs)
        _check(all(0 < c < 1 for c in spec.coeffs), "coefficient out of (0,1)", errs)
        if spec.truncation is not None:
            _check(1 <= spec.truncation <= len(spec.coeffs), "truncation out of range", errs)
    elif isinstance(spec, GaussianSquareExp):
        _check(0 < spec.c < 0.5, "c out of (0,1/2)", errs)
        _check(-1 < spec.ar1_rho < 1, "ar1_rho out of (-1,1)", errs)
    else:
        errs.append(f"unknown model type {type(spec).__name__}")
    return errs


def ensure_valid(spec) -> None:
    errs = validate_spec(spec)
    if errs:
        raise SpecError(errs)


# ------------------------------------------------------------- theory


def theoretical_alpha(spec) -> float:
    if isinstance(spec, (SVHeavyInnov, SVLeverage)):
        return float(spec.z_alpha)
    if isinstance(spec, GaussianSquareExp):
        return 1.0 / (2.0 * spec.c)
    return float(spec.alpha)


def theoretical_kappa(spec, h: int) -> float | None:
    """Lag-``h`` conditional scaling exponent, or ``None`` when no limit exists."""
    if h < 1:
        raise ValueError("h must be at least 1")
    if isinstance(spec, (ExpAR1, SVHeavyVol, SwitchingExpAR1)):
        return spec.phi**h
    if isinstance(spec, ExpLinear):
        return spec.phi_at(h)
    if isinstance(spec, SVHeavyInnov):
        return 0.0
    if isinstance(spec, SVLeverage):
        c = spec.c
        return c[h - 1] if h <= len(c) else 0.0
    return None


def scaling_b(spec, h: int, x):
    """Pure-power scaling function ``x ** kappa_h``."""
    kappa = theoretical_kappa(spec, h)
    if kappa is None:
        raise ValueError(f"{spec.kind} has no conditional scaling exponent")
    return np.asarray(x, dtype=float) ** kappa if np.ndim(x) else float(x) ** kappa


# ------------------------------------------------------- path builders


def expar1_paths(eps: np.ndarray, phi: float, presample: int) -> np.ndarray:
    """Rows ``(V_0, ..., V_h)`` from an innovation matrix.

    ``eps[:, :presample]`` holds ``eps_{-(J-1)}, ..., eps_0`` and the
    remaining columns ``eps_1, ..., eps_h``.
    """
    xi = np.zeros(eps.shape[0])
    for s in range(presample):
        xi = phi * xi + eps[:, s]
    h = eps.shape[1] - presample
    out = np.empty((eps.shape[0], h + 1))
    out[:, 0] = xi
    for t in range(1, h + 1):
        xi = phi * xi + eps[:, presample + t - 1]
        out[:, t] = xi
    return np.exp(out)


def _z_from_uniform(spec: SVHeavyVol, u):
    if spec.z_law == "gaussian":
        return special.ndtri(u)
    return special.stdtrit(spec.z_df, u)


def _rademacher(u):
    return np.where(u < 0.5, -1.0, 1.0)


def _chunk_expar1(spec, h, stream, lo, hi):
    law = CenteredLogParetoLaw(spec.alpha)
    J = spec.presample
    m = hi - lo
    xi = np.zeros(m)
    for s in range(J):
        xi *= spec.phi
        xi += law.from_uniform(stream.uniforms(s, lo, m))
    out = np.empty((m, h + 1))
    out[:, 0] = xi
    for t in range(1, h + 1):
        xi = spec.phi * xi + law.from_uniform(stream.uniforms(J + t - 1, lo, m))
        out[:, t] = xi
    with np.errstate(over="ignore"):
        return np.exp(out)


def _chunk_sv_heavy_vol(spec, h, stream, lo, hi):
    vol = _chunk_expar1(spec, h, stream, lo, hi)
    for t in range(h + 1):
        vol[:, t] *= _z_from_uniform(spec, stream.uniforms(BANK + t, lo, hi - lo))
    return vol


def _chunk_switching(spec, h, stream, lo, hi):
    m = hi - lo
    out = np.empty((m, h + 1))
    x = stream.uniforms(0, lo, m) ** (-1.0 / spec.alpha)
    out[:, 0] = x
    for t in range(1, h + 1):
        u = stream.uniforms(2 * t - 1, lo, m)
        r = np.exp(spec.r_mu + spec.r_sigma * special.ndtri(stream.uniforms(2 * t, lo, m)))
        with np.errstate(over="ignore"):
            x = np.where(u < spec.eta, r, r * x**spec.phi)
        out[:, t] = x
    return out


def _chunk_explinear(spec, h, stream, lo, hi):
    law = CenteredLogParetoLaw(spec.alpha)
    J = spec.J
    phis = spec.coefficients(J)
    m = hi - lo
    xi = np.zeros((h + 1, m))
    # slot s carries eps at time s - (J - 1)
    for s in range(J + h):
        tau = s - (J - 1)
        eps = law.from_uniform(stream.uniforms(s, lo, m))
        for t in range(h + 1):
            j = t - tau
            if 0 <= j < J:
                xi[t] += phis[j] * eps
    with np.errstate(over="ignore"):
        return np.exp(xi.T)


def _chunk_sv_heavy_innov(spec, h, stream, lo, hi):
    m = hi - lo
    rho, sd, mean = spec.vol_rho, spec.vol_sd, spec.vol_mean
    innov_sd = sd * math.sqrt(1.0 - rho * rho)
    ls = mean + sd * special.ndtri(stream.uniforms(0, lo, m))
    out = np.empty((m, h + 1))
    for t in range(h + 1):
        if t > 0:
            ls = mean + rho * (ls - mean) + innov_sd * special.ndtri(stream.uniforms(t, lo, m))
        z = stream.uniforms(BANK + t, lo, m) ** (-1.0 / spec.z_alpha)
        if spec.z_sign == "symmetric":
            z = z * _rademacher(stream.uniforms(2 * BANK + t, lo, m))
        with np.errstate(over="ignore"):
            out[:, t] = np.exp(ls) * z
    return out


def _chunk_sv_leverage(spec, h, stream, lo, hi):
    m = hi - lo
    c = spec.c
    T = len(c)
    a = spec.z_alpha
    mods, etas = {}, {}
    for s in range(-T, h + 1):
        u = stream.uniforms(s + T, lo, m)
        etas[s] = -np.log(u) / a - 1.0 / a
        mods[s] = u ** (-1.0 / a)
    out = np.empty((m, h + 1))
    for t in range(h + 1):
        log_sigma = np.zeros(m)
        for j in range(1, T + 1):
            log_sigma += c[j - 1] * etas[t - j]
        sign = _rademacher(stream.uniforms(BANK + t, lo, m))
        with np.errstate(over="ignore"):
            out[:, t] = np.exp(log_sigma) * mods[t] * sign
    return out


def _chunk_gauss_sq(spec, h, stream, lo, hi):
    m = hi - lo
    rho = spec.ar1_rho
    innov = math.sqrt(1.0 - rho * rho)
    xi = special.ndtri(stream.uniforms(0, lo, m))
    out = np.empty((m, h + 1))
    out[:, 0] = xi
    for t in range(1, h + 1):
        xi = rho * xi + innov * special.ndtri(stream.uniforms(t, lo, m))
        out[:, t] = xi
    with np.errstate(over="ignore"):
        return np.exp(spec.c * out**2)


_CHUNKERS = {
    ExpAR1: _chunk_expar1,
    SwitchingExpAR1: _chunk_switching,
    ExpLinear: _chunk_explinear,
    SVHeavyVol: _chunk_sv_heavy_vol,
    SVHeavyInnov: _chunk_sv_heavy_innov,
    SVLeverage: _chunk_sv_leverage,
    GaussianSquareExp: _chunk_gauss_sq,
}


def _chunk_size(spec) -> int:
    if isinstance(spec, ExpLinear):
        # keep the per-chunk working set of a long-memory series modest
        return max(1 << 12, min(_parallel.CHUNK, (1 << 26) // (spec.J + 8)))
    return _parallel.CHUNK


def _saturate(rows: np.ndarray) -> int:
    bad = ~np.isfinite(rows)
    count = int(np.count_nonzero(np.any(bad, axis=1)))
    if count:
        rows[np.isposinf(rows)] = _FMAX
        rows[np.isneginf(rows)] = -_FMAX
        rows[np.isnan(rows)] = _FMAX
    return count


# -------------------------------------------------------------- blocks


@dataclass
class PathBlock:
    """Simulated vectors ``(X_0, ..., X_h)``, one replicate per row.

    ``n_total`` is the number of replicates simulated.  For a block built by
    :func:`simulate_top` only the ``len(rows)`` replicates with the largest
    ordering key are kept (sorted by decreasing key) and ``replicates``
    holds their indices.
    """

    spec: object
    h: int
    rows: np.ndarray
    seed: int | None = None
    stream_id: int | None = None
    start: int = 0
    n_total: int | None = None
    saturation: int = 0
    ordered_by: str | None = None
    replicates: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.n_total is None:
            self.n_total = len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def column(self, t: int) -> np.ndarray:
        return self.rows[:, t]

    def metadata(self) -> dict:
        return {
            "spec": None if self.spec is None else spec_to_dict(self.spec),
            "seed": self.seed,
            "stream_id": self.stream_id,
            "start": self.start,
            "n": self.n_total,
            "rows": self.n,
            "h": self.h,
            "saturation": self.saturation,
            "ordered_by": self.ordered_by,
        }

    def to_csv(self, path) -> Path:
        """Write ``x0,...,xh`` CSV plus a ``.json`` sidecar; returns the sidecar path."""
        return write_rows_csv(path, self.rows, self.metadata())


def write_rows_csv(path, rows: np.ndarray, meta: dict) -> Path:
    path = Path(path)
    header = ",".join(f"x{t}" for t in range(rows.shape[1]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return sidecar


def read_block_csv(path) -> PathBlock:
    """Load a PathBlock CSV (``x0,...,xh`` header); the sidecar is optional."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    if not header or any(name != f"x{t}" for t, name in enumerate(header)):
        raise ValueError(f"{path}: header must be x0,x1,...,xh")
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    meta = {}
    sidecar = path.with_suffix(".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
    spec = spec_from_dict(meta["spec"]) if meta.get("spec") else None
    return PathBlock(
        spec=spec,
        h=len(header) - 1,
        rows=rows,
        seed=meta.get("seed"),
        stream_id=meta.get("stream_id"),
        start=meta.get("start", 0),
        n_total=meta.get("n", len(rows)),
        saturation=meta.get("saturation", 0),
        ordered_by=meta.get("ordered_by"),
    )


def simulate_block(spec, h: int, n: int, stream: RandomStream, threads: int = 1) -> PathBlock:
    """Simulate ``n`` independent replicates of ``(X_0, ..., X_h)``."""
    ensure_valid(spec)
    if h < 1 or n < 1:
        raise ValueError("need h >= 1 and n >= 1")
    chunker = _CHUNKERS[type(spec)]
    rows = np.empty((n, h + 1))

    def work(bounds):
        lo, hi = bounds
        part = chunker(spec, h, stream, lo, hi)
        sat = _saturate(part)
        rows[lo:hi] = part
        return sat

    saturation = sum(_parallel.ordered_map(work, _parallel.chunk_bounds(n, _chunk_size(spec)), threads))
    return PathBlock(spec, h, rows, stream.seed, stream.stream_id, stream.counter, n, saturation)


def _top_indices(keys: np.ndarray, idx: np.ndarray, keep: int) -> np.ndarray:
    """Positions of the ``keep`` largest keys, ties broken by replicate index."""
    if len(keys) > keep:
        cut = np.partition(keys, len(keys) - keep)[len(keys) - keep]
        cand = np.flatnonzero(keys >= cut)
    else:
        cand = np.arange(len(keys))
    order = np.lexsort((idx[cand], -keys[cand]))
    return cand[order[:keep]]


def simulate_top(
    spec,
    h: int,
    n: int,
    stream: RandomStream,
    keep: int,
    by: str = "x0",
    threads: int = 1,
) -> PathBlock:
    """Simulate ``n`` replicates but keep only the ``keep`` rows with largest key.

    ``by`` is ``"x0"`` (rank by ``X_0``) or ``"product:t"`` (rank by
    ``X_0 * X_t``).  The result equals sorting the full block by the key
    and truncating it, at a memory cost of ``O(keep)`` rows.
    """
    ensure_valid(spec)
    if h < 1 or n < 1 or keep < 1:
        raise ValueError("need h >= 1, n >= 1 and keep >= 1")
    key_fn = _key_function(by)
    chunker = _CHUNKERS[type(spec)]

    def work(bounds):
        lo, hi = bounds
        part = chunker(spec, h, stream, lo, hi)
        sat = _saturate(part)
        keys = key_fn(part)
        idx = np.arange(lo, hi)
        sel = _top_indices(keys, idx, keep)
        return part[sel], keys[sel], idx[sel], sat

    rows = np.empty((0, h + 1))
    keys = np.empty(0)
    idx = np.empty(0, dtype=np.int64)
    saturation = 0
    for part, k, i, sat in _parallel.ordered_map(work, _parallel.chunk_bounds(n, _chunk_size(spec)), threads):
        rows = np.concatenate([rows, part])
        keys = np.concatenate([keys, k])
        idx = np.concatenate([idx, i])
        sel = _top_indices(keys, idx, keep)
        rows, keys, idx = rows[sel], keys[sel], idx[sel]
        saturation += sat
    return PathBlock(spec, h, rows, stream.seed, stream.stream_id, stream.counter, n, saturation, by, idx)


def _key_function(by: str):
    if by == "x0":
        return lambda rows: rows[:, 0]
    if by.startswith("product:"):
        t = int(by.split(":", 1)[1])
        return lambda rows: rows[:, 0] * rows[:, t]
    raise ValueError(f"unknown ordering key {by!r}")


def spec_json(spec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True)


__all__ = [
    "ExpAR1",
    "SwitchingExpAR1",
    "ExpLinear",
    "SVHeavyVol",
    "SVHeavyInnov",
    "SVLeverage",
    "GaussianSquareExp",
    "ModelSpec",
    "PathBlock",
    "validate_spec",
    "simulate_block",
    "simulate_top",
    "theoretical_kappa",
    "theoretical_alpha",
    "scaling_b",
    "read_block_csv",
    "spec_to_dict",
    "spec_from_dict",
    "asdict",
]
