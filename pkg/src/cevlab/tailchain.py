"""Tail chains ``Y_t = Y_{t-1}**kappa * W_t`` started from a Pareto ``Y_0``.

For a Markov chain whose kernel, rescaled by ``b(x) = x**kappa``, converges
to a law ``G``, the path conditioned on a large start converges to this
chain.  When ``G`` has an atom at zero the chain is absorbed at zero after
a geometric time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from .models import ExpAR1, SwitchingExpAR1, write_rows_csv
from .randomness import CenteredLogParetoLaw, RandomStream


@dataclass(frozen=True)
class TailChainSpec:
    """``alpha`` of ``Y_0``, per-step exponent ``kappa``, the law of ``W`` and ``G({0})``.

    ``w_sampler`` is any object with ``sample_from_uniform(u)``.
    """

    alpha: float
    kappa: float
    w_sampler: object
    absorb_prob: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not 0.0 <= self.absorb_prob <= 1.0:
            raise ValueError("absorb_prob out of [0,1]")

    def describe(self) -> dict:
        return {
            "alpha": self.alpha,
            "kappa": self.kappa,
            "w_law": repr(self.w_sampler),
            "absorb_prob": self.absorb_prob,
        }


@dataclass
class TailPath:
    spec: TailChainSpec
    h: int
    rows: np.ndarray
    seed: int | None = None
    stream_id: int | None = None
    start: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.rows)

    def column(self, t: int) -> np.ndarray:
        return self.rows[:, t]

    def metadata(self) -> dict:
        return {
            "tail_chain": self.spec.describe(),
            "seed": self.seed,
            "stream_id": self.stream_id,
            "start": self.start,
            "n": self.n,
            "h": self.h,
            **self.meta,
        }

    def to_csv(self, path):
        return write_rows_csv(path, self.rows, self.metadata())


def tail_chain_for(spec) -> TailChainSpec:
    """Tail chain of a Markov model family."""
    if isinstance(spec, ExpAR1):
        return TailChainSpec(spec.alpha, spec.phi, CenteredLogParetoLaw(spec.alpha))
    if isinstance(spec, SwitchingExpAR1):
        return TailChainSpec(spec.alpha, spec.phi, spec.r_law, spec.eta)
    raise ValueError(f"no Markov tail chain for {getattr(spec, 'kind', spec)!r}")


def _chunk(spec: TailChainSpec, h, stream, lo, hi):
    m = hi - lo
    out = np.empty((m, h + 1))
    y = stream.uniforms(0, lo, m) ** (-1.0 / spec.alpha)
    out[:, 0] = y
    alive = np.ones(m, dtype=bool)
    for t in range(1, h + 1):
        w = spec.w_sampler.sample_from_uniform(stream.uniforms(2 * t - 1, lo, m))
        if spec.absorb_prob > 0:
            alive &= stream.uniforms(2 * t, lo, m) >= spec.absorb_prob
        with np.errstate(over="ignore"):
            y = np.where(alive, y**spec.kappa * w, 0.0)
        out[:, t] = y
    return out


def simulate_tail_chain(spec: TailChainSpec, h: int, n: int, stream: RandomStream, threads: int = 1) -> TailPath:
    """``n`` independent tail-chain paths ``(Y_0, ..., Y_h)``.

    Uniform slot ``0`` drives ``Y_0``, slot ``2t - 1`` drives ``W_t`` and
    slot ``2t`` the absorption mark of step ``t``.
    """
    if h < 0 or n < 1:
        raise ValueError("need h >= 0 and n >= 1")
    rows = np.empty((n, h + 1))

    def work(bounds):
        lo, hi = bounds
        rows[lo:hi] = _chunk(spec, h, stream, lo, hi)

    for _ in _parallel.ordered_map(work, _parallel.chunk_bounds(n), threads):
        pass
    return TailPath(spec, h, rows, stream.seed, stream.stream_id, stream.counter)


def j_vector_from_w(kappa: float, w) -> np.ndarray:
    """Unrolled chain factors: ``J_t = prod_{j <= t} W_j ** kappa**(t - j)``.

    ``w`` has the steps on its last axis; so does the result, and
    ``Y_t = Y_0 ** kappa**t * J_t``.
    """
    w = np.asarray(w, dtype=float)
    if w.shape[-1] < 1:
        raise ValueError("need at least one step")
    out = np.empty_like(w)
    acc = w[..., 0]
    out[..., 0] = acc
    for t in range(1, w.shape[-1]):
        acc = acc**kappa * w[..., t]
        out[..., t] = acc
    return out
