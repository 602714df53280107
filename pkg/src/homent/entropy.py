"""Geometric entropy ``S = ln V`` of a graph by Monte Carlo volume integration.

The volume is the integral of ``sqrt(det g)`` over the positive-definiteness
domain restricted to the hypercube ``[box_lo, box_hi]**n``, made finite in one
of two ways:

``analytic``
    multiply the volume density by the regularizer
    ``(H(h - tr) + H(tr - h) * exp(-tr)) * log(1 + det(psi)**m)`` with
    ``tr = sum(theta)``; the log factor tames the boundary where
    ``det(psi) -> 0`` and the trace factor the region of large variances.
``numerical``
    drop every point whose ``sqrt(det g)`` exceeds ``overflow_cap`` (the
    largest double by default) and count it as excluded.

Two samplers are available.  ``uniform`` is plain rejection sampling in the
box.  ``metropolis`` runs a random-walk chain that is uniform on the
in-domain part of the box, averages the integrand along it, and multiplies
by the box volume times the in-domain fraction measured on ``samples``
uniform draws.  The chain keeps working when almost every uniform draw
misses the domain, which happens for dense graphs.

Everything is accumulated in log space so that neither the integrand nor its
square overflows.  Uniform draws come in fixed-size chunks with one RNG
stream per chunk index, and chunk statistics are reduced in index order, so
the estimate does not depend on the number of worker threads.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import DegenerateEstimateError, DomainError, NumericalError
from .graph import Graph
from .infogeo import OVERFLOW_CAP, evaluate_batch, evaluate_one, in_domain, psi
from .rng import generator

MODES = ("analytic", "numerical")
SAMPLERS = ("uniform", "metropolis")


@dataclass(frozen=True)
class IntegrationConfig:
    """Monte Carlo volume settings.

    ``h=None`` and ``regularizer_exponent=None`` resolve to ``10 * n`` and
    ``n`` for an ``n``-vertex graph; see :meth:`resolved`.
    """

    mode: str = "analytic"
    h: float | None = None
    box_lo: float = 0.1
    box_hi: float = 10.0
    samples: int = 100_000
    seed: int = 0
    overflow_cap: float = OVERFLOW_CAP
    regularizer_exponent: int | None = None
    sampler: str = "uniform"
    chunk_size: int = 4096
    step_scale: float = 0.5
    burn_in: float = 0.2

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if not 0 < self.box_lo < self.box_hi or not math.isfinite(self.box_hi):
            raise ValueError(f"need 0 < box_lo < box_hi, got [{self.box_lo}, {self.box_hi}]")
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError("samples must be a positive integer")
        if self.h is not None and not self.h > 0:
            raise ValueError("h must be positive")
        if not self.overflow_cap > 0:
            raise ValueError("overflow_cap must be positive")
        if self.regularizer_exponent is not None and (
                int(self.regularizer_exponent) != self.regularizer_exponent
                or self.regularizer_exponent < 1):
            raise ValueError("regularizer_exponent must be a positive integer")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        if not self.step_scale > 0:
            raise ValueError("step_scale must be positive")
        if not 0 <= self.burn_in < 10:
            raise ValueError("burn_in must lie in [0, 10)")
        object.__setattr__(self, "samples", int(self.samples))

    def resolved(self, n: int) -> IntegrationConfig:
        return replace(
            self,
            h=float(10 * n) if self.h is None else float(self.h),
            regularizer_exponent=n if self.regularizer_exponent is None
            else int(self.regularizer_exponent),
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EntropyEstimate:
    """Result of :func:`mc_volume`.

    For the uniform sampler ``n_in_domain`` counts draws inside the domain
    and ``n_overflow_excluded`` those of them dropped by the cap.  For the
    Metropolis sampler the same counters describe the uniform pass that
    measures ``domain_fraction``; the chain has its own length and
    acceptance rate.  ``n_unresolved`` counts in-domain points whose metric
    determinant was beyond working precision; they are left out of the sum.
    """

    S: float
    stderr_S: float
    n: int
    n_samples: int
    n_in_domain: int
    n_overflow_excluded: int
    n_unresolved: int
    mean_sqrt_det: float
    log_mean_sqrt_det: float
    domain_fraction: float
    chain_length: int
    acceptance_rate: float | None
    config: IntegrationConfig
    wall_time_s: float = field(default=0.0, compare=False)

    @property
    def S_over_n(self) -> float:
        return self.S / self.n

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "S": self.S,
            "stderr_S": self.stderr_S,
            "S_over_n": self.S_over_n,
            "n": self.n,
            "n_samples": self.n_samples,
            "n_in_domain": self.n_in_domain,
            "n_overflow_excluded": self.n_overflow_excluded,
            "n_unresolved": self.n_unresolved,
            "mean_sqrt_det": self.mean_sqrt_det if math.isfinite(self.mean_sqrt_det) else None,
            "log_mean_sqrt_det": self.log_mean_sqrt_det,
            "domain_fraction": self.domain_fraction,
            "chain_length": self.chain_length,
            "acceptance_rate": self.acceptance_rate,
            "config": self.config.to_dict(),
        }
        if timing:
            out["wall_time_s"] = self.wall_time_s
        return out


# --------------------------------------------------------------------------
# integrand

def _log_softplus(x):
    """``log(log(1 + exp(x)))`` without underflow for very negative ``x``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x < -30.0, x, np.log(np.logaddexp(0.0, x)))


def log_regularizer(trace, log_det_psi, h, m):
    """Natural log of the regularizer; ``H(0)`` counts toward the first term."""
    trace = np.asarray(trace, dtype=float)
    return np.where(trace <= h, 0.0, -trace) + _log_softplus(m * np.asarray(log_det_psi))


def regularizer(theta, g: Graph, cfg: IntegrationConfig) -> float:
    """Regularizing factor at one in-domain point.

    Raises
    ------
    DomainError
        If ``theta`` is outside the positive-definiteness domain.
    """
    if not in_domain(theta, g):
        raise DomainError("theta outside Theta-tilde")
    cfg = cfg.resolved(g.n)
    sign, log_det = np.linalg.slogdet(psi(theta, g))
    lr = log_regularizer(float(np.sum(theta)), log_det, cfg.h, cfg.regularizer_exponent)
    return float(np.exp(lr))


def _log_integrand(thetas, A, cfg, log_cap):
    """Evaluate a batch; returns ``(ev, kept, excluded, log_w, log_sqrt_det)``."""
    ev = evaluate_batch(thetas, A)
    lsd = 0.5 * ev.log_det_g
    usable = ev.in_domain & ev.resolved
    if cfg.mode == "numerical":
        excluded = usable & (lsd > log_cap)
        kept = usable & ~excluded
        lw = lsd
    else:
        excluded = np.zeros_like(usable)
        kept = usable
        with np.errstate(invalid="ignore"):
            lw = lsd + log_regularizer(thetas.sum(axis=1), ev.log_det_psi,
                                       cfg.h, cfg.regularizer_exponent)
    bad = kept & ~(np.isfinite(lw) | (lw == -np.inf))
    if bad.any():
        raise NumericalError("non-finite integrand at a kept point", thetas[np.argmax(bad)])
    return ev, kept, excluded, lw, lsd


def _log_integrand_one(theta, A, cfg, log_cap):
    """Single-point version of :func:`_log_integrand`: ``(kept, log_w, log_sqrt_det)``."""
    ok, resolved, log_det_psi, log_det_g = evaluate_one(theta, A)
    if not (ok and resolved):
        return False, math.nan, math.nan
    lsd = 0.5 * log_det_g
    if cfg.mode == "numerical":
        return lsd <= log_cap, lsd, lsd
    lw = lsd + float(log_regularizer(theta.sum(), log_det_psi, cfg.h, cfg.regularizer_exponent))
    if math.isnan(lw) or lw == math.inf:
        raise NumericalError("non-finite integrand at a kept point", theta)
    return True, lw, lsd


# --------------------------------------------------------------------------
# log-space accumulators

@dataclass
class _Moments:
    """Running ``sum(exp(x))`` and ``sum(exp(2x))`` stored relative to a shift."""

    shift: float = -math.inf
    s1: float = 0.0
    s2: float = 0.0

    def add(self, logs):
        logs = logs[logs > -np.inf]
        if logs.size == 0:
            return
        self.merge(_Moments(float(logs.max()), 0.0, 0.0)._fill(logs))

    def _fill(self, logs):
        e = np.exp(logs - self.shift)
        self.s1 = float(e.sum())
        self.s2 = float((e * e).sum())
        return self

    def merge(self, other):
        if other.shift == -math.inf:
            return
        if self.shift == -math.inf:
            self.shift, self.s1, self.s2 = other.shift, other.s1, other.s2
            return
        m = max(self.shift, other.shift)
        a, b = math.exp(self.shift - m), math.exp(other.shift - m)
        self.s1 = self.s1 * a + other.s1 * b
        self.s2 = self.s2 * a * a + other.s2 * b * b
        self.shift = m

    def log_mean(self, count):
        if self.s1 == 0.0:
            return -math.inf
        return self.shift + math.log(self.s1) - math.log(count)

    def rel_stderr(self, count):
        """Standard error of the mean divided by the mean."""
        if self.s1 == 0.0 or count < 2:
            return math.inf
        ratio = self.s2 * count / (self.s1 * self.s1)
        return math.sqrt(max(ratio - 1.0, 0.0) / (count - 1))


@dataclass
class _ChunkStats:
    size: int = 0
    n_in: int = 0
    n_excluded: int = 0
    n_unresolved: int = 0
    n_kept: int = 0
    w: _Moments = field(default_factory=_Moments)
    sqrt_det: _Moments = field(default_factory=_Moments)
    first_kept: np.ndarray | None = None

    def merge(self, other):
        self.size += other.size
        self.n_in += other.n_in
        self.n_excluded += other.n_excluded
        self.n_unresolved += other.n_unresolved
        self.n_kept += other.n_kept
        self.w.merge(other.w)
        self.sqrt_det.merge(other.sqrt_det)
        if self.first_kept is None:
            self.first_kept = other.first_kept


def _uniform_chunk(index, size, n, A, cfg, log_cap, perm):
    rng = generator(cfg.seed, 0, index)
    raw = rng.uniform(cfg.box_lo, cfg.box_hi, size=(size, n))
    theta = np.empty_like(raw)
    theta[:, perm] = raw
    ev, kept, excluded, lw, lsd = _log_integrand(theta, A, cfg, log_cap)
    st = _ChunkStats(size=size, n_in=int(ev.in_domain.sum()), n_excluded=int(excluded.sum()),
                     n_unresolved=int((ev.in_domain & ~ev.resolved).sum()),
                     n_kept=int(kept.sum()))
    st.w.add(lw[kept])
    st.sqrt_det.add(lsd[kept])
    if st.n_kept:
        st.first_kept = raw[np.argmax(kept)].copy()
    return st


def _uniform_pass(n, A, cfg, log_cap, perm, workers):
    sizes = [min(cfg.chunk_size, cfg.samples - start)
             for start in range(0, cfg.samples, cfg.chunk_size)]
    args = [(i, s, n, A, cfg, log_cap, perm) for i, s in enumerate(sizes)]
    if workers > 1 and len(args) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda a: _uniform_chunk(*a), args))
    else:
        chunks = [_uniform_chunk(*a) for a in args]
    total = _ChunkStats()
    for st in chunks:
        total.merge(st)
    return total


def _batch_means_rel(logs, n_batches=20):
    """Relative standard error of ``mean(exp(logs))`` from batch means."""
    k = min(n_batches, logs.size)
    if k < 2:
        return math.inf
    e = np.exp(logs - logs.max())
    usable = (logs.size // k) * k
    means = e[:usable].reshape(k, -1).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(k) / e.mean())


def _metropolis(g, A, cfg, log_cap, perm, start_raw):
    """Random-walk chain, uniform on the usable part of the box.

    Works on raw coordinates; raw coordinate ``j`` is vertex ``perm[j]``.
    Returns ``(log_w, log_sqrt_det, accepted)`` for the recorded steps.
    """
    n = g.n
    rng = generator(cfg.seed, 1)
    burn = int(round(cfg.burn_in * cfg.samples))
    steps = burn + cfg.samples
    coords = rng.integers(n, size=steps)
    noise = rng.normal(size=steps) * cfg.step_scale * (cfg.box_hi - cfg.box_lo)

    def point(raw):
        theta = np.empty(n)
        theta[perm] = raw
        return theta

    cur = start_raw.copy()
    kept, cur_lw, cur_lsd = _log_integrand_one(point(cur), A, cfg, log_cap)
    if not kept:
        raise DegenerateEstimateError("volume estimate degenerate: chain start not usable")
    rec_lw = np.empty(cfg.samples)
    rec_lsd = np.empty(cfg.samples)
    accepted = 0
    for t in range(steps):
        j = coords[t]
        x = cur[j] + noise[t]
        if cfg.box_lo <= x <= cfg.box_hi:
            prop = cur.copy()
            prop[j] = x
            kept, lw, lsd = _log_integrand_one(point(prop), A, cfg, log_cap)
            if kept:
                cur, cur_lw, cur_lsd = prop, lw, lsd
                if t >= burn:
                    accepted += 1
        if t >= burn:
            rec_lw[t - burn] = cur_lw
            rec_lsd[t - burn] = cur_lsd
    return rec_lw, rec_lsd, accepted


def _fallback_start(g, cfg, perm):
    """Diagonally dominant starting point, as raw coordinates."""
    theta = np.clip(g.degrees() + 1.0, cfg.box_lo, cfg.box_hi)
    return theta[perm]


def mc_volume(g: Graph, cfg: IntegrationConfig, *, permutation=None,
              workers: int = 1) -> EntropyEstimate:
    """Monte Carlo estimate of the regularized volume and ``S = ln V``.

    Parameters
    ----------
    g : Graph
    cfg : IntegrationConfig
    permutation : sequence of int, optional
        Routes raw sample coordinate ``j`` to vertex ``permutation[j]``.
        Estimating ``permute(g, pi)`` with ``permutation=pi`` replays exactly
        the sample stream seen by ``g``, so the two estimates are bitwise
        equal.
    workers : int
        Threads for the uniform pass; does not change the result.

    Raises
    ------
    DegenerateEstimateError
        If no sample point contributes to the estimate.
    NumericalError
        If a contributing point yields a non-finite integrand.
    """
    t0 = time.perf_counter()
    n = g.n
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    cfg = cfg.resolved(n)
    perm = np.arange(n) if permutation is None else np.asarray(permutation, dtype=int)
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("permutation must be a bijection on 0..n-1")
    A = g.adjacency()
    log_cap = math.log(cfg.overflow_cap)
    log_box = n * math.log(cfg.box_hi - cfg.box_lo)

    st = _uniform_pass(n, A, cfg, log_cap, perm, workers)
    if cfg.sampler == "uniform":
        if st.n_kept == 0:
            raise DegenerateEstimateError(
                f"volume estimate degenerate: none of {st.size} samples kept "
                f"({st.n_in} in domain, {st.n_excluded} over the cap)")
        log_mean = st.w.log_mean(st.size)
        S = log_box + log_mean
        stderr = st.w.rel_stderr(st.size)
        log_msd = st.sqrt_det.log_mean(st.n_kept)
        frac = st.n_in / st.size
        chain_length, acc = 0, None
    else:
        start = st.first_kept if st.first_kept is not None else _fallback_start(g, cfg, perm)
        rec_lw, rec_lsd, accepted = _metropolis(g, A, cfg, log_cap, perm, start)
        frac = (st.n_kept + 0.5) / (st.size + 1)
        rel_p = math.sqrt(frac * (1 - frac) / (st.size + 1)) / frac
        m = rec_lw.max()
        log_mean = m + math.log(np.exp(rec_lw - m).mean()) if m > -np.inf else -math.inf
        if log_mean == -math.inf:
            raise DegenerateEstimateError("volume estimate degenerate: integrand vanished on chain")
        S = log_box + math.log(frac) + log_mean
        stderr = math.hypot(_batch_means_rel(rec_lw), rel_p)
        ms = rec_lsd.max()
        log_msd = ms + math.log(np.exp(rec_lsd - ms).mean())
        chain_length, acc = cfg.samples, accepted / cfg.samples

    if not math.isfinite(S):
        raise NumericalError("non-finite entropy estimate")
    return EntropyEstimate(
        S=float(S),
        stderr_S=float(stderr),
        n=n,
        n_samples=st.size,
        n_in_domain=st.n_in,
        n_overflow_excluded=st.n_excluded,
        n_unresolved=st.n_unresolved,
        mean_sqrt_det=math.exp(log_msd) if log_msd < 709.78 else math.inf,
        log_mean_sqrt_det=log_msd,
        domain_fraction=frac,
        chain_length=chain_length,
        acceptance_rate=acc,
        config=cfg,
        wall_time_s=time.perf_counter() - t0,
    )


def entropy_per_node(g: Graph, cfg: IntegrationConfig, **kwargs) -> float:
    return mc_volume(g, cfg, **kwargs).S_over_n
