"""Alternating-maximization capacity solver and its brute-force oracle.

The solver alternates exact inner maximization over response families
with outer maximization over priors (closed-form where available,
safeguarded numeric ascent otherwise), tracking the objective after each
full round.  It stops when the objective gain drops below the threshold
or the iteration budget runs out; because both half-steps are (inexact
but safeguarded) maximizations, the trace can never properly decrease --
a decrease beyond 1e-8 is reported as an internal bug.

The oracle maximizes the mutual information itself over a simplex grid
(with golden-section refinement for binary inputs), touching none of the
functional or update code, so it catches errors anywhere in that chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import mutual_information
from .errors import Diverged, DimensionMismatch, DomainError, TooLarge
from .simplex import Channel, Pmf, uniform
from .variational import (
    FunctionalSpec,
    eval_functional,
    p_step_closed,
    p_step_numeric,
    q_step,
)

#: Largest simplex grid the oracle will enumerate.
MAX_GRID_POINTS = 20_000_000


@dataclass(frozen=True)
class SolverConfig:
    """Measure selection plus stopping and inner-solver knobs.

    `epsilon` is the absolute objective-gain threshold (must lie in
    (0, 1)); `relative` switches to |gain| / max(1, |value|) as an
    opt-in.  `numeric_*` only matter for measures without a closed-form
    prior update; `force_numeric` routes even closed-form measures
    through the numeric ascent (useful for cross-checks).
    """

    spec: FunctionalSpec
    epsilon: float = 1e-10
    max_iter: int = 10000
    p0: Pmf | None = None
    numeric_step: float = 0.5
    numeric_iters: int = 200
    force_numeric: bool = False
    relative: bool = False

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        if self.max_iter < 1:
            raise DomainError("max_iter must be a positive integer")


@dataclass(frozen=True)
class SolveResult:
    capacity: float
    argmax_p: Pmf
    iterations: int
    trace: tuple[float, ...]
    converged: bool


def solve(cfg: SolverConfig, w: Channel) -> SolveResult:
    """Run the alternating maximization on the channel.

    Starts from cfg.p0 (uniform by default, which must be strictly
    interior), takes the exact response step, then loops prior step /
    response step until the objective stalls within epsilon.
    """
    spec = cfg.spec
    p = cfg.p0 if cfg.p0 is not None else uniform(w.nx)
    if len(p) != w.nx:
        raise DimensionMismatch("initial prior and channel input alphabets differ")
    if np.any(p.probs <= 0.0):
        raise DomainError("initial prior must be strictly positive")

    closed = spec.has_closed_p_step and not cfg.force_numeric
    q = q_step(spec, p, w)
    trace = [eval_functional(spec, p, w, q)]
    converged = False

    for _ in range(cfg.max_iter):
        if closed:
            p = p_step_closed(spec, w, q)
        else:
            p = p_step_numeric(spec, w, q, p, iters=cfg.numeric_iters, step=cfg.numeric_step)
        q = q_step(spec, p, w)
        value = eval_functional(spec, p, w, q)
        if value < trace[-1] - 1e-8:
            raise Diverged(
                f"objective decreased from {trace[-1]:.12g} to {value:.12g}"
            )
        gain = abs(value - trace[-1])
        trace.append(value)
        if cfg.relative:
            gain = gain / max(1.0, abs(value))
        if gain < cfg.epsilon:
            converged = True
            break

    return SolveResult(
        capacity=trace[-1],
        argmax_p=p,
        iterations=len(trace) - 1,
        trace=tuple(trace),
        converged=converged,
    )


def convergence_trace(result: SolveResult) -> list[tuple[int, float, float | None]]:
    """Rows (k, objective, gain) for export; the first gain is undefined."""
    rows: list[tuple[int, float, float | None]] = []
    prev: float | None = None
    for k, value in enumerate(result.trace):
        rows.append((k, value, None if prev is None else value - prev))
        prev = value
    return rows


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_capacity(spec: FunctionalSpec, w: Channel, resolution: float) -> float:
    """Grid-search maximum of the mutual information over priors."""
    value, _ = brute_force_search(spec, w, resolution)
    return value


def brute_force_search(
    spec: FunctionalSpec, w: Channel, resolution: float
) -> tuple[float, Pmf]:
    """Grid-search maximum and its location.

    Enumerates all priors with entries on a grid of the given resolution,
    evaluates the measure's mutual information at each (vectorized per
    measure family, never through the functional), and for binary inputs
    refines the best grid cell by golden-section search.
    """
    m = w.nx
    if m > 4:
        raise TooLarge(f"oracle handles at most 4 input symbols, got {m}")
    if not 1e-4 <= resolution <= 1e-1:
        raise DomainError(f"resolution must lie in [1e-4, 1e-1], got {resolution!r}")

    if m == 1:
        p = Pmf(np.array([1.0]))
        return _mi_value(spec, p, w), p

    steps = max(1, round(1.0 / resolution))
    count = math.comb(steps + m - 1, m - 1)
    if count > MAX_GRID_POINTS:
        raise TooLarge(
            f"grid of {count} points exceeds the oracle limit of {MAX_GRID_POINTS}"
        )

    best_val = -math.inf
    best_p: np.ndarray | None = None
    for chunk in _grid_chunks(m, steps, chunk_rows=250_000):
        vals = _batch_mi(spec, chunk, w.rows)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_p = chunk[i].copy()

    if m == 2:
        t_best = best_p[0]
        lo = max(0.0, t_best - 1.0 / steps)
        hi = min(1.0, t_best + 1.0 / steps)
        t_ref, v_ref = _golden_max(
            lambda t: float(_batch_mi(spec, np.array([[t, 1.0 - t]]), w.rows)[0]),
            lo,
            hi,
        )
        if v_ref > best_val:
            best_val = v_ref
            best_p = np.array([t_ref, 1.0 - t_ref])

    return best_val, Pmf(best_p)


def _mi_value(spec: FunctionalSpec, p: Pmf, w: Channel) -> float:
    return mutual_information(spec.pair, p, w).mi


def _grid_chunks(m: int, steps: int, chunk_rows: int):
    """Yield blocks of simplex grid points (rows sum to 1) in a fixed order."""
    buf: list[np.ndarray] = []

    def _emit(prefix: list[int], remaining: int, depth: int):
        if depth == m - 1:
            buf.append(np.array(prefix + [remaining], dtype=np.float64))
            return
        for k in range(remaining + 1):
            _emit(prefix + [k], remaining - k, depth + 1)

    if m == 2:
        ks = np.arange(steps + 1, dtype=np.float64)
        grid = np.column_stack([ks, steps - ks]) / steps
        for i in range(0, grid.shape[0], chunk_rows):
            yield grid[i : i + chunk_rows]
        return

    _emit([], steps, 0)
    grid = np.vstack(buf) / steps
    for i in range(0, grid.shape[0], chunk_rows):
        yield grid[i : i + chunk_rows]


def _batch_mi(spec: FunctionalSpec, priors: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Mutual information of the spec's measure at a batch of priors.

    Direct per-measure formulas on stacked arrays; the generic path falls
    back to looping over rows with the measure's own entropy pair.
    """
    kind = spec.kind
    a = spec.alpha
    p_y = priors @ w  # (N, ny)
    cells = priors[:, :, None] * w[None, :, :]  # (N, nx, ny)
    safe_py = np.where(p_y > 0.0, p_y, 1.0)
    cols = cells / safe_py[:, None, :]  # posterior columns, junk where p_y = 0

    if kind == "shannon":
        with np.errstate(divide="ignore", invalid="ignore"):
            h_x = -np.sum(np.where(priors > 0.0, priors * np.log(priors), 0.0), axis=1)
            plogp = np.where(cols > 0.0, cols * np.log(cols), 0.0)
        h_cols = -plogp.sum(axis=1)  # (N, ny)
        h_xy = np.sum(np.where(p_y > 0.0, p_y * h_cols, 0.0), axis=1)
        return h_x - h_xy

    col_pow = np.sum(cols ** a, axis=1)  # sum_x cols^a, (N, ny)
    prior_pow = np.sum(priors ** a, axis=1)  # (N,) = ||p||_a^a

    if kind in ("arimoto_a1", "arimoto_a2"):
        # h_x = (a/(1-a)) log ||p||_a; conditional averages the column norms
        h_x = (1.0 / (1.0 - a)) * np.log(prior_pow)
        avg = np.sum(np.where(p_y > 0.0, p_y * col_pow ** (1.0 / a), 0.0), axis=1)
        return h_x - (a / (1.0 - a)) * np.log(avg)

    if kind == "hayashi":
        h_x = (1.0 / (1.0 - a)) * np.log(prior_pow)
        avg = np.sum(np.where(p_y > 0.0, p_y * col_pow, 0.0), axis=1)
        return h_x - (1.0 / (1.0 - a)) * np.log(avg)

    if kind == "fb":
        # h_x = -log ||p||_a^(a/(a-1)); conditional is -log of the averaged powers
        h_x = -(1.0 / (a - 1.0)) * np.log(prior_pow)
        avg = np.sum(np.where(p_y > 0.0, p_y * col_pow ** (1.0 / (a - 1.0)), 0.0), axis=1)
        return h_x + np.log(avg)

    # generic: per-row evaluation with the measure itself
    out = np.empty(priors.shape[0])
    chan = Channel(w)
    for i in range(priors.shape[0]):
        out[i] = mutual_information(spec.pair, Pmf(priors[i]), chan).mi
    return out


def _golden_max(f, lo: float, hi: float) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi] down to width 1e-12."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    b = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fb, fd = f(b), f(d)
    while hi - lo > 1e-12:
        if fb > fd:
            hi, d, fd = d, b, fb
            b = hi - inv_phi * (hi - lo)
            fb = f(b)
        else:
            lo, b, fb = b, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    t = 0.5 * (lo + hi)
    return t, f(t)
