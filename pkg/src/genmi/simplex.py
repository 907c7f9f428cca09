"""Finite probability distributions, channels, posteriors, tilts, and norms.

All containers are immutable (frozen dataclasses over read-only float64
arrays) and every operation is a pure function, so objects can be shared
freely across threads.  Conventions used throughout the package:

- 0 * log 0 = 0 and 0**a = 0 for every a > 0,
- posteriors are only defined on outputs with positive marginal mass;
  unsupported outputs carry zero weight in every expectation over Y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllZero,
    BadAlpha,
    DimensionMismatch,
    DomainError,
    NegativeMass,
    NonFinite,
)

#: Absolute slack for "sums to one" checks.
SUM_TOL = 1e-9

#: Entries above this (negative) threshold are clamped to zero on input.
CLAMP_TOL = -1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Pmf:
    """Probability vector on a finite alphabet of size m >= 1."""

    probs: np.ndarray

    def __post_init__(self):
        p = _freeze(np.atleast_1d(self.probs))
        if p.ndim != 1 or p.size < 1:
            raise DimensionMismatch("a pmf must be a non-empty vector")
        if not np.all(np.isfinite(p)):
            raise NonFinite("pmf entries must be finite")
        if np.any(p < 0.0) or np.any(p > 1.0 + SUM_TOL):
            raise DomainError("pmf entries must lie in [0, 1]")
        if abs(float(p.sum()) - 1.0) > SUM_TOL:
            raise DomainError("pmf entries must sum to 1 within 1e-9")
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, i: int) -> float:
        return float(self.probs[i])

    @property
    def support(self) -> np.ndarray:
        """Indices with strictly positive mass."""
        return np.flatnonzero(self.probs > 0.0)


@dataclass(frozen=True)
class Channel:
    """Row-stochastic matrix; row x is the output distribution given input x."""

    rows: np.ndarray

    def __post_init__(self):
        w = _freeze(np.atleast_2d(self.rows))
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise DimensionMismatch("a channel must be a non-empty matrix")
        for x in range(w.shape[0]):
            Pmf(w[x])  # row-wise validation
        object.__setattr__(self, "rows", w)

    @property
    def nx(self) -> int:
        return self.rows.shape[0]

    @property
    def ny(self) -> int:
        return self.rows.shape[1]

    def row(self, x: int) -> Pmf:
        return Pmf(self.rows[x])

    def compose(self, other: "Channel") -> "Channel":
        """Cascade: the X -> Z channel obtained by feeding Y into `other`."""
        if self.ny != other.nx:
            raise DimensionMismatch(
                f"cannot compose {self.ny}-output channel with {other.nx}-input channel"
            )
        return Channel(self.rows @ other.rows)


@dataclass(frozen=True)
class Joint:
    """Joint distribution over (x, y) as an |X| x |Y| cell matrix."""

    cells: np.ndarray

    def __post_init__(self):
        c = _freeze(np.atleast_2d(self.cells))
        if not np.all(np.isfinite(c)):
            raise NonFinite("joint cells must be finite")
        if np.any(c < 0.0):
            raise DomainError("joint cells must be non-negative")
        if abs(float(c.sum()) - 1.0) > SUM_TOL:
            raise DomainError("joint cells must sum to 1 within 1e-9")
        object.__setattr__(self, "cells", c)

    @property
    def x_marginal(self) -> Pmf:
        return make_pmf(self.cells.sum(axis=1))

    @property
    def y_marginal(self) -> Pmf:
        return make_pmf(self.cells.sum(axis=0))


@dataclass(frozen=True)
class Posterior:
    """Output marginal plus the posterior over X for each supported output.

    `cols` maps each y with positive marginal mass to the conditional
    distribution of X given Y = y; outputs with zero mass are excluded
    from `support` and have no column.
    """

    p_y: Pmf
    cols: dict[int, Pmf]
    support: tuple[int, ...]

    def col(self, y: int) -> Pmf:
        try:
            return self.cols[y]
        except KeyError:
            raise DomainError(f"output {y} has zero probability; no posterior defined")


def make_pmf(values) -> Pmf:
    """Sanitize a vector into a Pmf.

    Entries in [-1e-12, 0) are clamped to zero (file round-trip noise);
    anything more negative is rejected.  The result is renormalized.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise DimensionMismatch("cannot build a pmf from an empty vector")
    if not np.all(np.isfinite(v)):
        raise NonFinite("pmf input contains NaN or infinity")
    if np.any(v < CLAMP_TOL):
        raise NegativeMass(f"pmf input has entry {v.min():g} below {CLAMP_TOL:g}")
    v = np.where(v < 0.0, 0.0, v)
    total = float(v.sum())
    if total <= 1e-15:
        raise AllZero("pmf input sums to (numerically) zero")
    # skipping the division when the sum is already 1 up to float noise
    # makes sanitation exactly idempotent
    if abs(total - 1.0) > 1e-12:
        v = v / total
    return Pmf(v)


def make_channel(rows) -> Channel:
    """Sanitize a matrix into a Channel, row by row via make_pmf."""
    w = np.asarray(rows, dtype=np.float64)
    if w.ndim != 2:
        raise DimensionMismatch("a channel must be a 2-d matrix")
    return Channel(np.vstack([make_pmf(w[x]).probs for x in range(w.shape[0])]))


def uniform(m: int) -> Pmf:
    return Pmf(np.full(m, 1.0 / m))


def joint(p_x: Pmf, w: Channel) -> Joint:
    """Joint distribution with cells p_x(x) * w(y|x)."""
    if len(p_x) != w.nx:
        raise DimensionMismatch(f"prior has {len(p_x)} entries, channel has {w.nx} rows")
    return Joint(p_x.probs[:, None] * w.rows)


def posterior(p_x: Pmf, w: Channel) -> Posterior:
    """Bayes inversion of (p_x, w): output marginal and per-output posteriors."""
    if len(p_x) != w.nx:
        raise DimensionMismatch(f"prior has {len(p_x)} entries, channel has {w.nx} rows")
    cells = p_x.probs[:, None] * w.rows
    p_y = cells.sum(axis=0)
    support = tuple(int(y) for y in np.flatnonzero(p_y > 0.0))
    cols = {y: Pmf(cells[:, y] / p_y[y]) for y in support}
    return Posterior(p_y=make_pmf(p_y), cols=cols, support=support)


def alpha_tilt(p: Pmf, alpha: float) -> Pmf:
    """Tilted distribution p(x)**alpha, renormalized; alpha = 1 is the identity."""
    _check_alpha(alpha)
    w = p.probs ** alpha
    total = float(w.sum())
    if total <= 0.0 or not np.isfinite(total):
        raise NonFinite("tilt has no finite positive mass")
    return Pmf(w / total)


def p_norm(p: Pmf, alpha: float) -> float:
    """(sum_x p(x)**alpha)**(1/alpha); for alpha < 1 the quasi-norm, same formula."""
    _check_alpha(alpha)
    return float(np.sum(p.probs ** alpha) ** (1.0 / alpha))


def _check_alpha(alpha: float) -> None:
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise BadAlpha(f"order must be a finite positive real, got {alpha!r}")
