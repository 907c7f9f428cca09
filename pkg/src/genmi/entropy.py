"""Core-concave entropy measures and the mutual informations they induce.

A measure is a pair (eta, F): a concave core F on the simplex and a
strictly increasing outer map eta on F's range.  The unconditional
entropy is eta(F(p)); the conditional entropy averages F over the
posteriors *inside* eta; mutual information is their difference.  All
values are in nats.

Four concrete measures are provided:

    shannon        eta(t) = t,                F(p) = -sum p log p
    arimoto(a)     eta(t) = a/(1-a) log(+-t), F(p) = +-||p||_a
    hayashi(a)     eta(t) = 1/(1-a) log(+-t), F(p) = +-||p||_a^a
    fehr_berens(a) eta(t) = -log(-t),         F(p) = -||p||_a^(a/(a-1)),  a > 1

For orders a > 1 the core is stored negated so that it stays concave and
eta reads log(-t); the outer maps undo the sign, so all three order-a
measures report the same unconditional value (the order-a entropy) while
their conditional versions differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BadAlpha, DimensionMismatch, DomainError
from .simplex import Channel, Pmf, posterior


@dataclass(frozen=True)
class EntropyPair:
    """A concave core with its gradient and a strictly increasing outer map.

    `eta_domain` is the open interval of arguments eta accepts; feeding it
    a value outside raises DomainError rather than silently flipping signs.
    `grad_f` is a subgradient of F, guaranteed on the simplex interior only.
    """

    name: str
    F: Callable[[np.ndarray], float]
    grad_f: Callable[[np.ndarray], np.ndarray]
    eta: Callable[[float], float]
    eta_domain: tuple[float, float]
    alpha: float | None = None

    def eta_checked(self, t: float) -> float:
        lo, hi = self.eta_domain
        if not lo < t < hi:
            raise DomainError(
                f"{self.name}: core value {t:g} outside eta domain ({lo:g}, {hi:g})"
            )
        return self.eta(t)


@dataclass(frozen=True)
class MiReport:
    """Unconditional entropy, conditional entropy, and their difference."""

    h_x: float
    h_x_given_y: float
    mi: float


def _shannon_core(p: np.ndarray) -> float:
    mask = p > 0.0
    return float(-np.sum(p[mask] * np.log(p[mask])))


def shannon_pair() -> EntropyPair:
    return EntropyPair(
        name="shannon",
        F=_shannon_core,
        grad_f=lambda p: -np.log(p) - 1.0,
        eta=lambda t: t,
        eta_domain=(-math.inf, math.inf),
    )


def arimoto_pair(alpha: float) -> EntropyPair:
    """Core +-||p||_a with outer map (a/(1-a)) log(+-t)."""
    _check_order(alpha)
    a = float(alpha)
    sign = 1.0 if a < 1.0 else -1.0

    def F(p: np.ndarray) -> float:
        return sign * float(np.sum(p ** a) ** (1.0 / a))

    def grad_f(p: np.ndarray) -> np.ndarray:
        norm = np.sum(p ** a) ** (1.0 / a)
        return sign * norm ** (1.0 - a) * p ** (a - 1.0)

    return EntropyPair(
        name=f"arimoto({a:g})",
        F=F,
        grad_f=grad_f,
        eta=lambda t: (a / (1.0 - a)) * math.log(sign * t),
        eta_domain=(0.0, math.inf) if a < 1.0 else (-math.inf, 0.0),
        alpha=a,
    )


def hayashi_pair(alpha: float) -> EntropyPair:
    """Core +-||p||_a^a with outer map (1/(1-a)) log(+-t)."""
    _check_order(alpha)
    a = float(alpha)
    sign = 1.0 if a < 1.0 else -1.0

    return EntropyPair(
        name=f"hayashi({a:g})",
        F=lambda p: sign * float(np.sum(p ** a)),
        grad_f=lambda p: sign * a * p ** (a - 1.0),
        eta=lambda t: (1.0 / (1.0 - a)) * math.log(sign * t),
        eta_domain=(0.0, math.inf) if a < 1.0 else (-math.inf, 0.0),
        alpha=a,
    )


def fehr_berens_pair(alpha: float) -> EntropyPair:
    """Core -||p||_a^(a/(a-1)) with outer map -log(-t); requires a > 1."""
    _check_order(alpha)
    if alpha <= 1.0:
        raise BadAlpha(f"fehr-berens requires order > 1, got {alpha:g}")
    a = float(alpha)

    def F(p: np.ndarray) -> float:
        return -float(np.sum(p ** a) ** (1.0 / (a - 1.0)))

    def grad_f(p: np.ndarray) -> np.ndarray:
        s = np.sum(p ** a)
        return -(a / (a - 1.0)) * s ** ((2.0 - a) / (a - 1.0)) * p ** (a - 1.0)

    return EntropyPair(
        name=f"fehr-berens({a:g})",
        F=F,
        grad_f=grad_f,
        eta=lambda t: -math.log(-t),
        eta_domain=(-math.inf, 0.0),
        alpha=a,
    )


def entropy(pair: EntropyPair, p: Pmf) -> float:
    """Unconditional entropy eta(F(p))."""
    return pair.eta_checked(pair.F(p.probs))


def conditional_entropy(pair: EntropyPair, p_x: Pmf, w: Channel) -> float:
    """Posterior-averaged entropy eta( sum_y p_Y(y) F(p_{X|Y=y}) ).

    Outputs with zero marginal mass contribute nothing to the average.
    """
    if len(p_x) != w.nx:
        raise DimensionMismatch(f"prior has {len(p_x)} entries, channel has {w.nx} rows")
    post = posterior(p_x, w)
    avg = sum(post.p_y[y] * pair.F(post.cols[y].probs) for y in post.support)
    return pair.eta_checked(float(avg))


def mutual_information(pair: EntropyPair, p_x: Pmf, w: Channel) -> MiReport:
    """Both entropies and their difference for (p_x, w) under the measure."""
    h_x = entropy(pair, p_x)
    h_xy = conditional_entropy(pair, p_x, w)
    return MiReport(h_x=h_x, h_x_given_y=h_xy, mi=h_x - h_xy)


def shannon_mi(p_x: Pmf, w: Channel) -> float:
    return mutual_information(shannon_pair(), p_x, w).mi


def arimoto_mi(alpha: float, p_x: Pmf, w: Channel) -> float:
    return mutual_information(arimoto_pair(alpha), p_x, w).mi


def hayashi_mi(alpha: float, p_x: Pmf, w: Channel) -> float:
    return mutual_information(hayashi_pair(alpha), p_x, w).mi


def fehr_berens_mi(alpha: float, p_x: Pmf, w: Channel) -> float:
    return mutual_information(fehr_berens_pair(alpha), p_x, w).mi


def _check_order(alpha: float) -> None:
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise BadAlpha(f"order must be a finite positive real, got {alpha!r}")
    if alpha == 1.0:
        raise BadAlpha("order 1 is not accepted; use the shannon measure explicitly")
