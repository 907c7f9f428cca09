"""Decision-theoretic leakage: Bayes values, additive and multiplicative gains.

Additive leakage (EVSI) is the increase in the decision maker's optimal
expected gain from observing the channel output (for losses, the
reduction in optimal risk).  Multiplicative leakage scales the log-ratio
of the with-observation and without-observation optima by a sign-bearing
constant c; it is defined only when the optimal values involved share a
single sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, MixedSign, ZeroDenominator
from .scoring import GainMatrix, ScoringRule, expected_score, optimal_response
from .simplex import Channel, Pmf, posterior


@dataclass(frozen=True)
class LeakageReport:
    """Optimal values without and with the observation, and their gaps.

    `additive` is oriented so that more informative channels score higher
    (gain increase, or risk reduction).  `multiplicative` is present only
    when the rule declares its constant and the sign check passes.
    """

    prior_value: float
    posterior_value: float
    additive: float
    multiplicative: float | None = None


def matrix_prior_value(m: GainMatrix, p_x: Pmf) -> float:
    """Optimal expected gain (or minimal expected loss) ignoring the output."""
    if m.nx != len(p_x):
        raise DimensionMismatch("gain matrix rows must match the prior alphabet")
    per_action = p_x.probs @ m.values
    return float(per_action.max() if m.kind == "gain" else per_action.min())


def bayes_value(m: GainMatrix, p_x: Pmf, w: Channel) -> float:
    """Optimal expected value when acting on the channel output.

    For each supported output the best action is chosen against the
    posterior (ties broken toward the smallest action index, which never
    affects the value), then averaged over the output marginal.
    """
    if m.nx != len(p_x):
        raise DimensionMismatch("gain matrix rows must match the prior alphabet")
    post = posterior(p_x, w)
    total = 0.0
    for y in post.support:
        per_action = post.cols[y].probs @ m.values
        best = per_action.max() if m.kind == "gain" else per_action.min()
        total += post.p_y[y] * float(best)
    return total


def evsi(m: GainMatrix, p_x: Pmf, w: Channel) -> LeakageReport:
    """Additive value of observing the output, for a finite action set."""
    prior = matrix_prior_value(m, p_x)
    post = bayes_value(m, p_x, w)
    additive = post - prior if m.kind == "gain" else prior - post
    return LeakageReport(prior_value=prior, posterior_value=post, additive=additive)


def _scoring_values(rule: ScoringRule, p_x: Pmf, w: Channel):
    """Prior optimum, per-output optima, and the averaged posterior optimum."""
    prior = expected_score(rule, p_x, optimal_response(rule, p_x))
    post = posterior(p_x, w)
    per_y = {}
    total = 0.0
    for y in post.support:
        belief = post.cols[y]
        v = expected_score(rule, belief, optimal_response(rule, belief))
        per_y[y] = v
        total += post.p_y[y] * v
    return prior, per_y, total


def evsi_scoring(rule: ScoringRule, p_x: Pmf, w: Channel) -> LeakageReport:
    """Additive value of the observation over the pmf action space.

    The multiplicative field is filled opportunistically when the rule
    declares its constant and the sign conditions hold; use
    `mevsi_scoring` to get errors instead of silence.
    """
    prior, per_y, post_value = _scoring_values(rule, p_x, w)
    additive = post_value - prior if rule.kind == "gain" else prior - post_value
    multiplicative = None
    if rule.c_of_g is not None:
        try:
            multiplicative = _log_ratio(rule.c_of_g, prior, per_y.values(), post_value)
        except (MixedSign, ZeroDenominator):
            multiplicative = None
    return LeakageReport(
        prior_value=prior,
        posterior_value=post_value,
        additive=additive,
        multiplicative=multiplicative,
    )


def mevsi_scoring(rule: ScoringRule, p_x: Pmf, w: Channel) -> float:
    """Multiplicative leakage c * log(posterior optimum / prior optimum).

    The sign condition is checked empirically on this instance: the prior
    optimum and every per-output optimum must not take both signs.
    """
    if rule.c_of_g is None:
        raise DomainError(f"rule {rule.name!r} declares no multiplicative constant")
    prior, per_y, post_value = _scoring_values(rule, p_x, w)
    return _log_ratio(rule.c_of_g, prior, per_y.values(), post_value)


def mevsi_matrix(m: GainMatrix, p_x: Pmf, w: Channel, c: float | None = None) -> float:
    """Multiplicative leakage for a finite action set.

    The matrix must be one-signed; c defaults to that sign (+1 or -1) and,
    if supplied, must match it.
    """
    vals = m.values
    nonneg = bool(np.all(vals >= 0.0))
    nonpos = bool(np.all(vals <= 0.0))
    if not (nonneg or nonpos):
        raise MixedSign("gain matrix takes both signs; multiplicative leakage undefined")
    sign = 1.0 if nonneg else -1.0
    if c is None:
        c = sign
    elif c * sign <= 0.0:
        raise DomainError(f"constant c = {c:g} must share the matrix sign {sign:+g}")
    prior = matrix_prior_value(m, p_x)
    post = posterior(p_x, w)
    per_y = [
        float((post.cols[y].probs @ vals).max() if m.kind == "gain"
              else (post.cols[y].probs @ vals).min())
        for y in post.support
    ]
    total = sum(post.p_y[y] * v for y, v in zip(post.support, per_y))
    return _log_ratio(c, prior, per_y, total)


def _log_ratio(c: float, prior: float, per_y_values, posterior_value: float) -> float:
    vals = [prior, *per_y_values]
    if any(v > 0.0 for v in vals) and any(v < 0.0 for v in vals):
        raise MixedSign("optimal values take both signs on this instance")
    if prior == 0.0:
        raise ZeroDenominator("prior optimal value is zero; ratio undefined")
    ratio = posterior_value / prior
    if ratio <= 0.0:
        return -math.inf if c > 0 else math.inf
    return c * math.log(ratio)
