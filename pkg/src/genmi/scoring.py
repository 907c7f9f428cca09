"""Scoring rules over pmf actions and the proper loss built from a concave core.

A scoring rule assigns a gain or loss to announcing the pmf q when the
outcome is x.  Each rule carries its pointwise-optimal responder (the map
from a belief to the best announcement) so Bayes-optimal behaviour never
has to be re-derived numerically.  Scores may be -inf or +inf (log-type
rules at zero coordinates); expectations give zero-probability outcomes
zero weight, matching the 0 * log 0 = 0 convention.

`loss_from_core` implements the generic construction that turns any
concave core F with subgradient z into a proper loss

    l_F(x, q) = F(q) + z(q) . (1_x - q),

whose minimal expected value under belief p recovers F(p) at q = p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    BadAlpha,
    DimensionMismatch,
    DomainError,
    GenmiError,
    MissingColumn,
    NonFinite,
)
from .simplex import Channel, Pmf, alpha_tilt, posterior

#: Interior shift applied to q before evaluating core gradients.
GRAD_MIX = 1e-12


@dataclass(frozen=True)
class ScoringRule:
    """A gain or loss over pmf announcements, with its optimal responder.

    `c_of_g` is the sign-bearing constant used by multiplicative leakage;
    it is set only for the rules whose constant the literature fixes.
    """

    name: str
    kind: str  # "gain" or "loss"
    score: Callable[[int, np.ndarray], float]
    responder: Callable[[np.ndarray], np.ndarray]
    proper: bool
    c_of_g: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in ("gain", "loss"):
            raise DomainError(f"rule kind must be 'gain' or 'loss', got {self.kind!r}")


@dataclass(frozen=True)
class GainMatrix:
    """Utility (or cost) per state-action pair over a finite action set."""

    values: np.ndarray
    kind: str = "gain"

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise DimensionMismatch("gain matrix must be a non-empty 2-d matrix")
        if not np.all(np.isfinite(v)):
            raise NonFinite("gain matrix entries must be finite")
        if self.kind not in ("gain", "loss"):
            raise DomainError(f"matrix kind must be 'gain' or 'loss', got {self.kind!r}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]


def identity_gain(m: int) -> GainMatrix:
    """0-1 utility for point estimation: guessing the state exactly pays 1."""
    return GainMatrix(np.eye(m), kind="gain")


def expected_score(rule: ScoringRule, p: Pmf, q: Pmf) -> float:
    """sum_x p(x) score(x, q), with zero-probability outcomes ignored."""
    if len(p) != len(q):
        raise DimensionMismatch("belief and announcement live on different alphabets")
    total = 0.0
    for x in p.support:
        total += p[int(x)] * rule.score(int(x), q.probs)
    return total


def optimal_response(rule: ScoringRule, belief: Pmf) -> Pmf:
    """The announcement the rule's responder picks for this belief."""
    return Pmf(rule.responder(belief.probs))


def bayes_score(
    rule: ScoringRule,
    p_x: Pmf,
    w: Channel,
    q_family: Mapping[int, Pmf] | Sequence[Pmf],
) -> float:
    """Expected score of a per-output response family under the joint.

    q_family must provide a pmf for every output with positive marginal
    mass; with the rule's optimal responses this is the Bayes risk/gain.
    """
    post = posterior(p_x, w)
    total = 0.0
    for y in post.support:
        try:
            q = q_family[y]
        except (KeyError, IndexError):
            raise MissingColumn(f"no response provided for supported output {y}")
        total += post.p_y[y] * expected_score(rule, post.cols[y], q)
    return total


def loss_from_core(
    F: Callable[[np.ndarray], float],
    grad_f: Callable[[np.ndarray], np.ndarray],
    q: Pmf | np.ndarray,
) -> np.ndarray:
    """Per-outcome values of the proper loss F(q) + z . (1_x - q).

    q is nudged to the simplex interior (uniform mixing at weight 1e-12)
    before the gradient is taken, since subgradients may blow up at the
    boundary; the perturbation is far below every stated tolerance.
    """
    qv = q.probs if isinstance(q, Pmf) else np.asarray(q, dtype=np.float64)
    qi = (1.0 - GRAD_MIX) * qv + GRAD_MIX / qv.size
    z = np.asarray(grad_f(qi), dtype=np.float64)
    out = F(qi) + z - float(z @ qi)
    if not np.all(np.isfinite(out)):
        raise NonFinite("core gradient is not finite after interior mixing")
    return out


def min_expected_core_loss(
    F: Callable[[np.ndarray], float],
    grad_f: Callable[[np.ndarray], np.ndarray],
    p: Pmf,
) -> float:
    """E_p[l_F(X, p)], checked against F(p); the two must agree to 1e-8."""
    losses = loss_from_core(F, grad_f, p)
    value = float(p.probs @ losses)
    target = F(p.probs)
    if abs(value - target) > 1e-8:
        raise GenmiError(
            f"core-loss identity violated: E_p[l_F(X,p)] = {value:.12g} "
            f"but F(p) = {target:.12g}"
        )
    return value


# ---------------------------------------------------------------------------
# The standard rule catalog
# ---------------------------------------------------------------------------


def log_score_rule() -> ScoringRule:
    def score(x: int, q: np.ndarray) -> float:
        return math.log(q[x]) if q[x] > 0.0 else -math.inf

    return ScoringRule("log-score", "gain", score, lambda p: p, proper=True)


def log_loss_rule() -> ScoringRule:
    def score(x: int, q: np.ndarray) -> float:
        return -math.log(q[x]) if q[x] > 0.0 else math.inf

    return ScoringRule("log-loss", "loss", score, lambda p: p, proper=True)


def pseudo_spherical_rule(alpha: float) -> ScoringRule:
    """Gain (1/(a-1)) (q(x)/||q||_a)^(a-1), scaled to cover a in (0,1) too."""
    a = _checked_alpha(alpha)

    def score(x: int, q: np.ndarray) -> float:
        norm = float(np.sum(q ** a) ** (1.0 / a))
        r = q[x] / norm
        if r == 0.0 and a < 1.0:
            return -math.inf
        return (1.0 / (a - 1.0)) * r ** (a - 1.0)

    return ScoringRule(
        "pseudo-spherical", "gain", score, lambda p: p,
        proper=True, c_of_g=a / (a - 1.0), alpha=a,
    )


def power_rule(alpha: float) -> ScoringRule:
    """Gain (a/(a-1)) q(x)^(a-1) - ||q||_a^a (power / Tsallis score)."""
    a = _checked_alpha(alpha)

    def score(x: int, q: np.ndarray) -> float:
        norm_a = float(np.sum(q ** a))
        if q[x] == 0.0 and a < 1.0:
            return -math.inf
        return (a / (a - 1.0)) * q[x] ** (a - 1.0) - norm_a

    return ScoringRule(
        "power", "gain", score, lambda p: p,
        proper=True, c_of_g=1.0 / (a - 1.0), alpha=a,
    )


def alpha_loss_rule(alpha: float) -> ScoringRule:
    """Loss (a/(a-1)) (1 - q(x)^((a-1)/a)); optimal response is the tilt, not the belief."""
    a = _checked_alpha(alpha)

    def score(x: int, q: np.ndarray) -> float:
        if q[x] == 0.0 and a < 1.0:
            return math.inf
        return (a / (a - 1.0)) * (1.0 - q[x] ** ((a - 1.0) / a))

    return ScoringRule(
        "alpha-loss", "loss", score,
        lambda p: alpha_tilt(Pmf(p), a).probs,
        proper=False, alpha=a,
    )


def alpha_score_rule(alpha: float) -> ScoringRule:
    """Gain (a/(a-1)) q(x)^((a-1)/a); optimal response is the tilt, not the belief."""
    a = _checked_alpha(alpha)

    def score(x: int, q: np.ndarray) -> float:
        if q[x] == 0.0 and a < 1.0:
            return -math.inf
        return (a / (a - 1.0)) * q[x] ** ((a - 1.0) / a)

    return ScoringRule(
        "alpha-score", "gain", score,
        lambda p: alpha_tilt(Pmf(p), a).probs,
        proper=False, c_of_g=a / (a - 1.0), alpha=a,
    )


def standard_rules(alpha: float) -> dict[str, ScoringRule]:
    """The rule catalog at a given order (the log rules ignore it)."""
    return {
        "log-score": log_score_rule(),
        "log-loss": log_loss_rule(),
        "pseudo-spherical": pseudo_spherical_rule(alpha),
        "power": power_rule(alpha),
        "alpha-loss": alpha_loss_rule(alpha),
        "alpha-score": alpha_score_rule(alpha),
    }


def _checked_alpha(alpha: float) -> float:
    if not np.isfinite(alpha) or alpha <= 0.0 or alpha == 1.0:
        raise BadAlpha(f"order must be finite, positive and != 1, got {alpha!r}")
    return float(alpha)
