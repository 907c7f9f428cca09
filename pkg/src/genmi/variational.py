"""Two-argument functionals whose inner maximum recovers mutual information.

For a measure (eta, F) with proper core loss l_F, the functional

    G(p, q) = eta(F(p)) - eta( E_{X,Y}[ l_F(X, q(X|Y)) ] )

satisfies max_q G(p, q) = I(p, W), with the maximum at q = posterior.
Besides the generic form, closed algebraic forms are provided for the
Shannon measure, two equivalent Arimoto forms (the second tilts the
response columns), the Hayashi measure, and the Fehr-Berens measure.
The first Arimoto form is the one historical exception whose inner
maximizer is the tilted posterior rather than the posterior itself.

Conventions: a response that puts zero mass where the joint has positive
mass drives the functional to -inf (the log-loss convention); evaluation
never raises for such responses, it returns the -inf sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import (
    EntropyPair,
    arimoto_pair,
    fehr_berens_pair,
    hayashi_pair,
    shannon_pair,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    NonFinite,
    UnsupportedSpec,
)
from .scoring import loss_from_core
from .simplex import Channel, Pmf, posterior

_CLOSED_FORM_KINDS = ("shannon", "arimoto_a1", "arimoto_a2")


@dataclass(frozen=True)
class QFamily:
    """One response distribution over X per channel output, as columns."""

    cols: np.ndarray  # shape (|X|, |Y|)

    def __post_init__(self):
        c = np.ascontiguousarray(self.cols, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise DimensionMismatch("response family must be a non-empty matrix")
        if not np.all(np.isfinite(c)) or np.any(c < 0.0):
            raise NonFinite("response columns must be finite and non-negative")
        sums = c.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise DomainError("every response column must sum to 1 within 1e-9")
        c.flags.writeable = False
        object.__setattr__(self, "cols", c)

    @property
    def nx(self) -> int:
        return self.cols.shape[0]

    @property
    def ny(self) -> int:
        return self.cols.shape[1]

    def col(self, y: int) -> Pmf:
        return Pmf(self.cols[:, y])

    @staticmethod
    def from_columns(columns) -> "QFamily":
        return QFamily(np.column_stack([c.probs if isinstance(c, Pmf) else c for c in columns]))


@dataclass(frozen=True)
class FunctionalSpec:
    """Selects which functional to evaluate and which updates apply.

    `pair` is the matching entropy measure; it powers the generic
    evaluation path and lets callers cross-check against the direct
    mutual-information computation.
    """

    kind: str  # shannon | arimoto_a1 | arimoto_a2 | hayashi | fb | generic
    pair: EntropyPair
    alpha: float | None = None

    @property
    def has_closed_p_step(self) -> bool:
        return self.kind in _CLOSED_FORM_KINDS


def shannon_spec() -> FunctionalSpec:
    return FunctionalSpec(kind="shannon", pair=shannon_pair())


def arimoto_a1_spec(alpha: float) -> FunctionalSpec:
    return FunctionalSpec(kind="arimoto_a1", pair=arimoto_pair(alpha), alpha=float(alpha))


def arimoto_a2_spec(alpha: float) -> FunctionalSpec:
    return FunctionalSpec(kind="arimoto_a2", pair=arimoto_pair(alpha), alpha=float(alpha))


def hayashi_spec(alpha: float) -> FunctionalSpec:
    return FunctionalSpec(kind="hayashi", pair=hayashi_pair(alpha), alpha=float(alpha))


def fb_spec(alpha: float) -> FunctionalSpec:
    return FunctionalSpec(kind="fb", pair=fehr_berens_pair(alpha), alpha=float(alpha))


def generic_spec(pair: EntropyPair) -> FunctionalSpec:
    """Generic functional for any core-concave measure (its l_F is proper)."""
    return FunctionalSpec(kind="generic", pair=pair, alpha=pair.alpha)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_functional(spec: FunctionalSpec, p_x: Pmf, w: Channel, q: QFamily) -> float:
    """Value of the functional at (p_x, q) for the given channel."""
    if len(p_x) != w.nx:
        raise DimensionMismatch("prior and channel input alphabets differ")
    if q.nx != w.nx or q.ny != w.ny:
        raise DimensionMismatch("response family shape must match the channel")
    return _eval(spec, p_x.probs, w.rows, q.cols)


def _eval(spec: FunctionalSpec, p: np.ndarray, w: np.ndarray, q: np.ndarray) -> float:
    joint = p[:, None] * w
    mask = joint > 0.0
    a = spec.alpha
    kind = spec.kind

    if kind == "shannon":
        qm = q[mask]
        if np.any(qm <= 0.0):
            return -math.inf
        pm = np.broadcast_to(p[:, None], joint.shape)[mask]
        return float(np.sum(joint[mask] * (np.log(qm) - np.log(pm))))

    if kind == "arimoto_a1":
        qm = q[mask]
        if a < 1.0 and np.any(qm == 0.0):
            return -math.inf
        e = float(np.sum(joint[mask] * qm ** ((a - 1.0) / a)))
        return _log_ratio_value(a / (a - 1.0), e, _norm(p, a))

    if kind == "arimoto_a2":
        col_norm = np.sum(q ** a, axis=0) ** (1.0 / a)
        ratio = (q / col_norm[None, :])[mask]
        if a < 1.0 and np.any(ratio == 0.0):
            return -math.inf
        e = float(np.sum(joint[mask] * ratio ** (a - 1.0)))
        return _log_ratio_value(a / (a - 1.0), e, _norm(p, a))

    if kind == "hayashi":
        col_sum = np.sum(q ** a, axis=0)
        qm = q[mask]
        if a < 1.0 and np.any(qm == 0.0):
            return -math.inf
        bracket = a * qm ** (a - 1.0) - (a - 1.0) * np.broadcast_to(
            col_sum[None, :], joint.shape
        )[mask]
        e = float(np.sum(joint[mask] * bracket))
        return _log_ratio_value(1.0 / (a - 1.0), e, float(np.sum(p ** a)))

    if kind == "fb":
        col_sum = np.sum(q ** a, axis=0)
        head = (1.0 / (a - 1.0)) * col_sum ** (1.0 / (a - 1.0))
        scale = (a / (a - 1.0)) * col_sum ** ((2.0 - a) / (a - 1.0))
        losses = head[None, :] - scale[None, :] * q ** (a - 1.0)
        e = float(np.sum(joint[mask] * losses[mask]))
        if not -e > 0.0:
            return -math.inf
        return math.log(-e) - (a / (a - 1.0)) * math.log(_norm(p, a))

    if kind == "generic":
        pair = spec.pair
        head = pair.eta_checked(pair.F(p))
        total = 0.0
        for y in range(w.shape[1]):
            col_mask = mask[:, y]
            if not np.any(col_mask):
                continue
            losses = loss_from_core(pair.F, pair.grad_f, q[:, y])
            total += float(np.sum(joint[col_mask, y] * losses[col_mask]))
        lo, hi = pair.eta_domain
        if not lo < total < hi:
            return -math.inf
        return head - pair.eta(total)

    raise UnsupportedSpec(f"unknown functional kind {kind!r}")


def _norm(p: np.ndarray, a: float) -> float:
    return float(np.sum(p ** a) ** (1.0 / a))


def _log_ratio_value(coef: float, e: float, den: float) -> float:
    """coef * (log e - log den) with the -inf convention at both bad ends."""
    if not (0.0 < e < math.inf):
        return -math.inf
    return coef * (math.log(e) - math.log(den))


# ---------------------------------------------------------------------------
# Alternating-maximization steps
# ---------------------------------------------------------------------------


def q_step(spec: FunctionalSpec, p_x: Pmf, w: Channel) -> QFamily:
    """The exact inner maximizer over response families for fixed p_x.

    Posterior columns for every functional except the first Arimoto form,
    whose maximizer tilts the posterior by the order.  Outputs with zero
    marginal mass never enter any expectation; their columns are set to
    p_x to keep the family total.
    """
    if len(p_x) != w.nx:
        raise DimensionMismatch("prior and channel input alphabets differ")
    cells = p_x.probs[:, None] * w.rows
    if spec.kind == "arimoto_a1":
        cells = cells ** spec.alpha
    col_mass = cells.sum(axis=0)
    cols = np.where(col_mass > 0.0, cells / np.where(col_mass > 0.0, col_mass, 1.0),
                    p_x.probs[:, None])
    return QFamily(cols)


def p_step_closed(spec: FunctionalSpec, w: Channel, q: QFamily) -> Pmf:
    """Exact outer maximizer over priors for fixed q, where a formula exists.

    shannon:  p(x) proportional to prod_y q(x|y)^w(y|x)
    arimoto:  p(x) proportional to (sum_y w(y|x) q(x|y)^((a-1)/a))^(1/(a-1)),
              with q replaced by its column tilts for the second form.
    Computed in log domain so that extreme orders stay stable.
    """
    if q.nx != w.nx or q.ny != w.ny:
        raise DimensionMismatch("response family shape must match the channel")
    kind = spec.kind
    if kind not in _CLOSED_FORM_KINDS:
        raise UnsupportedSpec(f"no closed-form prior update for {kind!r}")

    wm = w.rows
    qc = q.cols
    if kind == "arimoto_a2":
        qc = qc ** spec.alpha
        qc = qc / qc.sum(axis=0, keepdims=True)

    with np.errstate(divide="ignore", over="ignore"):
        if kind == "shannon":
            terms = np.zeros_like(wm)
            m = wm > 0.0
            terms[m] = wm[m] * np.log(qc[m])
            log_p = terms.sum(axis=1)
        else:
            a = spec.alpha
            terms = np.zeros_like(wm)
            m = wm > 0.0
            terms[m] = wm[m] * qc[m] ** ((a - 1.0) / a)
            log_p = np.log(terms.sum(axis=1)) / (a - 1.0)

    top = log_p.max()
    if not np.isfinite(top):
        raise NonFinite("prior update collapsed; response family degenerate")
    p = np.exp(log_p - top)
    total = p.sum()
    if not total > 0.0:
        raise NonFinite("prior update collapsed to zero mass")
    return Pmf(p / total)


def p_step_numeric(
    spec: FunctionalSpec,
    w: Channel,
    q: QFamily,
    p_init: Pmf,
    iters: int = 200,
    step: float = 0.5,
) -> Pmf:
    """Ascent on the prior by safeguarded exponentiated-gradient steps.

    The gradient of p -> G(p, q) is taken by central finite differences
    (1e-6 relative step) along the m-1 on-simplex directions through the
    largest coordinate.  A step is halved until it does not decrease the
    objective; iteration stops after `iters` rounds or when a round gains
    less than 1e-12.
    """
    if len(p_init) != w.nx:
        raise DimensionMismatch("initial prior and channel input alphabets differ")
    if np.any(p_init.probs <= 0.0):
        raise DomainError("numeric prior update needs a strictly interior start")

    wm, qc = w.rows, q.cols
    p = p_init.probs.copy()
    m = p.size
    if m == 1:
        return Pmf(p)
    f = _eval(spec, p, wm, qc)

    for _ in range(iters):
        pivot = int(np.argmax(p))
        grad = np.zeros(m)
        for i in range(m):
            if i == pivot:
                continue
            h = 1e-6 * min(p[i], p[pivot])
            if h <= 0.0:
                continue
            d = np.zeros(m)
            d[i] = h
            d[pivot] = -h
            grad[i] = (_eval(spec, p + d, wm, qc) - _eval(spec, p - d, wm, qc)) / (2.0 * h)

        size = step
        cand, f_cand = p, f
        while size >= 1e-12:
            trial = p * np.exp(size * (grad - grad.max()))
            trial = trial / trial.sum()
            f_trial = _eval(spec, trial, wm, qc)
            if f_trial >= f:
                cand, f_cand = trial, f_trial
                break
            size *= 0.5
        if f_cand <= f + 1e-12:
            p, f = cand, f_cand
            break
        p, f = cand, f_cand

    return Pmf(p)


def posterior_family(p_x: Pmf, w: Channel) -> QFamily:
    """The posterior columns as a total response family (p_x where undefined)."""
    post = posterior(p_x, w)
    cols = np.tile(p_x.probs[:, None], (1, w.ny))
    for y in post.support:
        cols[:, y] = post.cols[y].probs
    return QFamily(cols)
