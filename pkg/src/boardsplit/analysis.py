"""Analytic model of trap-missing errors and its Monte Carlo validators.

The model asks: when a mover scores boards ``k`` levels down with an
evaluator that cannot see forced wins, how often does the resulting
backed-up decision miss a trap, and how does that miss rate change with
``k``?  Its pieces:

* :func:`fair_p` -- the cell bias that makes the game fair;
* :func:`row_trap_prob` -- probability an S x S board has an all-ones
  row, the single trap pattern the model tracks;
* :func:`random_miss_prob` -- an arbitrary chooser's probability of
  picking a non-trap sibling although a trap sibling exists (closed
  form, with the explicit sum kept as an oracle);
* :func:`max_count_nontrap_prob` / :func:`count_eval_error_prob` -- the
  analogous quantities for the count-of-ones chooser, implemented
  exactly as modeled (the formula is an approximation of the intended
  event; :func:`mc_max_count_nontrap` measures the gap rather than
  hiding it);
* :func:`propagate_to_root` -- the alternating error recurrence from
  tip level ``k`` down to the root decision (min level: x -> x^B; max
  level: x -> (1-x) - (1-x)^B);
* :func:`mc_propagate` -- a direct simulation of that recurrence's
  local semantics on synthetic trees.

The model's board side at even level ``k`` is S = B^(D - k/2 - 1),
one splitting factor smaller than the in-game side B^(D - k/2); both
are exposed (:func:`model_side`, :func:`geometric_side`) and the model
functions use the former.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import generator

_MC_TARGET_ELEMS = 1 << 22  # chunk size target; fixed policy keeps runs reproducible


@dataclass(frozen=True)
class AnalysisParams:
    """Validated parameter bundle for the error model."""

    b: int
    d: int
    p: float
    k: int

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError(f"branching must be >= 1, got {self.b}")
        if self.d < 1:
            raise ValueError(f"rounds must be >= 1, got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"cell probability must be in [0, 1], got {self.p}")
        if self.k % 2 or self.k < 0:
            raise ValueError(f"tip level must be even and >= 0, got {self.k}")
        if self.k > 2 * (self.d - 1):
            raise ValueError(f"tip level {self.k} exceeds 2(D-1) = {2 * (self.d - 1)}")


@dataclass(frozen=True)
class PropagationTrace:
    """Error probabilities per level, from the tip level down to 0."""

    levels: tuple[tuple[int, float], ...]

    @property
    def root_error(self) -> float:
        return self.levels[-1][1]


@dataclass(frozen=True)
class ModelPoint:
    """One row of the error-model curve at tip level ``k``."""

    k: int
    side: int
    trap_prob: float
    tip_error: float
    root_error: float


@dataclass(frozen=True)
class McChoiceResult:
    """Monte Carlo estimate of the max-count chooser's trap behavior.

    ``estimate`` is Pr[a strict unique count maximizer exists and is a
    non-trap], conditioned on at least one trap among the siblings;
    trials with a tied maximum stay in the denominator as non-events
    and are tallied in ``n_ties``.  With zero conditioned support the
    estimate is NaN.
    """

    estimate: float
    stderr: float
    n_conditioned: int
    n_strict: int
    n_ties: int


def fair_p(b: int) -> float:
    """Cell bias making the game fair for branching ``b``: the root of
    (1 - x)^b = x in (0, 1).

    The left side falls from 1 to 0 while the right rises from 0 to 1,
    so the root exists, is unique, and bisection cannot miss it.
    """
    if b < 1:
        raise ValueError(f"branching must be >= 1, got {b}")
    lo, hi = 0.0, 1.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:  # interval is one ulp; done
            break
        if (1.0 - mid) ** b > mid:
            lo = mid
        else:
            hi = mid
    p = lo
    residual = abs((1.0 - p) ** b - p)
    if residual >= 1e-12:
        raise ArithmeticError(f"bisection residual {residual} for b={b}")
    return p


def model_side(b: int, d: int, k: int) -> int:
    """Board side the error model assumes at even level ``k``:
    B^(D - k/2 - 1).

    Note the in-game side at level ``k`` is B^(D - k/2); see
    :func:`geometric_side`.
    """
    exponent = d - k // 2 - 1
    if k % 2:
        raise ValueError(f"tip level must be even, got {k}")
    if exponent < 0:
        raise ValueError(f"D - k/2 - 1 = {exponent} is negative (d={d}, k={k})")
    return b**exponent


def geometric_side(b: int, d: int, k: int) -> int:
    """Actual side of an in-game square board at even level ``k``."""
    if k % 2:
        raise ValueError(f"level must be even, got {k}")
    exponent = d - k // 2
    if exponent < 0:
        raise ValueError(f"D - k/2 = {exponent} is negative (d={d}, k={k})")
    return b**exponent


def row_trap_prob(s: int, p: float) -> float:
    """Probability that an S x S Bernoulli(p) board has an all-ones row:
    1 - (1 - p^S)^S."""
    if s < 1:
        raise ValueError(f"side must be >= 1, got {s}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    q = p**s
    if q > 1e-8:
        return 1.0 - (1.0 - q) ** s
    # For tiny p^S the direct form rounds (1 - p^S) to 1; this keeps
    # full relative precision (~ S * p^S).
    return -math.expm1(s * math.log1p(-q))


def trap_count_pmf(b: int, trap_p: float, i: int) -> float:
    """Probability that exactly ``i`` of ``b`` sibling boards are traps.

    Siblings occupy disjoint rectangles of the parent, so their trap
    indicators are independent and the count is binomial.
    """
    if not 0 <= i <= b:
        raise ValueError(f"trap count {i} outside [0, {b}]")
    if not 0.0 <= trap_p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {trap_p}")
    return math.comb(b, i) * trap_p**i * (1.0 - trap_p) ** (b - i)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def max_count_nontrap_prob(s: int, p: float, b: int) -> float:
    """Modeled probability that the sibling with the most ones is not a
    trap, among ``b`` independent S x S boards.

    Implements the model's expansion verbatim:

        1 - sum_{z=S}^{S^2} C(S(S-1), z-S) * B * p^z (1-p)^(S^2-z)
                * (sum_{j=1}^{z} C(S^2, j) p^j (1-p)^(S^2-j))^(B-1)

    in log space (stable for S^2 up to ~4096).  The expansion is an
    approximation: it union-bounds over which sibling is the trap and
    ignores ties, so it can leave [0, 1] for extreme ``p`` (at p = 1 it
    gives 1 - B).  That is reported by the validators, not corrected.
    """
    if s < 1:
        raise ValueError(f"side must be >= 1, got {s}")
    if b < 1:
        raise ValueError(f"branching must be >= 1, got {b}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    if p == 0.0:
        return 1.0
    n = s * s
    if p == 1.0:
        # Only z = S^2 survives; the inner sum is 1.
        return 1.0 - b
    log_p = math.log(p)
    log_q = math.log1p(-p)
    log_b = math.log(b)

    # cdf[z] = Pr[1 <= Binomial(S^2, p) <= z], accumulated in linear
    # space: terms are positive, the total is <= 1, and underflow of
    # far-tail terms is harmless.
    cdf = [0.0] * (n + 1)
    acc = 0.0
    for j in range(1, n + 1):
        acc += math.exp(_log_comb(n, j) + j * log_p + (n - j) * log_q)
        cdf[j] = acc

    total = 0.0
    free = s * (s - 1)
    for z in range(s, n + 1):
        log_term = _log_comb(free, z - s) + z * log_p + (n - z) * log_q + log_b
        inner = cdf[z]
        if inner <= 0.0:
            if b > 1:
                continue
        elif b > 1:
            log_term += (b - 1) * math.log(inner)
        total += math.exp(log_term)
    return 1.0 - total


def count_eval_error_prob(s: int, p: float, b: int) -> float:
    """Modeled probability that the count-of-ones chooser misses a trap:
    max_count_nontrap_prob * Pr[1 <= #traps <= B-1]."""
    trap_p = row_trap_prob(s, p)
    some_but_not_all = sum(trap_count_pmf(b, trap_p, i) for i in range(1, b))
    return max_count_nontrap_prob(s, p, b) * some_but_not_all + 0.0


def _chooser_miss_map(x: float, b: int) -> float:
    """The map x -> (1-x) - (1-x)^B, precision-safe for tiny x.

    Below the switch point the direct form loses most significant
    digits (the result is ~ (B-1)x but the subtraction cancels); the
    expm1 form keeps full relative precision, and both agree to ~1e-15
    relative in the overlap.
    """
    q = 1.0 - x
    if x > 1e-8:
        return q - q**b
    return q * -math.expm1((b - 1) * math.log1p(-x))


def random_miss_prob(b: int, trap_p: float) -> float:
    """Probability an arbitrary chooser picks a non-trap sibling even
    though a trap sibling exists: (1 - P) - (1 - P)^B."""
    if not 0.0 <= trap_p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {trap_p}")
    return _chooser_miss_map(trap_p, b)


def random_miss_prob_sum(b: int, trap_p: float) -> float:
    """Oracle for :func:`random_miss_prob`: the explicit sum
    sum_{i=1}^{B-1} ((B-i)/B) C(B,i) P^i (1-P)^(B-i)."""
    return sum(
        ((b - i) / b) * trap_count_pmf(b, trap_p, i) for i in range(1, b)
    )


def propagate_to_root(tip_error: float, b: int, k: int) -> PropagationTrace:
    """Propagate a tip-level miss probability down to the root decision.

    Starting with ``tip_error`` at even level ``k``: odd (min) levels
    need all B children wrong, so x -> x^B; even (max) levels apply the
    arbitrary-chooser miss map x -> (1-x) - (1-x)^B.  Level 0 is a max
    step; ``k = 0`` is the trace (0, tip_error) with no steps.
    """
    if k % 2 or k < 0:
        raise ValueError(f"tip level must be even and >= 0, got {k}")
    if not 0.0 <= tip_error <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {tip_error}")
    levels = [(k, tip_error)]
    x = tip_error
    for level in range(k - 1, -1, -1):
        if level % 2:
            x = x**b
        else:
            x = _chooser_miss_map(x, b)
        levels.append((level, x))
    return PropagationTrace(tuple(levels))


def error_model_curve(b: int, d: int, p: float, k_list) -> list[ModelPoint]:
    """Evaluate the full model at each tip level in ``k_list``.

    Per level: model side S, row-trap probability P, arbitrary-chooser
    tip miss rate, and the propagated root miss rate.
    """
    points = []
    for k in k_list:
        AnalysisParams(b, d, p, k)
        s = model_side(b, d, k)
        trap_p = row_trap_prob(s, p)
        tip = random_miss_prob(b, trap_p)
        trace = propagate_to_root(tip, b, k)
        points.append(ModelPoint(k, s, trap_p, tip, trace.root_error))
    return points


def p0_curve(b: int, d: int, p: float, k_list) -> list[tuple[int, float]]:
    """(k, root miss probability) pairs of the error model."""
    return [(pt.k, pt.root_error) for pt in error_model_curve(b, d, p, k_list)]


def mc_max_count_nontrap(
    s: int, p: float, b: int, trials: int, seed: int
) -> McChoiceResult:
    """Monte Carlo oracle for :func:`max_count_nontrap_prob`.

    Samples ``b`` independent S x S Bernoulli(p) boards per trial.
    Among trials with at least one all-ones-row trap, estimates the
    probability that a strict unique ones-count maximizer exists and is
    a non-trap; tied maxima count as non-events and are reported
    separately.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = generator(seed)
    chunk = max(1, _MC_TARGET_ELEMS // max(1, b * s * s))
    n_conditioned = n_strict = n_ties = hits = 0
    remaining = trials
    while remaining:
        m = min(chunk, remaining)
        remaining -= m
        boards = rng.random((m, b, s, s)) < p
        counts = boards.sum(axis=(2, 3))
        is_trap = boards.all(axis=3).any(axis=2)
        conditioned = is_trap.any(axis=1)
        best = counts.max(axis=1)
        n_at_best = (counts == best[:, None]).sum(axis=1)
        strict = conditioned & (n_at_best == 1)
        ties = conditioned & (n_at_best > 1)
        arg = counts.argmax(axis=1)
        picked_trap = is_trap[np.arange(m), arg]
        n_conditioned += int(conditioned.sum())
        n_strict += int(strict.sum())
        n_ties += int(ties.sum())
        hits += int((strict & ~picked_trap).sum())
    if n_conditioned == 0:
        return McChoiceResult(float("nan"), float("nan"), 0, n_strict, n_ties)
    estimate = hits / n_conditioned
    stderr = math.sqrt(estimate * (1.0 - estimate) / n_conditioned)
    return McChoiceResult(estimate, stderr, n_conditioned, n_strict, n_ties)


def mc_propagate(
    b: int, trap_p: float, k: int, trials: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo oracle for :func:`propagate_to_root`.

    Builds synthetic depth-``k`` trees.  Each tip realizes the
    arbitrary-chooser miss over ``b`` i.i.d. Bernoulli(trap_p) marks;
    going up, a min node errs iff all children err and a max node
    re-applies the chooser with erring children playing the trap role.
    Returns the root error frequency and its binomial standard error.

    Under these local semantics the tip stage is itself one chooser
    step, so the matching closed form is
    ``propagate_to_root(random_miss_prob(b, trap_p), b, k)``; at
    ``k = 0`` the estimate converges to ``random_miss_prob(b, trap_p)``
    directly.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if k % 2 or k < 0:
        raise ValueError(f"tip level must be even and >= 0, got {k}")
    if not 0.0 <= trap_p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {trap_p}")
    rng = generator(seed)
    width = b**k
    chunk = max(1, _MC_TARGET_ELEMS // (width * b))
    errors = 0
    remaining = trials
    while remaining:
        m = min(chunk, remaining)
        remaining -= m
        marks = rng.random((m, width, b)) < trap_p
        pick = rng.integers(0, b, size=(m, width))
        picked = np.take_along_axis(marks, pick[..., None], axis=2)[..., 0]
        err = marks.any(axis=2) & ~picked
        for level in range(k - 1, -1, -1):
            err = err.reshape(m, b**level, b)
            if level % 2:
                err = err.all(axis=2)
            else:
                pick = rng.integers(0, b, size=(m, b**level))
                picked = np.take_along_axis(err, pick[..., None], axis=2)[..., 0]
                err = err.any(axis=2) & ~picked
        errors += int(err.reshape(m).sum())
    estimate = errors / trials
    stderr = math.sqrt(max(estimate * (1.0 - estimate), 1e-300) / trials)
    return estimate, stderr
