"""Outage probability of the power-minimizing placement under a per-user budget.

With users dropped uniformly at random, the power that user m needs after the
antenna moves to the mean point is itself random; an outage occurs when it
exceeds the budget.  For two users the probability has a closed form obtained
by integrating the distribution of the normalized squared x-offset (whose CDF
is 2 sqrt(z) - z) over the user's cross-range coordinate.  For any M the same
event is estimated by Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import rng
from .core import SystemParams, UserLayout, min_power_terms
from .errors import DomainError

# Trials are drawn in fixed-size blocks, one counter-based stream per block,
# so the estimate is a pure function of (seed, trials) no matter how blocks
# are scheduled.
_BLOCK = 1 << 16

_ASIN_CLAMP = 1e-12


class OutageEstimate(NamedTuple):
    probability: float
    stderr: float


@dataclass(frozen=True)
class IntegrationLimits:
    """Pieces of the two-user closed form.

    headroom:   budget / coeff - height^2, the largest squared offset
                (x-part plus y-part) the budget can cover, in m^2
    normalized: headroom rescaled by (length / 2)^2, so the x-part condition
                reads z >= normalized - (2 y / length)^2 for z in [0, 1]
    y_hi:       upper integration limit over the cross-range coordinate
    y_lo:       lower limit; below it even a maximal x-offset cannot fail
    """

    headroom: float
    normalized: float
    y_hi: float
    y_lo: float


def _limits(params: SystemParams, budget_over_coeff: float) -> IntegrationLimits:
    headroom = budget_over_coeff - params.height_m * params.height_m
    half_len_sq = params.half_length * params.half_length
    normalized = headroom / half_len_sq
    y_hi = min(params.half_width, math.sqrt(headroom))
    y_lo = math.sqrt(max(0.0, half_len_sq * (normalized - 1.0)))
    return IntegrationLimits(headroom=headroom, normalized=normalized, y_hi=y_hi, y_lo=y_lo)


def _tail_integral(y: float, lim: IntegrationLimits, params: SystemParams) -> float:
    """Antiderivative of 1 - 2 sqrt(w(y)) + w(y) where w(y) is the normalized
    x-part threshold at cross-range y.  Valid for 0 <= y <= sqrt(headroom)."""
    length = params.length_m
    len_sq = length * length
    root = math.sqrt(max(lim.headroom - y * y, 0.0))
    ratio = y / math.sqrt(lim.headroom)
    if ratio > 1.0:
        if ratio > 1.0 + _ASIN_CLAMP:
            raise AssertionError(f"asin argument {ratio} leaves [-1, 1] by more than {_ASIN_CLAMP}")
        ratio = 1.0
    circular = y / 2.0 * root + lim.headroom / 2.0 * math.asin(ratio)
    return (
        y
        + lim.normalized * y
        - 4.0 / (3.0 * len_sq) * y * y * y
        - 4.0 / length * circular
    )


def closed_form_outage(
    params: SystemParams, num_users: int, rate_nats: float, budget_w: float
) -> float:
    """Probability that the power-minimizing scheme needs more than budget_w
    for one user of a uniformly random two-user drop.

    Defined for num_users == 2 only; DomainError otherwise.  rate_nats is the
    per-user target of the underlying time-shared scheme.
    """
    if num_users != 2:
        raise DomainError(f"the closed form covers exactly 2 users, got {num_users}")
    if budget_w <= 0:
        raise ValueError("budget must be positive")

    probe = UserLayout(((0.0, 0.0), (0.0, 0.0)))
    coeff = min_power_terms(params, probe, rate_nats, slots=2).coeff
    budget_over_coeff = budget_w / coeff
    if budget_over_coeff <= params.height_m * params.height_m:
        return 1.0

    lim = _limits(params, budget_over_coeff)
    half_width = params.half_width
    certain = 2.0 / params.width_m * (half_width - min(half_width, math.sqrt(lim.headroom)))
    partial = 0.0
    if lim.y_hi >= lim.y_lo:
        partial = 2.0 / params.width_m * (
            _tail_integral(lim.y_hi, lim, params) - _tail_integral(lim.y_lo, lim, params)
        )
    prob = certain + partial

    assert -1e-9 <= prob <= 1.0 + 1e-9, f"closed-form outage {prob} outside [0, 1]"
    return min(max(prob, 0.0), 1.0)


def monte_carlo_outage(
    params: SystemParams,
    num_users: int,
    rate_nats: float,
    budget_w: float,
    trials: int,
    seed: int,
    user_index: int = 0,
) -> OutageEstimate:
    """Estimate the same outage event by dropping layouts uniformly at random.

    Works for any num_users >= 1.  user_index selects which user's power is
    compared against the budget (the users are exchangeable, so the choice
    only matters for reproducibility).  Returns the estimate and its binomial
    standard error.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= user_index < num_users:
        raise ValueError("user_index out of range")
    if budget_w <= 0:
        raise ValueError("budget must be positive")

    probe = UserLayout(tuple((0.0, 0.0) for _ in range(num_users)))
    coeff = min_power_terms(params, probe, rate_nats, slots=num_users).coeff
    h2 = params.height_m * params.height_m
    # outage  <=>  coeff * ((xbar - x_m)^2 + y_m^2 + h^2) >= budget
    threshold = budget_w / coeff - h2

    hl, hw = params.half_length, params.half_width
    failures = 0
    for block_index, start in enumerate(range(0, trials, _BLOCK)):
        n = min(_BLOCK, trials - start)
        g = rng.stream(seed, rng.DOMAIN_OUTAGE, block_index)
        draws = g.random((n, 2 * num_users))
        xs = (2.0 * draws[:, :num_users] - 1.0) * hl
        ys = (2.0 * draws[:, num_users:] - 1.0) * hw
        offset = xs.mean(axis=1) - xs[:, user_index]
        need = offset * offset + ys[:, user_index] * ys[:, user_index]
        failures += int((need >= threshold).sum())

    p = failures / trials
    stderr = math.sqrt(p * (1.0 - p) / trials)
    return OutageEstimate(probability=p, stderr=stderr)


def outage_rate(probability: float, rate_nats: float) -> float:
    """Long-run throughput when failed slots deliver nothing: (1 - p) * rate."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    return (1.0 - probability) * rate_nats
