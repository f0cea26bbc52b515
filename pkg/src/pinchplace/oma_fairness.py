"""Closed-form antenna placement and power allocation for time-shared downlinks.

Two fairness-oriented problems over a single pinching antenna serving M users
in 1/M time slots each:

* max-min rate under a total power budget, and
* total power minimization under a per-user rate target.

Both share the same placement: the antenna goes to the mean of the user
x-coordinates.  For max-min, powers proportional to the squared distances
equalize every rate; for power minimization each user gets exactly the power
that meets its target.
"""

from __future__ import annotations

import math

from .core import (
    MinPowerTerms,
    PlacementSolution,
    SystemParams,
    UserLayout,
    min_power_terms,
    path_gain,
    squared_distance,
)


def _mean_x(layout: UserLayout) -> float:
    return float(layout.xs.mean())


def solve_max_min_rate(
    params: SystemParams, layout: UserLayout, total_power_w: float
) -> PlacementSolution:
    """Maximize the worst per-user rate under a total power budget.

    With powers chosen as P_m = tau_m / sum(tau) * P all rates are equal and
    the common rate (1/M) log(1 + gP / (noise * sum(tau))) depends on the
    antenna position only through sum(tau), which a mean-point antenna
    minimizes.  The objective of the returned solution is that common rate in
    nats per channel use.
    """
    if total_power_w <= 0:
        raise ValueError("total power budget must be positive")
    layout.validate(params)

    x_star = _mean_x(layout)
    h = params.height_m
    taus = [squared_distance(x, y, x_star, h) for x, y in layout.users]
    tau_sum = sum(taus)

    g = path_gain(params)
    noise_mass = params.noise_w * tau_sum
    common_rate = math.log((g * total_power_w + noise_mass) / noise_mass) / len(layout)
    powers = tuple(t / tau_sum * total_power_w for t in taus)

    assert -params.half_length <= x_star <= params.half_length
    assert all(p >= 0.0 for p in powers)
    return PlacementSolution(x_star=x_star, powers=powers, objective=common_rate)


def solve_min_total_power(
    params: SystemParams, layout: UserLayout, rate_nats: float
) -> PlacementSolution:
    """Minimize total transmit power while every user reaches rate_nats.

    Each user needs coeff * (x - x_m)^2 + floor_m watts, so the total is
    coeff * sum((x - x_m)^2) + const and the mean-point antenna is optimal.
    The objective of the returned solution is the total power in watts.
    """
    layout.validate(params)
    terms = min_power_terms(params, layout, rate_nats, slots=len(layout))

    x_star = _mean_x(layout)
    powers = tuple(
        terms.coeff * (x_star - x) * (x_star - x) + f
        for (x, _), f in zip(layout.users, terms.floors)
    )

    assert -params.half_length <= x_star <= params.half_length
    assert all(p >= 0.0 for p in powers)
    return PlacementSolution(x_star=x_star, powers=powers, objective=sum(powers))


def conventional_max_min_rate(
    params: SystemParams, layout: UserLayout, total_power_w: float
) -> float:
    """Best common rate with the antenna fixed at the area centre.

    Power allocation is still optimized (proportional to the squared
    distances), only the placement is fixed, so this isolates the placement
    gain of a movable antenna.
    """
    if total_power_w <= 0:
        raise ValueError("total power budget must be positive")
    layout.validate(params)
    h = params.height_m
    tau_sum = sum(squared_distance(x, y, 0.0, h) for x, y in layout.users)
    noise_mass = params.noise_w * tau_sum
    return math.log((path_gain(params) * total_power_w + noise_mass) / noise_mass) / len(layout)


def conventional_min_total_power(
    params: SystemParams, layout: UserLayout, rate_nats: float
) -> float:
    """Total power meeting rate_nats with the antenna fixed at the area centre."""
    layout.validate(params)
    terms = min_power_terms(params, layout, rate_nats, slots=len(layout))
    return sum(
        terms.coeff * x * x + f for (x, _), f in zip(layout.users, terms.floors)
    )


def pinching_power_saving(params: SystemParams, layout: UserLayout, rate_nats: float) -> float:
    """Power saved by moving the antenna from the centre to the mean point.

    Expanding conventional minus pinching totals collapses to
    coeff * (sum x_m)^2 / M, which is nonnegative and grows when users
    cluster on one side of the area.
    """
    layout.validate(params)
    terms = min_power_terms(params, layout, rate_nats, slots=len(layout))
    x_sum = float(layout.xs.sum())
    return terms.coeff * x_sum * x_sum / len(layout)


def power_terms(params: SystemParams, layout: UserLayout, rate_nats: float) -> MinPowerTerms:
    """Minimum-power coefficients for the time-shared scheme (slots = M)."""
    return min_power_terms(params, layout, rate_nats, slots=len(layout))
