"""Power-minimal placement for a two-user superposition (NOMA) downlink.

Both users are served simultaneously at the same per-user rate target.  The
user closer to the waveguide (smaller |y|) acts as the strong user: it decodes
and removes the other signal before its own.  Minimizing total power under
the three rate constraints gives a closed-form placement between the two
users, weighted toward the strong one by e^R, that is provably optimal for
targets of at least half a nat.  A grid search over position and both SIC
orders serves as the independent reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    NomaRates,
    SystemParams,
    UserLayout,
    min_power_terms,
    noma_rates,
    squared_distance,
)
from .errors import DomainError, OrderingViolation
from .oracle import GridSpec, grid_optimize

# Smallest rate target (nats) for which the closed form is provably optimal.
CERTIFIED_MIN_RATE = 0.5

_TOL = 1e-9


@dataclass(frozen=True)
class NomaSolution:
    """x_star with per-user powers indexed like the layout; sic_user is the
    1-based index of the decoding (strong) user.  rates holds the achieved
    (strong, weak, sic) rates in nats.  certified_optimal marks solutions
    covered by the closed form's optimality guarantee."""

    x_star: float
    powers: tuple[float, float]
    sic_user: int
    rates: NomaRates
    total: float
    certified_optimal: bool


@dataclass(frozen=True)
class AssumptionChecks:
    """Validity report for a NOMA solution.

    sic_distance_margin is the decoder's squared planar distance minus the
    direct user's at x_star; nonpositive means the decoder really is the
    stronger receiver there, which the closed form assumes."""

    sic_distance_margin: float
    strong_user_ok: bool
    x_between_users: bool
    powers_nonnegative: bool

    @property
    def all_ok(self) -> bool:
        return self.strong_user_ok and self.x_between_users and self.powers_nonnegative


def order_by_waveguide_distance(layout: UserLayout) -> tuple[UserLayout, tuple[int, ...]]:
    """Sort users by |y| ascending (stable, so ties keep the input order).

    Returns the reordered layout and the permutation p with
    ordered.users[i] == layout.users[p[i]].
    """
    perm = tuple(sorted(range(len(layout)), key=lambda i: layout.users[i][1] ** 2))
    ordered = UserLayout(tuple(layout.users[i] for i in perm))
    return ordered, perm


def _ordered_pair(layout: UserLayout) -> tuple[tuple[float, float], tuple[float, float]]:
    if len(layout) != 2:
        raise DomainError(f"NOMA solvers serve exactly 2 users, got {len(layout)}")
    (x1, y1), (x2, y2) = layout.users
    if y1 * y1 > y2 * y2:
        raise OrderingViolation(
            "user 1 must be the one closer to the waveguide; call order_by_waveguide_distance first"
        )
    return (x1, y1), (x2, y2)


def min_powers_at(
    params: SystemParams, layout: UserLayout, rate_nats: float, x: float, decoder: int
) -> tuple[float, float]:
    """Cheapest feasible powers at a fixed position x with a fixed SIC order.

    decoder is the 0-based index of the SIC-performing user.  Its own rate
    constraint fixes its power at coeff * tau_decoder; the other user's power
    must satisfy both interference-limited constraints (its own decode and the
    decoder's decode of it), so it takes the larger of the two right-hand
    sides, which reduces to coeff * ((e^R - 1) tau_decoder + max(tau_dec,
    tau_dir)).  Returns (decoder_power, direct_power).
    """
    if len(layout) != 2:
        raise DomainError(f"NOMA solvers serve exactly 2 users, got {len(layout)}")
    if decoder not in (0, 1):
        raise ValueError("decoder must be 0 or 1")
    coeff = min_power_terms(params, layout, rate_nats, slots=1).coeff
    h = params.height_m
    xd, yd = layout.users[decoder]
    xo, yo = layout.users[1 - decoder]
    tau_dec = squared_distance(xd, yd, x, h)
    tau_dir = squared_distance(xo, yo, x, h)
    p_dec = coeff * tau_dec
    p_dir = math.expm1(rate_nats) * p_dec + coeff * max(tau_dec, tau_dir)
    return p_dec, p_dir


def solve_min_power(params: SystemParams, layout: UserLayout, rate_nats: float) -> NomaSolution:
    """Closed-form total-power minimizer for an ordered pair.

    The placement x* = (x_2 + e^R x_1) / (e^R + 1) sits between the users,
    pulled toward the strong user; its power covers exactly its own rate and
    the weak user's power is stacked on top of the resulting interference.
    Both own rates come out exactly equal to the target.  Optimality is
    guaranteed for rate_nats >= 0.5; below that the solution is still
    returned but flagged uncertified, and the search may beat it.
    """
    if rate_nats <= 0:
        raise ValueError("rate target must be positive")
    layout.validate(params)
    (x1, y1), (x2, y2) = _ordered_pair(layout)

    terms = min_power_terms(params, layout, rate_nats, slots=1)
    growth = math.exp(rate_nats)
    x_star = (x2 + growth * x1) / (growth + 1.0)

    p1 = terms.coeff * (x_star - x1) * (x_star - x1) + terms.floors[0]
    p2 = math.expm1(rate_nats) * p1 + terms.coeff * (x_star - x2) * (x_star - x2) + terms.floors[1]

    h = params.height_m
    rates = noma_rates(
        params,
        p_strong=p1,
        p_weak=p2,
        sq_dist_strong=squared_distance(x1, y1, x_star, h),
        sq_dist_weak=squared_distance(x2, y2, x_star, h),
    )
    certified = rate_nats >= CERTIFIED_MIN_RATE

    assert min(x1, x2) <= x_star <= max(x1, x2)
    assert p1 >= 0.0 and p2 >= 0.0
    tol = _TOL * max(1.0, rate_nats)
    assert abs(rates.strong - rate_nats) <= tol and abs(rates.weak - rate_nats) <= tol
    if certified:
        assert rates.sic >= rate_nats - tol

    return NomaSolution(
        x_star=x_star,
        powers=(p1, p2),
        sic_user=1,
        rates=rates,
        total=p1 + p2,
        certified_optimal=certified,
    )


def solve_min_power_search(
    params: SystemParams, layout: UserLayout, rate_nats: float, spec: GridSpec
) -> NomaSolution:
    """Reference route: grid-search the position for both SIC orders.

    No ordering requirement; ties between orders keep the lower-indexed
    decoder.  The result carries exactly-met constraints at the grid optimum
    but only numerical (not closed-form) optimality.
    """
    if rate_nats <= 0:
        raise ValueError("rate target must be positive")
    layout.validate(params)
    if len(layout) != 2:
        raise DomainError(f"NOMA solvers serve exactly 2 users, got {len(layout)}")

    coeff = min_power_terms(params, layout, rate_nats, slots=1).coeff
    growth = math.exp(rate_nats)
    h = params.height_m

    best: tuple[float, float, int] | None = None
    for decoder in (0, 1):
        xd, yd = layout.users[decoder]
        xo, yo = layout.users[1 - decoder]

        def objective(xs: np.ndarray) -> np.ndarray:
            tau_dec = squared_distance(xd, yd, xs, h)
            tau_dir = squared_distance(xo, yo, xs, h)
            return coeff * (growth * tau_dec + np.maximum(tau_dec, tau_dir))

        x_opt, value = grid_optimize(objective, spec, sense="min")
        if best is None or value < best[0]:
            best = (value, x_opt, decoder)

    _, x_star, decoder = best
    p_dec, p_dir = min_powers_at(params, layout, rate_nats, x_star, decoder)
    xd, yd = layout.users[decoder]
    xo, yo = layout.users[1 - decoder]
    rates = noma_rates(
        params,
        p_strong=p_dec,
        p_weak=p_dir,
        sq_dist_strong=squared_distance(xd, yd, x_star, h),
        sq_dist_weak=squared_distance(xo, yo, x_star, h),
    )
    powers = (p_dec, p_dir) if decoder == 0 else (p_dir, p_dec)
    return NomaSolution(
        x_star=x_star,
        powers=powers,
        sic_user=decoder + 1,
        rates=rates,
        total=p_dec + p_dir,
        certified_optimal=False,
    )


def check_solution(
    params: SystemParams, layout: UserLayout, solution: NomaSolution
) -> AssumptionChecks:
    """Check the closed form's working assumptions on an actual solution."""
    if len(layout) != 2:
        raise DomainError(f"NOMA solvers serve exactly 2 users, got {len(layout)}")
    decoder = solution.sic_user - 1
    xd, yd = layout.users[decoder]
    xo, yo = layout.users[1 - decoder]
    x = solution.x_star

    margin = (x - xd) * (x - xd) + yd * yd - ((x - xo) * (x - xo) + yo * yo)
    planar_scale = max(1.0, (x - xo) * (x - xo) + yo * yo)
    tiny = _TOL * max(1.0, abs(xd), abs(xo), params.half_length)
    between = min(xd, xo) - tiny <= x <= max(xd, xo) + tiny
    inside = -params.half_length - tiny <= x <= params.half_length + tiny
    power_floor = -_TOL * max(1.0, solution.total)
    return AssumptionChecks(
        sic_distance_margin=margin,
        strong_user_ok=margin <= _TOL * planar_scale,
        x_between_users=between and inside,
        powers_nonnegative=all(p >= power_floor for p in solution.powers),
    )


def strong_user_margin(layout: UserLayout, rate_nats: float) -> float:
    """Strong-user condition at the closed-form placement, grouped form.

    Equals (x* - x_1)^2 + y_1^2 - (x* - x_2)^2 - y_2^2 with the closed-form
    x* substituted and the squared-offset difference factored:
    (x_2 - x_1)^2 / (e^R + 1)^2 * (1 - e^{2R}) + y_1^2 - y_2^2.  Nonpositive
    means the decoder stays the stronger receiver, which holds for any
    ordered pair once rate_nats >= 0.5.
    """
    (x1, y1), (x2, y2) = _ordered_pair(layout)
    growth = math.exp(rate_nats)
    sep = x2 - x1
    return sep * sep / ((growth + 1.0) ** 2) * (1.0 - growth * growth) + y1 * y1 - y2 * y2


def oma_noma_power_gap(params: SystemParams, layout: UserLayout, rate_nats: float) -> float:
    """Total-power saving of pinching NOMA over centre-antenna time sharing.

    The baseline serves each user of the ordered pair in its own slot from a
    centre-fixed antenna, so it pays the e^{2R} SNR price on both squared
    distances; the NOMA scheme pays e^R once and moves the antenna.  Returns
    baseline total minus NOMA total, in watts.
    """
    layout.validate(params)
    (x1, y1), (x2, y2) = _ordered_pair(layout)
    noma = solve_min_power(params, layout, rate_nats)

    oma_terms = min_power_terms(params, layout, rate_nats, slots=2)
    h2 = params.height_m * params.height_m
    baseline = (
        oma_terms.coeff * (x1 * x1 + y1 * y1 + h2)
        + oma_terms.coeff * (x2 * x2 + y2 * y2 + h2)
    )
    return baseline - noma.total
