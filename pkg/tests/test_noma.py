"""Two-user superposition (NOMA) power minimization."""

import math

import numpy as np
import pytest

from pinchplace import rng
from pinchplace.core import SystemParams, UserLayout, min_power_terms
from pinchplace.errors import DomainError, OrderingViolation
from pinchplace.noma import (
    CERTIFIED_MIN_RATE,
    check_solution,
    min_powers_at,
    oma_noma_power_gap,
    order_by_waveguide_distance,
    solve_min_power,
    solve_min_power_search,
    strong_user_margin,
)
from pinchplace.oracle import GridSpec

PARAMS = SystemParams.default()
ORDERED = UserLayout(((0.0, 1.0), (10.0, 4.0)))
SEARCH_GRID = GridSpec(lo=-20.0, hi=20.0, points=4001, refine_iters=40)

# frozen against a 50-digit reference computation at R = 1 nat
NOMA_X = 2.6894142136999513
NOMA_P1 = 4.078949985270912e-05
NOMA_P2 = 0.00025576232611553126
NOMA_TOTAL = 0.0002965518259682404
NOMA_SIC_RATE = 1.6021281371383753
NOMA_MARGIN = -61.211715726000975
OMA_CENTRE_TOTAL = 0.0011881324429778488
NOMA_GAP = 0.0008915806170096084


def test_closed_form_frozen_case():
    sol = solve_min_power(PARAMS, ORDERED, 1.0)
    assert np.isclose(sol.x_star, NOMA_X, rtol=1e-13), f"x {sol.x_star}"
    assert np.isclose(sol.powers[0], NOMA_P1, rtol=1e-12)
    assert np.isclose(sol.powers[1], NOMA_P2, rtol=1e-12)
    assert np.isclose(sol.total, NOMA_TOTAL, rtol=1e-12)
    assert sol.sic_user == 1
    assert sol.certified_optimal
    assert np.isclose(sol.rates.strong, 1.0, rtol=0, atol=1e-12)
    assert np.isclose(sol.rates.weak, 1.0, rtol=0, atol=1e-12)
    assert np.isclose(sol.rates.sic, NOMA_SIC_RATE, rtol=1e-12)


def test_margin_frozen_and_grouped_form_agrees():
    sol = solve_min_power(PARAMS, ORDERED, 1.0)
    checks = check_solution(PARAMS, ORDERED, sol)
    assert checks.all_ok
    assert np.isclose(checks.sic_distance_margin, NOMA_MARGIN, rtol=1e-12)
    grouped = strong_user_margin(ORDERED, 1.0)
    assert np.isclose(grouped, NOMA_MARGIN, rtol=1e-12), f"grouped {grouped}"


def test_gap_frozen_case():
    assert np.isclose(oma_noma_power_gap(PARAMS, ORDERED, 1.0), NOMA_GAP, rtol=1e-12)


def test_placement_weighting_identity():
    # e^R = 2 turns the placement into a 2:1 interior division point
    lay = UserLayout(((0.0, 1.0), (10.0, 4.0)))
    sol = solve_min_power(PARAMS, lay, math.log(2.0))
    assert np.isclose(sol.x_star, 10.0 / 3.0, rtol=1e-15)


def test_rates_meet_target_exactly():
    gen = rng.stream(44, rng.DOMAIN_TESTS, 40)
    for _ in range(200):
        ys = np.sort(np.abs(gen.uniform(-5, 5, 2)))
        lay = UserLayout((
            (float(gen.uniform(-20, 20)), float(ys[0] * np.sign(gen.uniform(-1, 1)))),
            (float(gen.uniform(-20, 20)), float(ys[1] * np.sign(gen.uniform(-1, 1)))),
        ))
        rate = float(gen.uniform(0.5, 3.0))
        sol = solve_min_power(PARAMS, lay, rate)
        tol = 1e-9 * max(1.0, rate)
        assert abs(sol.rates.strong - rate) <= tol
        assert abs(sol.rates.weak - rate) <= tol
        assert sol.rates.sic >= rate - tol  # SIC never binds at or above half a nat
        assert min(lay.xs) - 1e-12 <= sol.x_star <= max(lay.xs) + 1e-12
        assert check_solution(PARAMS, lay, sol).all_ok


def test_closed_form_matches_search():
    gen = rng.stream(44, rng.DOMAIN_TESTS, 41)
    for rate in (0.5, 1.0, 2.0):
        for _ in range(15):
            ys = np.sort(np.abs(gen.uniform(-5, 5, 2)))
            lay = UserLayout((
                (float(gen.uniform(-20, 20)), float(ys[0])),
                (float(gen.uniform(-20, 20)), float(ys[1])),
            ))
            closed = solve_min_power(PARAMS, lay, rate)
            search = solve_min_power_search(PARAMS, lay, rate, SEARCH_GRID)
            rel = abs(closed.total - search.total) / search.total
            assert rel <= 1e-6, f"R={rate}: closed {closed.total} vs search {search.total}"


def test_below_half_nat_is_uncertified():
    sol = solve_min_power(PARAMS, ORDERED, 0.2)
    assert not sol.certified_optimal
    assert CERTIFIED_MIN_RATE == 0.5
    # the search may only ever find something at least as cheap
    search = solve_min_power_search(PARAMS, ORDERED, 0.2, SEARCH_GRID)
    assert search.total <= sol.total * (1.0 + 1e-9)


def test_ordering_helper_and_violation():
    lay = UserLayout(((3.0, -4.5), (-6.0, 1.0)))
    ordered, perm = order_by_waveguide_distance(lay)
    assert perm == (1, 0)
    assert ordered.users[0] == (-6.0, 1.0)
    with pytest.raises(OrderingViolation):
        solve_min_power(PARAMS, lay, 1.0)
    # ties keep input order
    tie = UserLayout(((1.0, 2.0), (5.0, -2.0)))
    _, perm_tie = order_by_waveguide_distance(tie)
    assert perm_tie == (0, 1)


def test_non_pairs_rejected():
    with pytest.raises(DomainError):
        solve_min_power(PARAMS, UserLayout(((0.0, 0.0),)), 1.0)
    with pytest.raises(DomainError):
        solve_min_power_search(PARAMS, UserLayout(((0.0, 0.0),)), 1.0, SEARCH_GRID)
    with pytest.raises(ValueError):
        solve_min_power(PARAMS, ORDERED, 0.0)


def test_min_powers_at_covers_both_constraints():
    # the direct user's power must survive both its own decode and the
    # decoder's decode of it, whichever distance is worse
    for decoder in (0, 1):
        p_dec, p_dir = min_powers_at(PARAMS, ORDERED, 1.0, 3.0, decoder)
        assert p_dec > 0 and p_dir > 0
        assert p_dir > math.expm1(1.0) * p_dec  # interference stacking
    with pytest.raises(ValueError):
        min_powers_at(PARAMS, ORDERED, 1.0, 3.0, 2)


def test_gap_positive_at_high_rate():
    gen = rng.stream(44, rng.DOMAIN_TESTS, 42)
    for _ in range(200):
        ys = np.sort(np.abs(gen.uniform(-5, 5, 2)))
        lay = UserLayout((
            (float(gen.uniform(-20, 20)), float(ys[0])),
            (float(gen.uniform(-20, 20)), float(ys[1])),
        ))
        assert oma_noma_power_gap(PARAMS, lay, 3.0) > 0.0


def test_colocated_centre_users_need_half_the_oma_power():
    lay = UserLayout(((0.0, 1.7), (0.0, 1.7)))
    rate = 1.0
    noma_total = solve_min_power(PARAMS, lay, rate).total
    coeff2 = min_power_terms(PARAMS, lay, rate, slots=2).coeff
    tau = 1.7 ** 2 + PARAMS.height_m ** 2
    oma_total = coeff2 * tau * 2.0
    assert np.isclose(noma_total / oma_total, 0.5, rtol=1e-12), (
        f"ratio {noma_total / oma_total}"
    )


def test_search_maps_powers_back_to_layout_order():
    # force decoder = user 2 by putting user 1 far out on the waveguide axis
    lay = UserLayout(((-18.0, 4.9), (0.0, 0.1)))
    search = solve_min_power_search(PARAMS, lay, 1.0, SEARCH_GRID)
    assert search.sic_user in (1, 2)
    assert len(search.powers) == 2 and all(p > 0 for p in search.powers)
    assert np.isclose(sum(search.powers), search.total, rtol=1e-15)
