"""Monte Carlo experiment sweeps over random user drops, emitting CSV.

One experiment sweeps either the total power budget (dBm) or the per-user
rate target (BPCU) and reports, per sweep point and scheme, the mean and
standard error of a scheme-specific metric over random layouts.  All schemes
at a given (sweep point, trial) see the same layout (common random numbers),
so scheme differences are paired; layouts come from counter-based streams
keyed by (seed, sweep index, trial index), which makes the CSV a pure
function of (config, seed) no matter how many workers run the trials.
"""

from __future__ import annotations

import hashlib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import oma_fairness, oma_greedy, noma, outage, rng
from .core import (
    SystemParams,
    UserLayout,
    bpcu_to_nats,
    dbm_to_watt,
    nats_to_bpcu,
    min_power_terms,
)
from .errors import ConfigError, Infeasible
from .oracle import GridSpec

logger = logging.getLogger(__name__)

AXIS_POWER = "power_dbm"
AXIS_RATE = "rate_bpcu"

_AXIS_DEFAULTS = {
    # documented artifact defaults, overridable per config
    AXIS_POWER: (0.0, 40.0, 9),
    AXIS_RATE: (0.5, 4.0, 8),
}


@dataclass(frozen=True)
class SchemeSpec:
    axis: str
    metric: str
    two_user_only: bool
    per_trial: bool  # False for sweep-level deterministic schemes


def _eval_maxmin(params, layout, value, cfg):
    return nats_to_bpcu(oma_fairness.solve_max_min_rate(params, layout, value).objective)


def _eval_maxmin_conv(params, layout, value, cfg):
    return nats_to_bpcu(oma_fairness.conventional_max_min_rate(params, layout, value))


def _eval_powermin(params, layout, value, cfg):
    return oma_fairness.solve_min_total_power(params, layout, value).objective


def _eval_powermin_conv(params, layout, value, cfg):
    return oma_fairness.conventional_min_total_power(params, layout, value)


def _eval_greedy(params, layout, value, cfg):
    rate = bpcu_to_nats(cfg.rate_bpcu)
    try:
        sol = oma_greedy.best_placement_search(params, layout, value, rate, cfg.grid)
    except Infeasible:
        return math.nan
    return nats_to_bpcu(sol.objective)


def _eval_greedy_highsnr(params, layout, value, cfg):
    rate = bpcu_to_nats(cfg.rate_bpcu)
    try:
        sol = oma_greedy.best_placement_high_snr(params, layout, value, rate)
    except Infeasible:
        return math.nan
    return nats_to_bpcu(sol.solution.objective)


def _eval_greedy_conv(params, layout, value, cfg):
    rate = bpcu_to_nats(cfg.rate_bpcu)
    try:
        split = oma_greedy.split_power(params, layout, value, rate, 0.0)
    except Infeasible:
        return math.nan
    return nats_to_bpcu(oma_greedy.sum_rate(params, layout, 0.0, split))


def _eval_noma(params, layout, value, cfg):
    ordered, _ = noma.order_by_waveguide_distance(layout)
    return noma.solve_min_power(params, ordered, value).total


def _eval_noma_conv(params, layout, value, cfg):
    totals = [sum(noma.min_powers_at(params, layout, value, 0.0, dec)) for dec in (0, 1)]
    return min(totals)


def _needed_power(params: SystemParams, layout: UserLayout, rate_nats: float, at_x: float) -> float:
    terms = min_power_terms(params, layout, rate_nats, slots=len(layout))
    x0 = layout.users[0][0]
    return terms.coeff * (at_x - x0) * (at_x - x0) + terms.floors[0]


def _eval_outage_mc(params, layout, value, cfg):
    rate = bpcu_to_nats(cfg.rate_bpcu)
    need = _needed_power(params, layout, rate, float(layout.xs.mean()))
    return 0.0 if need >= value else cfg.rate_bpcu


def _eval_outage_mc_conv(params, layout, value, cfg):
    rate = bpcu_to_nats(cfg.rate_bpcu)
    need = _needed_power(params, layout, rate, 0.0)
    return 0.0 if need >= value else cfg.rate_bpcu


def _eval_outage_analytic(params, layout, value, cfg):
    p = outage.closed_form_outage(params, 2, bpcu_to_nats(cfg.rate_bpcu), value)
    return nats_to_bpcu(outage.outage_rate(p, bpcu_to_nats(cfg.rate_bpcu)))


SCHEMES: dict[str, tuple[SchemeSpec, Callable]] = {
    "oma-maxmin": (SchemeSpec(AXIS_POWER, "min_rate_bpcu", False, True), _eval_maxmin),
    "oma-maxmin-conv": (SchemeSpec(AXIS_POWER, "min_rate_bpcu", False, True), _eval_maxmin_conv),
    "oma-powermin": (SchemeSpec(AXIS_RATE, "total_power_w", False, True), _eval_powermin),
    "oma-powermin-conv": (SchemeSpec(AXIS_RATE, "total_power_w", False, True), _eval_powermin_conv),
    "oma-greedy": (SchemeSpec(AXIS_POWER, "throughput_bpcu", True, True), _eval_greedy),
    "oma-greedy-highsnr": (SchemeSpec(AXIS_POWER, "throughput_bpcu", True, True), _eval_greedy_highsnr),
    "oma-greedy-conv": (SchemeSpec(AXIS_POWER, "throughput_bpcu", True, True), _eval_greedy_conv),
    "noma": (SchemeSpec(AXIS_RATE, "total_power_w", True, True), _eval_noma),
    "noma-conv": (SchemeSpec(AXIS_RATE, "total_power_w", True, True), _eval_noma_conv),
    "outage": (SchemeSpec(AXIS_POWER, "outage_rate_bpcu", True, False), _eval_outage_analytic),
    "outage-mc": (SchemeSpec(AXIS_POWER, "outage_rate_bpcu", True, True), _eval_outage_mc),
    "outage-mc-conv": (SchemeSpec(AXIS_POWER, "outage_rate_bpcu", True, True), _eval_outage_mc_conv),
}

_DEFAULTS: dict[str, object] = {
    "fc_hz": 28e9,
    "noise_dbm": -90.0,
    "height_m": 3.0,
    "length_m": 40.0,
    "width_m": 10.0,
    "users": 2,
    "trials": 1000,
    "seed": 0,
    "clustering": False,
    "workers": 1,
    "schemes": "oma-maxmin,oma-maxmin-conv",
    "sweep": AXIS_POWER,
    "sweep_start": None,
    "sweep_stop": None,
    "sweep_points": None,
    "rate_bpcu": 1.0,
    "power_dbm": 30.0,
    "grid_points": 2001,
    "grid_refine": 24,
}

_BOOL_STRINGS = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def known_keys() -> tuple[str, ...]:
    return tuple(_DEFAULTS)


def merge_config(mapping: Mapping[str, object]) -> dict[str, object]:
    """Overlay user-supplied keys on the defaults, coercing string values.

    Rejects unknown keys.  Performs no cross-field validation; that belongs
    to the consumers (ExperimentConfig for sweeps, the CLI for single solves).
    """
    unknown = sorted(set(mapping) - set(_DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    merged: dict[str, object] = {}
    for key, default in _DEFAULTS.items():
        raw = mapping.get(key, default)
        merged[key] = None if raw is None else _coerce(key, raw)
    return merged


def build_params(merged: Mapping[str, object]) -> SystemParams:
    """SystemParams from a merged config mapping."""
    try:
        return SystemParams(
            carrier_hz=float(merged["fc_hz"]),
            noise_w=dbm_to_watt(float(merged["noise_dbm"])),
            height_m=float(merged["height_m"]),
            length_m=float(merged["length_m"]),
            width_m=float(merged["width_m"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _coerce(key: str, raw: object):
    default = _DEFAULTS[key]
    if isinstance(raw, str):
        raw = raw.strip()
        if key in ("schemes", "sweep"):
            return raw
        if key == "clustering":
            if raw.lower() not in _BOOL_STRINGS:
                raise ConfigError(f"{key} must be true or false, got {raw!r}")
            return _BOOL_STRINGS[raw.lower()]
        try:
            return int(raw) if isinstance(default, int) and not isinstance(default, bool) else float(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw


@dataclass(frozen=True)
class ExperimentConfig:
    params: SystemParams
    schemes: tuple[str, ...]
    sweep: str
    sweep_values: tuple[float, ...]
    num_users: int
    trials: int
    seed: int
    clustering: bool
    workers: int
    rate_bpcu: float
    power_dbm: float
    grid: GridSpec

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "ExperimentConfig":
        merged = merge_config(mapping)

        sweep = merged["sweep"]
        if sweep not in _AXIS_DEFAULTS:
            raise ConfigError(f"sweep must be one of {sorted(_AXIS_DEFAULTS)}, got {sweep!r}")
        d_start, d_stop, d_points = _AXIS_DEFAULTS[sweep]
        start = merged["sweep_start"] if merged["sweep_start"] is not None else d_start
        stop = merged["sweep_stop"] if merged["sweep_stop"] is not None else d_stop
        points = merged["sweep_points"] if merged["sweep_points"] is not None else d_points
        points = int(points)
        if points < 1:
            raise ConfigError("sweep_points must be >= 1")
        if stop < start:
            raise ConfigError("sweep_stop must be >= sweep_start")
        values = tuple(float(v) for v in np.linspace(float(start), float(stop), points))

        schemes = tuple(s.strip() for s in str(merged["schemes"]).split(",") if s.strip())
        if not schemes:
            raise ConfigError("schemes must name at least one scheme")
        for name in schemes:
            if name not in SCHEMES:
                raise ConfigError(f"unknown scheme {name!r}; known: {', '.join(sorted(SCHEMES))}")

        num_users = int(merged["users"])
        if num_users < 1:
            raise ConfigError("users must be >= 1")
        trials = int(merged["trials"])
        if trials < 1:
            raise ConfigError("trials must be >= 1")
        workers = int(merged["workers"])
        if workers < 1:
            raise ConfigError("workers must be >= 1")
        seed = int(merged["seed"])
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        rate_bpcu = float(merged["rate_bpcu"])
        if rate_bpcu <= 0:
            raise ConfigError("rate_bpcu must be positive")

        params = build_params(merged)

        grid = GridSpec(
            lo=-params.half_length,
            hi=params.half_length,
            points=int(merged["grid_points"]),
            refine_iters=int(merged["grid_refine"]),
        )

        cfg = cls(
            params=params,
            schemes=schemes,
            sweep=sweep,
            sweep_values=values,
            num_users=num_users,
            trials=trials,
            seed=seed,
            clustering=bool(merged["clustering"]),
            workers=workers,
            rate_bpcu=rate_bpcu,
            power_dbm=float(merged["power_dbm"]),
            grid=grid,
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in self.schemes:
            spec, _ = SCHEMES[name]
            if spec.axis != self.sweep:
                raise ConfigError(
                    f"scheme {name!r} sweeps {spec.axis}, but the config sweeps {self.sweep}"
                )
            if spec.two_user_only and self.num_users != 2:
                raise ConfigError(f"scheme {name!r} requires users = 2, got {self.num_users}")
        if self.sweep == AXIS_RATE and self.sweep_values[0] <= 0:
            raise ConfigError("rate sweep values must be positive")


def sample_layout(
    num_users: int, params: SystemParams, clustering: bool, generator: np.random.Generator
) -> UserLayout:
    """Drop users uniformly over the service area.

    With clustering, x is confined to the strip [-length/4, -length/8] (users
    bunch on one side of the waveguide) while y still spans the full width.
    """
    draws = generator.random((2, num_users))
    if clustering:
        x_lo, x_hi = -params.length_m / 4.0, -params.length_m / 8.0
    else:
        x_lo, x_hi = -params.half_length, params.half_length
    xs = x_lo + draws[0] * (x_hi - x_lo)
    ys = (2.0 * draws[1] - 1.0) * params.half_width
    return UserLayout(tuple(zip(xs.tolist(), ys.tolist())))


def _internal_sweep_value(sweep: str, value: float) -> float:
    return dbm_to_watt(value) if sweep == AXIS_POWER else bpcu_to_nats(value)


def _format(value: float) -> str:
    return format(value, ".12g")


def run_experiment(config: ExperimentConfig) -> str:
    """Run the full sweep and return the CSV document as a string."""
    per_trial_schemes = [s for s in config.schemes if SCHEMES[s][0].per_trial]
    lines = ["sweep_value,scheme,metric,mean,stderr,trials"]

    for sweep_idx, sweep_value in enumerate(config.sweep_values):
        internal = _internal_sweep_value(config.sweep, sweep_value)

        def one_trial(trial: int) -> tuple[list[float], bytes]:
            gen = rng.stream(config.seed, rng.DOMAIN_LAYOUTS, sweep_idx, trial)
            layout = sample_layout(config.num_users, config.params, config.clustering, gen)
            values = [
                SCHEMES[name][1](config.params, layout, internal, config)
                for name in per_trial_schemes
            ]
            return values, np.array(layout.users, dtype=float).tobytes()

        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                outcomes = list(pool.map(one_trial, range(config.trials)))
        else:
            outcomes = [one_trial(t) for t in range(config.trials)]

        table = np.array([values for values, _ in outcomes], dtype=float)
        digest = hashlib.sha256(b"".join(blob for _, blob in outcomes)).hexdigest()
        logger.debug("sweep %s=%s layouts sha256=%s", config.sweep, sweep_value, digest)

        for name in config.schemes:
            spec, evaluator = SCHEMES[name]
            if not spec.per_trial:
                mean = evaluator(config.params, None, internal, config)
                stderr, count = 0.0, 1
            else:
                column = table[:, per_trial_schemes.index(name)]
                finite = np.isfinite(column)
                count = int(finite.sum())
                if count == 0:
                    mean, stderr = math.nan, math.nan
                else:
                    kept = column[finite]
                    mean = float(kept.mean())
                    stderr = float(kept.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0
            lines.append(
                f"{format(sweep_value, '.10g')},{name},{spec.metric},"
                f"{_format(mean)},{_format(stderr)},{count}"
            )

    return "\n".join(lines) + "\n"
