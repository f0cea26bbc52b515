"""Command-line front end: single-instance solvers and experiment sweeps.

Subcommands
-----------
maxmin INSTANCE    best placement + powers maximizing the worst rate
powermin INSTANCE  best placement + powers minimizing total power at a target
greedy INSTANCE    two-user throughput placement (search and fast route)
noma INSTANCE      two-user superposition power minimization
outage             two-user outage probability, closed form vs Monte Carlo
experiment         CSV sweep over random layouts (see config keys below)

An instance file lists one user per line as "x y"; blank lines and '#'
comments are ignored.  A config file holds flat "key = value" lines with the
same comment rules; --set key=value overrides single entries and dedicated
flags override both.  Exit codes: 0 ok, 2 bad config or parse error,
3 infeasible instance, 4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments, noma, oma_fairness, oma_greedy, oracle, outage
from .core import (
    SystemParams,
    UserLayout,
    bpcu_to_nats,
    dbm_to_watt,
    nats_to_bpcu,
    min_power_terms,
    path_gain,
    squared_distance,
    watt_to_dbm,
)
from .errors import CertificationError, ConfigError, Infeasible, ParseError, PinchError

# certification tolerances: closed forms must match their brute-force oracles
CERT_REL = 1e-9            # max-min / power-min objective, relative
CERT_SPLIT_NATS = 1e-9     # two-user split vs power sweep, absolute nats
CERT_NOMA_REL = 1e-6       # NOMA closed form vs position/order search
_SPLIT_SWEEP_POINTS = 100001

_CONFIG_HELP = """\
config keys (defaults in parentheses):
  fc_hz (28e9)          carrier frequency, Hz
  noise_dbm (-90)       noise power, dBm
  height_m (3)          waveguide height, m
  length_m (40)         service area along the waveguide, m
  width_m (10)          service area across the waveguide, m
  users (2)             number of users M
  trials (1000)         Monte Carlo trials
  seed (0)              64-bit master seed
  clustering (false)    confine x to [-length/4, -length/8] when sampling
  workers (1)           worker threads for experiment trials
  schemes (oma-maxmin,oma-maxmin-conv)   comma-separated scheme list
  sweep (power_dbm)     sweep axis: power_dbm or rate_bpcu
  sweep_start/stop/points   sweep range (power: 0..40 dBm x9; rate: 0.5..4 BPCU x8)
  rate_bpcu (1.0)       per-user rate target, bits per channel use
  power_dbm (30.0)      total power budget (or outage budget), dBm
  grid_points (2001)    experiment search-grid points
  grid_refine (24)      golden-section refinement iterations

schemes: """ + ", ".join(sorted(experiments.SCHEMES))


def parse_kv_text(text: str, origin: str) -> dict[str, str]:
    """Flat key = value lines; later duplicates win."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ParseError(f"{origin}:{lineno}: empty key or value in {raw.strip()!r}")
        out[key] = value
    return out


def read_layout(path: str) -> UserLayout:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read instance file {path}: {exc}") from exc
    rows: list[tuple[float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{path}:{lineno}: expected 'x y', got {raw.strip()!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: non-numeric coordinate in {raw.strip()!r}") from exc
    if not rows:
        raise ParseError(f"{path}: no users found")
    return UserLayout(tuple(rows))


def _collect_mapping(args: argparse.Namespace) -> dict[str, object]:
    mapping: dict[str, object] = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read config file {args.config}: {exc}") from exc
        mapping.update(parse_kv_text(text, args.config))
    for pair in args.set or []:
        parsed = parse_kv_text(pair, "--set")
        if len(parsed) != 1:
            raise ParseError(f"--set expects a single key=value, got {pair!r}")
        mapping.update(parsed)
    for flag, key in (
        ("power_dbm", "power_dbm"),
        ("rate_bpcu", "rate_bpcu"),
        ("users", "users"),
        ("trials", "trials"),
        ("workers", "workers"),
        ("clustering", "clustering"),
        ("seed", "seed"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            mapping[key] = value
    return experiments.merge_config(mapping)


def _emit(args: argparse.Namespace, report: dict, human: list[str]) -> None:
    print("\n".join(human))
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _power_line(label: str, watts: float) -> str:
    dbm = f" ({watt_to_dbm(watts):.2f} dBm)" if watts > 0 else ""
    return f"{label} = {watts:.6e} W{dbm}"


def _certify_line(name: str, gap: float, tol: float, ok: bool) -> str:
    return f"certify {name}: gap = {gap:.3e} (tol {tol:g}) -> {'PASS' if ok else 'FAIL'}"


# ---------------------------------------------------------------- oracles

def _maxmin_oracle(params: SystemParams, layout: UserLayout, total_w: float) -> float:
    xs_u, ys_u = layout.xs, layout.ys
    h = params.height_m
    g = path_gain(params)

    def objective(xs: np.ndarray) -> np.ndarray:
        tau_sum = squared_distance(xs_u[None, :], ys_u[None, :], xs[:, None], h).sum(axis=1)
        return np.log1p(g * total_w / (params.noise_w * tau_sum)) / len(layout)

    grid = oracle.certification_grid(-params.half_length, params.half_length)
    return oracle.grid_optimize(objective, grid, sense="max")[1]


def _powermin_oracle(params: SystemParams, layout: UserLayout, rate_nats: float) -> float:
    terms = min_power_terms(params, layout, rate_nats, slots=len(layout))
    xs_u, ys_u = layout.xs, layout.ys
    h = params.height_m

    def objective(xs: np.ndarray) -> np.ndarray:
        return terms.coeff * squared_distance(
            xs_u[None, :], ys_u[None, :], xs[:, None], h
        ).sum(axis=1)

    grid = oracle.certification_grid(-params.half_length, params.half_length)
    return oracle.grid_optimize(objective, grid, sense="min")[1]


def _split_sweep_value(
    params: SystemParams, layout: UserLayout, total_w: float, rate_nats: float, x: float
) -> float:
    """Best sum rate over a dense sweep of the first user's power at fixed x."""
    coeff = min_power_terms(params, layout, rate_nats, slots=2).coeff
    h = params.height_m
    (x1, y1), (x2, y2) = layout.users
    t1 = squared_distance(x1, y1, x, h)
    t2 = squared_distance(x2, y2, x, h)
    g = path_gain(params)
    q1, q2 = params.noise_w * t1 / g, params.noise_w * t2 / g
    floor1, floor2 = coeff * t1, coeff * t2

    def evaluator(p1s: np.ndarray) -> np.ndarray:
        p2s = total_w - p1s
        with np.errstate(divide="ignore", invalid="ignore"):
            rates = 0.5 * (np.log1p(p1s / q1) + np.log1p(p2s / q2))
        feasible = (p1s >= floor1 - 1e-12 * total_w) & (p2s >= floor2 - 1e-12 * total_w)
        return np.where(feasible, rates, -np.inf)

    spec = oracle.GridSpec(lo=0.0, hi=total_w, points=_SPLIT_SWEEP_POINTS, refine_iters=40)
    return oracle.power_split_sweep(evaluator, total_w, spec)[1]


# ------------------------------------------------------------- subcommands

def cmd_maxmin(args: argparse.Namespace) -> int:
    merged = _collect_mapping(args)
    params = experiments.build_params(merged)
    layout = read_layout(args.instance)
    total_w = dbm_to_watt(float(merged["power_dbm"]))
    try:
        sol = oma_fairness.solve_max_min_rate(params, layout, total_w)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    rate_bpcu = nats_to_bpcu(sol.objective)
    human = [
        f"solver: maxmin ({len(layout)} users, P = {float(merged['power_dbm']):.2f} dBm)",
        f"placement x* = {sol.x_star:.9g} m",
        f"min rate = {rate_bpcu:.6f} BPCU",
    ]
    for i, p in enumerate(sol.powers, 1):
        human.append(_power_line(f"  P_{i}", p))
    report = {
        "solver": "maxmin",
        "x_star_m": sol.x_star,
        "powers_w": list(sol.powers),
        "min_rate_bpcu": rate_bpcu,
    }

    code = 0
    if args.certify:
        reference = _maxmin_oracle(params, layout, total_w)
        gap = (sol.objective - reference) / abs(reference)
        ok = gap >= -CERT_REL
        human.append(_certify_line("grid", gap, CERT_REL, ok))
        report["certify"] = {"oracle_nats": reference, "gap_rel": gap, "pass": ok}
        if not ok:
            code = 4
    _emit(args, report, human)
    if code:
        raise CertificationError("max-min objective fell below the grid oracle")
    return 0


def cmd_powermin(args: argparse.Namespace) -> int:
    merged = _collect_mapping(args)
    params = experiments.build_params(merged)
    layout = read_layout(args.instance)
    rate = bpcu_to_nats(float(merged["rate_bpcu"]))
    sol = oma_fairness.solve_min_total_power(params, layout, rate)
    saving = oma_fairness.pinching_power_saving(params, layout, rate)

    human = [
        f"solver: powermin ({len(layout)} users, target = {float(merged['rate_bpcu']):.4f} BPCU)",
        f"placement x* = {sol.x_star:.9g} m",
        _power_line("total power", sol.objective),
        _power_line("saving vs centre antenna", saving) if saving > 0 else
        "saving vs centre antenna = 0 W",
    ]
    for i, p in enumerate(sol.powers, 1):
        human.append(_power_line(f"  P_{i}", p))
    report = {
        "solver": "powermin",
        "x_star_m": sol.x_star,
        "powers_w": list(sol.powers),
        "total_power_w": sol.objective,
        "saving_w": saving,
    }

    code = 0
    if args.certify:
        reference = _powermin_oracle(params, layout, rate)
        gap = (sol.objective - reference) / reference
        ok = gap <= CERT_REL
        human.append(_certify_line("grid", gap, CERT_REL, ok))
        report["certify"] = {"oracle_w": reference, "gap_rel": gap, "pass": ok}
        if not ok:
            code = 4
    _emit(args, report, human)
    if code:
        raise CertificationError("power-min objective exceeded the grid oracle")
    return 0


def cmd_outage(args: argparse.Namespace) -> int:
    merged = _collect_mapping(args)
    params = experiments.build_params(merged)
    num_users = int(merged["users"])
    rate = bpcu_to_nats(float(merged["rate_bpcu"]))
    budget = dbm_to_watt(float(merged["power_dbm"]))
    trials = int(merged["trials"])
    seed = int(merged["seed"])

    estimate = outage.monte_carlo_outage(params, num_users, rate, budget, trials, seed)
    human = [
        f"solver: outage ({num_users} users, target = {float(merged['rate_bpcu']):.4f} BPCU, "
        f"budget = {float(merged['power_dbm']):.2f} dBm)",
        f"monte carlo: p = {estimate.probability:.6f} +- {estimate.stderr:.6f} ({trials} trials)",
        f"outage rate = {nats_to_bpcu(outage.outage_rate(estimate.probability, rate)):.6f} BPCU",
    ]
    report = {
        "solver": "outage",
        "mc_probability": estimate.probability,
        "mc_stderr": estimate.stderr,
        "trials": trials,
    }

    code = 0
    analytic = None
    if num_users == 2:
        analytic = outage.closed_form_outage(params, 2, rate, budget)
        human.insert(1, f"closed form: p = {analytic:.6f}")
        report["closed_form_probability"] = analytic
    if args.certify:
        if analytic is None:
            raise ConfigError("--certify for outage requires users = 2 (closed form)")
        sigma = math.sqrt(analytic * (1.0 - analytic) / trials)
        gap = estimate.probability - analytic
        ok = abs(gap) <= 3.0 * sigma + 1e-12
        human.append(_certify_line("monte-carlo 3-sigma", gap, 3.0 * sigma + 1e-12, ok))
        report["certify"] = {"gap": gap, "three_sigma": 3.0 * sigma, "pass": ok}
        if not ok:
            code = 4
    _emit(args, report, human)
    if code:
        raise CertificationError("closed-form outage disagreed with Monte Carlo")
    return 0


def cmd_greedy(args: argparse.Namespace) -> int:
    merged = _collect_mapping(args)
    params = experiments.build_params(merged)
    layout = read_layout(args.instance)
    total_w = dbm_to_watt(float(merged["power_dbm"]))
    rate = bpcu_to_nats(float(merged["rate_bpcu"]))
    grid = oracle.certification_grid(-params.half_length, params.half_length)

    search = oma_greedy.best_placement_search(params, layout, total_w, rate, grid)
    fast = oma_greedy.best_placement_high_snr(params, layout, total_w, rate)
    split = oma_greedy.split_power(params, layout, total_w, rate, search.x_star)
    rel_gap = (search.objective - fast.solution.objective) / abs(search.objective)

    human = [
        f"solver: greedy (P = {float(merged['power_dbm']):.2f} dBm, "
        f"floor = {float(merged['rate_bpcu']):.4f} BPCU)",
        f"search:   x* = {search.x_star:.9g} m, throughput = "
        f"{nats_to_bpcu(search.objective):.6f} BPCU, case = {split.case}",
        f"fast:     x* = {fast.winner:.9g} m, throughput = "
        f"{nats_to_bpcu(fast.solution.objective):.6f} BPCU, case = {fast.allocation_case}",
        f"stationary points: {[f'{r:.6g}' for r in fast.roots]}",
        f"search-vs-fast gap = {rel_gap:.3e} rel",
    ]
    report = {
        "solver": "greedy",
        "search": {
            "x_star_m": search.x_star,
            "powers_w": list(search.powers),
            "throughput_bpcu": nats_to_bpcu(search.objective),
            "case": split.case,
        },
        "fast": {
            "x_star_m": fast.winner,
            "powers_w": list(fast.solution.powers),
            "throughput_bpcu": nats_to_bpcu(fast.solution.objective),
            "case": fast.allocation_case,
            "roots_m": list(fast.roots),
        },
        "gap_rel": rel_gap,
    }

    code = 0
    if args.certify:
        sweep_best = _split_sweep_value(params, layout, total_w, rate, search.x_star)
        split_gap = sweep_best - search.objective
        split_ok = split_gap <= CERT_SPLIT_NATS
        # the fast route evaluates a subset of candidate positions, so it can
        # never legitimately beat the search
        order_ok = fast.solution.objective <= search.objective + CERT_SPLIT_NATS
        human.append(_certify_line("power-sweep", split_gap, CERT_SPLIT_NATS, split_ok))
        human.append(
            f"certify fast<=search: {'PASS' if order_ok else 'FAIL'}"
        )
        report["certify"] = {
            "sweep_gap_nats": split_gap,
            "fast_below_search": order_ok,
            "pass": split_ok and order_ok,
        }
        if not (split_ok and order_ok):
            code = 4
    _emit(args, report, human)
    if code:
        raise CertificationError("greedy allocation failed its brute-force check")
    return 0


def cmd_noma(args: argparse.Namespace) -> int:
    merged = _collect_mapping(args)
    params = experiments.build_params(merged)
    layout = read_layout(args.instance)
    rate = bpcu_to_nats(float(merged["rate_bpcu"]))

    ordered, perm = noma.order_by_waveguide_distance(layout)
    sol = noma.solve_min_power(params, ordered, rate)
    checks = noma.check_solution(params, ordered, sol)

    human = [
        f"solver: noma (target = {float(merged['rate_bpcu']):.4f} BPCU = {rate:.6f} nats)",
        f"user order by |y|: {[p + 1 for p in perm]} (sic_user = {sol.sic_user} of the ordered pair)",
        f"placement x* = {sol.x_star:.9g} m",
        _power_line("  P_strong", sol.powers[0]),
        _power_line("  P_weak", sol.powers[1]),
        _power_line("total", sol.total),
        f"rates = ({nats_to_bpcu(sol.rates.strong):.6f}, {nats_to_bpcu(sol.rates.weak):.6f}, "
        f"{nats_to_bpcu(sol.rates.sic):.6f}) BPCU (strong, weak, sic)",
        f"assumptions ok: {checks.all_ok} (margin {checks.sic_distance_margin:.6g} m^2)",
        f"closed form certified optimal: {sol.certified_optimal}",
    ]
    report = {
        "solver": "noma",
        "order": [p + 1 for p in perm],
        "sic_user": sol.sic_user,
        "x_star_m": sol.x_star,
        "powers_w": list(sol.powers),
        "total_power_w": sol.total,
        "rates_bpcu": [nats_to_bpcu(r) for r in sol.rates],
        "assumptions_ok": checks.all_ok,
        "certified_optimal": sol.certified_optimal,
    }

    code = 0
    if args.certify:
        grid = oracle.certification_grid(-params.half_length, params.half_length)
        search = noma.solve_min_power_search(params, ordered, rate, grid)
        gap = (sol.total - search.total) / search.total
        ok = abs(gap) <= CERT_NOMA_REL if sol.certified_optimal else True
        label = "search" if sol.certified_optimal else "search (report only, rate < 0.5 nats)"
        human.append(_certify_line(label, gap, CERT_NOMA_REL, ok))
        report["certify"] = {"search_total_w": search.total, "gap_rel": gap, "pass": ok}
        if not ok:
            code = 4
    _emit(args, report, human)
    if code:
        raise CertificationError("NOMA closed form disagreed with the search")
    return 0


def _certify_experiment(cfg: experiments.ExperimentConfig) -> list[str]:
    """Spot-check the first trial of each sweep point against the oracles."""
    lines: list[str] = []
    failures = 0
    families = {name.split("-conv")[0].replace("-highsnr", "") for name in cfg.schemes}
    for sweep_idx, sweep_value in enumerate(cfg.sweep_values):
        internal = experiments._internal_sweep_value(cfg.sweep, sweep_value)
        gen = experiments.rng.stream(cfg.seed, experiments.rng.DOMAIN_LAYOUTS, sweep_idx, 0)
        layout = experiments.sample_layout(cfg.num_users, cfg.params, cfg.clustering, gen)

        def check(name: str, ok: bool, detail: str) -> None:
            nonlocal failures
            lines.append(
                f"certify sweep={sweep_value:g} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
            )
            failures += 0 if ok else 1

        if "oma-maxmin" in families:
            sol = oma_fairness.solve_max_min_rate(cfg.params, layout, internal)
            ref = _maxmin_oracle(cfg.params, layout, internal)
            gap = (sol.objective - ref) / abs(ref)
            check("oma-maxmin", gap >= -CERT_REL, f"gap {gap:.3e}")
        if "oma-powermin" in families:
            sol = oma_fairness.solve_min_total_power(cfg.params, layout, internal)
            ref = _powermin_oracle(cfg.params, layout, internal)
            gap = (sol.objective - ref) / ref
            check("oma-powermin", gap <= CERT_REL, f"gap {gap:.3e}")
        if "oma-greedy" in families:
            rate = bpcu_to_nats(cfg.rate_bpcu)
            try:
                sol = oma_greedy.best_placement_search(cfg.params, layout, internal, rate, cfg.grid)
                sweep_best = _split_sweep_value(cfg.params, layout, internal, rate, sol.x_star)
                gap = sweep_best - sol.objective
                check("oma-greedy", gap <= CERT_SPLIT_NATS, f"gap {gap:.3e} nats")
            except Infeasible:
                check("oma-greedy", True, "infeasible trial skipped")
        if "noma" in families:
            ordered, _ = noma.order_by_waveguide_distance(layout)
            sol = noma.solve_min_power(cfg.params, ordered, internal)
            grid = oracle.certification_grid(-cfg.params.half_length, cfg.params.half_length)
            search = noma.solve_min_power_search(cfg.params, ordered, internal, grid)
            gap = (sol.total - search.total) / search.total
            ok = abs(gap) <= CERT_NOMA_REL if sol.certified_optimal else True
            check("noma", ok, f"gap {gap:.3e}")
        if "outage" in families or "outage-mc" in families:
            rate = bpcu_to_nats(cfg.rate_bpcu)
            analytic = outage.closed_form_outage(cfg.params, 2, rate, internal)
            est = outage.monte_carlo_outage(cfg.params, 2, rate, internal, cfg.trials, cfg.seed)
            sigma = math.sqrt(analytic * (1.0 - analytic) / cfg.trials)
            gap = est.probability - analytic
            check("outage", abs(gap) <= 3.0 * sigma + 1e-12, f"gap {gap:.3e}, 3s {3 * sigma:.3e}")
    if failures:
        raise CertificationError(f"{failures} experiment spot-checks failed")
    return lines


def cmd_experiment(args: argparse.Namespace) -> int:
    merged = _collect_mapping(args)
    cfg = experiments.ExperimentConfig.from_mapping(merged)
    csv_text = experiments.run_experiment(cfg)
    if args.out:
        Path(args.out).write_text(csv_text)
        print(f"wrote {args.out} ({cfg.trials} trials x {len(cfg.sweep_values)} sweep points)")
    else:
        sys.stdout.write(csv_text)
    if args.certify:
        for line in _certify_experiment(cfg):
            print(line)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchplace",
        description=__doc__,
        epilog=_CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--verbose", action="store_true", help="enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, help="64-bit master seed for Monte Carlo paths")
        p.add_argument("--out", help="write the machine-readable report (JSON, or CSV for experiment) here")
        p.add_argument("--certify", action="store_true",
                       help="check the closed form against its brute-force oracle (exit 4 on failure)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one config key (repeatable)")

    p = sub.add_parser("maxmin", help="max-min rate placement for M users")
    p.add_argument("instance", help="instance file, one 'x y' user per line")
    p.add_argument("--power-dbm", dest="power_dbm", type=float, help="total power budget")
    common(p)
    p.set_defaults(handler=cmd_maxmin)

    p = sub.add_parser("powermin", help="total-power-minimizing placement for M users")
    p.add_argument("instance")
    p.add_argument("--rate-bpcu", dest="rate_bpcu", type=float, help="per-user rate target")
    common(p)
    p.set_defaults(handler=cmd_powermin)

    p = sub.add_parser("outage", help="two-user outage probability under a per-user budget")
    p.add_argument("--power-dbm", dest="power_dbm", type=float, help="per-user power budget")
    p.add_argument("--rate-bpcu", dest="rate_bpcu", type=float)
    p.add_argument("--users", type=int)
    p.add_argument("--trials", type=int)
    common(p)
    p.set_defaults(handler=cmd_outage)

    p = sub.add_parser("greedy", help="two-user throughput placement with rate floors")
    p.add_argument("instance")
    p.add_argument("--power-dbm", dest="power_dbm", type=float)
    p.add_argument("--rate-bpcu", dest="rate_bpcu", type=float, help="per-user rate floor")
    common(p)
    p.set_defaults(handler=cmd_greedy)

    p = sub.add_parser("noma", help="two-user superposition power minimization")
    p.add_argument("instance")
    p.add_argument("--rate-bpcu", dest="rate_bpcu", type=float)
    common(p)
    p.set_defaults(handler=cmd_noma)

    p = sub.add_parser("experiment", help="Monte Carlo sweep, CSV output")
    p.add_argument("--trials", type=int)
    p.add_argument("--users", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--clustering", choices=["true", "false"])
    common(p)
    p.set_defaults(handler=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.handler(args)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 4
    except (PinchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
