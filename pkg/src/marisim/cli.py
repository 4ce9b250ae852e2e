"""Command-line front end: sweeps, LoS-probability and path-loss tables, and
a built-in invariant suite.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import channel, energy, estimation, harness, optimizer, ris_system
from .config import ConfigError, ScenarioConfig, load_config
from .sea_surface import sea_state


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the CLI contract reserves
    # 2 for numerical failures, so route usage problems through ConfigError
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="marisim",
                     description="RIS-assisted maritime IoT uplink simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="Monte-Carlo sweep over one variable")
    sweep.add_argument("--config", help="scenario INI file")
    sweep.add_argument("--var", required=True, choices=["hr0", "n", "pmax", "sea"])
    sweep.add_argument("--values", required=True,
                       help="comma-separated sweep values")
    sweep.add_argument("--trials", type=int, default=100)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--out", default=None, help="output path (default stdout)")
    sweep.add_argument("--format", choices=["csv", "structured"], default="csv")
    sweep.add_argument("--jobs", type=int, default=1,
                       help="worker processes (results identical for any value)")

    los = sub.add_parser("los-prob", help="LoS probability vs receiver height")
    los.add_argument("--config", help="scenario INI file")
    los.add_argument("--states", default="3,4,5,6,7",
                     help="comma-separated sea states")
    los.add_argument("--heights", default="2,5,10,20,30",
                     help="comma-separated receiver mast heights, m")
    los.add_argument("--samples", type=int, default=10_000)
    los.add_argument("--seed", type=int, default=None)
    los.add_argument("--out", default=None)
    los.add_argument("--format", choices=["csv", "structured"], default="csv")

    pl = sub.add_parser("pathloss", help="path loss of each model vs distance")
    pl.add_argument("--config", help="scenario INI file")
    pl.add_argument("--d-min", type=float, default=50.0)
    pl.add_argument("--d-max", type=float, default=2000.0)
    pl.add_argument("--points", type=int, default=391)
    pl.add_argument("--out", default=None)
    pl.add_argument("--format", choices=["csv", "structured"], default="csv")

    val = sub.add_parser("validate", help="run the built-in invariant suite")
    val.add_argument("--config", help="scenario INI file (unused by most checks)")
    return parser


def _parse_values(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(float(part))
        except ValueError as exc:
            raise ConfigError(f"bad sweep value {part!r}") from exc
    if not out:
        raise ConfigError("no sweep values given")
    return out


def _write_output(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc


def _cmd_sweep(cfg: ScenarioConfig, args) -> int:
    values = _parse_values(args.values)
    if args.seed is not None and args.seed < 0:
        raise ConfigError("seed must be non-negative")
    rows = harness.run_sweep(cfg, args.var, values, args.trials,
                             seed=args.seed, n_jobs=args.jobs,
                             flush_path=args.out, flush_format=args.format)
    _write_output(harness.format_table(rows, harness.RESULT_COLUMNS,
                                       args.format), args.out)
    return 0


def _cmd_los_prob(cfg: ScenarioConfig, args) -> int:
    states = [int(v) for v in _parse_values(args.states)]
    heights = _parse_values(args.heights)
    if args.samples < 1:
        raise ConfigError("samples must be >= 1")
    rows = harness.los_probability_table(cfg, states, heights,
                                         samples=args.samples, seed=args.seed)
    columns = ("sea_state", "h_r0_m", "los_prob")
    _write_output(harness.format_table(rows, columns, args.format), args.out)
    return 0


def _cmd_pathloss(cfg: ScenarioConfig, args) -> int:
    if args.points < 2 or args.d_max <= args.d_min or args.d_min <= 0:
        raise ConfigError("need d_min > 0, d_max > d_min, points >= 2")
    d_values = np.linspace(args.d_min, args.d_max, args.points)
    rows = harness.pathloss_table(cfg, d_values)
    columns = ("d_m", "los_db", "nlos_db", "free_space_db")
    _write_output(harness.format_table(rows, columns, args.format), args.out)
    return 0


def _random_instance(rng, N, M, I):
    Hd = (rng.standard_normal((M, I)) + 1j * rng.standard_normal((M, I)))
    G = tuple((rng.standard_normal((N, M)) + 1j * rng.standard_normal((N, M)))
              for _ in range(I))
    P_t = rng.uniform(0.5, 2.0, I)
    return ris_system.NetworkSnapshot(H_d=Hd, G=G, P_t=P_t, sigma2=1.0,
                                      beta=1.0)


def _check_estimation_exact():
    rng = np.random.default_rng(0)
    snap = _random_instance(rng, N=6, M=2, I=2)
    pilots = estimation.make_orthogonal_pilots(2, 2, snap.P_t)
    sched = estimation.make_reflection_schedule(6, 6)
    Y0 = estimation.simulate_pilot_rx(snap, sched.q0, pilots, None)
    Y1 = estimation.simulate_pilot_rx(snap, sched.q1, pilots, None)
    Yb = [estimation.simulate_pilot_rx(snap, sched.scheduled_reflection(b),
                                       pilots, None) for b in range(sched.B)]
    Hd_hat = estimation.estimate_direct(Y0, Y1, pilots)
    G_hat = estimation.estimate_cascaded(Yb, pilots, Hd_hat, sched)
    err_h = np.linalg.norm(Hd_hat - snap.H_d) / np.linalg.norm(snap.H_d)
    err_g = max(np.linalg.norm(G_hat[i] - snap.G[i]) / np.linalg.norm(snap.G[i])
                for i in range(2))
    assert err_h < 1e-9 and err_g < 1e-9, f"errors {err_h:.2e}, {err_g:.2e}"


def _check_sdp_hand_instance():
    obj = optimizer.HomogenizedObjective(D=np.array([[1.0, 1.0j],
                                                     [-1.0j, 1.0]]))
    sol = optimizer.solve_sdp(obj, tol=1e-9, max_iter=20000)
    assert abs(sol.objective - 4.0) < 1e-5, f"objective {sol.objective}"
    q = optimizer.randomize(sol, 16, obj, np.random.default_rng(1))
    val = optimizer.reflection_objective(obj, q)
    assert abs(val - 4.0) < 1e-6, f"rounded objective {val}"


def _check_objective_identity():
    rng = np.random.default_rng(2)
    snap = _random_instance(rng, N=5, M=3, I=2)
    obj = optimizer.build_D(snap.H_d, snap.G, snap.P_t)
    q = np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
    direct = sum(snap.P_t[i] * np.sum(np.abs(
        ris_system.combined_channel(snap.direct_row(i), q, snap.G[i])) ** 2)
        for i in range(2))
    val = optimizer.reflection_objective(obj, q)
    assert abs(val - direct) <= 1e-9 * abs(direct), f"{val} vs {direct}"


def _check_energy_chain():
    p = energy.WecParams()
    state = sea_state(4)
    a = state.height_mean / 2.0
    T = state.period_mean
    expected = (p.rho * p.g * p.g * T / (64.0 * math.pi)) * a * a
    got = energy.wave_power_per_meter(a, T, p)
    assert abs(got - expected) <= 1e-12 * expected, f"{got} vs {expected}"
    harvested = energy.harvested_power(a, T, p)
    chain = p.eta_pto * p.eta_conv * p.gamma_cwr * p.W
    assert abs(harvested - chain * expected) <= 1e-12 * harvested
    assert energy.available_tx_power(harvested, p) == min(harvested - p.P_0,
                                                          p.P_max)


def _check_pathloss_ordering():
    p = channel.PathLossParams()
    boundary = channel.two_ray_boundary(2.0, 5.0, p)
    expected = 4.0 * 2.0 * 5.0 * p.f_c / channel.SPEED_OF_LIGHT
    assert abs(boundary - expected) <= 1e-9 * expected
    for d in (100.0, 300.0, 500.0, 1000.0):
        nlos = channel.path_loss_nlos(d, p, 0.0)
        fs = channel.path_loss_free_space(d, p.f_c)
        assert nlos > fs, f"NLoS {nlos} not above free space {fs} at {d} m"


def _tiny_config() -> ScenarioConfig:
    import dataclasses
    cfg = ScenarioConfig(sea_state=5)
    cfg = dataclasses.replace(
        cfg,
        geometry=dataclasses.replace(cfg.geometry, mean_iot_count=2.0),
        radio=dataclasses.replace(cfg.radio, m_antennas=2, n_elements=8),
        optimizer=dataclasses.replace(cfg.optimizer, sdp_tol=1e-4,
                                      sdp_max_iter=200,
                                      randomization_draws=20))
    return cfg


def _check_sweep_determinism():
    cfg = _tiny_config()
    texts = []
    for jobs in (1, 1, 2):
        rows = harness.run_sweep(cfg, "hr0", [5.0], trials=2, seed=7,
                                 n_jobs=jobs)
        texts.append(harness.format_table(rows, harness.RESULT_COLUMNS, "csv"))
    assert texts[0] == texts[1], "repeat run differs"
    assert texts[0] == texts[2], "parallel run differs"


_CHECKS = (
    ("estimation exact recovery", _check_estimation_exact),
    ("SDP hand instance", _check_sdp_hand_instance),
    ("objective identity", _check_objective_identity),
    ("energy chain arithmetic", _check_energy_chain),
    ("path-loss ordering", _check_pathloss_ordering),
    ("sweep determinism", _check_sweep_determinism),
)


def _cmd_validate(cfg: ScenarioConfig, args) -> int:
    failures = 0
    for name, check in _CHECKS:
        try:
            check()
        except AssertionError as exc:
            failures += 1
            print(f"FAIL - {name}: {exc}")
        else:
            print(f"ok - {name}")
    if failures:
        print(f"{failures} of {len(_CHECKS)} checks failed")
        return 2
    print(f"all {len(_CHECKS)} checks passed")
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "los-prob": _cmd_los_prob,
    "pathloss": _cmd_pathloss,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = load_config(args.config) if args.config else ScenarioConfig()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
