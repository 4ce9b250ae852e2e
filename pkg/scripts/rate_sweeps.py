"""Monte-Carlo rate sweeps over receiver mast height, RIS element count, and
maximum transmit power; one CSV per sweep.

The full-scale scenario (N = 360, M = 8) is expensive; --scale quick drops to
N = 64, M = 4 with looser solver knobs and reproduces the same trends.

Usage:
    python scripts/rate_sweeps.py --scale quick --trials 50 --out-dir results
"""

import argparse
import dataclasses
import pathlib
import sys
import time

from marisim.config import ConfigError, ScenarioConfig, load_config
from marisim.harness import emit_results, run_sweep
from marisim.optimizer import OptimizerConfig

SWEEPS = {
    "hr0": dict(values=[2.0, 5.0, 10.0, 20.0, 30.0], sea_states=[4, 5, 6, 7]),
    "n": dict(values=[40, 80, 120, 240], sea_states=[5]),
    "pmax": dict(values=[10.0, 20.0, 50.0, 100.0], sea_states=[2, 5]),
}


def scaled(cfg: ScenarioConfig, scale: str) -> ScenarioConfig:
    if scale == "full":
        return cfg
    return dataclasses.replace(
        cfg,
        radio=dataclasses.replace(cfg.radio, m_antennas=4, n_elements=64),
        optimizer=OptimizerConfig(sdp_tol=1e-4, sdp_max_iter=150,
                                  randomization_draws=40),
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="scenario INI file")
    ap.add_argument("--which", choices=[*SWEEPS, "all"], default="all")
    ap.add_argument("--scale", choices=["quick", "full"], default="quick")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args(argv)

    try:
        cfg = scaled(load_config(args.config) if args.config
                     else ScenarioConfig(), args.scale)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    names = list(SWEEPS) if args.which == "all" else [args.which]
    for name in names:
        spec = SWEEPS[name]
        path = out_dir / f"rates_{name}.csv"
        t0 = time.perf_counter()
        try:
            # the element-count sweep overrides n_elements itself; the others
            # cross their values with the listed sea states
            rows = run_sweep(cfg, name, spec["values"], trials=args.trials,
                             seed=args.seed, sea_states=spec["sea_states"],
                             n_jobs=args.jobs, flush_path=path)
        except (ConfigError, ValueError, RuntimeError) as exc:
            print(f"error in sweep {name!r}: {exc}", file=sys.stderr)
            return 1
        emit_results(rows, path, "csv")
        print(f"{name}: {len(rows)} cells x {args.trials} trials "
              f"-> {path} ({time.perf_counter() - t0:.0f} s)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
