"""Path loss of the two-ray LoS, statistical NLoS, and free-space models
versus distance, shadowing disabled; prints the regime boundary.

Usage:
    python scripts/pathloss_curves.py --out pathloss.csv
"""

import argparse
import sys

import numpy as np

from marisim.channel import two_ray_boundary
from marisim.config import ConfigError, ScenarioConfig, load_config
from marisim.harness import format_table, pathloss_table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="scenario INI file")
    ap.add_argument("--d-min", type=float, default=50.0)
    ap.add_argument("--d-max", type=float, default=2000.0)
    ap.add_argument("--points", type=int, default=391)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        rows = pathloss_table(cfg, np.linspace(args.d_min, args.d_max,
                                               args.points))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    boundary = two_ray_boundary(cfg.geometry.iot_mast_m,
                                cfg.geometry.rx_mast_m, cfg.radio.pathloss)
    print(f"two-ray regime boundary: {boundary:.1f} m", file=sys.stderr)
    text = format_table(rows, ("d_m", "los_db", "nlos_db", "free_space_db"),
                        "csv")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
