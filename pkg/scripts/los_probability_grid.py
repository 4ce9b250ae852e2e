"""LoS probability of the buoy-to-buoy hop over a (sea state, mast height)
grid; writes the table behind the blockage-analysis plots.

Usage:
    python scripts/los_probability_grid.py --out los_grid.csv
"""

import argparse
import sys

from marisim.config import ConfigError, ScenarioConfig, load_config
from marisim.harness import format_table, los_probability_table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="scenario INI file")
    ap.add_argument("--states", default="2,3,4,5,6,7,8")
    ap.add_argument("--heights", default="2,5,10,20,30")
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        states = [int(s) for s in args.states.split(",")]
        heights = [float(h) for h in args.heights.split(",")]
        rows = los_probability_table(cfg, states, heights,
                                     samples=args.samples, seed=args.seed)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = format_table(rows, ("sea_state", "h_r0_m", "los_prob"), "csv")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
