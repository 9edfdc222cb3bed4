#!/usr/bin/env python3
"""Sweep total offered rate and compare cell power across serving modes.

For each outdoor array size this runs the three variants (indoor relays with
mmWave access, indoor relays with LiFi access, direct through-wall service),
writes one sweep directory per array size and prints where the direct and
relayed power curves cross.
"""

import argparse
import sys
from pathlib import Path

from b5gcell.cli import main as cli_main
from b5gcell.cli import parse_grid, parse_variants
from b5gcell.config import load_config
from b5gcell.scenario import RATE_VARIABLE, SweepSpec, find_crossing, run_sweep


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out/power_vs_rate",
                        help="output root (default %(default)s)")
    parser.add_argument("--config", default=None)
    parser.add_argument("--grid", default="0:6e9:25", help="rate grid min:max:points")
    parser.add_argument("--mt", default="64,128,256",
                        help="outdoor array sizes to compare (default %(default)s)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    bundle = load_config(args.config)
    sizes = [int(s) for s in args.mt.split(",") if s]
    root = Path(args.out)

    for m_t in sizes:
        run_dir = root / f"mt{m_t}"
        variant_text = ",".join(
            f"{base}:mt={m_t}" for base in ("sep-mmwave", "sep-lifi", "nonsep"))
        cli_args = ["sweep", "--out", str(run_dir), "--grid", args.grid,
                    "--variants", variant_text, "--seed", str(args.seed)]
        if args.config:
            cli_args += ["--config", args.config]
        code = cli_main(cli_args)
        if code not in (0, 2):
            return code

        spec = SweepSpec(variable=RATE_VARIABLE, grid=parse_grid(args.grid),
                         variants=parse_variants(variant_text, bundle.scenario.m_t))
        result = run_sweep(bundle, spec, seed=args.seed)
        for iap in ("mmwave", "lifi"):
            cross = find_crossing(result, f"sep-{iap}:mt={m_t}", f"nonsep:mt={m_t}")
            if cross is None:
                print(f"M_T={m_t}: sep-{iap} and nonsep never cross on this grid")
            else:
                print(f"M_T={m_t}: sep-{iap} becomes cheaper than nonsep at "
                      f"{cross / 1e9:.3f} Gbit/s")
    print(f"sweep directories under {root}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
