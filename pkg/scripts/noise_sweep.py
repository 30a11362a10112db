"""Median superresolution factor against photon number, coherent and squeezed."""

import argparse
from dataclasses import replace
from pathlib import Path

import numpy as np

from prolate_superres.experiment import load_scenario, sweep

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output-dir", default="runs/noise-sweep")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--photons", type=float, nargs="+", default=[1e10, 1e11, 1e12, 1e13, 1e14, 1e15])
    args = ap.parse_args()

    table = {}
    for name in ("paper-fig4", "paper-fig6"):
        sc = replace(load_scenario(SCENARIOS / f"{name}.json"), trials=args.trials,
                     output_dir=str(Path(args.output_dir) / name))
        table[sc.noise.kind] = sweep(sc, "mean_photons", args.photons, threads=args.threads)

    print(f"{'photons':>8} {'coherent':>9} {'squeezed':>9}")
    for i, n in enumerate(args.photons):
        print(f"{n:>8.0e} {table['coherent'][i]['median_factor']:>9.2f} "
              f"{table['squeezed'][i]['median_factor']:>9.2f}")
    gain = [s["median_factor"] - c["median_factor"] for c, s in zip(table["coherent"], table["squeezed"])]
    print(f"mean squeezing gain {np.mean(gain):.2f}")


if __name__ == "__main__":
    main()
