"""Run every paper-fig scenario plus a noiseless K sweep and print a summary table."""

import argparse
from dataclasses import replace
from pathlib import Path

from prolate_superres.experiment import load_scenario, run_scenario, sweep

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output-dir", default="runs")
    ap.add_argument("--trials", type=int, default=None, help="override trial count of noisy scenarios")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    out = Path(args.output_dir)
    print(f"{'scenario':<12} {'trials':>6} {'median':>7} {'q25':>6} {'q75':>6} {'noiseless':>9}")
    for path in sorted(SCENARIOS.glob("paper-fig*.json")):
        sc = replace(load_scenario(path), output_dir=str(out / path.stem))
        if args.trials and sc.noise.kind != "noiseless":
            sc = replace(sc, trials=args.trials)
        s = run_scenario(sc, threads=args.threads)
        print(f"{path.stem:<12} {sc.trials:>6} {s.median_factor:>7.2f} {s.q25_factor:>6.2f} "
              f"{s.q75_factor:>6.2f} {s.noiseless_factor:>9.2f}")

    base = replace(load_scenario(SCENARIOS / "paper-fig3.json"), output_dir=str(out / "k-sweep"))
    print("\nnoiseless factor vs K")
    for row in sweep(base, "K_reconstruct", [2, 4, 6, 7, 8]):
        print(f"  K={row['value']}: {row['median_factor']:.2f}")


if __name__ == "__main__":
    main()
