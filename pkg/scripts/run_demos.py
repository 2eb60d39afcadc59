#!/usr/bin/env python3
"""Run the torsion and variational-inequality demos and print their reports."""
import argparse
import json

from conegen.demos import run_torsion_demo, run_vi_demo


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=12, help="torsion grid points")
    parser.add_argument("--load", type=float, default=8.0, help="torsion load")
    parser.add_argument("--seed", type=int, default=0, help="VI instance seed")
    args = parser.parse_args()

    torsion = run_torsion_demo(n_grid=args.grid, load=args.load)
    print(json.dumps(torsion.to_dict(), indent=2))
    vi = run_vi_demo(seed=args.seed)
    print(json.dumps(vi.to_dict(), indent=2))


if __name__ == "__main__":
    main()
