"""Long Kepler runs at fixed step; writes one CSV per method and prints a summary table."""
import argparse
from pathlib import Path

from jacsym.cli import kepler_methods, output_dir
from jacsym.integrator import integrate, kepler


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--h", type=float, default=0.1)
    parser.add_argument("--steps", type=int, default=10_000)
    parser.add_argument("--outdir", type=Path)
    args = parser.parse_args()
    outdir = args.outdir or output_dir("results") / "kepler"
    outdir.mkdir(parents=True, exist_ok=True)

    K = kepler()
    print(f"{'method':<22}{'max |H-H0|':>14}{'final error':>14}")
    for name, t in kepler_methods().items():
        traj = integrate(t, K, K.z0, 0.0, args.h, args.steps)
        traj.to_csv(outdir / f"{name}.csv")
        print(f"{name:<22}{traj.energy_error.max():>14.3e}{traj.solution_error[-1]:>14.3e}")
    print(f"CSV files in {outdir}")


if __name__ == "__main__":
    main()
