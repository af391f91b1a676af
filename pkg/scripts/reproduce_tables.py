"""Regenerate the Chebyshev III/IV tableaux and print them next to the published values."""
import argparse

from jacsym import reference
from jacsym.cli import generated_tables
from jacsym.tableau import check_symplectic, classical_order


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--digits", type=int, default=14)
    args = parser.parse_args()
    for name, t in generated_tables().items():
        ref = getattr(reference, name)()
        print(f"== {name}  (declared order {t.declared_order}, classical {classical_order(t)})")
        print(t.pretty(args.digits))
        print(f"max deviation from published: {reference.max_deviation(t, ref):.3e}")
        print(f"symplectic residual: {check_symplectic(t):.3e}\n")


if __name__ == "__main__":
    main()
