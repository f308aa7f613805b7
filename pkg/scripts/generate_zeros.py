"""Regenerate src/pntzeta/data/zeros100.txt from Hardy-Z sign changes."""

from pathlib import Path

from pntzeta.zeros import compute_zeros, write_zero_file

OUT = Path(__file__).resolve().parents[1] / "src" / "pntzeta" / "data" / "zeros100.txt"


def main():
    ords = compute_zeros(100)
    write_zero_file(
        OUT,
        ords,
        header="First 100 ordinates of nontrivial zeta zeros (rho = 1/2 + i*gamma).\n"
        "Generated by scripts/generate_zeros.py: Hardy Z scan (step 0.05) and bisection to 1e-12.",
    )
    print(f"wrote {len(ords)} ordinates to {OUT}")


if __name__ == "__main__":
    main()
