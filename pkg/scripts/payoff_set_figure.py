"""Write the payoff-set figure for a two-player spec (default: the
four-outcome coordination game) and print the hull at each epsilon."""
import argparse
from pathlib import Path

from blackwell.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--spec", type=Path, default=ROOT / "specs" / "four_outcome.json")
    parser.add_argument("--epsilon", default="0.1")
    parser.add_argument("--out", type=Path, default=ROOT / "results" / "payoff_set")
    args = parser.parse_args()
    code = cli_main(["payoff-set", "--spec", str(args.spec), "--epsilon", args.epsilon, "--out", str(args.out)])
    print(f"wrote {args.out / 'payoff_set.svg'}")
    raise SystemExit(code)


if __name__ == "__main__":
    main()
