"""Empirical probability of winning in every block of the closed block
approximation, against each pure opponent plan and the stage punishment."""
import argparse
from fractions import Fraction

from blackwell import library
from blackwell.model import MixedProfile
from blackwell.montecarlo import block_win_probability
from blackwell.values import blackwell_minmax, closed_block_approximation


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epsilons", nargs="*", default=["1/2", "1/4", "1/10"])
    parser.add_argument("--blocks", type=int, default=5)
    parser.add_argument("--reps", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=12345)
    args = parser.parse_args()

    spec = library.pennies_infinitely_often_game()
    i = 0
    opponents = {a: MixedProfile.pure({1: a}) for a in spec.actions[1]}
    opponents["stage punishment"] = blackwell_minmax(spec, i).punishment
    for raw in args.epsilons:
        eps = Fraction(raw)
        sched = closed_block_approximation(spec, i, eps, blocks=args.blocks)
        lengths = [sched.block_length(n) for n in range(args.blocks)]
        print(f"epsilon={eps}  d={sched.d}  block lengths={lengths}  cuts={list(sched.cuts)}")
        for label, pun in opponents.items():
            p, se = block_win_probability(spec, sched, sched.response, pun, args.blocks, args.reps, args.seed)
            ok = p >= 1 - float(eps) - 3 * se
            print(f"  vs {label:<17} P(win every block) = {p:.4f} +- {se:.4f}  target {1 - float(eps):.3f}  {'ok' if ok else 'LOW'}")


if __name__ == "__main__":
    main()
