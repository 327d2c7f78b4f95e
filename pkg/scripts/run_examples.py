"""Minmax, synthesis and exact verification for every bundled game."""
import argparse
import time
from fractions import Fraction

from blackwell import library
from blackwell.chain import exact_payoffs
from blackwell.deviation import verify_equilibrium
from blackwell.equilibrium import synthesize_equilibrium
from blackwell.errors import InfeasibleError
from blackwell.values import all_minmax


def fmt(xs):
    return "(" + ", ".join(str(x) for x in xs) + ")"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epsilon", default="1/10")
    parser.add_argument("--games", nargs="*", default=sorted(library.GAMES))
    args = parser.parse_args()
    eps = Fraction(args.epsilon)

    print(f"{'game':<26} {'minmax':<22} {'payoffs':<18} {'max gain':<10} {'verify@2eps':<11} time")
    for name in args.games:
        spec = library.GAMES[name]()
        start = time.perf_counter()
        certs = all_minmax(spec)
        mm = fmt(c.value_lo if c.exact else f"[{c.value_lo},{c.value_hi}]" for c in certs)
        try:
            art = synthesize_equilibrium(spec, eps)
        except InfeasibleError as e:
            print(f"{name:<26} {mm:<22} infeasible: {e}")
            continue
        rep = verify_equilibrium(spec, art, 2 * eps)
        pay = fmt(exact_payoffs(spec, art.automaton))
        status = "pass" if rep.passed else "FAIL"
        print(f"{name:<26} {mm:<22} {pay:<18} {str(rep.max_gain):<10} {status:<11} {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
