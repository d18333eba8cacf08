"""Check the spinor-approach identity for odd spin elements in every odd n.

The odd case is run well beyond the acceptance sample size, and with both
lifted elements and raw integer versors.

    python3 scripts/odd_spin_sweep.py --trials 200
"""
import argparse
import random
import sys

from dhga import sampling as smp
from dhga.dh_operator import verify_spinor_invariance
from dhga.lorentz import classify_spin
from dhga.spinor_ideal import IdempotentSpec, build_idempotent
from dhga.suites import random_problem, random_spin


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--versor-max-n", type=int, default=5,
                    help="raw versors expand to many blades; at n=7 a trial can take a minute")
    args = ap.parse_args()
    bad = 0
    for n in (3, 5, 7):
        spec = IdempotentSpec(n, "spinor")
        t = build_idempotent(spec)
        sources = ("lift", "versor") if n <= args.versor_max_n else ("lift",)
        for source in sources:
            fails = 0
            for trial in range(args.trials):
                rng = smp.trial_rng(args.seed, trial, f"odd-{source}")
                if source == "lift":
                    S = random_spin(rng, n, 1)
                else:
                    S = classify_spin(smp.versor(rng, n, parity=1, max_len=3), allow_scale=True)
                if not verify_spinor_invariance(random_problem(rng, spec, t), S).passed:
                    fails += 1
            bad += fails
            print(f"n={n} odd S from {source:6}: {args.trials - fails}/{args.trials} exact", flush=True)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
