"""Break the tensor-approach check down by matrix and by kind.

For each failing member the script also reports whether the rotated pair
meets the second sum, and whether the failure persists for a constant
scalar wave function (it should not: scalars commute with every generator).

    python3 scripts/tensor_family_probe.py --trials 20
"""
import argparse
import random

from gmpy2 import mpq

from dhga.dh_operator import DHProblem, index_sets, verify_tensor_invariance
from dhga.lorentz import rotation
from dhga.polyfield import FieldMV, Potential, parse_poly
from dhga.spinor_ideal import all_specs, build_idempotent
from dhga.suites import random_problem, tensor_family


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for spec in all_specs((3, 4, 5, 6, 7)):
        t = build_idempotent(spec)
        second = index_sets(spec).second
        print(f"n={spec.n} {spec.kind.value} (second sum indices {second})")
        for name, P in tensor_family(spec.n, spec.dprime):
            counts = {"pass": 0, "fail": 0, "not_applicable": 0}
            for trial in range(args.trials):
                rng = random.Random(f"{args.seed}:{trial}:{name}")
                counts[verify_tensor_invariance(random_problem(rng, spec, t), P).status] += 1
            print(f"  {name:28} pass {counts['pass']:3} fail {counts['fail']:3} n/a {counts['not_applicable']:3}")
        for mu in range(2, spec.dprime + 1):
            P = rotation(spec.n, 2 * mu - 1, 2 * mu, mpq(3, 5), mpq(4, 5))
            x = parse_poly(f"x{2 * mu}", spec.n + 1)
            scalar = DHProblem(spec, 0, Potential.zero(spec.n), FieldMV.from_poly(spec.n, 0, x), t)
            mixed = scalar.replace(Psi=FieldMV.from_poly(spec.n, 0b1 | 1 << (2 * mu - 1), x))
            print(f"  witness rotation({2 * mu - 1},{2 * mu}): Psi = x{2 * mu} -> "
                  f"{verify_tensor_invariance(scalar, P).status}; "
                  f"Psi = x{2 * mu} e0{2 * mu - 1} -> {verify_tensor_invariance(mixed, P).status}")


if __name__ == "__main__":
    main()
