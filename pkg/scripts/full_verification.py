"""Run every suite over n = 3..7 and every kind; write one JSON report.

    python3 scripts/full_verification.py --trials 100 --out full_report.json
"""
import argparse
import json
import sys
import time

from dhga.spinor_ideal import all_specs
from dhga.suites import KIND_FREE, SUITES, SuiteConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5, 6, 7])
    ap.add_argument("--out", default="full_report.json")
    args = ap.parse_args()

    reports, failed = [], False
    for suite in SUITES:
        if suite in KIND_FREE:
            configs = [SuiteConfig(suite, n, trials=args.trials, seed=args.seed) for n in args.n]
        else:
            parity = "both" if suite == "spsi-soundness" else "even"
            configs = [SuiteConfig(suite, s.n, kind=s.kind, trials=args.trials, seed=args.seed, parity=parity)
                       for s in all_specs(args.n)]
            if suite == "spinor-invariance":
                configs += [SuiteConfig(suite, n, trials=args.trials, seed=args.seed, parity="odd")
                            for n in args.n if n % 2]
        for cfg in configs:
            start = time.perf_counter()
            rep = run_suite(cfg)
            data = rep.to_json()
            data["parity"] = cfg.parity
            data["seconds"] = round(time.perf_counter() - start, 3)
            reports.append(data)
            failed |= rep.status == "fail"
            c = rep.counts
            print(f"{suite:18} n={cfg.n} {rep.kind or '-':13} {cfg.parity:5} {rep.status.upper():4} "
                  f"pass {c['pass']:4} fail {c['fail']:4} n/a {c['not_applicable']:4}  {data['seconds']}s")
    with open(args.out, "w") as fh:
        json.dump(reports, fh, indent=2)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
