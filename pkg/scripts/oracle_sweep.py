"""Compare Algorithm 1 with the subautomaton oracle and record per-pass size growth."""

import argparse
import time

from relcoobs.automata import includes
from relcoobs.errors import BudgetExceeded
from relcoobs.oracle import InstanceSpec, oracle_sup_lower_bound, random_instance
from relcoobs.synthesize import algorithm1_sup_rel_coobs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--budget", type=int, default=12)
    args = ap.parse_args()

    t0 = time.perf_counter()
    checked = skipped = equal = 0
    growth, failures = [], []
    for seed in range(args.n):
        ctx, pair = random_instance(InstanceSpec(seed=seed))
        rep = algorithm1_sup_rel_coobs(pair.spec, pair.ambient, ctx, recheck=False)
        sizes = [r.size for r in rep.iterations]
        if any(b > a for a, b in zip(sizes, sizes[1:])):
            growth.append((seed, sizes))
        try:
            lower = oracle_sup_lower_bound(pair.spec, pair.ambient, ctx, budget=args.budget)
        except BudgetExceeded:
            skipped += 1
            continue
        checked += 1
        if not includes(rep.result, lower):
            failures.append(seed)
        equal += includes(lower, rep.result).holds
    print(f"{checked} instances checked against the oracle, {skipped} over budget, "
          f"{equal} equal to the oracle bound, containment failures: {failures or 'none'}")
    print(f"per-pass size growth on {len(growth)} instances")
    for seed, sizes in growth[:10]:
        print(f"  seed {seed}: {sizes}")
    print(f"{time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
