"""Count how often each property holds on random instances and check the implications."""

import argparse
from collections import Counter

from relcoobs.context import LanguagePair
from relcoobs.oracle import InstanceSpec, random_instance
from relcoobs.verify import check_conj_coobservable, check_conormal, check_disj_coobservable, check_rel_coobservable


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--max-states", type=int, default=6)
    ap.add_argument("--max-events", type=int, default=5)
    ap.add_argument("--agents", type=int, default=2)
    args = ap.parse_args()

    profiles = Counter()
    violations = []
    for seed in range(args.n):
        ctx, pair = random_instance(InstanceSpec(args.max_states, args.max_events, args.agents, seed=seed))
        k = pair.spec
        row = (
            check_conormal(k, ctx).holds,
            check_rel_coobservable(LanguagePair(k), ctx).holds,
            check_conj_coobservable(k, ctx).holds,
            check_disj_coobservable(k, ctx).holds,
        )
        profiles[row] += 1
        cn, rc, cj, dj = row
        if (cn and not rc) or (rc and not (cj and dj)):
            violations.append(seed)
    print("conormal relcoobs conj disj  count")
    for row, count in sorted(profiles.items(), reverse=True):
        print("  ".join(f"{str(v):<8}" for v in row), count)
    print(f"implication violations: {violations or 'none'}")


if __name__ == "__main__":
    main()
