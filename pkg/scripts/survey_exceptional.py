#!/usr/bin/env python3
"""Sweep all valid K(n; ell, m) parameters and tabulate the exceptional ones.

For every n up to --max-n, prints the concurrent diagonal triples of the
regular n-gon (when any exist) and the parameter pairs they break, then
cross-checks the closed-form classification against the geometric scan.

Usage:
    python scripts/survey_exceptional.py --max-n 48
"""

import argparse
import time

from karteszi.analyze import concurrent_triples, cross_validate, exceptional_triples, is_exceptional
from karteszi.config import validate_params
from karteszi.ngon import max_class


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=48)
    parser.add_argument("--skip-verify", action="store_true",
                        help="skip the geometric scan cross-check")
    args = parser.parse_args()

    print(f"concurrent diagonal triples and broken parameter pairs, n <= {args.max_n}")
    print("=" * 72)
    for n in range(7, args.max_n + 1):
        triples = sorted((t.r, t.l1, t.l2) for t in concurrent_triples(n))
        if not triples:
            continue
        labels = {t: label for label, _, t in exceptional_triples(n)}
        print(f"n = {n}:")
        for triple in triples:
            r, l1, l2 = triple
            pairs = sorted({frozenset(p) for p in ((l1, l2), (l1, r), (l2, r)) if len(set(p)) == 2})
            pair_text = ", ".join("{%d,%d}" % tuple(sorted(p)) for p in pairs)
            print(f"  triple (r={r}, {l1}, {l2})  [{labels.get(triple, '?')}]  breaks {pair_text}")

    total = sum(
        1
        for n in range(7, args.max_n + 1)
        for ell in range(2, max_class(n))
        for m in range(ell + 1, max_class(n) + 1)
        if is_exceptional(validate_params(n, ell, m)) is not None
    )
    print("=" * 72)
    print(f"{total} exceptional parameter pairs with n <= {args.max_n}")

    if not args.skip_verify:
        t0 = time.time()
        result = cross_validate(args.max_n)
        dt = time.time() - t0
        print(
            f"scan cross-check: {result.cases} cases in {dt:.1f}s, "
            f"{len(result.disagreements)} disagreement(s), "
            f"{len(result.ambiguous)} ambiguous, "
            f"worst clean margin {result.min_clean_margin:.2e}"
        )


if __name__ == "__main__":
    main()
