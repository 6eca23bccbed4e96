#!/usr/bin/env python3
# Copyright 2026 The lprlab Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes data/loans.csv, a synthetic stand-in for the public banking loans table.

The original table is not redistributed here. This surrogate keeps its
schema (loanId, clientId, status) and the client counts the experiments
depend on: 827 distinct clients in [2, 13971], with 73 in [2000, 3000],
12 in [2500, 2599], 110 in [3000, 5000], 130 in [5000, 7000] and 142 in
[10000, 12000]. Identifiers 2600, 3000, 5000 and 7000 are left out so the
inclusive and half-open window conventions agree. Statuses A-D are drawn
with fixed proportions. Output is a pure function of the seed.
"""

import argparse
import csv
import random
import sys

TOTAL = 827
LOW, HIGH = 2, 13971
EXCLUDED = {2600, 3000, 5000, 7000}
# (first id, last id, how many distinct clients) beyond the [2000, 3000] block
QUOTAS = [(3001, 4999, 110), (5001, 6999, 130), (10000, 12000, 142)]
STATUSES = [("A", 0.30), ("B", 0.05), ("C", 0.55), ("D", 0.10)]


def pick(rng, lo, hi, k, taken, forbidden):
    pool = [i for i in range(lo, hi + 1) if i not in taken and i not in forbidden]
    return rng.sample(pool, k)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=20180823)
    ap.add_argument("--out", default="data/loans.csv")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    taken = set()
    window = set(range(2500, 2601))
    taken.update(pick(rng, 2500, 2599, 12, taken, EXCLUDED))
    taken.update(pick(rng, 2000, 3000, 61, taken, EXCLUDED | window))
    for lo, hi, k in QUOTAS:
        taken.update(pick(rng, lo, hi, k, taken, EXCLUDED))
    reserved = set(range(2000, 3001)) | set(range(3000, 7001)) | set(range(10000, 12001))
    taken.update({LOW, HIGH})
    taken.update(pick(rng, LOW, HIGH, TOTAL - len(taken), taken, reserved | EXCLUDED))

    labels = [s for s, _ in STATUSES]
    weights = [w for _, w in STATUSES]
    rows = []
    for loan_id, client in enumerate(sorted(taken), start=4959):
        rows.append((loan_id, client, rng.choices(labels, weights)[0]))

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["loanId", "clientId", "status"])
        w.writerows(rows)

    def count(lo, hi):
        return sum(1 for c in taken if lo <= c <= hi)

    checks = {(2000, 3000): 73, (2500, 2600): 12, (3000, 5000): 110,
              (5000, 7000): 130, (10000, 12000): 142}
    for (lo, hi), want in checks.items():
        if count(lo, hi) != want:
            sys.exit(f"quota mismatch in [{lo},{hi}]: {count(lo, hi)} != {want}")
    if len(taken) != TOTAL:
        sys.exit(f"expected {TOTAL} clients, got {len(taken)}")


if __name__ == "__main__":
    main()
