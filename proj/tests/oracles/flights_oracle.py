#!/usr/bin/env python3
# Copyright 2026 The SubStrat Authors
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

"""Independent brute-force oracle for the flights fixtures.

Recomputes per-column entropies, the exhaustive 5x3 subset minimizer, and the
information-gain ranking with plain Python counting. The printed values are
frozen into tests/core/ and tests/acceptance/.
"""
import csv
import itertools
import math
from collections import Counter
from pathlib import Path

rows = list(csv.reader(open(Path(__file__).parent.parent / "data" / "flights.csv")))
header, body = rows[0], rows[1:]
cols = list(zip(*body))
target = header.index("Satisfied")


def h(values):
    n = len(values)
    return -sum(c / n * math.log2(c / n) for c in Counter(values).values())


def dataset_h(r, c):
    return sum(h([body[i][j] for i in r]) for j in c) / len(c)


full = dataset_h(range(10), range(5))
print("column terms", [round(h(col), 6) for col in cols])
print("H(D)", round(full, 6))
green_r, green_c = (0, 1, 2, 5, 7), (0, 3, 4)
red_r, red_c = (3, 4, 6, 8, 9), (1, 2, 4)
print("green terms", [round(h([body[i][j] for i in green_r]), 6) for j in green_c])
print("H(green)", round(dataset_h(green_r, green_c), 6))
print("H(red)", round(dataset_h(red_r, red_c), 6))

best = None
ties = []
feats = [j for j in range(5) if j != target]
for r in itertools.combinations(range(10), 5):
    for cf in itertools.combinations(feats, 2):
        c = tuple(sorted(cf + (target,)))
        loss = abs(dataset_h(r, c) - full)
        if best is None or loss < best[0] - 1e-12:
            best = (loss, r, c)
            ties = [(r, c)]
        elif abs(loss - best[0]) <= 1e-12:
            ties.append((r, c))
print("brute force best", best, "ties", len(ties))
print("green loss", abs(dataset_h(green_r, green_c) - full))


def cond_h(feature):
    n = len(body)
    total = 0.0
    for v, cnt in Counter(feature).items():
        ys = [body[i][target] for i in range(n) if feature[i] == v]
        total += cnt / n * h(ys)
    return total


ht = h(cols[target])
igs = [(j, ht - cond_h(cols[j])) for j in feats]
print("IG", [(header[j], round(g, 6)) for j, g in igs])
print("IG rank", [j for j, _ in sorted(igs, key=lambda t: (-t[1], t[0]))])
