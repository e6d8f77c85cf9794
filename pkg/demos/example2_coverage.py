"""
Coverage for Bernoulli trials: fixed count versus stopping rule
===============================================================

A binomial experiment (40 trials, count the outcomes) and a negative
binomial one (sample until 2 outcomes) share a likelihood shape but not
their Fisher information, so their Jeffreys priors differ. Using the
prior of the *other* design, or of just one design when both data sets
are pooled, degrades coverage; the prior of the combined information
does not.

Pass trials per parameter value on the command line (default 200).
"""

import sys

import numpy as np

from revupdate import BinomialModel, NegativeBinomialModel, ParameterGrid, analytic_fisher, compare_reports
from revupdate import run_coverage
from revupdate.presets import example2_configs

trials_each = int(sys.argv[1]) if len(sys.argv) > 1 else 200

# The two information curves and their sum
grid = ParameterGrid(0.01, 0.11, 6)
h_bin = analytic_fisher(BinomialModel(40), grid).values
h_nb = analytic_fisher(NegativeBinomialModel(2), grid).values
print("theta    binomial   neg.binomial   combined")
for t, a, b in zip(grid.points, h_bin, h_nb):
    print(f"{t:5.3f} {a:10.1f} {b:14.1f} {a + b:10.1f}")
print("ratio of the two priors sqrt(h_bin/h_nb) = sqrt(n theta / r):",
      np.round(np.sqrt(h_bin / h_nb), 3))

# 100 true values on [0.01, 0.11], trials_each simulations at each
for name, configs in example2_configs(trials_each=trials_each).items():
    reports = [run_coverage(c) for c in configs.values()]
    print(f"\n{name} ({reports[0].num_trials} trials per curve)")
    for e in compare_reports(reports):
        print(f"  {e.rank}. {e.label:44s} mad {e.mean_abs_deviation:.4f}  "
              f"below 5% {100 * e.tail_below_5:5.2f}%  above 95% {100 * e.tail_above_95:5.2f}%")
