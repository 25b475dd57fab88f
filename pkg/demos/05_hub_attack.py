"""Random failures versus targeted attacks on a trust-shaped network.

Shops become nodes with degree equal to their rating; removing the few
most trusted ones breaks the network apart much faster than removing the
same number at random.
"""
import numpy as np

from trustnet.dynamics import GammaSchedule, RatingHistogram
from trustnet.robustness import attack_experiment
from trustnet.steady import SteadyStateParams, sample_ratings
from trustnet.tail import fit_tail

params = SteadyStateParams(0.1, GammaSchedule.constant(1.0))
ratings = sample_ratings(params, 10_000, np.random.default_rng(0))
print(f"degree tail exponent {fit_tail(ratings).exponent:.2f}, max degree {ratings.max()}, "
      f"median {int(np.median(ratings))}")

fractions = (0.0, 0.01, 0.02, 0.05, 0.1)
res = attack_experiment(RatingHistogram.from_tau(ratings), fractions=fractions, seeds=range(10))
regular = attack_experiment(np.full(10_000, 3), fractions=fractions, seeds=range(10))

print("\nshare of nodes in the largest component")
print("removed   random    hubs    | regular graph: random  hubs")
for k, f in enumerate(fractions):
    print(f"{f:6.0%}   {res.mean('random')[k]:7.3f}  {res.mean('hubs')[k]:7.3f}   |"
          f"               {regular.mean('random')[k]:6.3f}  {regular.mean('hubs')[k]:6.3f}")
