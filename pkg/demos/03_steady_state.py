"""The analytic steady state and three ways of computing it."""
import numpy as np

from trustnet.dynamics import GammaSchedule
from trustnet.steady import (SteadyStateParams, asymptote_ratio, integrate_density_odes,
                             power_law_asymptote, steady_state_closed_form, steady_state_recurrence)

p = SteadyStateParams(alpha=0.1, schedule=GammaSchedule.constant(1.0))
print(f"c = {p.c:.4f}, power-law exponent 1 + 1/c = {p.exponent:.4f}")

n = np.array([1, 2, 5, 10, 100, 1000, 10000])
rec = steady_state_recurrence(p, 10_000).values[n - 1]
closed = steady_state_closed_form(p, n)
asym = power_law_asymptote(p, n)
print("      n   recurrence  Beta form   n^-(1+1/c) law")
for row in zip(n, rec, closed, asym):
    print("%7d  %10.3e  %10.3e  %10.3e" % row)

# the pure power law leaves out the constant Gamma(1 + 1/c)
ratio, limit = asymptote_ratio(p, [10, 100, 1000, 10000])
print("Beta form / power law:", np.round(ratio, 4), "->", round(limit, 4))

# the continuous-time equations settle on the same numbers
traj = integrate_density_odes(p, 1e4, 12, t_eval=[10, 100, 1e4])
print("\nODE v_l(t)/t for l = 1..5:")
for t, row in zip(traj.t, traj.v_over_t):
    print(f"  t = {t:>7.0f}: " + " ".join(f"{x:.5f}" for x in row[:5]))
print("  steady:      " + " ".join(f"{x:.5f}" for x in steady_state_recurrence(p, 5).values))

# if honesty never approaches certainty the product G vanishes and the tail is exponential
q = SteadyStateParams(alpha=0.1, schedule=GammaSchedule.constant(0.9))
print("\nconstant 0.9 honesty, densities at n = 10, 20, 40:",
      steady_state_closed_form(q, np.array([10, 20, 40])))
