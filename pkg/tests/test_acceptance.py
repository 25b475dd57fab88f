"""Acceptance criteria A1-A8, each printing one PASS/FAIL line."""
import filecmp
import math
import os
import time

import numpy as np
import pytest

from trustnet.cli import main
from trustnet.dynamics import GammaSchedule
from trustnet.experiments import steady_state_experiment
from trustnet.graph import CompletionParams, edge_multiset_equal, path_complete
from trustnet.robustness import attack_experiment, degree_sequence_from_histogram
from trustnet.dynamics import RatingHistogram
from trustnet.spectral import decompose, personalized_matrix
from trustnet.steady import (SteadyStateParams, asymptote_ratio, log_closed_form, sample_ratings,
                             steady_state_closed_form, steady_state_recurrence)
from trustnet.tail import fit_tail

from conftest import as_edges, brute_force_paths, random_endorsement_network, small_network


def verdict(report, tag, ok, detail):
    report(f"{tag} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


def random_params(rng):
    alpha = float(rng.uniform(0.01, 0.9))
    bot = float(rng.uniform(0.05, 1.0))
    kind = rng.integers(3)
    if kind == 0:
        sched = GammaSchedule.constant(float(rng.uniform(0.5, 1.0)), bot)
    elif kind == 1:
        sched = GammaSchedule.geometric(float(rng.uniform(0.05, 0.99)), float(rng.uniform(0.05, 0.999)), bot)
    else:
        sched = GammaSchedule.sleeper(int(rng.integers(1, 200)), bot)
    return SteadyStateParams(alpha, sched)


def test_a1_closed_form_matches_recurrence(report):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    n = np.arange(1, 10_001)
    worst = 0.0
    for _ in range(100):
        p = random_params(rng)
        a = steady_state_recurrence(p, 10_000).log_values
        b = log_closed_form(p, n)
        assert np.array_equal(np.isneginf(a), np.isneginf(b))
        live = np.isfinite(a)
        worst = max(worst, float(np.max(np.abs(np.expm1(a[live] - b[live])))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10
    assert verdict(report, "A1", ok, f"max relative error {worst:.2e} (<= 1e-9), {elapsed:.2f} s (< 10 s)")


def test_a2_asymptote_exponent(report):
    start = time.perf_counter()
    p = SteadyStateParams(0.1, GammaSchedule.constant(1.0))
    lo, hi = steady_state_closed_form(p, np.array([1000, 10_000]))
    slope = math.log(hi / lo) / math.log(10)
    ratio, limit = asymptote_ratio(p, [100, 1000, 10_000])
    gaps = np.abs(ratio - limit)
    elapsed = time.perf_counter() - start
    ok = abs(slope + p.exponent) <= 0.01 and bool(np.all(np.diff(gaps) < 0)) and elapsed < 1
    assert verdict(report, "A2", ok,
                   f"slope {slope:.5f} vs -{p.exponent:.5f}; closed/asymptote ratio "
                   f"{', '.join(f'{r:.5f}' for r in ratio)} -> Gamma(1+1/c) = {limit:.5f}; {elapsed:.3f} s")


@pytest.fixture(scope="module")
def a3_run():
    start = time.perf_counter()
    report, _ = steady_state_experiment(alpha=0.1, schedule=GammaSchedule.constant(1.0), J=2000,
                                   steps=2_000_000, seeds=range(10), x_min=5)
    return report, time.perf_counter() - start


def test_a3_simulation_matches_steady_state(report, a3_run):
    rep, elapsed = a3_run
    d = rep["density"]
    worst = max(d["relative_error"])
    ok = rep["exponent_ok"] and rep["density_ok"] and elapsed < 300
    assert verdict(report, "A3", ok,
                   f"mean fitted exponent {rep['mean_exponent']:.4f} vs {rep['predicted_exponent']:.4f} "
                   f"(|diff| {rep['exponent_error']:.4f}, tol 0.25); worst density error ratings 2-8 "
                   f"{worst:.1%} (tol 20%); {elapsed:.1f} s")


def test_a4_exponential_trimming(report):
    start = time.perf_counter()
    rep, _ = steady_state_experiment(alpha=0.1, schedule=GammaSchedule.constant(0.9), J=2000,
                                steps=2_000_000, seeds=range(10), x_min=5)
    elapsed = time.perf_counter() - start
    models = rep["preferred_models"]
    ok = models.count("geometric") == 10
    assert verdict(report, "A4", ok, f"geometric preferred on {models.count('geometric')}/10 seeds; "
                                     f"{elapsed:.1f} s")


def test_a5_completion_laws(report):
    start = time.perf_counter()
    rng = np.random.default_rng(2009)
    idem = brute = witness = 0
    for k in range(200):
        net = random_endorsement_network(rng)
        p = CompletionParams(eta=float(rng.uniform(0.1, 0.6)), epsilon=float(rng.uniform(0.2, 1.0)))
        once = path_complete(net, p)
        idem += edge_multiset_equal(once.endorsements, path_complete(once, p).endorsements, atol=1e-12)
        witness += not all(e.rating >= p.eta for e in net.endorsements)
    small_rng = np.random.default_rng(6)
    for k in range(200):
        net = small_network(small_rng)
        p = CompletionParams(eta=float(small_rng.uniform(0.05, 0.6)),
                             epsilon=float(small_rng.uniform(0.2, 1.0)))
        want = as_edges(brute_force_paths(net, p.epsilon, p.eta, p.max_path_len))
        brute += edge_multiset_equal(path_complete(net, p).endorsements, want, atol=1e-12)
    elapsed = time.perf_counter() - start
    ok = idem == 200 and brute == 200 and witness > 0 and elapsed < 30
    assert verdict(report, "A5", ok, f"idempotent on {idem}/200, brute-force match on {brute}/200 "
                                     f"(<= 6 nodes), {witness} networks witness E not in E#; {elapsed:.1f} s")


def _invariant_error(A, d):
    J = A.shape[1]
    errs = [np.abs(sum(d.projectors, d.kernel_projector) - np.eye(J)).max()]
    for k, P in enumerate(d.projectors):
        errs += [np.abs(P @ P - P).max(), np.abs(P - P.T).max()]
        errs += [np.abs(P @ Q).max() for Q in d.projectors[k + 1:]]
    recon = np.linalg.norm(d.reconstruct() - A) / max(np.linalg.norm(A), 1e-300)
    return max(errs), recon


def test_a6_spectral_suite(report):
    start = time.perf_counter()
    rng = np.random.default_rng(66)
    worst_alg = worst_rec = worst_leak = worst_id = 0.0
    for _ in range(100):
        U, J = int(rng.integers(1, 21)), int(rng.integers(1, 16))
        A = rng.uniform(0, 3, size=(U, J)) * (rng.random((U, J)) < 0.7)
        d = decompose(A)
        alg, rec = _invariant_error(A, d)
        worst_alg, worst_rec = max(worst_alg, alg), max(worst_rec, rec)
        if d.m:
            tau = sum(math.sqrt(d.eigenvalues[k]) * d.bases[k][:, 0] for k in range(d.m))
            err = np.linalg.norm(personalized_matrix(A, tau, d) - A) / np.linalg.norm(A)
            worst_id = max(worst_id, err)
    for _ in range(20):
        a, b = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        A = np.zeros((a + b + 2, a + b))
        A[:a + 1, :a] = rng.uniform(0.5, 2, size=(a + 1, a))
        A[a + 1:, a:] = rng.uniform(0.5, 2, size=(b + 1, b))
        for P in decompose(A).projectors:
            first = np.abs(P[:a, :a]).max()
            second = np.abs(P[a:, a:]).max()
            worst_leak = max(worst_leak, min(first, second), np.abs(P[:a, a:]).max())
    elapsed = time.perf_counter() - start
    ok = max(worst_alg, worst_rec, worst_leak, worst_id) < 1e-8 and elapsed < 10
    assert verdict(report, "A6", ok,
                   f"projector algebra {worst_alg:.1e}, reconstruction {worst_rec:.1e}, block leakage "
                   f"{worst_leak:.1e}, A_tau = A {worst_id:.1e} (all < 1e-8); {elapsed:.1f} s")


def test_a7_robustness_dominance(report):
    start = time.perf_counter()
    fractions = (0.01, 0.02, 0.05)
    params = SteadyStateParams(0.1, GammaSchedule.constant(1.0))
    ratings = sample_ratings(params, 10_000, np.random.default_rng(7))
    fitted = fit_tail(ratings, 5).exponent
    hist = RatingHistogram.from_tau(ratings)
    res = attack_experiment(hist, fractions=fractions, seeds=range(20))
    gap = res.mean("random") - res.mean("hubs")
    spread = np.sqrt(res.std("random") ** 2 + res.std("hubs") ** 2)
    dominant = bool(np.all(gap >= 3 * spread))

    regular = np.full(10_000, 3)
    ctrl = attack_experiment(regular, fractions=fractions, seeds=range(20))
    cgap = ctrl.mean("random") - ctrl.mean("hubs")
    cse = np.sqrt((ctrl.std("random") ** 2 + ctrl.std("hubs") ** 2) / 20)
    control_flat = bool(np.all(np.abs(cgap) < 3 * cse))
    elapsed = time.perf_counter() - start
    ok = abs(fitted - params.exponent) <= 0.25 and dominant and control_flat and elapsed < 120
    assert verdict(report, "A7", ok,
                   f"degree exponent {fitted:.3f}; random - hubs gap {np.round(gap, 4).tolist()} vs 3 sigma "
                   f"{np.round(3 * spread, 4).tolist()}; regular control |gap|/SE "
                   f"{np.round(np.abs(cgap) / cse, 2).tolist()} (< 3); {elapsed:.1f} s")


NET = "END u v 0.9\nEND v w 0.8\nREC v i 0.5\nREC w j 0.7\nREC u j 0.2\n"
CONFIG = "J = 300\nalpha = 0.1\ngamma_kind = geometric\ngamma_params = 0.9,0.5\nsteps = 50000\nseed = 3\n"


def _run_all(root, shared):
    os.makedirs(root)
    net, cfg = os.path.join(shared, "in.net"), os.path.join(shared, "sim.cfg")
    out = lambda name: os.path.join(root, name)
    runs = [
        ["complete", net, out("done.net"), "--eta", "0.3", "--epsilon", "0.5"],
        ["reduce", net, out("A.csv"), "--eta", "0.3", "--epsilon", "0.5"],
        ["simulate", cfg, out("sim")],
        ["steady", out("st"), "--alpha", "0.1", "--n-max", "500"],
        ["fit", out("sim.csv"), out("fit.json")],
        ["communities", out("A.csv"), out("comm.json"), "--tau", "1,2", "--personalized", out("P.csv")],
        ["attack", out("atk"), "--n", "3000", "--seeds", "3"],
        ["verify", out("ver"), "--J", "300", "--steps", "50000", "--seeds", "2"],
    ]
    codes = [main(r) for r in runs]
    return [r[0] for r in runs], codes


def test_a8_determinism(report, tmp_path):
    shared = str(tmp_path)
    with open(os.path.join(shared, "in.net"), "w") as fh:
        fh.write(NET)
    with open(os.path.join(shared, "sim.cfg"), "w") as fh:
        fh.write(CONFIG)
    verbs, codes_a = _run_all(str(tmp_path / "a"), shared)
    _, codes_b = _run_all(str(tmp_path / "b"), shared)
    files = []
    for dirpath, _, names in os.walk(tmp_path / "a"):
        files += [os.path.relpath(os.path.join(dirpath, n), tmp_path / "a") for n in names]
    same = [f for f in files if filecmp.cmp(tmp_path / "a" / f, tmp_path / "b" / f, shallow=False)]
    ran = all(c in (0, 3) for c in codes_a) and codes_a == codes_b
    ok = ran and len(same) == len(files) and len(files) >= 13
    assert verdict(report, "A8", ok, f"{len(same)}/{len(files)} data files byte-identical across reruns "
                                     f"of {', '.join(verbs)} (exit codes {codes_a})")
