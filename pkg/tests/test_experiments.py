import dataclasses
import math

import numpy as np
import pytest

from helpers import exact_mu3, naive_edge_test, naive_marginal_test
from partition_mac.channel import ChannelParams, JointKernel, apply_noise, or_superpose, status_vector
from partition_mac.codebook import ExperimentConfig, generate
from partition_mac.experiments import (
    InsufficientSamplesError,
    McEstimate,
    SweepSpec,
    coupled_pe_runs,
    estimate_mu3,
    estimate_p3,
    estimate_pe,
    one_sided_increase_pvalue,
    run_sweep,
    run_validate,
    typical_center_counts,
    wilson_interval,
    write_sweep_csv,
)
from partition_mac.rng import ROLE_CODEBOOK, ROLE_NOISE, substream


def _cfg(**kw):
    base = dict(n_users=6, n_rounds=100, design_p=0.5, epsilon=0.1, seed=42)
    base.update(kw)
    return ExperimentConfig(**base)


# ----------------------------------------------------------------- wilson

def test_wilson_interval_brackets_estimate():
    for failures, trials in ((0, 10), (3, 10), (10, 10), (250, 1000)):
        lo, hi = wilson_interval(failures, trials)
        assert 0.0 <= lo <= failures / trials <= hi <= 1.0


def test_mc_estimate_invariants():
    est = McEstimate.from_counts(3, 12)
    assert est.ci95_lo <= est.p_hat <= est.ci95_hi
    assert est.p_hat == 0.25


# -------------------------------------------------------------- estimate_pe

def test_estimate_pe_rejects_zero_trials():
    with pytest.raises(ValueError):
        estimate_pe(_cfg(), ChannelParams(q10=0.1, q01=0.1), trials=0)


def test_estimate_pe_noiseless_near_zero():
    cfg = _cfg(n_rounds=2000, epsilon=0.05)
    est = estimate_pe(cfg, ChannelParams(q10=0.0, q01=0.0), trials=1000, mode="suboptimal")
    assert est.p_hat <= 0.01


def test_estimate_pe_pure_noise_fails():
    cfg = _cfg(n_users=8, seed=43, epsilon=0.05)
    est = estimate_pe(cfg, ChannelParams(q10=0.5, q01=0.5), trials=200, mode="suboptimal")
    assert est.p_hat >= 0.5


def test_estimate_pe_bayes_budget():
    with pytest.raises(ValueError):
        estimate_pe(_cfg(n_users=17), ChannelParams(q10=0.1, q01=0.1), trials=1, mode="bayes")


def test_bipartize_failures_subset_of_suboptimal():
    # the analysis criterion is sub-optimal: its failures upper-bound the
    # full decoder's on identical draws (when bipartization completes)
    cfg = _cfg(n_users=6, n_rounds=120, epsilon=0.2, seed=17)
    ch = ChannelParams(q10=0.1, q01=0.1)
    s0 = status_vector(6, (1, 2))
    from partition_mac.decoder import decode, distortion, suboptimal_success

    sub_fail = 0
    bip_fail = 0
    for trial in range(120):
        x = generate(cfg, substream(cfg.seed, 0, trial, ROLE_CODEBOOK))
        y = apply_noise(or_superpose(x.bits, s0), ch, substream(cfg.seed, 0, trial, ROLE_NOISE))
        sub_ok = suboptimal_success(x, y, s0, cfg, ch)
        z = decode(x, y, cfg, ch)
        bip_ok = distortion(s0, z) == 0
        sub_fail += not sub_ok
        bip_fail += not bip_ok
        assert sub_ok <= bip_ok  # success under the criterion implies success
    assert bip_fail <= sub_fail


def test_monotone_trend_in_rounds():
    # paired (prefix-coupled) draws; failure rate must not significantly
    # increase with T at sound parameters
    cfg = _cfg(n_users=16, n_rounds=320, epsilon=0.1, seed=3)
    ch = ChannelParams(q10=0.1, q01=0.1)
    ests, outcomes = coupled_pe_runs(cfg, ch, trials=150, mode="suboptimal", t_values=(40, 80, 160, 320))
    rates = [ests[t].p_hat for t in (40, 80, 160, 320)]
    for k in range(3):
        p_val = one_sided_increase_pvalue(outcomes[:, k], outcomes[:, k + 1])
        assert p_val > 0.01, (rates, p_val)


def test_one_sided_pvalue_behaviour():
    same = np.zeros(50, dtype=np.int64)
    assert one_sided_increase_pvalue(same, same) == 1.0
    worse = np.ones(50, dtype=np.int64)
    assert one_sided_increase_pvalue(same, worse) < 1e-9


# -------------------------------------------------------------- estimate_p3

def test_estimate_p3_matches_replay():
    cfg = _cfg(n_users=3, n_rounds=40, epsilon=0.4, seed=9)
    ch = ChannelParams(q10=0.1, q01=0.1)
    kernel = JointKernel(p=cfg.design_p, channel=ch)
    est = estimate_p3(cfg, ch, trials=60)
    s0 = status_vector(3, (1, 2))
    hits = 0
    for trial in range(60):
        x = generate(cfg, substream(cfg.seed, 0, trial, ROLE_CODEBOOK))
        y = apply_noise(or_superpose(x.bits, s0), ch, substream(cfg.seed, 0, trial, ROLE_NOISE))
        if not naive_marginal_test(y, kernel, cfg.epsilon, cfg.strictness):
            hits += 1  # empty flagged graph: the true edge is absent
            continue
        e12 = naive_edge_test(y, x.row(1), x.row(2), kernel, cfg.epsilon, cfg.strictness)
        e13 = naive_edge_test(y, x.row(1), x.row(3), kernel, cfg.epsilon, cfg.strictness)
        e23 = naive_edge_test(y, x.row(2), x.row(3), kernel, cfg.epsilon, cfg.strictness)
        if (not e12) or (e13 and e23):
            hits += 1
    assert est.failures == hits


def test_estimate_p3_noiseless_large_t():
    cfg = _cfg(n_users=6, n_rounds=1500, epsilon=0.1, seed=4)
    est = estimate_p3(cfg, ChannelParams(q10=0.0, q01=0.0), trials=200)
    assert est.p_hat <= 0.02


# ------------------------------------------------------------- estimate_mu3

def _naive_window(kernel, t, t_w, block, eps, strictness):
    factor = {"sufficient": 2.0, "necessary": 0.5}[strictness]
    band = factor * eps / 4.0
    c = kernel.pyy0[(block, 0)]
    allowed = []
    for s in range(t_w + 1):
        ok = abs(s / t - c) <= band if c > 0 else s == 0
        if kernel.pyy0[(block, 1)] == 0.0:
            ok = ok and s == t_w
        if ok:
            allowed.append(s)
    return allowed


def test_mu3_matches_exact_enumeration():
    ch = ChannelParams(q10=0.1, q01=0.1)
    for t, eps, block in ((100, 0.2, 0), (100, 0.2, 1), (60, 0.4, 0)):
        cfg = _cfg(n_rounds=t, epsilon=eps, seed=11)
        kernel = JointKernel(p=cfg.design_p, channel=ch)
        est = estimate_mu3(cfg, ch, trials=200000, block=block)
        counts = typical_center_counts(kernel, t)
        t_w = sum(counts[(block, u, v)] for u in (0, 1) for v in (0, 1))
        allowed = _naive_window(kernel, t, t_w, block, eps, cfg.strictness)
        oracle = exact_mu3(kernel, t, block, counts, min(allowed), max(allowed))
        assert est.p_hat == pytest.approx(oracle, rel=0.05)


def test_mu3_rare_event_regime_matches_exact():
    # importance sampling resolves probabilities far below 1/trials
    ch = ChannelParams(q10=0.1, q01=0.1)
    cfg = _cfg(n_rounds=400, epsilon=0.01, seed=11)
    kernel = JointKernel(p=cfg.design_p, channel=ch)
    est = estimate_mu3(cfg, ch, trials=100000, block=0)
    counts = typical_center_counts(kernel, 400)
    t_w = sum(counts[(0, u, v)] for u in (0, 1) for v in (0, 1))
    allowed = _naive_window(kernel, 400, t_w, 0, 0.01, cfg.strictness)
    oracle = exact_mu3(kernel, 400, 0, counts, min(allowed), max(allowed))
    assert oracle < 1e-12  # far beyond naive Monte-Carlo resolution
    assert est.p_hat == pytest.approx(oracle, rel=0.1)


def test_mu3_noiseless_bernoulli_product():
    # q=0: the block-1 event needs exactly zero deviant counts, so the
    # probability is a closed-form Bernoulli product over the group sizes
    ch = ChannelParams(q10=0.0, q01=0.0)
    cfg = _cfg(n_rounds=40, epsilon=0.3, seed=3)
    kernel = JointKernel(p=cfg.design_p, channel=ch)
    counts = typical_center_counts(kernel, 40)
    est = estimate_mu3(cfg, ch, trials=100000, block=1)
    n_relevant = counts[(1, 0, 0)] + counts[(1, 0, 1)] + counts[(1, 1, 0)]
    assert est.p_hat == pytest.approx(cfg.design_p**n_relevant, rel=1e-6)


def test_mu3_reports_theorem_bound():
    ch = ChannelParams(q10=0.1, q01=0.1)
    cfg = _cfg(n_rounds=200, epsilon=0.01, seed=11)
    est = estimate_mu3(cfg, ch, trials=50000, block=0)
    from partition_mac.rates import LdpKernel, phi

    kernel = LdpKernel(p=0.5, q10=0.1, q01=0.1)
    assert est.bound == pytest.approx(math.exp(-kernel.p0 * phi(0, kernel) * 200), rel=1e-12)
    assert est.p_hat <= 2.0 * est.bound


def test_mu3_insufficient_samples_at_tiny_t():
    ch = ChannelParams(q10=0.13, q01=0.07)
    cfg = _cfg(n_rounds=7, epsilon=0.01, seed=5)
    with pytest.raises(InsufficientSamplesError):
        estimate_mu3(cfg, ch, trials=10, block=1)


# ------------------------------------------------------------------- sweep

def _spec(**kw):
    base = dict(n=[6], t=[80], p=[0.5], epsilon=[0.2], q10=[0.1], q01=[0.1],
                mode=["suboptimal"], trials=30, seed=12)
    base.update(kw)
    return SweepSpec(**base)


def test_sweep_single_cell_equals_direct_estimate(tmp_path):
    spec = _spec()
    rows = run_sweep(spec, out_path=tmp_path / "one.csv")
    assert len(rows) == 1
    cfg = ExperimentConfig(n_users=6, n_rounds=80, design_p=0.5, epsilon=0.2, seed=12)
    direct = estimate_pe(cfg, ChannelParams(q10=0.1, q01=0.1), trials=30, mode="suboptimal", cell_id=0)
    assert rows[0]["failures"] == direct.failures
    assert rows[0]["p_hat"] == direct.p_hat


def test_sweep_byte_identical_across_runs_and_workers(tmp_path):
    spec = _spec(n=[5, 6], t=[40, 80], trials=15)
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    run_sweep(spec, out_path=a)
    run_sweep(spec, out_path=b)
    run_sweep(dataclasses.replace(spec, workers=2), out_path=c)
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_sweep_rows_sorted_canonically(tmp_path):
    spec = _spec(n=[5, 6], t=[40, 80], trials=5)
    rows = run_sweep(spec)
    cells = [r["cell"] for r in rows]
    assert cells == sorted(cells)
    shuffled = list(reversed(rows))
    shuffled.sort(key=lambda r: r["cell"])
    out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    write_sweep_csv(rows, out1)
    write_sweep_csv(shuffled, out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_spec_from_json_ratio_axis():
    spec = SweepSpec.from_json(
        '{"n": [32, 64], "t_over_logn": [2.0], "p": [0.4], "epsilon": [0.2],'
        ' "q10": [0.1], "q01": [0.1], "mode": "suboptimal", "trials": 3, "seed": 1}'
    )
    cells = spec.cells()
    assert [c["t"] for c in cells] == [round(2.0 * math.log(32)), round(2.0 * math.log(64))]
    with pytest.raises(ValueError):
        SweepSpec.from_json('{"n": [4], "p": [0.4], "epsilon": [0.1], "q10": [0.1],'
                            ' "q01": [0.1], "mode": "x", "trials": 1, "seed": 1}')


# ---------------------------------------------------------------- validate

def test_validate_passes_on_defaults():
    report = run_validate()
    assert report.passed, [c for c in report.checks if not c.passed]


def test_validate_catches_injected_sign_error():
    from partition_mac import rates

    def broken_rate_c(p, q10, q01):
        value = rates.rate_C(p, q10, q01)
        return value + (0.01 if q10 > 0.5 else 0.0)  # breaks mirror symmetry

    report = run_validate(rate_c_fn=broken_rate_c)
    failed = {c.name for c in report.checks if not c.passed}
    assert "symmetry_C" in failed


def test_validate_degenerate_flagged_not_failed():
    report = run_validate()
    by_name = {c.name: c for c in report.checks}
    assert by_name["degeneracy_zero"].passed


def test_estimate_pe_bipartize_budget_column():
    # a starved search budget surfaces as its own outcome, never as a
    # silent success or failure
    cfg = _cfg(n_users=8, n_rounds=40, epsilon=1.2, seed=2)
    ch = ChannelParams(q10=0.3, q01=0.3)
    est = estimate_pe(cfg, ch, trials=10, mode="bipartize", node_budget=3)
    assert est.budget_exceeded > 0
    assert est.failures + est.budget_exceeded <= est.trials


def test_sweep_partial_cell_failure_recorded(tmp_path):
    # a cell violating a mode precondition is recorded empty; the rest run
    spec = _spec(n=[6, 17], t=[30], mode=["bayes"], trials=5)
    rows = run_sweep(spec, out_path=tmp_path / "partial.csv")
    assert len(rows) == 2
    good = [r for r in rows if r["n"] == 6][0]
    bad = [r for r in rows if r["n"] == 17][0]
    assert isinstance(good["failures"], int)
    assert bad["failures"] == "" and bad["p_hat"] == ""
    text = (tmp_path / "partial.csv").read_text()
    assert text.count("\n") == 3
    assert ",,,,," in text  # the failed cell's estimate columns stay empty
