import math

import numpy as np
import pytest

from stable_potentials import DomainError, char_exponent, make_params, mean_exit_time
from stable_potentials.mc import (
    MCConfig,
    cell_averages,
    compare,
    estimate_density,
    fraction_up,
    ks_distance,
    mean_time,
    sample_stable,
    simulate_exit,
    simulate_reflected,
)
from stable_potentials.mc import _kernels
from stable_potentials.mc.oracle import BUDGET_ENV

SAMPLER_CASES = [(0.7, 0.6), (1.0, 0.5), (1.5, 0.4), (0.4, 0.2), (1.8, 0.5)]
FAST = dict(step=1e-3, n_cells=10)


@pytest.fixture(scope="module", params=SAMPLER_CASES, ids=lambda c: f"a{c[0]}-r{c[1]}")
def draws(request):
    p = make_params(*request.param)
    rng = np.random.default_rng(12345)
    return p, sample_stable(p, 1.0, rng, size=1_000_000)


def test_positivity(draws):
    p, z = draws
    frac = np.mean(z > 0)
    se = math.sqrt(p.rho * (1 - p.rho) / z.size)
    assert abs(frac - p.rho) <= 3 * se


def test_characteristic_function(draws):
    p, z = draws
    target = np.exp(-char_exponent(p, 1.0))
    c, s = np.cos(z), np.sin(z)
    assert abs(c.mean() - target.real) <= 3 * c.std() / math.sqrt(z.size)
    assert abs(s.mean() - target.imag) <= 3 * s.std() / math.sqrt(z.size)


def test_symmetric_median():
    z = sample_stable(make_params(1.2, 0.5), 1.0, np.random.default_rng(1), size=1_000_000)
    # the sample median is within ~3 SE of 0 where SE = 1/(2 f(0) sqrt n); f(0) > 0.2 here
    assert abs(np.median(z)) <= 3 / (2 * 0.2 * math.sqrt(z.size))


def test_time_scaling():
    p = make_params(0.7, 0.6)
    z = sample_stable(p, 4.0, np.random.default_rng(2), size=400_000)
    target = np.exp(-4.0 * char_exponent(p, 0.5))
    c = np.cos(0.5 * z)
    assert abs(c.mean() - target.real) <= 3 * c.std() / math.sqrt(z.size)


def test_sampler_arguments():
    p = make_params(1.0, 0.5)
    assert isinstance(sample_stable(p, 1.0, np.random.default_rng(0)), float)
    with pytest.raises(DomainError):
        sample_stable(p, 0.0, np.random.default_rng(0))
    with pytest.raises(DomainError):
        sample_stable(make_params(1.0, 0.6, strict=False), 1.0, np.random.default_rng(0))


def test_uniform_stream_is_open_interval():
    u = _kernels.path_uniforms(0, 0, 100_000)
    assert u.min() > 0.0 and u.max() < 1.0


@pytest.fixture(scope="module")
def killed():
    return simulate_exit(make_params(1.0, 0.5), 0.5, config=MCConfig(n_paths=20_000, seed=11, **FAST))


@pytest.fixture(scope="module")
def reflected():
    return simulate_reflected(make_params(1.5, 0.4), 0.3, config=MCConfig(n_paths=5_000, seed=5, **FAST))


def test_symmetric_exit_side(killed):
    est = fraction_up(killed)
    assert abs(est.value - 0.5) <= 3 * est.std_error


def test_mean_exit_time_one_sided(killed):
    est = mean_time(killed)
    diff = est.value - mean_exit_time(make_params(1.0, 0.5), 0.5)
    assert -3 * est.std_error <= diff <= 3 * est.std_error + 1e-3


def test_record_invariants(killed):
    assert not killed.capped.any()
    up = killed.exited_up
    assert np.all(killed.position_after[up] > 1.0)
    assert np.all(killed.position_after[~up] < 0.0)
    assert np.all(killed.running_max_before <= 1.0)
    assert np.all(killed.running_max_before >= killed.position_before)
    # occupation mass is the exit time, path by path
    np.testing.assert_array_equal(killed.counts.sum(axis=1), killed.steps)
    np.testing.assert_allclose(killed.occupation.sum(axis=1), killed.exit_time, rtol=1e-12)


def test_reflected_invariants(reflected):
    assert reflected.exited_up.all()
    assert np.all(reflected.position_before >= 0.0)
    assert np.all(reflected.position_before <= 1.0)
    assert np.all(reflected.position_after > 1.0)


def test_reflection_matches_running_minimum_form():
    # rebuild one path from its uniform stream and reflect it explicitly
    p = make_params(0.7, 0.6)
    cfg = MCConfig(n_paths=3, step=1e-3, seed=99, n_cells=4)
    rec = simulate_reflected(p, 0.2, config=cfg)
    scale = cfg.step ** (1 / p.alpha)
    shift = math.pi * (p.rho - 0.5)
    for i in range(3):
        n = int(rec.steps[i])
        u = _kernels.path_uniforms(cfg.seed, i, 2 * n)
        incs = np.array([_kernels.stable_from_uniforms(p.alpha, shift, u[2 * k], u[2 * k + 1]) for k in range(n)])
        x = 0.2 + np.concatenate([[0.0], np.cumsum(scale * incs)])
        y = x - np.minimum(0.0, np.minimum.accumulate(x))
        assert np.all(y >= 0)
        assert np.all(y[:-1] <= 1.0) and y[-1] > 1.0
        assert y[-2] == pytest.approx(rec.position_before[i], abs=1e-9)
        assert y[-1] == pytest.approx(rec.position_after[i], abs=1e-9)


def test_reproducible_and_schedule_free():
    p = make_params(1.5, 0.4)
    a = simulate_exit(p, 0.4, config=MCConfig(n_paths=2_000, seed=3, chunk=2_000, **FAST))
    b = simulate_exit(p, 0.4, config=MCConfig(n_paths=2_000, seed=3, chunk=333, **FAST))
    c = simulate_exit(p, 0.4, config=MCConfig(n_paths=2_000, seed=4, **FAST))
    for name in ("steps", "position_before", "position_after", "counts"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))
    assert not np.array_equal(a.steps, c.steps)


def test_capped_paths_are_flagged():
    rec = simulate_exit(make_params(1.0, 0.5), 0.5, config=MCConfig(n_paths=50, step=1e-6, max_steps=5, seed=0))
    assert rec.capped.all()
    assert not rec.exited_up.any()
    assert np.isnan(rec.position_after).all()
    np.testing.assert_allclose(rec.exit_time, 5e-6)


def test_budget(monkeypatch):
    with pytest.raises(ValueError, match="budget"):
        MCConfig(n_paths=1000, max_steps=10**10)
    monkeypatch.setenv(BUDGET_ENV, "1e14")
    assert MCConfig(n_paths=1000, max_steps=10**10).budget == 10**14
    with pytest.raises(ValueError):
        MCConfig(step=0.0)


def test_start_validation():
    p = make_params(1.0, 0.5)
    with pytest.raises(DomainError):
        simulate_exit(p, 1.0, config=MCConfig(n_paths=1))
    with pytest.raises(DomainError):
        simulate_reflected(p, -0.1, config=MCConfig(n_paths=1))


def test_single_path_single_cell():
    rec = simulate_exit(make_params(1.0, 0.5), 1.0, (0.0, 2.0), MCConfig(n_paths=1, step=1e-3, n_cells=1, seed=8))
    grid, ests = estimate_density(rec)
    assert grid.values[0] == pytest.approx(rec.exit_time[0] / 2.0, rel=1e-12)
    assert ests[0].std_error == 0.0 and ests[0].n_effective == 1


def test_record_stream_matches_batch(killed):
    grid, ests = estimate_density(killed)
    items = list(killed)
    grid2, ests2 = estimate_density(items, killed.edges)
    grid3, _ = estimate_density(items[::-1], killed.edges)
    np.testing.assert_allclose(grid2.values, grid.values, rtol=1e-12)
    np.testing.assert_allclose(grid3.values, grid.values, rtol=1e-12)
    np.testing.assert_allclose([e.std_error for e in ests2], [e.std_error for e in ests], rtol=1e-9)


def test_estimate_errors(killed):
    with pytest.raises(ValueError):
        estimate_density([], killed.edges)
    with pytest.raises(ValueError):
        estimate_density(list(killed)[:5])
    with pytest.raises(ValueError):
        estimate_density(killed, np.linspace(0, 1, 4))


def test_more_paths_shrink_error():
    p = make_params(1.0, 0.5)
    small = estimate_density(simulate_exit(p, 0.5, config=MCConfig(n_paths=4_000, seed=21, **FAST)))[1]
    large = estimate_density(simulate_exit(p, 0.5, config=MCConfig(n_paths=8_000, seed=22, **FAST)))[1]
    ratio = np.mean([b.std_error**2 / a.std_error**2 for a, b in zip(small, large)])
    assert ratio == pytest.approx(0.5, rel=0.2)


def test_compare_zero_noise(killed):
    grid, ests = estimate_density(killed)
    rep = compare(grid.values, (grid, ests), edges=killed.edges)
    assert rep.passed and rep.sup_rel_deviation == 0.0
    assert all(z == 0.0 for z in rep.z_scores)
    assert compare(grid.values, (grid, ests), edges=killed.edges) == rep


def test_compare_detects_wrong_target(killed):
    grid, ests = estimate_density(killed)
    rep = compare([1.1 * v for v in grid.values], (grid, ests), edges=killed.edges)
    assert not rep.passed
    with pytest.raises(ValueError):
        compare(grid.values[:-1], (grid, ests), edges=killed.edges)
    via_callable = compare(lambda a, b: 1.0, (grid, ests), edges=killed.edges)
    assert via_callable.cells_compared == 8


def test_cell_averages():
    edges = np.array([0.0, 0.25, 1.0])
    avg = cell_averages(lambda t: t**-0.5, edges, {0.0: -0.5})
    np.testing.assert_allclose(avg, [2 * 0.5 / 0.25, 2 * (1 - 0.5) / 0.75], rtol=1e-10)
    # a singular point snapped onto an interior edge
    avg = cell_averages(lambda t: abs(t - 0.25) ** -0.5, edges, {0.25 + 1e-14: -0.5})
    np.testing.assert_allclose(avg, [2 * 0.5 / 0.25, 2 * math.sqrt(0.75) / 0.75], rtol=1e-8)


def test_ks_distance():
    assert ks_distance([0.5], lambda t: t) == pytest.approx(0.5)
    xs = (np.arange(1000) + 0.5) / 1000
    assert ks_distance(xs, lambda t: t) == pytest.approx(0.0005)
    with pytest.raises(ValueError):
        ks_distance([], lambda t: t)


def test_csv_export(tmp_path, reflected):
    main, occ = tmp_path / "paths.csv", tmp_path / "occ.csv"
    reflected.to_csv(main, occ)
    lines = main.read_text().splitlines()
    assert lines[0].startswith("path_id,exited_up,capped,exit_time")
    assert len(lines) == len(reflected) + 1
    occ_lines = occ.read_text().splitlines()
    assert occ_lines[0].split(",")[:2] == ["path_id", "cell_0"]
    first = [float(v) for v in occ_lines[1].split(",")[1:]]
    assert sum(first) == pytest.approx(reflected.exit_time[0])
