"""Cross-approximation completion: matrix iteration and its tensor wrapper."""

import csv
import math

import numpy as np
import pytest

from tcomplete import (
    DimensionMismatch,
    IcurcConfig,
    RankTooLarge,
    default_core_count,
    icurc_r,
    project,
    random_tubal_mask,
    relative_error,
    synth_low_tubal_rank,
    tccur,
    truncate_rank,
    tubal_rank,
    write_slice_history_csv,
)


def low_rank_matrix(n1, n2, r, seed, complex_=False):
    rng = np.random.default_rng(seed)
    if complex_:
        a = rng.standard_normal((n1, r)) + 1j * rng.standard_normal((n1, r))
        b = rng.standard_normal((r, n2)) + 1j * rng.standard_normal((r, n2))
    else:
        a = rng.standard_normal((n1, r))
        b = rng.standard_normal((r, n2))
    return a @ b


# ------------------------------------------------------------- truncate_rank


def test_truncate_rank_eckart_young():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((12, 9))
    sig = np.linalg.svd(m, compute_uv=False)
    for k in (1, 3, 7):
        err = np.linalg.norm(m - truncate_rank(m, k))
        assert abs(err**2 - (sig[k:] ** 2).sum()) < 1e-10 * max(1.0, err**2)


def test_truncate_rank_edge_cases():
    m = np.random.default_rng(1).standard_normal((5, 7))
    assert np.array_equal(truncate_rank(m, 0), np.zeros_like(m))
    assert np.abs(truncate_rank(m, 5) - m).max() < 1e-12
    assert np.abs(truncate_rank(m, 99) - m).max() < 1e-12
    with pytest.raises(ValueError):
        truncate_rank(m, -1)
    with pytest.raises(DimensionMismatch):
        truncate_rank(np.zeros((2, 2, 2)), 1)


def test_truncate_preserves_exact_low_rank():
    m = low_rank_matrix(10, 8, 2, 2)
    assert np.abs(truncate_rank(m, 2) - m).max() < 1e-10


# ---------------------------------------------------------- config resolution


def test_default_core_count_values():
    assert default_core_count(2, 128) == math.ceil(3.0 * math.log(128))  # 15
    assert default_core_count(2, 128) == 15
    assert default_core_count(8, 10) == 10  # capped at n
    assert default_core_count(1, 2) == 2


def test_config_validation():
    with pytest.raises(ValueError):
        IcurcConfig(rank=0)
    with pytest.raises(ValueError):
        IcurcConfig(rank=1, eps=0.0)
    with pytest.raises(ValueError):
        IcurcConfig(rank=1, max_iters=0)


def test_resolved_defaults_and_determinism():
    cfg = IcurcConfig(rank=2, seed=9).resolved(40, 30)
    assert cfg.row_count == default_core_count(2, 40)
    assert cfg.col_count == default_core_count(2, 30)
    assert len(set(cfg.rows)) == cfg.row_count
    assert all(0 <= i < 40 for i in cfg.rows)
    again = IcurcConfig(rank=2, seed=9).resolved(40, 30)
    assert cfg.rows == again.rows and cfg.cols == again.cols
    other = IcurcConfig(rank=2, seed=10).resolved(40, 30)
    assert cfg.rows != other.rows or cfg.cols != other.cols


def test_resolved_errors():
    with pytest.raises(RankTooLarge):
        IcurcConfig(rank=5, row_count=4, col_count=8).resolved(20, 20)
    with pytest.raises(DimensionMismatch):
        IcurcConfig(rank=2, row_count=30).resolved(20, 20)
    with pytest.raises(DimensionMismatch):
        IcurcConfig(rank=1, rows=(25,), cols=(0,)).resolved(20, 20)


def test_resolved_honors_fixed_sets():
    cfg = IcurcConfig(rank=2, rows=(3, 1, 7), cols=(0, 2, 4, 6)).resolved(10, 10)
    assert cfg.rows == (3, 1, 7)
    assert cfg.row_count == 3 and cfg.col_count == 4


# -------------------------------------------------------------------- icurc_r


def test_icurc_full_observation_is_one_step():
    m = low_rank_matrix(20, 16, 2, 3)
    phi = np.ones((20, 16), dtype=bool)
    comp = icurc_r(m, phi, IcurcConfig(rank=2, seed=1))
    assert comp.converged
    assert comp.iters == 1  # exact cross approximation after a single pass
    assert np.abs(comp.estimate() - m).max() < 1e-8


def test_icurc_partial_observation_recovers():
    rng = np.random.default_rng(4)
    m = low_rank_matrix(64, 64, 2, 5)
    phi = rng.random((64, 64)) < 0.4
    y = np.where(phi, m, 0.0)
    comp = icurc_r(y, phi, IcurcConfig(rank=2, seed=6, row_count=10, col_count=10))
    assert comp.converged
    assert comp.final_error < 1e-6
    assert np.linalg.norm(comp.estimate() - m) / np.linalg.norm(m) < 1e-3


def test_icurc_complex_input():
    rng = np.random.default_rng(7)
    m = low_rank_matrix(48, 48, 2, 8, complex_=True)
    phi = rng.random((48, 48)) < 0.5
    y = np.where(phi, m, 0.0)
    comp = icurc_r(y, phi, IcurcConfig(rank=2, seed=9, row_count=10, col_count=10))
    assert comp.converged
    assert np.linalg.norm(comp.estimate() - m) / np.linalg.norm(m) < 1e-3


def test_icurc_stop_on_fixed_sets():
    rng = np.random.default_rng(10)
    m = low_rank_matrix(48, 48, 2, 11)
    phi = rng.random((48, 48)) < 0.5
    y = np.where(phi, m, 0.0)
    cfg = IcurcConfig(rank=2, seed=12, row_count=10, col_count=10, stop_on_fixed=True)
    comp = icurc_r(y, phi, cfg)
    assert comp.converged
    assert np.linalg.norm(comp.estimate() - m) / np.linalg.norm(m) < 1e-3


def test_icurc_zero_input_converges_immediately():
    phi = np.random.default_rng(13).random((10, 10)) < 0.5
    comp = icurc_r(np.zeros((10, 10)), phi, IcurcConfig(rank=1, seed=0))
    assert comp.converged
    assert comp.iters == 0
    assert np.abs(comp.estimate()).max() == 0.0


def test_icurc_history_is_recorded():
    rng = np.random.default_rng(14)
    m = low_rank_matrix(32, 32, 2, 15)
    phi = rng.random((32, 32)) < 0.5
    y = np.where(phi, m, 0.0)
    comp = icurc_r(y, phi, IcurcConfig(rank=2, seed=16, row_count=8, col_count=8))
    its = [it for it, _ in comp.history]
    assert its == list(range(1, len(its) + 1))
    assert comp.history[-1][1] == comp.final_error


def test_icurc_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        icurc_r(np.zeros((4, 4)), np.ones((4, 5), dtype=bool), IcurcConfig(rank=1))
    with pytest.raises(DimensionMismatch):
        icurc_r(np.zeros((4, 4, 2)), np.ones((4, 4), dtype=bool), IcurcConfig(rank=1))


def test_icurc_determinism():
    rng = np.random.default_rng(17)
    m = low_rank_matrix(32, 32, 2, 18)
    phi = rng.random((32, 32)) < 0.5
    y = np.where(phi, m, 0.0)
    cfg = IcurcConfig(rank=2, seed=19, row_count=8, col_count=8)
    a = icurc_r(y, phi, cfg)
    b = icurc_r(y, phi, cfg)
    assert np.array_equal(a.estimate(), b.estimate())
    assert a.iters == b.iters
    # a different slice index must draw different strips
    c = icurc_r(y, phi, cfg, slice_index=1)
    assert a.iters != c.iters or not np.array_equal(a.estimate(), c.estimate())


# ---------------------------------------------------------------------- tccur


def test_tccur_recovers_low_tubal_rank():
    truth = synth_low_tubal_rank(32, 32, 4, 2, 20)
    mask = random_tubal_mask(32, 32, 0.5, 21)
    y = project(truth, mask)
    out = tccur(y, mask, IcurcConfig(rank=2, seed=22))
    assert out.converged
    assert relative_error(out.estimate, truth) < 1e-3
    assert out.estimate.dtype == np.float64  # reconstruction is real
    assert tubal_rank(out.estimate, 1e-6)[1] <= 2


def test_tccur_full_observation():
    truth = synth_low_tubal_rank(16, 16, 4, 2, 23)
    mask = random_tubal_mask(16, 16, 1.0, 0)
    out = tccur(truth, mask, IcurcConfig(rank=2, seed=24))
    assert relative_error(out.estimate, truth) < 1e-8


def test_tccur_n3_1_matches_matrix_solver():
    m = low_rank_matrix(24, 24, 2, 25)
    rng = np.random.default_rng(26)
    sampled = rng.random((24, 24)) < 0.6
    from tcomplete import TubalMask

    mask = TubalMask(24, 24, sampled)
    y = project(m[:, :, None], mask)
    cfg = IcurcConfig(rank=2, seed=27, row_count=8, col_count=8)
    out = tccur(y, mask, cfg)
    comp = icurc_r(np.where(sampled, m, 0.0), sampled, cfg, slice_index=0)
    assert np.abs(out.estimate[:, :, 0] - comp.estimate()).max() < 1e-8


def test_tccur_mirrors_conjugate_slices():
    truth = synth_low_tubal_rank(24, 24, 6, 2, 28)
    mask = random_tubal_mask(24, 24, 0.6, 29)
    out = tccur(project(truth, mask), mask, IcurcConfig(rank=2, seed=30))
    for k in range(6 // 2 + 1, 6):
        assert out.iters[k] == out.iters[6 - k]
        assert out.per_slice_errors[k] == out.per_slice_errors[6 - k]
    assert len(out.histories) == 6


def test_tccur_determinism():
    truth = synth_low_tubal_rank(24, 24, 4, 2, 31)
    mask = random_tubal_mask(24, 24, 0.5, 32)
    y = project(truth, mask)
    cfg = IcurcConfig(rank=2, seed=33)
    a = tccur(y, mask, cfg)
    b = tccur(y, mask, cfg)
    assert np.array_equal(a.estimate, b.estimate)


def test_tccur_error_names_offending_slice():
    truth = synth_low_tubal_rank(16, 16, 2, 2, 34)
    mask = random_tubal_mask(16, 16, 0.5, 35)
    cfg = IcurcConfig(rank=4, row_count=3, col_count=3)
    with pytest.raises(RankTooLarge):
        tccur(project(truth, mask), mask, cfg)


def test_slice_history_csv(tmp_path):
    truth = synth_low_tubal_rank(16, 16, 4, 1, 36)
    mask = random_tubal_mask(16, 16, 0.6, 37)
    out = tccur(project(truth, mask), mask, IcurcConfig(rank=1, seed=38))
    path = tmp_path / "slices.csv"
    write_slice_history_csv(path, out.histories)
    rows = list(csv.DictReader(path.open()))
    assert {int(r["slice"]) for r in rows} == {0, 1, 2, 3}
    assert all(float(r["e"]) >= 0.0 for r in rows)
    assert path.open().readline().strip() == "slice,iter,e"
