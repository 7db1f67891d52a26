import json

import numpy as np
import pytest

from lrdcov import (ExperimentConfig, FixedBlocks, custom_spec, run_cell, run_grid,
                    toeplitz_spec)
from lrdcov.harness import ALL_TARGETS, parse_block_rule, parse_structure


def small_config(tmp_path, **overrides):
    base = dict(grid_n=[64, 100], grid_p=[2, 3], betas=[2.0], structure="toeplitz",
                replicates=12, block_rule=FixedBlocks(8),
                targets=("cov_ga", "cov_boot"), seed=99,
                output_dir=str(tmp_path / "out"))
    base.update(overrides)
    return ExperimentConfig(**base)


def test_degenerate_iid_cell_matches_scalar_reference():
    # p = 1 i.i.d.: sqrt(n) |sigma2_hat - 1| tends to |N(0, 2)|
    spec = custom_spec(lambda t: np.eye(1) if t == 0 else np.zeros((1, 1)),
                       beta=1.0, p=1, d=1, truncation=4)
    results, skipped = run_cell(spec, n=400, replicates=200, seed=7,
                                targets=("cov_ga",))
    assert not skipped
    row = results[0]
    assert row.kind == "cov_ga"
    assert row.ks < 0.15


def test_run_cell_emits_all_targets_and_sidecars(tmp_path):
    spec = toeplitz_spec(2.0, 2, truncation=10_000)
    results, skipped = run_cell(spec, n=100, replicates=25, seed=5,
                                block_rule=FixedBlocks(21),
                                output_dir=str(tmp_path))
    assert not skipped
    assert [r.kind for r in results] == list(ALL_TARGETS)
    assert all(0.0 <= r.ks <= 1.0 and r.w1 >= 0.0 for r in results)
    tag = "n100_p2_b2"
    for kind in ALL_TARGETS:
        assert (tmp_path / f"qq_{tag}_{kind}.csv").exists()
    ecdf = (tmp_path / f"ecdf_{tag}.csv").read_text().splitlines()
    assert ecdf[0] == "value,statistic,F"
    labels = {line.split(",")[1] for line in ecdf[1:]}
    assert labels == {"cov_error", "prec_error", *ALL_TARGETS}


def test_same_copies_feed_every_target():
    spec = toeplitz_spec(2.0, 2, truncation=10_000)
    only_ga, _ = run_cell(spec, n=100, replicates=25, seed=5,
                          block_rule=FixedBlocks(21), targets=("cov_ga",))
    full, _ = run_cell(spec, n=100, replicates=25, seed=5,
                       block_rule=FixedBlocks(21))
    by_kind = {r.kind: r for r in full}
    assert by_kind["cov_ga"].ks == only_ga[0].ks
    assert by_kind["cov_ga"].w1 == only_ga[0].w1


def test_precision_skipped_when_p_not_below_n():
    spec = toeplitz_spec(2.0, 12, truncation=500)
    results, skipped = run_cell(spec, n=10, replicates=5, seed=1,
                                block_rule=FixedBlocks(4))
    kinds = {r.kind for r in results}
    assert kinds == {"cov_ga", "cov_boot"}
    assert {s.kind for s in skipped} == {"prec_ga", "prec_boot"}
    assert all("p < n" in s.reason for s in skipped)


def test_empty_grid_writes_header_only(tmp_path):
    config = small_config(tmp_path, grid_n=[], grid_p=[])
    results = run_grid(config)
    assert results == []
    content = (tmp_path / "out" / "results.csv").read_text()
    assert content == "n,p,beta,kind,ks,w1,runtime_ms,seed\n"


def test_single_cell_grid_matches_direct_run(tmp_path):
    config = small_config(tmp_path, grid_n=[64], grid_p=[2])
    rows = run_grid(config)
    cell_seed = int(np.random.SeedSequence(config.seed, spawn_key=(0,))
                    .generate_state(1, np.uint64)[0])
    spec = toeplitz_spec(2.0, 2)  # grid cells use the default analytic truncation
    direct, _ = run_cell(spec, n=64, replicates=12, block_rule=FixedBlocks(8),
                         targets=("cov_ga", "cov_boot"), seed=cell_seed)
    assert [(r.kind, r.ks, r.w1) for r in rows] == \
           [(r.kind, r.ks, r.w1) for r in direct]


def test_grid_rerun_is_byte_identical(tmp_path):
    config_a = small_config(tmp_path / "a")
    config_b = small_config(tmp_path / "b")
    run_grid(config_a)
    run_grid(config_b)
    dir_a = tmp_path / "a" / "out"
    dir_b = tmp_path / "b" / "out"
    names_a = sorted(f.name for f in dir_a.iterdir())
    names_b = sorted(f.name for f in dir_b.iterdir())
    assert names_a == names_b
    assert "results.csv" in names_a
    for name in names_a:
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name


def test_grid_csv_schema(tmp_path):
    config = small_config(tmp_path, grid_n=[64], grid_p=[2])
    run_grid(config)
    lines = (tmp_path / "out" / "results.csv").read_text().splitlines()
    assert lines[0] == "n,p,beta,kind,ks,w1,runtime_ms,seed"
    for line in lines[1:]:
        n, p, beta, kind, ks, w1, runtime, seed = line.split(",")
        assert (int(n), int(p), float(beta)) == (64, 2, 2.0)
        assert kind in ALL_TARGETS
        assert 0.0 <= float(ks) <= 1.0 and float(w1) >= 0.0
        assert runtime == "0"
        int(seed)


def test_grid_workers_match_serial(tmp_path):
    serial = run_grid(small_config(tmp_path / "s"))
    threaded = run_grid(small_config(tmp_path / "t"), workers=2)
    assert [(r.n, r.p, r.kind, r.ks, r.w1) for r in serial] == \
           [(r.n, r.p, r.kind, r.ks, r.w1) for r in threaded]
    assert (tmp_path / "s" / "out" / "results.csv").read_bytes() == \
           (tmp_path / "t" / "out" / "results.csv").read_bytes()


def test_ga_distance_trend_in_n():
    # Table-style qualitative check: for beta = 2 the Gaussian approximation
    # distance does not degrade as n grows (within Monte-Carlo noise).
    spec_small = toeplitz_spec(2.0, 2, truncation=200 * 200)
    spec_large = toeplitz_spec(2.0, 2, truncation=500 * 500)
    small, _ = run_cell(spec_small, n=200, replicates=100, seed=31,
                        targets=("cov_ga",))
    large, _ = run_cell(spec_large, n=500, replicates=100, seed=31,
                        targets=("cov_ga",))
    assert large[0].ks <= small[0].ks + 0.1


def test_grid_survives_whole_cell_failure(tmp_path):
    # an impossible fixed block length kills one cell; the grid keeps going
    config = small_config(tmp_path, grid_n=[4, 64], grid_p=[2],
                          block_rule=FixedBlocks(8), replicates=3)
    results = run_grid(config)
    assert {r.n for r in results} == {64}
    skipped = (tmp_path / "out" / "skipped.csv").read_text().splitlines()
    assert skipped[0] == "n,p,beta,kind,reason"
    assert all(line.startswith("4,2,2,") for line in skipped[1:])
    assert len(skipped) == 3  # both targets of the dead cell


def test_parse_structure_and_block_rule():
    build = parse_structure("banded:3")
    spec = build(2.0, 5, 100)
    assert spec.bandwidth == 3
    with pytest.raises(ValueError):
        parse_structure("circulant")
    assert parse_block_rule("default").__class__.__name__ == "DefaultBlocks"
    assert parse_block_rule("fixed:34").l == 34
    rule = parse_block_rule("theoretical:0.5:2.0")
    assert (rule.epsilon, rule.scale) == (0.5, 2.0)
    with pytest.raises(ValueError):
        parse_block_rule("adaptive")


def test_failed_reference_marks_skip(tmp_path):
    # p above the dense cap: GA targets skipped, bootstrap still reported
    spec = toeplitz_spec(2.0, 2, truncation=10_000)
    results, skipped = run_cell(spec, n=64, replicates=10, seed=3,
                                block_rule=FixedBlocks(8))
    assert not skipped  # sanity: the normal cell has none

    import lrdcov.harness as H
    original = H.gaussian_long_run_covariance

    def boom(truth, n):
        from lrdcov.errors import DimensionTooLargeError
        raise DimensionTooLargeError("forced failure")

    H.gaussian_long_run_covariance = boom
    try:
        results, skipped = run_cell(spec, n=64, replicates=10, seed=3,
                                    block_rule=FixedBlocks(8),
                                    targets=("cov_ga", "cov_boot"))
    finally:
        H.gaussian_long_run_covariance = original
    assert [r.kind for r in results] == ["cov_boot"]
    assert [s.kind for s in skipped] == ["cov_ga"]
    assert "forced failure" in skipped[0].reason
