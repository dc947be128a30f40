"""Smoke tests for the isinggof extension module."""

import numpy as np
import pytest

import isinggof


@pytest.fixture
def example():
    grid = np.zeros((5, 5), dtype=np.uint8)
    for r, c in [(1, 1), (2, 1), (3, 1), (2, 2), (1, 3), (3, 3)]:
        grid[r, c] = 1
    return isinggof.Configuration(grid)


def test_sufficient_statistics(example):
    assert example.suff_stats() == (6, 18)
    assert example.spin_stats() == (-13, 4)
    assert sorted(example.component_sizes()) == [1, 1, 4]
    assert example.singleton_count() == 2


def test_array_round_trip(example):
    back = isinggof.Configuration(example.to_array())
    assert back == example
    assert back.t1 == 6 and back.t2 == 18


def test_swaps(example):
    before = example.suff_stats()
    delta = example.apply_swap(0, 6)
    assert example.t1 == before[0]
    assert example.t2 == before[1] + delta
    with pytest.raises(ValueError):
        example.apply_swap(0, 0)


def test_canonical_shapes():
    spec = isinggof.max_singleton_2d(18, 30)
    assert (spec.n, spec.m, spec.d1, spec.d2, spec.s) == (4, 3, 2, 1, 3)
    assert isinggof.rect_stats(spec) == (18, 30)
    assert isinggof.max_singleton_1d(5, 4) == (1, 4)
    assert isinggof.fiber_feasible(4, 8)
    assert not isinggof.fiber_feasible(4, 7)
    with pytest.raises(ValueError):
        isinggof.max_singleton_2d(4, 7)

    shape = isinggof.LatticeShape([20, 20])
    config = isinggof.realize_rect(spec, shape)
    assert config.suff_stats() == (18, 30)


def test_normalize_1d():
    cells = np.array([0, 1, 1, 0, 1, 1, 0, 0, 0], dtype=np.uint8)
    config = isinggof.Configuration(cells, boundary="zero_clamped")
    swaps = isinggof.normalize_1d(config)
    assert swaps, "non-canonical configuration needs at least one swap"
    b = config.t2
    for on, off in swaps:
        config.apply_swap(on, off)
        assert config.t2 == b


def test_oracle():
    assert isinggof.degree1_move_count(isinggof.LatticeShape([3, 3])) == 466
    shape = isinggof.LatticeShape([4, 6])
    assert isinggof.swap_graph_component_count(shape, 4, 8, expansion=0) > 1
    assert isinggof.swap_graph_component_count(shape, 4, 8, expansion=2) == 1
    fiber = isinggof.enumerate_fiber(isinggof.LatticeShape([3, 3]), 0, 0)
    assert len(fiber) == 1


def test_sampler(example):
    assert isinggof.expanded_contains(4, 10, 4, 8, d=2)
    assert not isinggof.expanded_contains(4, 12, 4, 8, d=2)
    run1 = isinggof.run_chain(example, steps=20000, burn_in=1000, thinning=10, seed=11)
    run2 = isinggof.run_chain(example, steps=20000, burn_in=1000, thinning=10, seed=11)
    assert run1["recorded_stats"] == run2["recorded_stats"]
    assert all(t == (6, 18) for t in run1["recorded_stats"])
    assert run1["acceptance_rate"] > 0


def test_generator():
    config = isinggof.generate_boltzmann([10, 10], alpha=0.0, beta=0.0, steps=5000, seed=1)
    again = isinggof.generate_boltzmann([10, 10], alpha=0.0, beta=0.0, steps=5000, seed=1)
    assert config == again
    assert 0 <= config.t1 <= 100


def test_statistics(example):
    assert isinggof.count_motif(example, isinggof.default_motif("consecutive")) == 1
    assert isinggof.count_motif(example, isinggof.Motif(["11"], "rotations")) == 3
    value = isinggof.non_homogeneity(example, pairs=50, window=2, seed=3, kind="dT12")
    assert 0.0 <= value <= 1.0


def test_inference(example):
    assert isinggof.mc_pvalue(100.0, list(range(1, 100)), "upper") == pytest.approx(0.01)
    summary = isinggof.posterior_summary([1.0, 2.0, 3.0, 4.0, 5.0])
    assert summary["mean"] == pytest.approx(3.0)
    rhat = isinggof.gelman_rubin([[float(i % 7) for i in range(100)],
                                  [float((i + 3) % 7) for i in range(100)]])
    assert rhat == pytest.approx(1.0, abs=0.2)

    report = isinggof.run_test(
        example,
        statistics=["adjacent_pairs", "dT12"],
        steps=20000,
        burn_in=2000,
        thinning=10,
        seed=5,
        chains=2,
        pairs=20,
        window=2,
    )
    assert report["fiber"] == (6, 18)
    assert len(report["statistics"]) == 2
    for entry in report["statistics"]:
        assert 0.0 < entry["p_value"] <= 1.0
