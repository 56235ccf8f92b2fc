import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cornergrowth.exceptions import DataError, DomainError, InvalidParametersError
from cornergrowth.params import ParamPair, RowConstant
from cornergrowth.shape import rost_spec
from cornergrowth.verify import (EmpiricalCdf, RegionRaster, burke_check, exit_profile, expsum_concentration,
                                 hausdorff, ks_critical, ks_exponential, ks_two_sample, limit_shape_check,
                                 permutation_check, predicted_raster, rains_check, tail_profile, wilson,
                                 write_csv, write_verdicts)

SQUARES = lambda i: i.astype(float) ** 2  # noqa: E731


def three(a) -> ParamPair:
    return ParamPair(RowConstant(a), RowConstant([0.4, 0.6, 0.5]))


def test_ks_critical_value():
    assert ks_critical(0.001) == pytest.approx(1.9495, abs=1e-4)


def test_ks_exponential_examples():
    rng = np.random.default_rng(1)
    x = rng.exponential(1 / 1.5, 10_000)
    r = ks_exponential(x, 1.5)
    assert r.passed and r.statistic < 1.95 / math.sqrt(1e4)
    assert not ks_exponential(rng.exponential(1 / 3.0, 10_000), 1.5).passed
    r = ks_exponential(np.full(500, 0.7), 1.0)
    assert r.statistic >= 0.5 and not r.passed
    assert 0.0 <= r.statistic <= 1.0


def test_ks_exponential_errors():
    with pytest.raises(DataError):
        ks_exponential(np.ones(50), 1.0)
    with pytest.raises(DataError):
        ks_exponential(np.r_[np.ones(200), -0.5], 1.0)
    with pytest.raises(DomainError):
        ks_exponential(np.ones(200), 0.0)


def test_empirical_cdf_and_wilson():
    F = EmpiricalCdf([3.0, 1.0, 2.0, 2.0])
    assert F(0.5) == 0.0 and F(2.0) == 0.75 and F(9.0) == 1.0
    lo, hi = wilson(30, 1000)
    assert lo < 0.03 < hi
    assert wilson(0, 1000)[0] == 0.0


def test_burke_examples():
    pp = ParamPair.homogeneous(cap=50)
    res = burke_check(pp, 50, 50, 0.0, seed=0, rows=(1,), cols=(1,))
    assert res.passed
    wrong = burke_check(pp, 50, 50, 0.0, seed=0, rows=(1,), cols=(), reference_z=0.3)
    assert not wrong.reports[0].passed
    one = burke_check(ParamPair.homogeneous(0.7, 0.4, cap=1), 1, 1, 0.1, seed=2, rows=(1,), cols=(1,))
    assert one.passed
    with pytest.raises(DomainError):
        burke_check(pp, 10, 10, 0.0, seed=0, rows=(11,))


def test_permutation_examples():
    pp = three([0.3, 0.7, 0.5])
    r = permutation_check(pp, three([0.5, 0.3, 0.7]), 3, 3, seed=1)
    assert r.passed
    same = permutation_check(pp, pp, 3, 3, seed=1, replicas=2000, independent=False)
    assert same.statistic == 0.0
    bad = permutation_check(pp, three([0.3, 0.7, 0.2]), 3, 3, seed=1, strict=False)
    assert not bad.passed
    with pytest.raises(InvalidParametersError):
        permutation_check(pp, three([0.3, 0.7, 0.2]), 3, 3, seed=1)


@pytest.fixture(scope="module")
def tail_samples():
    from cornergrowth.lpp import lpp_batch
    pp = ParamPair.homogeneous(cap=200)
    return pp, lpp_batch(pp.a.row(200), pp.b.row(200), 0, 2000)


def test_tail_profile_right(tail_samples):
    pp, x = tail_samples
    tp = tail_profile(pp, 200, 200, [0, 1, 2, 3], replicas=2000, samples=x)
    assert tp.nonincreasing
    assert tp.below_half_at_1
    # P{G >= M}: the centred value sits on the upper tail of the fluctuation law
    assert 0.01 <= tp.rows[0].frequency <= 0.06


def test_tail_profile_left(tail_samples):
    pp, x = tail_samples
    tp = tail_profile(pp, 200, 200, [0, 1, 2, 3], replicas=2000, side="left", samples=x)
    assert tp.nonincreasing
    far = tail_profile(pp, 200, 200, [0, 1], replicas=2000, side="left", samples=x, center_shift=-400)
    assert all(r.frequency == 0.0 for r in far.rows)
    with pytest.raises(InvalidParametersError):
        tail_profile(pp, 200, 200, [0], replicas=100)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8))
def test_tail_monotone_exactly(s_grid):
    rng = np.random.default_rng(0)
    pp = ParamPair.homogeneous(cap=5)
    x = 20 + 3 * rng.standard_normal(1000)
    for side in ("right", "left"):
        tp = tail_profile(pp, 5, 5, s_grid, replicas=1000, side=side, samples=x)
        assert tp.nonincreasing


def test_exit_profile():
    pp = ParamPair.homogeneous(cap=200)
    e = exit_profile(pp, 200, 200, seed=0, replicas=1000)
    assert e.z == pytest.approx(0.0, abs=1e-12)
    assert e.median_max_exit <= 200**0.75
    assert e.both_positive == 0
    # near the right end the vertical boundary weights dominate and pin the exit there
    pinned = exit_profile(pp, 200, 200, seed=0, replicas=200, z=0.49)
    assert sum(c for k, c in pinned.hist_ver.items() if k > 50) / 200 >= 0.9
    pinned = exit_profile(pp, 200, 200, seed=0, replicas=200, z=-0.49)
    assert sum(c for k, c in pinned.hist_hor.items() if k > 50) / 200 >= 0.9


def test_exit_profile_unit_grid():
    e = exit_profile(ParamPair.homogeneous(cap=1), 1, 1, seed=0, replicas=300)
    assert set(e.hist_hor) <= {0, 1} and set(e.hist_ver) <= {0, 1}
    assert e.hist_hor.get(1, 0) + e.hist_ver.get(1, 0) == 300


def seg(length, extent=2.2, h=0.01):
    return RegionRaster.from_predicate(lambda x, y: (x == 0) & (y <= length + 1e-9), extent, h)


def test_hausdorff_examples():
    a, b = seg(1.0), seg(2.0)
    assert hausdorff(a, a) == 0.0
    assert hausdorff(a, b) == pytest.approx(1.0, abs=0.01)
    sq = RegionRaster.from_predicate(lambda x, y: (x <= 1) & (y <= 1), 1.5, 0.01)
    fat = RegionRaster.from_predicate(lambda x, y: (x <= 1.1 + 1e-9) & (y <= 1.1 + 1e-9), 1.5, 0.01)
    assert hausdorff(sq, fat) == pytest.approx(math.hypot(0.1, 0.1), abs=0.02)
    fat_round = RegionRaster.from_predicate(
        lambda x, y: np.hypot(np.maximum(x - 1, 0), np.maximum(y - 1, 0)) <= 0.1 + 1e-9, 1.5, 0.01)
    assert hausdorff(sq, fat_round) == pytest.approx(0.1, abs=0.02)


def test_hausdorff_errors():
    empty = RegionRaster(np.zeros((11, 11), dtype=bool), 0.1)
    full = RegionRaster(np.ones((11, 11), dtype=bool), 0.1)
    with pytest.raises(DataError):
        hausdorff(empty, full)
    with pytest.raises(InvalidParametersError):
        hausdorff(full, RegionRaster(np.ones((12, 12), dtype=bool), 0.1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_hausdorff_metric(seed):
    rng = np.random.default_rng(seed)
    rs = []
    for _ in range(3):
        m = rng.random((16, 16)) < rng.uniform(0.02, 0.5)
        m[rng.integers(16), rng.integers(16)] = True
        rs.append(RegionRaster(m, 0.1))
    a, b, c = rs
    assert hausdorff(a, b) == hausdorff(b, a)
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12


def test_predicted_raster_self_distance():
    p = predicted_raster(rost_spec(), 1.1, 1.1 / 200)
    assert hausdorff(p, p) == 0.0


def test_limit_shape_small():
    pp = ParamPair.homogeneous(cap=700)
    res = limit_shape_check(pp, rost_spec(), [100.0, 300.0], 700, seed=1, h=1.1 / 200)
    assert [r.t for r in res] == [100.0, 300.0]
    assert all(r.distance < 0.25 for r in res)


def test_expsum_examples():
    rows, mono = expsum_concentration(np.ones(100), 20_000, [0, 1, 2, 3], seed=0)
    assert mono
    assert rows[0].frequency == 1.0
    assert rows[3].frequency <= 0.02
    rows, mono = expsum_concentration(np.arange(1, 101), 20_000, [4], seed=0)
    assert rows[0].frequency <= 0.01
    with pytest.raises(DomainError):
        expsum_concentration([1.0, 0.0], 10, [1])


def test_rains_corner_is_sup():
    from cornergrowth.lpp import lpp_from_vectors
    a = np.repeat(np.arange(1, 6) ** 2.0, 10)
    g = lpp_from_vectors(a, a, 0, 0, "full")
    assert g.G.max() == g.corner


def test_rains_trend():
    err = {n: np.mean([rains_check(SQUARES, SQUARES, n, 20, s, 2.001e-6, 10**6).rel_error
                       for s in range(4)]) for n in (25, 100)}
    assert err[100] < err[25]


def test_reports_written(tmp_path):
    r = ks_exponential(np.random.default_rng(0).exponential(size=500), 1.0, check="demo")
    out = write_verdicts(tmp_path / "v.json", [r])
    data = json.loads((tmp_path / "v.json").read_text())
    assert data == out and set(data[0]) == {"check", "statistic", "threshold", "pass"}
    write_csv(tmp_path / "t.csv", ["a", "b"], [(1, 0.5), (2, True)])
    assert (tmp_path / "t.csv").read_text() == "a,b\n1,0.5\n2,true\n"


def test_two_sample_identical():
    x = np.arange(200.0)
    assert ks_two_sample(x, x).statistic == 0.0
