import numpy as np
import pytest

from cornergrowth.exceptions import DomainError, InsufficientExtentError, InvalidParametersError
from cornergrowth.lpp import lpp_sample, sample_weights
from cornergrowth.params import Override, ParamPair, RowConstant, Triangular
from cornergrowth.tasep import TasepSampler, flux, flux_from_heights, frame, height, trajectory

UNIT = ParamPair.homogeneous(0.5, 0.5, cap=4000)


def test_zero_time():
    g = lpp_sample(ParamPair.homogeneous(cap=20), 20, 20, 0)
    assert height(g, 5, 0.0) == 0
    assert flux(g, 3, 0.0) == 0


def test_single_row_is_running_sum():
    pp = ParamPair.homogeneous(cap=200)
    w = sample_weights(pp, 200, 1, 3).w[:, 0]
    g = lpp_sample(pp, 200, 1, 3)
    for t in (0.5, 5.0, 40.0):
        assert height(g, 1, t) == int(np.sum(np.cumsum(w) <= t))


def test_height_band_unit_rate():
    h = TasepSampler(UNIT, seed=0).height(100, 400.0)
    assert 0.18 <= h / 400 <= 0.32


def test_flux_band_unit_rate():
    f = TasepSampler(UNIT, seed=0).flux(400, 800.0)
    assert abs(f / 800 - (800 - 400) ** 2 / (4 * 800) / 800) <= 0.15 * 0.0625


def test_flux_ordering_and_height_consistency():
    pp = ParamPair.homogeneous(cap=400)
    g = lpp_sample(pp, 400, 200, 2)
    fr = frame(g, 60.0, 100, 100)
    assert np.all(np.diff(fr.F) <= 0)
    assert np.all(np.diff(fr.sigma) < 0)  # exclusion keeps particles ordered
    for i in (1, 10, 50):
        assert flux_from_heights(fr.H, i) == fr.F[i - 1]


def test_extent_errors():
    g = lpp_sample(ParamPair.homogeneous(cap=20), 20, 20, 0)
    with pytest.raises(InsufficientExtentError):
        height(g, 1, 1e6)
    with pytest.raises(DomainError):
        height(g, 21, 1.0)
    with pytest.raises(DomainError):
        height(g, 1, -1.0)
    with pytest.raises(InsufficientExtentError):
        flux(g, 1, 1e6)


def test_sampler_growth_is_consistent():
    s = TasepSampler(ParamPair.homogeneous(cap=3000), seed=5)
    h = s.height(10, 300.0)
    g = s.grid(1500, 10)
    assert h == height(g, 10, 300.0)
    f = s.flux(20, 200.0)
    g = s.grid(600, 300)
    assert f == flux(g, 20, 200.0)


def test_sampler_needs_collection_free_family():
    pp = ParamPair(Triangular(np.full(50, 0.5), [Override(3, 0.1, 1, 10)]), RowConstant.constant(0.5, 50))
    with pytest.raises(InvalidParametersError):
        TasepSampler(pp, 0)


def test_trajectory():
    ts = [0.0, 10.0, 100.0, 2000.0]
    tr = trajectory(UNIT, 3, ts, seed=1)
    assert tr[0] == (0.0, 0, -2)
    hs = [h for _, h, _ in tr]
    assert hs == sorted(hs)
    assert abs(hs[-1] / 2000 - 1.0) <= 0.1


def test_slow_column_speed():
    # b_n(j) = 0 on the first column: a single particle runs at 1 / A(0) = 1/2
    pp = ParamPair(RowConstant.constant(0.5, 6000), RowConstant.constant(0.5, 6000, [(1, 0.0)]))
    h = TasepSampler(pp, 2).height(1, 4000.0)
    assert abs(h / 4000 - 0.5) <= 0.05
