import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cornergrowth.exceptions import InvalidParametersError, ParameterRangeError
from cornergrowth.params import (BlockConstant, MacroProfile, Override, ParamPair, RowConstant,
                                 Triangular, empirical_measure, family_from_config, summary)

from conftest import slow_column_pair


def test_value_row_constant():
    assert RowConstant.constant(0.5, 10).value(3, 2) == 0.5


def test_value_block_constant():
    p = BlockConstant([k * k for k in range(1, 6)], block=2)
    assert p.value(4, 3) == 4.0
    assert [p.value(10, i) for i in range(1, 11)] == [1, 1, 4, 4, 9, 9, 16, 16, 25, 25]


def test_value_slow_column():
    p = RowConstant.constant(0.5, 300, [(100, 0.0)])
    assert p.value(200, 100) == 0.0
    assert p.value(200, 99) == 0.5


def test_value_range_errors():
    p = RowConstant.constant(0.5, 10)
    for m, i in [(0, 1), (11, 1), (3, 4), (3, 0)]:
        with pytest.raises(ParameterRangeError):
            p.value(m, i)
    with pytest.raises(ParameterRangeError):
        RowConstant.constant(0.5, 10, [(11, 0.0)])


def test_row_constant_has_no_row_dependence():
    p = RowConstant(np.linspace(0.1, 1.0, 50))
    for m in (10, 20, 50):
        assert np.array_equal(p.row(m), p.row(50)[:m])


def test_triangular_overrides():
    p = Triangular(np.full(200, 0.5), [Override(50, -0.25, 1, 99), Override(100, 0.0, 100)])
    assert p.value(60, 50) == -0.25
    assert p.value(99, 50) == -0.25
    assert p.value(100, 50) == 0.5
    assert p.value(100, 100) == 0.0
    assert p.row_min(49) == 0.5
    assert p.row_min(70) == -0.25
    assert p.row_min(150) == 0.0
    np.testing.assert_array_equal(p.running_minima[[48, 69, 149]], [0.5, -0.25, 0.0])


def test_triangular_from_rows():
    p = Triangular.from_rows([[1.0], [2.0, 0.5], [3.0, 1.0, 2.0]])
    assert p.value(2, 2) == 0.5
    assert p.row_min(3) == 1.0
    with pytest.raises(InvalidParametersError):
        Triangular.from_rows([[1.0], [2.0]])


def test_macro_profile():
    p = MacroProfile([[0, 1.0], [1, 2.0]], cap=10)
    np.testing.assert_allclose(p.row(4), [1.25, 1.5, 1.75, 2.0])
    with pytest.raises(InvalidParametersError):
        MacroProfile([[0.2, 1.0], [1, 2.0]], cap=10)


def test_empirical_measure_examples():
    mu = empirical_measure(RowConstant.constant(0.5, 20), 10)
    assert mu.atoms == ((0.5, 1.0),)
    mu = empirical_measure(RowConstant.constant(0.5, 300, [(100, 0.0)]), 200)
    assert dict(mu.atoms) == {0.0: 1 / 200, 0.5: 199 / 200}
    mu = empirical_measure(BlockConstant([1, 4, 9], block=2), 4)
    assert dict(mu.atoms) == {1.0: 0.5, 4.0: 0.5}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 5.0), min_size=1, max_size=60))
def test_empirical_measure_total_mass(vals):
    p = RowConstant(vals)
    for m in range(1, len(vals) + 1):
        assert abs(empirical_measure(p, m).total_mass - 1.0) <= 1e-12


def test_summary_examples():
    s = summary(ParamPair.homogeneous(cap=10), 5, 5)
    assert s.interval == (-0.5, 0.5) and s.length == 1.0
    assert s.frakA == 0.5 and s.frakB == 0.5
    s = summary(slow_column_pair(300), 200, 200)
    assert s.min_a == 0.0 and s.frakA == 0.5
    pp = ParamPair(RowConstant.constant(0.5, 10, [(1, -0.2)]), RowConstant.constant(0.5, 10))
    s = summary(pp, 5, 5)
    assert s.interval == (0.2, 0.5)


def test_positivity_violation_names_indices():
    a = RowConstant.constant(0.5, 10, [(4, -0.6)])
    with pytest.raises(InvalidParametersError, match=r"\(4, 1, 4, 1\)"):
        ParamPair(a, RowConstant.constant(0.5, 10))


def test_truncation_flags():
    # override rows beyond the last breakpoint only append base entries: the sup is exact
    pp = ParamPair(Triangular(np.full(20, 0.5), [Override(3, 0.1, 5)]), RowConstant.constant(0.5, 20))
    assert not summary(pp, 10, 10).frakA_truncated
    pp = ParamPair(MacroProfile([[0, 0.2], [1, 1.0]], 20), RowConstant.constant(0.5, 20))
    s = summary(pp, 10, 10)
    assert s.frakA_truncated and not s.frakB_truncated


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-0.4, 2.0), min_size=2, max_size=30),
       st.lists(st.floats(0.45, 2.0), min_size=2, max_size=30))
def test_grid_minimum_equals_sum_of_minima(av, bv):
    pp = ParamPair(RowConstant(av), RowConstant(bv))
    for m in range(1, len(av) + 1, 3):
        for n in range(1, len(bv) + 1, 3):
            r = pp.rates(m, n)
            assert r.min() == pp.a.row_min(m) + pp.b.row_min(n)
            assert r.min() > 0


def test_config_round_trip():
    fams = [RowConstant.constant(0.5, 30, [(7, 0.1)]), BlockConstant([1, 4, 9], 10),
            Triangular(np.full(30, 0.5), [Override(5, 0.2, 1, 9)]), MacroProfile([[0, 1], [1, 3]], 30)]
    for f in fams:
        g = family_from_config(f.to_config())
        for m in (1, 7, 15, 30):
            np.testing.assert_array_equal(f.row(m), g.row(m))
    with pytest.raises(InvalidParametersError):
        family_from_config({"kind": "Nope"})
