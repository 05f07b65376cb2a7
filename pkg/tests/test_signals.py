import numpy as np
import pytest

from ptnlms.signals import (
    BPSK,
    WGN,
    Static,
    Switching,
    catalog_w0,
    catalog_w1,
    catalog_w2,
    catalog_w3,
    desired,
    gen_input,
    regressor,
    switching_system,
    trial_streams,
)


def test_bpsk_symbols():
    for seed in range(5):
        u = gen_input(BPSK(), 10_000, seed)
        assert set(np.unique(u)) == {-1.0, 1.0}
        assert abs(u.mean()) < 0.05


def test_wgn_variance():
    u = gen_input(WGN(1.0), 10**6, 123)
    assert 0.99 <= u.var() <= 1.01
    assert abs(u.mean()) < 5e-3


def test_wgn_scaled_variance():
    u = gen_input(WGN(4.0), 10**5, 1)
    assert u.var() == pytest.approx(4.0, rel=0.03)


def test_determinism():
    for model in (WGN(), BPSK()):
        np.testing.assert_array_equal(gen_input(model, 500, 7), gen_input(model, 500, 7))
    a = trial_streams(WGN(), 1e-2, 300, 5)
    b = trial_streams(WGN(), 1e-2, 300, 5)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_trials_differ_and_streams_are_independent():
    u0, n0 = trial_streams(WGN(), 1e-2, 1000, 0)
    u1, n1 = trial_streams(WGN(), 1e-2, 1000, 1)
    assert not np.array_equal(u0, u1)
    assert not np.array_equal(n0, n1)
    assert abs(np.corrcoef(u0, n0 / 0.1)[0, 1]) < 0.15
    assert n0.var() == pytest.approx(1e-2, rel=0.15)


def test_invalid_models():
    with pytest.raises(ValueError):
        WGN(0.0)
    with pytest.raises(ValueError):
        gen_input(WGN(), 0, 0)


class TestRegressor:
    def test_zero_prehistory(self):
        np.testing.assert_array_equal(regressor([5.0, 1.0, 2.0], 0, 3), [5.0, 0.0, 0.0])

    def test_full_window(self):
        np.testing.assert_array_equal(regressor(np.ones(10), 4, 5), np.ones(5))

    def test_shift_property(self):
        rng = np.random.default_rng(0)
        u = rng.standard_normal(200)
        for k in range(199):
            a, b = regressor(u, k, 16), regressor(u, k + 1, 16)
            assert b[0] == u[k + 1]
            np.testing.assert_array_equal(b[1:], a[:-1])


class TestSystems:
    def test_catalog_shapes(self):
        np.testing.assert_array_equal(catalog_w0(), [0.99, 0.01])
        w1 = catalog_w1()
        assert w1.size == 64 and w1[0] == 1.0 and np.count_nonzero(w1) == 1
        w2, w3 = catalog_w2(), catalog_w3()
        assert w2.size == w3.size == 100
        assert np.count_nonzero(w2) == np.count_nonzero(w3) == 6
        np.testing.assert_array_equal(np.flatnonzero(w2), np.arange(94, 100))
        np.testing.assert_array_equal(np.flatnonzero(w3), np.arange(0, 6))
        assert not set(np.flatnonzero(w2)) & set(np.flatnonzero(w3))

    def test_switch_instant(self):
        sys_ = switching_system()
        assert sys_.at(1999) is sys_.w_a
        assert sys_.at(2000) is sys_.w_b

    def test_desired(self):
        assert desired(Static(np.zeros(3)), [1.0, 2.0, 3.0], 0, 0.25) == 0.25
        w = np.array([0.5, -1.0, 2.0])
        assert desired(Static(w), w, 10, 0.0) == pytest.approx(w @ w)

    def test_support_onset(self):
        u = gen_input(WGN(), 200, 3)
        sys_ = Static(catalog_w2())
        for k in range(94):
            assert desired(sys_, regressor(u, k, 100), k, 0.0) == 0.0
        assert desired(sys_, regressor(u, 94, 100), 94, 0.0) != 0.0

    def test_switching_validation(self):
        with pytest.raises(ValueError):
            Switching(np.zeros(3), np.zeros(4), 10)
        with pytest.raises(ValueError):
            Switching(np.zeros(3), np.zeros(3), 0)
