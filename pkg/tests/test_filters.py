import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ptnlms.filters import (
    DegenerateGainError,
    FilterState,
    FixedGain,
    Identity,
    Ipnlms,
    NonFiniteError,
    Pnlms,
    PureProportional,
    StepInput,
    ZeroAttractor,
    gain_ipnlms,
    gain_pnlms,
    gain_pure_proportional,
    l0_nlms,
    step,
)

EPS = np.finfo(float).eps

weights = arrays(
    np.float64,
    st.integers(1, 64),
    elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False),
)


class TestPnlmsGain:
    def test_all_zero_uses_floor(self):
        g = gain_pnlms(np.zeros(2), 0.01, 0.01)
        np.testing.assert_array_equal(g, [0.5, 0.5])

    def test_compressible_two_tap(self):
        # rho * 0.99 = 0.0099 < 0.01, so gamma = |w|
        np.testing.assert_allclose(gain_pnlms([0.99, 0.01]), [0.99, 0.01], rtol=1e-15)

    def test_single_spike_64(self):
        w = np.zeros(64)
        w[0] = 1.0
        g = gain_pnlms(w)
        assert g[0] == pytest.approx(1 / 1.63, rel=1e-15)
        np.testing.assert_allclose(g[1:], 0.01 / 1.63, rtol=1e-15)
        assert g.sum() == pytest.approx(1.0, abs=64 * EPS)

    def test_invalid_constants(self):
        with pytest.raises(ValueError):
            gain_pnlms([1.0], 0.0, 0.01)
        with pytest.raises(ValueError):
            Pnlms(0.01, -1.0)

    @given(weights)
    def test_normalized_and_positive(self, w):
        g = gain_pnlms(w)
        assert np.all(g > 0)
        assert abs(g.sum() - 1.0) <= w.size * EPS


class TestIpnlmsGain:
    def test_alpha_minus_one_is_uniform(self):
        for w in ([0, 0, 0, 0], [5, -1, 0, 2]):
            np.testing.assert_array_equal(gain_ipnlms(w, -1.0, 0.0), 0.25)
            np.testing.assert_array_equal(gain_ipnlms(w, -1.0, 3.0), 0.25)

    def test_alpha_zero(self):
        np.testing.assert_allclose(gain_ipnlms([1.0, 1.0], 0.0, 0.0), [0.5, 0.5], rtol=1e-15)

    def test_alpha_minus_half(self):
        # (1 - a)/(2*2) = 0.375, (1 + a)/(2*||w||_1) = 0.25
        np.testing.assert_allclose(gain_ipnlms([1.0, 0.0], -0.5, 0.0), [0.625, 0.375], rtol=1e-15)

    def test_zero_weights_without_regularizer(self):
        with pytest.raises(DegenerateGainError):
            gain_ipnlms(np.zeros(3), -0.5, 0.0)
        # with a regularizer only the NLMS term survives
        np.testing.assert_allclose(gain_ipnlms(np.zeros(4), -0.5, 0.01), 1.5 / 8)

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            Ipnlms(alpha=1.0)
        with pytest.raises(ValueError):
            gain_ipnlms([1.0], -1.5, 0.0)

    @given(weights, st.floats(-1.0, 0.999))
    def test_normalized_and_positive(self, w, alpha):
        if not np.abs(w).sum() > 0:
            return
        g = gain_ipnlms(w, alpha, 0.0)
        assert np.all(g > 0)
        assert abs(g.sum() - 1.0) <= 4 * w.size * EPS


class TestPureProportional:
    def test_examples(self):
        np.testing.assert_allclose(gain_pure_proportional([0.99, 0.01]), [0.99, 0.01], rtol=1e-15)
        np.testing.assert_array_equal(gain_pure_proportional([1.0, 0.0, 0.0]), [1, 0, 0])
        np.testing.assert_array_equal(gain_pure_proportional([-2.0, 2.0]), [0.5, 0.5])

    def test_zero_vector(self):
        with pytest.raises(DegenerateGainError):
            gain_pure_proportional(np.zeros(5))

    @given(weights)
    def test_monotone(self, w):
        if not np.abs(w).sum() > 0:
            return
        g = gain_pure_proportional(w)
        a = np.abs(w)
        assert abs(g.sum() - 1.0) <= w.size * EPS
        i, j = np.meshgrid(range(w.size), range(w.size))
        # division by a positive constant preserves order weakly (ties may appear by rounding)
        assert np.all(~(a[i] >= a[j]) | (g[i] >= g[j]))


class TestStep:
    def test_one_nlms_step_solves_sample(self):
        state, e, y = step(FilterState.zeros(2), StepInput(np.array([1.0, 0.0]), 1.0, 1.0, 0.0),
                           Identity())
        np.testing.assert_array_equal(state.w, [1.0, 0.0])
        assert (e, y, state.k) == (1.0, 0.0, 1)

    @given(st.floats(1e-3, 1e3), st.integers(0, 2**32 - 1))
    def test_uniform_gain_scale_invariance(self, c, seed):
        rng = np.random.default_rng(seed)
        w = rng.standard_normal(6)
        x = rng.standard_normal(6)
        inp = StepInput(x, float(rng.standard_normal()), 0.7, 0.0)
        ref, e1, _ = step(FilterState(w), inp, Identity())
        scaled, e2, _ = step(FilterState(w), inp, FixedGain(np.full(6, c)))
        assert e1 == e2
        np.testing.assert_allclose(scaled.w, ref.w, rtol=1e-12, atol=1e-12 * np.abs(ref.w).max())

    def test_scaled_nonuniform_gain(self):
        rng = np.random.default_rng(3)
        g = rng.uniform(0.1, 1.0, 5)
        w, x = rng.standard_normal(5), rng.standard_normal(5)
        inp = StepInput(x, 0.3, 0.5, 0.0)
        a, _, _ = step(FilterState(w), inp, FixedGain(g))
        b, _, _ = step(FilterState(w), inp, FixedGain(17.0 * g))
        np.testing.assert_allclose(a.w, b.w, rtol=1e-12)

    def test_pnlms_first_step_from_zero_equals_nlms(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(64)
        inp = StepInput(x, 0.8, 0.3, 0.0)
        a, _, _ = step(FilterState.zeros(64), inp, Pnlms())
        b, _, _ = step(FilterState.zeros(64), inp, Identity())
        np.testing.assert_allclose(a.w, b.w, rtol=1e-14, atol=1e-16)

    def test_ipnlms_reduces_to_nlms(self):
        rng = np.random.default_rng(11)
        w_o = rng.standard_normal(16)
        sa = sb = FilterState.zeros(16)
        for _ in range(500):
            x = rng.standard_normal(16)
            inp = StepInput(x, float(w_o @ x + 0.1 * rng.standard_normal()), 0.5, 0.0)
            sa, _, _ = step(sa, inp, Ipnlms(-1.0, 0.3))
            sb, _, _ = step(sb, inp, Identity())
            assert np.linalg.norm(sa.w - sb.w) <= 1e-12 * np.linalg.norm(sb.w)

    def test_proportional_zero_stays_zero(self):
        rng = np.random.default_rng(5)
        state = FilterState(np.array([0.7, 0.0, -0.2, 0.0]))
        for _ in range(50):
            x = rng.standard_normal(4)
            state, _, _ = step(state, StepInput(x, float(rng.standard_normal()), 0.9, 0.0),
                               PureProportional())
            assert state.w[1] == 0.0 and state.w[3] == 0.0

    def test_zero_attractor_form(self):
        za = ZeroAttractor(2e-3, 5.0)
        w = np.array([0.3, -0.3, 0.0, 2.0])
        expect = w - 2e-3 * 5.0 * np.sign(w) * np.exp(-5.0 * np.abs(w))
        np.testing.assert_array_equal(za.apply(w), expect)
        assert za.apply(np.zeros(1))[0] == 0.0  # sgn(0) = 0

    def test_l0_attractor_applied_after_update(self):
        x = np.array([1.0, 0.0])
        rule = l0_nlms()
        state, e, _ = step(FilterState.zeros(2), StepInput(x, 1.0, 1.0, 0.0), rule)
        # NLMS step gives [1, 0]; attractor shrinks the first entry only
        assert state.w[0] == pytest.approx(1.0 - 0.01 * np.exp(-5.0), rel=1e-15)
        assert state.w[1] == 0.0

    def test_nonfinite_input(self):
        with pytest.raises(NonFiniteError):
            step(FilterState.zeros(2), StepInput(np.array([np.nan, 0.0]), 1.0, 0.5), Identity())
        with pytest.raises(NonFiniteError):
            step(FilterState.zeros(2), StepInput(np.ones(2), np.inf, 0.5), Identity())

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            step(FilterState.zeros(3), StepInput(np.ones(2), 1.0, 0.5), Identity())

    def test_step_input_ranges(self):
        with pytest.raises(ValueError):
            StepInput(np.ones(2), 0.0, 0.0)
        with pytest.raises(ValueError):
            StepInput(np.ones(2), 0.0, 1.5)
        with pytest.raises(ValueError):
            StepInput(np.ones(2), 0.0, 0.5, -1.0)

    def test_zero_regressor_without_regularizer(self):
        state, e, _ = step(FilterState(np.ones(3)), StepInput(np.zeros(3), 2.0, 1.0, 0.0), Pnlms())
        np.testing.assert_array_equal(state.w, np.ones(3))
        assert e == 2.0
