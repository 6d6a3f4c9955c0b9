import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linerouter.errors import ConfigurationError
from linerouter.sense import (
    PortSample,
    PowerAverager,
    ZeroDetector,
    inst_power,
    ma_update,
    samples_per_period,
    window_length,
    zero_detect,
)

FS, F_LINE = 12000.0, 60.0
N = 200


def feed(avg, values):
    return [avg.update(float(x)) for x in values]


class TestInstPower:
    def test_peak_of_700w_flow(self):
        # 200 Vrms, 3.5 Arms, unity pf, evaluated at the sine peak
        wt = math.pi / 2
        v = math.sqrt(2) * 200 * math.sin(wt)
        i = math.sqrt(2) * 3.5 * math.sin(wt)
        assert inst_power(PortSample(0.0, v, i)) == pytest.approx(1400.0, abs=1e-9)
        # the rounded readings quoted to five significant digits
        assert inst_power(PortSample(0.0, 282.84, 4.9497)) == pytest.approx(1400.0, abs=0.05)

    def test_zero_voltage(self):
        assert inst_power(PortSample(0.0, 0.0, 17.3)) == 0.0

    def test_reversed_current_at_30_degrees(self):
        wt = math.pi / 6
        v = math.sqrt(2) * 200 * math.sin(wt)
        i = -math.sqrt(2) * 3.5 * math.sin(wt)
        assert inst_power(PortSample(0.0, v, i)) == pytest.approx(-350.0, abs=1e-9)
        assert inst_power(PortSample(0.0, 141.42, -2.4749)) == pytest.approx(-350.0, abs=0.01)


class TestWindow:
    def test_default_is_200(self):
        assert samples_per_period(FS, F_LINE) == N
        assert window_length(FS, F_LINE, 3) == 3 * N

    def test_non_integer_ratio(self):
        with pytest.raises(ConfigurationError):
            samples_per_period(10000.0, 60.0)

    def test_fractional_periods(self):
        with pytest.raises(ConfigurationError):
            window_length(FS, F_LINE, 1.5)


class TestMovingAverage:
    def test_full_period_of_700w_ripple(self):
        k = np.arange(N)
        wt = 2 * np.pi * F_LINE * k / FS
        p = 700.0 * (1 - np.cos(2 * wt))
        out = feed(PowerAverager(N), p)
        assert out[-1] == pytest.approx(700.0, abs=1e-9)

        # independent cross-check: fine trapezoid quadrature of the same waveform
        tt = np.linspace(0.0, 1.0 / F_LINE, 2_000_001)
        mean = np.trapezoid(700.0 * (1 - np.cos(4 * np.pi * F_LINE * tt)), tt) * F_LINE
        assert mean == pytest.approx(700.0, abs=1e-6)

    def test_zeros(self):
        assert feed(PowerAverager(N), np.zeros(N))[-1] == 0.0

    def test_not_ready_until_full(self):
        a = PowerAverager(N)
        out = feed(a, np.ones(N - 1))
        assert all(x is None for x in out)
        assert not a.ready and a.average is None
        assert a.update(1.0) == 1.0

    def test_ma_update_returns_same_object(self):
        a = PowerAverager(2)
        a2, avg = ma_update(a, 3.0)
        assert a2 is a and avg is None
        _, avg = ma_update(a, 5.0)
        assert avg == 4.0

    def test_window_oldest_first(self):
        a = PowerAverager(3)
        feed(a, [1, 2, 3, 4])
        assert a.window() == [2.0, 3.0, 4.0]

    @pytest.mark.parametrize("n", [0, -3, 2.5])
    def test_bad_length(self, n):
        with pytest.raises(ConfigurationError):
            PowerAverager(n)

    def test_matches_naive_mean(self):
        rng = np.random.default_rng(7)
        x = rng.uniform(-2000, 2000, size=20 * N)
        out = feed(PowerAverager(N), x)
        for k in range(N - 1, len(x)):
            assert abs(out[k] - math.fsum(x[k - N + 1:k + 1]) / N) <= 1e-12

    def test_long_run_drift_bounded(self):
        # large offset + small signal is the worst case for a running sum
        rng = np.random.default_rng(3)
        x = 1e4 + rng.normal(0, 1, size=300 * N)
        out = feed(PowerAverager(N), x)
        assert abs(out[-1] - math.fsum(x[-N:]) / N) <= 1e-9

    def test_shift_equivariance(self):
        rng = np.random.default_rng(11)
        x = rng.normal(0, 500, size=5 * N)
        m = 37
        a = feed(PowerAverager(N), x)
        b = feed(PowerAverager(N), np.concatenate([np.zeros(m), x]))
        # once both windows hold only x-samples the outputs line up exactly
        for k in range(N - 1, len(x)):
            assert b[k + m] == pytest.approx(a[k], abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(
    vrms=st.floats(50, 400),
    irms=st.floats(0.1, 20),
    phi=st.floats(-math.pi, math.pi),
    offset=st.integers(0, 3 * N),
)
def test_sinusoid_window_gives_real_power(vrms, irms, phi, offset):
    k = np.arange(offset, offset + 2 * N)
    wt = 2 * np.pi * F_LINE * k / FS
    v = math.sqrt(2) * vrms * np.sin(wt)
    i = math.sqrt(2) * irms * np.sin(wt - phi)
    out = feed(PowerAverager(N), v * i)
    expected = vrms * irms * math.cos(phi)
    assert abs(out[-1] - expected) <= 1e-6 * max(abs(expected), 1e-3 * vrms * irms)


class TestZeroDetect:
    def test_small_negative_fires(self):
        assert zero_detect(ZeroDetector(5.0, armed=True), -3.2)

    def test_steady_charging_does_not_fire(self):
        assert not zero_detect(ZeroDetector(5.0, armed=True), -700.0)

    def test_disarmed(self):
        assert not zero_detect(ZeroDetector(5.0, armed=False), 1.0)

    def test_not_ready(self):
        assert not zero_detect(ZeroDetector(5.0, armed=True), None)

    def test_threshold_is_strict(self):
        assert not zero_detect(ZeroDetector(5.0, armed=True), 5.0)

    @pytest.mark.parametrize("eps", [0.0, -1.0])
    def test_epsilon_positive(self, eps):
        with pytest.raises(ConfigurationError):
            ZeroDetector(eps)
