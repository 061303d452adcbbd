import math

import numpy as np
import pytest

from lctpr import FrequencyGrid, SampledFunction, autocorrelation_identity_check, continuous_lct, preset
from lctpr.continuous import parse_variant, reflect_function, shift_function
from lctpr.errors import DegenerateParameterError, QuadratureError
from lctpr.core import make_params

PARAMS = [preset("fourier"), preset("fresnel", 0.5), preset("frft", math.pi / 3)]


def indicator(t0=-1.0, t1=1.0, n=4096):
    return SampledFunction(t0, t1, np.ones(n))


def gaussian(n=4096):
    return SampledFunction.from_callable(lambda t: np.exp(-2 * t**2) * (1 + 0.3j * t), -3.0, 3.0, n)


def sinc_oracle(p, w):
    # int_{-1}^{1} exp(-i w t) dt = 2 sin(w) / w
    return p.theta * 2 * math.sin(w) / w


class TestSampledFunction:
    def test_grid_step(self):
        f = SampledFunction(0.0, 2.0, np.arange(5))
        assert abs(f.grid_step - 0.5) < 1e-15
        assert f(0.75) == pytest.approx(1.5)
        assert f(-0.1) == 0 and f(2.1) == 0

    def test_invalid(self):
        with pytest.raises(ValueError):
            SampledFunction(0.0, 1.0, [1.0])
        with pytest.raises(ValueError):
            SampledFunction(1.0, 1.0, [1.0, 2.0])


class TestContinuousLct:
    def test_zero(self):
        f = SampledFunction(-1, 1, np.zeros(64))
        assert continuous_lct(f, preset("frft", 0.4), 0.3) == 0

    def test_indicator_sinc(self):
        p = preset("fourier")
        v = continuous_lct(indicator(), p, 0.5, 4096)
        assert abs(v - sinc_oracle(p, 0.5)) / abs(sinc_oracle(p, 0.5)) < 1e-6

    def test_second_order_convergence(self):
        p = preset("fourier")
        ref = sinc_oracle(p, 0.5)
        errs = [abs(continuous_lct(indicator(n=n), p, 0.5) - ref) for n in (129, 257, 513, 1025, 2049)]
        for e0, e1 in zip(errs, errs[1:]):
            assert e1 < 1e-10 or e0 / e1 >= 3

    def test_frft_half_pi_equals_fourier(self):
        g = gaussian(1024)
        w = np.linspace(-3, 3, 7)
        a = continuous_lct(g, preset("frft", math.pi / 2), w)
        b = continuous_lct(g, preset("fourier"), w)
        assert np.max(np.abs(a - b)) < 1e-10

    def test_array_and_scalar(self):
        g = gaussian(512)
        p = preset("fresnel", 0.5)
        arr = continuous_lct(g, p, [0.2, 0.4])
        assert arr.shape == (2,) and abs(arr[0] - continuous_lct(g, p, 0.2)) < 1e-15

    def test_node_checks(self):
        with pytest.raises(QuadratureError):
            continuous_lct(gaussian(512), preset("fourier"), 0.1, nodes=100)
        with pytest.raises(DegenerateParameterError):
            continuous_lct(gaussian(512), make_params(1, 0, 0, 1), 0.1)

    def test_phase_branch_does_not_change_magnitude(self):
        g = gaussian(1024)
        p, q = make_params(1.0, 0.5, 0.0, 1.0), make_params(-1.0, -0.5, 0.0, -1.0)
        # q = -p puts theta on the other square-root branch; the kernel phase at -w
        # is unchanged, so only the branch differs
        w = np.linspace(-2, 2, 5)
        assert abs(q.theta) == pytest.approx(abs(p.theta), rel=1e-15)
        assert abs(np.angle(q.theta / p.theta)) > 0.1
        assert np.allclose(np.abs(continuous_lct(g, p, w)), np.abs(continuous_lct(g, q, -w)), rtol=1e-12)


class TestProp31:
    @pytest.mark.parametrize("p", PARAMS)
    def test_rotate(self, p):
        from lctpr import verify_prop31
        r = verify_prop31(indicator(), p, "rotate:2.1", np.linspace(-4, 4, 9), 4096)
        assert r.max_deviation < 1e-12

    def test_shift_fresnel(self):
        from lctpr import verify_prop31
        r = verify_prop31(gaussian(), preset("fresnel", 0.5), "shift:0.7", np.linspace(-4, 4, 9), 4096)
        assert r.max_deviation < 1e-7

    def test_reflect_frft(self):
        from lctpr import verify_prop31
        r = verify_prop31(gaussian(), preset("frft", math.pi / 3), "reflect", np.linspace(-4, 4, 9), 4096)
        assert r.max_deviation < 1e-7

    def test_interpolated_nodes_converge(self):
        """With nodes finer than the samples the variants differ by interpolation
        error, which shrinks as the sampling is refined."""
        from lctpr import verify_prop31
        p = preset("fresnel", 0.5)
        devs = [verify_prop31(gaussian(n), p, "shift:0.7", np.linspace(-3, 3, 7), 8192).max_deviation
                for n in (257, 1025, 4097)]
        assert devs[0] > devs[1] > devs[2] and devs[2] < 1e-6

    def test_shift_and_reflect_geometry(self):
        p = preset("fourier")
        f = indicator(0.0, 1.0, 11)
        g = shift_function(f, 0.5, p)
        assert (g.t0, g.t1) == (0.5, 1.5)
        h = reflect_function(f, p)
        assert (h.t0, h.t1) == (-1.0, -0.0)

    def test_parse_variant(self):
        assert parse_variant("rotate:2.1") == ("rotate", 2.1)
        assert parse_variant("reflect") == ("reflect", None)
        for bad in ("shift", "flip:1", "reflect:2"):
            with pytest.raises(ValueError):
                parse_variant(bad)


class TestAutocorrIdentity:
    def test_zero(self):
        r = autocorrelation_identity_check(SampledFunction(-1, 1, np.zeros(64)), preset("fourier"), [0.1, 0.5])
        assert r.max_deviation == 0

    def test_indicator_at_zero(self):
        p = preset("fourier")
        r = autocorrelation_identity_check(indicator(0.0, 1.0, 2048), p, [0.0])
        assert abs(r.autocorr[0] - abs(p.theta) ** 2) < 1e-12
        assert abs(r.intensity[0] - abs(p.theta) ** 2) < 1e-12

    @pytest.mark.parametrize("p", PARAMS)
    def test_gaussian_random_omega(self, p):
        w = np.random.default_rng(4).uniform(-4, 4, 16)
        r = autocorrelation_identity_check(gaussian(2048), p, w)
        assert r.max_deviation < 1e-5

    def test_independent_lag_integral(self):
        """Lag-by-lag brute force for a short grid against the vectorised path."""
        p = preset("fresnel", 0.5)
        f = gaussian(41)
        t = f.times
        h = t[1] - t[0]
        u = p.theta * np.exp(0.5j * p.a / p.b * t**2) * f.samples
        w = 0.8
        total = 0j
        M = t.size
        for m in range(-(M - 1), M):
            ks = [k for k in range(M) if 0 <= k + m < M]
            vals = np.array([np.conj(u[k]) * u[k + m] for k in ks])
            r = h * (vals.sum() - 0.5 * (vals[0] + vals[-1])) if len(ks) > 1 else 0.0
            wt = 0.5 * h if abs(m) == M - 1 else h
            total += wt * r * np.exp(-1j * w * m * h)
        rep = autocorrelation_identity_check(f, p, [w])
        assert abs(rep.autocorr[0] - total) < 1e-13
