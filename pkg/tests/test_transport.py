import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavityarray.core import ArrayParams, ParameterError, derive_rates
from cavityarray.transport import (BandEdgeError, band_grid, local_amplitudes,
                                   local_amplitudes_array, spectrum, t_max,
                                   t_max_from_zeta, total_transmission, wavevector_of)

from conftest import REF_Q, REF_XI

mpmath.mp.dps = 40


def mp_rates(n=60, xi=REF_XI, q=REF_Q):
    xi = mpmath.mpf(xi)
    gamma = 2 / mpmath.mpf(q)
    kappa = xi * gamma  # 2 alpha gamma with omega_c = 1
    return n, xi, gamma, kappa


def test_wavevector_examples():
    p = ArrayParams(n_cavities=4, alpha=0.1, q_factor=1e4)
    assert wavevector_of(1.0, p) == pytest.approx(np.pi / 2)
    assert wavevector_of(1.2, p) == pytest.approx(0.0, abs=1e-7)
    assert wavevector_of(1.1, p) == pytest.approx(np.pi / 3)


def test_out_of_band_is_an_error():
    p = ArrayParams(n_cavities=4, alpha=0.1, q_factor=1e4)
    for w in (1.2001, 0.79, 2.0):
        with pytest.raises(BandEdgeError):
            wavevector_of(w, p)
        with pytest.raises(BandEdgeError):
            total_transmission(w, p)


def test_lossless_array_is_transparent():
    p = ArrayParams(n_cavities=60, alpha=3.235e-4, q_factor=np.inf)
    w = band_grid(p, 1000)
    r, t = local_amplitudes_array(w, p)
    assert np.max(np.abs(r)) <= 1e-12
    assert np.max(np.abs(np.abs(t) - 1)) <= 1e-12
    assert np.max(np.abs(total_transmission(w, p) - 1)) <= 1e-12


def test_centre_local_transmission_against_high_precision(ref_params):
    _, xi, g, k = mp_rates()
    oracle = (xi ** 2 + k ** 2) / ((g + xi) ** 2 + k ** 2)
    amp = local_amplitudes(1.0, ref_params)
    assert abs(amp.t) ** 2 == pytest.approx(float(oracle), rel=1e-12)
    # about 0.994403 (gamma/xi = 2.81017e-3)
    assert abs(amp.t) ** 2 == pytest.approx(0.994403, abs=1e-6)


def test_centre_total_transmission_against_high_precision(ref_params):
    n, xi, g, k = mp_rates()
    oracle = ((xi ** 2 + k ** 2) / ((g + xi) ** 2 + k ** 2)) ** n
    assert total_transmission(1.0, ref_params) == pytest.approx(float(oracle), rel=1e-12)
    # kappa^2 terms are negligible: same as (1 + gamma/xi)^(-2N) to 1e-9
    assert total_transmission(1.0, ref_params) == pytest.approx(
        float((1 + g / xi) ** (-2 * n)), abs=1e-9)


def test_band_edge_transmission_vanishes(ref_params):
    edge = 1 + REF_XI
    amp = local_amplitudes(edge, ref_params)
    assert amp.t == 0
    assert total_transmission(edge, ref_params) == 0
    assert total_transmission(1 - REF_XI, ref_params) == 0


def test_spectrum_discrete_grid():
    p = ArrayParams(n_cavities=3, alpha=0.01, q_factor=1e5)
    curve = spectrum(p, "discrete")
    assert curve.kind == "discrete"
    expected = np.sort(1 + 0.02 * np.cos(np.arange(1, 4) * np.pi / 4))
    assert curve.omega == pytest.approx(expected, abs=1e-15)
    assert len(curve.points) == 3


def test_spectrum_continuous_shape(ref_params):
    curve = spectrum(ref_params, "continuous", 801)
    assert np.all(np.diff(curve.omega) > 0)
    assert np.all((curve.transmission >= 0) & (curve.transmission <= 1))
    ends = curve.transmission[[0, -1]]
    half = len(curve.transmission) // 2
    assert ends[0] == curve.transmission[:half].min()
    assert ends[1] == curve.transmission[half:].min()
    finer = spectrum(ref_params, "continuous", 80001).transmission[[0, -1]]
    assert np.all(finer < ends) and np.all(finer < 1e-6)
    step = curve.omega[1] - curve.omega[0]
    assert abs(curve.omega[np.argmax(curve.transmission)] - 1.0) <= step


def test_spectrum_argument_checks(ref_params):
    with pytest.raises(ParameterError):
        spectrum(ref_params, "continuous", 1)
    with pytest.raises(ValueError):
        spectrum(ref_params, "dots")


def test_t_max_values(ref_params):
    n, xi, g, _ = mp_rates()
    tm = t_max(ref_params)
    assert tm.exact == pytest.approx(float((1 + g / xi) ** (-2 * n)), rel=1e-13)
    assert tm.first_order == pytest.approx(float(1 / (1 + n * g / xi) ** 2), rel=1e-13)
    assert tm.exact == pytest.approx(0.714089, abs=1e-6)
    assert tm.first_order == pytest.approx(0.732252, abs=1e-6)


def test_t_max_lossless_and_unit_ratio():
    lossless = t_max(ArrayParams(n_cavities=10, alpha=0.01, q_factor=np.inf))
    assert lossless.exact == 1.0 and lossless.first_order == 1.0
    # N gamma / xi = 1  <=>  alpha Q = N
    tm = t_max(ArrayParams(n_cavities=50, alpha=0.05, q_factor=1000.0))
    assert tm.first_order == pytest.approx(0.25, rel=1e-14)


def test_t_max_from_zeta_examples():
    assert t_max_from_zeta(71.17) == pytest.approx(1 / (1 + 1 / 71.17) ** 2, rel=1e-15)
    assert t_max_from_zeta(71.17) == pytest.approx(0.9724, abs=1e-4)
    assert t_max_from_zeta(1.0) == 0.25
    assert t_max_from_zeta(1e12) == pytest.approx(1.0, abs=1e-11)
    for bad in (0.0, -1.0):
        with pytest.raises(ParameterError):
            t_max_from_zeta(bad)


params_strategy = st.builds(
    ArrayParams,
    n_cavities=st.integers(1, 400),
    alpha=st.floats(1e-5, 0.45),
    q_factor=st.floats(150.0, 1e9),
)


@given(params_strategy)
def test_zeta_identity(params):
    zeta = derive_rates(params).zeta
    assert t_max_from_zeta(zeta) == pytest.approx(t_max(params).first_order, rel=1e-14)


@settings(max_examples=60)
@given(params_strategy, st.floats(-0.999999, 0.999999))
def test_flux_never_exceeds_one(params, c):
    w = 1 + 2 * params.alpha * c
    amp = local_amplitudes(w, params)
    flux = abs(amp.r) ** 2 + abs(amp.t) ** 2
    assert flux <= 1 + 1e-12
    # lossy arrays are strictly sub-unitary
    assert flux < 1 - 1e-12


@given(st.integers(1, 400), st.floats(1e-5, 0.45), st.floats(-0.999, 0.999))
def test_flux_equality_iff_lossless(n, alpha, c):
    params = ArrayParams(n_cavities=n, alpha=alpha, q_factor=np.inf)
    amp = local_amplitudes(1 + 2 * alpha * c, params)
    assert abs(abs(amp.r) ** 2 + abs(amp.t) ** 2 - 1) <= 1e-12


def test_t_max_monotonicity(ref_params):
    ns = [10, 30, 60, 100, 200]
    exact = [t_max(ref_params.replace(n_cavities=n)).exact for n in ns]
    assert all(a > b for a, b in zip(exact, exact[1:]))
    qs = [1e4, 1e5, 1e6, 1e7]  # gamma falls over three decades
    exact = [t_max(ref_params.replace(q_factor=q)).exact for q in qs]
    assert all(a < b for a, b in zip(exact, exact[1:]))
    xis = np.linspace(REF_XI / 10, REF_XI, 6)
    exact = [t_max(ArrayParams.from_xi(60, x, REF_Q)).exact for x in xis]
    assert all(a < b for a, b in zip(exact, exact[1:]))


def test_exact_vs_first_order_remainder(ref_params):
    r = derive_rates(ref_params)
    x = ref_params.n_cavities * r.gamma / r.xi
    assert x <= 0.5
    tm = t_max(ref_params)
    assert abs(tm.exact - tm.first_order) <= x ** 2 * tm.first_order


def _asymmetry(params, n_delta=2001):
    half = 2 * params.alpha * params.omega_c
    delta = np.linspace(0, half, n_delta + 2)[1:-1]
    plus = total_transmission(1 + delta, params)
    minus = total_transmission(1 - delta, params)
    return delta, np.abs(plus - minus) / total_transmission(1.0, params)


def test_near_symmetry_bound(ref_params):
    # stated bound: asymmetry <= 10 kappa/xi for every in-band detuning
    r = derive_rates(ref_params)
    _, asym = _asymmetry(ref_params)
    assert np.max(asym) <= 10 * r.kappa / r.xi


def test_asymmetry_follows_leading_order_estimate(ref_params):
    # d ln T / d kappa at fixed |sin| gives 4 N kappa cos / (gamma + xi sin)
    r = derive_rates(ref_params)
    delta, asym = _asymmetry(ref_params)
    c = delta / REF_XI
    s = np.sqrt(1 - c ** 2)
    mid = np.abs(c) <= 0.5
    n = ref_params.n_cavities
    t_ratio = total_transmission(1 + delta, ref_params) / total_transmission(1.0, ref_params)
    estimate = 4 * n * r.kappa * c / (r.gamma + r.xi * s) * t_ratio
    assert asym[mid] == pytest.approx(estimate[mid], rel=0.01, abs=1e-12)
