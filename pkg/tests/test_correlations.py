import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest import approx

from conftest import HIGH_GAIN, LOW_GAIN
from pdcslit.correlations import (
    Beam,
    StimulatedInput,
    build_kernels,
    clamp_nonnegative,
    correlation_map,
    g1_stimulated,
    g2_spontaneous,
    g2_stimulated,
    g2_stimulated_complex,
    kernel_sums,
    m_kernel,
    n_kernel,
    w_amplitude,
)
from pdcslit.gain import CrystalParams, CrystalType, gain_pair
from pdcslit.kernels import QuadratureSpec, omega_collapse
from pdcslit.limits import fringe_visibility, g2_broadband, local_maxima, local_minima
from pdcslit.slit import DetectionGrid, SlitGeometry, coherent_g2, slit_spectrum

GEOM = SlitGeometry(0.2)
SMALL = QuadratureSpec(q_halfwidth=6.0, q_points=240)


def small_kernels(g=0.8, d0=0.0, q0=1.0, ctype="I"):
    return omega_collapse(CrystalParams(g=g, delta0=d0, q0_norm=q0, crystal_type=ctype), SMALL)


def test_zero_gain_vanishes(geom):
    k = small_kernels(g=0.0)
    x = np.linspace(-0.5, 0.5, 11)
    assert not np.any(m_kernel(k, geom, x, x[::-1]))
    assert not np.any(n_kernel(k, geom, x, x))
    assert not np.any(g2_spontaneous(k, geom, x, -x))


def test_broadband_m_flat(broadband, geom, x401):
    m = m_kernel(broadband, geom, x401, x401)
    assert np.max(np.abs(m / broadband.eta_hat - 1)) < 0.01


def test_broadband_n_matches_limit(broadband, geom):
    x1 = np.linspace(-0.6, 0.6, 25)
    x2 = 0.37 - x1[::-1]
    n = n_kernel(broadband, geom, x1, x2)
    ref = broadband.xi_hat * slit_spectrum(x1 + x2, geom)
    assert np.max(np.abs(n - ref)) < 0.01 * abs(broadband.xi_hat)


def test_narrowband_m_factorizes(narrowband, geom):
    x1 = np.linspace(-1, 1, 81)
    x2 = np.full_like(x1, 0.03)
    m = m_kernel(narrowband, geom, x1, x2)
    model = slit_spectrum(x1, geom) * slit_spectrum(x2, geom)
    scale = np.dot(m, model) / np.dot(model, model)
    assert np.max(np.abs(m - scale * model)) < 0.01 * np.max(np.abs(m))


def test_n_symmetry_exact(moderate, geom):
    assert n_kernel(moderate, geom, 0.3, -0.1) == n_kernel(moderate, geom, -0.1, 0.3)
    x = np.linspace(-1, 1, 41)
    assert np.array_equal(n_kernel(moderate, geom, x, x[::-1]), n_kernel(moderate, geom, x[::-1], x))


def test_position_symmetry_exact(moderate, geom):
    rng = np.random.default_rng(3)
    x1, x2 = rng.uniform(-1, 1, (2, 50))
    for ctype in ("I", "II"):
        assert np.array_equal(g2_spontaneous(moderate, geom, x1, x2, ctype),
                              g2_spontaneous(moderate, geom, x2, x1, ctype))


def test_type_difference_is_m_squared(moderate, geom):
    rng = np.random.default_rng(4)
    x1, x2 = rng.uniform(-1, 1, (2, 40))
    diff = g2_spontaneous(moderate, geom, x1, x2, "I") - g2_spontaneous(moderate, geom, x1, x2, "II")
    m = m_kernel(moderate, geom, x1, x2)
    assert diff == approx(m**2, rel=1e-12, abs=1e-14)
    assert np.all(diff >= 0)


@pytest.mark.parametrize("ctype", ["I", "II"])
def test_broadband_diagonal_matches_limit(broadband, geom, x401, ctype):
    num = g2_spontaneous(broadband, geom, x401, x401, ctype)
    ref = g2_broadband(broadband.eta_hat, broadband.xi_hat, geom, x401, x401, ctype)
    assert np.max(np.abs(num / ref - 1)) < 0.01


def test_broadband_sub_wavelength_period(broadband, geom, x401):
    from pdcslit.limits import fringe_spacing

    step = x401[1] - x401[0]
    g2 = g2_spontaneous(broadband, geom, x401, x401)
    two = fringe_spacing(x401, g2 - g2.min(), window=0.45)
    one = fringe_spacing(x401, slit_spectrum(x401, geom) ** 2, window=0.45)
    assert two == approx(geom.rho / 2, abs=step)
    assert two / one == approx(0.5, abs=step / one)


def test_kernel_sums_scalar_and_array(moderate, geom):
    s = kernel_sums(moderate, geom, 0.2, -0.3)
    a = kernel_sums(moderate, geom, np.array([0.2]), np.array([-0.3]))
    for key in s:
        assert np.ravel(s[key])[0] == a[key][0]


def test_build_kernels_q_window_settles(geom):
    k = build_kernels(CrystalParams(g=0.5, q0_norm=0.5), geom)
    wider = omega_collapse(k.params, QuadratureSpec(q_halfwidth=2 * k.q_grid[-1],
                                                    q_points=4 * (k.q_grid.size // 2)))
    assert m_kernel(wider, geom, 0.0, 0.0) == approx(m_kernel(k, geom, 0.0, 0.0), rel=1e-5)


# -- stimulated ---------------------------------------------------------------

def test_w_amplitude_normal_incidence(geom):
    p = CrystalParams(g=HIGH_GAIN, q0_norm=2.0)
    x = np.linspace(-1, 1, 201)
    inp = StimulatedInput(1.0, 0.0)
    pair = gain_pair(p, 0.0, 0.0)
    w = w_amplitude(p, geom, inp, x, Beam.TYPE_I)
    assert np.abs(w) ** 2 == approx(abs(pair.u + pair.v) ** 2 * slit_spectrum(x, geom) ** 2, rel=1e-12)


def test_w_amplitude_without_gain(geom):
    p = CrystalParams(g=0.0)
    x = np.linspace(-1, 1, 201)
    inp = StimulatedInput(2.0, 0.4)
    ws = w_amplitude(p, geom, inp, x, "signal")
    assert np.abs(ws) ** 2 == approx(2.0 * slit_spectrum(x - 0.4, geom) ** 2, rel=1e-12, abs=1e-300)
    assert not np.any(w_amplitude(p, geom, inp, x, "idler"))
    with pytest.raises(ValueError):
        w_amplitude(p, geom, inp, x, "summed")


def test_separated_fringes_peak_ratio(geom):
    # large bandwidth keeps the mismatch at Q_in = 3 negligible
    p = CrystalParams(g=HIGH_GAIN, q0_norm=1e3)
    inp = StimulatedInput(1.0, 3.0)
    w = w_amplitude(p, geom, inp, np.array([3.0, -3.0]), Beam.TYPE_I)
    ratio = abs(w[0]) ** 2 / abs(w[1]) ** 2
    assert ratio == approx(np.cosh(HIGH_GAIN) ** 2 / np.sinh(HIGH_GAIN) ** 2, rel=1e-4)
    # at q0_norm = 2 the ratio follows the off-axis gain instead
    p2 = CrystalParams(g=HIGH_GAIN, q0_norm=2.0)
    pair = gain_pair(p2, 3.0, 0.0)
    w2 = w_amplitude(p2, geom, inp, np.array([3.0, -3.0]), Beam.TYPE_I)
    assert abs(w2[0]) ** 2 / abs(w2[1]) ** 2 == approx(abs(pair.u) ** 2 / abs(pair.v) ** 2, rel=1e-12)


def test_g1_reduces_to_m(moderate, geom):
    x = np.linspace(-1, 1, 51)
    p = moderate.params
    inp = StimulatedInput(0.0, 1.1)
    m = m_kernel(moderate, geom, x, x)
    assert np.array_equal(g1_stimulated(p, moderate, geom, inp, x, Beam.TYPE_I), m)
    assert np.array_equal(g1_stimulated(p, moderate, geom, inp, x, Beam.SUMMED), 2 * m)


def test_type_one_fringe_offset(moderate, geom):
    """Folded fringes interfere destructively at some injection angles."""
    p = moderate.params
    x = np.linspace(-0.1, 0.1, 41)

    def central_visibility(q_in):
        return fringe_visibility(g1_stimulated(p, moderate, geom, StimulatedInput(1.0, q_in), x,
                                               Beam.TYPE_I))

    v0 = central_visibility(0.0)
    scan = [central_visibility(q) for q in np.linspace(0.0, 1.0, 41)]
    assert min(scan) < v0 - 0.05


def test_type_two_summed_alternates(geom):
    k = build_kernels(CrystalParams(g=HIGH_GAIN, q0_norm=2.0, crystal_type="II"), geom)
    q_in = np.linspace(0.0, 1.0, 101)
    centre = np.array([g1_stimulated(k.params, k, geom, StimulatedInput(1.0, q), 0.0, Beam.SUMMED)
                       for q in q_in])
    # the centre is bright at q_in = 0, 0.2, ... and dark in between
    assert len(local_maxima(centre)) >= 3 and len(local_minima(centre)) >= 3


def test_g2_stimulated_reductions(moderate, geom):
    rng = np.random.default_rng(5)
    x1, x2 = rng.uniform(-1, 1, (2, 60))
    p = moderate.params
    for ctype in ("I", "II"):
        a = g2_stimulated(p, moderate, geom, StimulatedInput(0.0, 0.7), x1, x2, ctype)
        b = g2_spontaneous(moderate, geom, x1, x2, ctype)
        assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(b)))
    k0 = small_kernels(g=0.0)
    inp = StimulatedInput(1.0, 0.35)
    a = g2_stimulated(k0.params, k0, geom, inp, x1, x2, "I")
    ref = coherent_g2(x1 - 0.35, x2 - 0.35, geom)
    assert np.max(np.abs(a - ref)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(-6, 6), st.floats(0.2, 5.0), st.floats(0.0, 2.0),
       st.floats(0.0, 3.0), st.sampled_from(["I", "II"]))
def test_hermiticity(g, d0, q0, amp, q_in, ctype):
    k = small_kernels(g, d0, q0, ctype)
    rng = np.random.default_rng(11)
    x1, x2 = rng.uniform(-1, 1, (2, 20))
    out = g2_stimulated_complex(k.params, k, GEOM, StimulatedInput(amp, q_in), x1, x2)
    scale = max(1.0, np.max(np.abs(out)))
    assert np.max(np.abs(out.imag)) <= 1e-10 * scale
    assert np.min(out.real) >= -1e-12 * scale


def test_fig6b_mirror_symmetry(geom):
    k = build_kernels(CrystalParams(g=HIGH_GAIN, q0_norm=2.0), geom)
    x = np.linspace(-1, 1, 401)
    for q_in in (0.0, 0.45, 1.7):
        vals = g2_stimulated(k.params, k, geom, StimulatedInput(1.0, q_in), x, -x)
        assert np.max(np.abs(vals - vals[::-1])) <= 1e-9 * np.max(vals)


def test_clamp():
    assert np.array_equal(clamp_nonnegative([-1e-15, 2.0]), [0.0, 2.0])
    with pytest.raises(ArithmeticError):
        clamp_nonnegative([-1e-3, 1.0])


@pytest.mark.parametrize("threads", [2, 8])
def test_thread_count_does_not_change_bits(moderate, geom, threads):
    x = np.linspace(-1, 1, 401)
    p = moderate.params
    inp = StimulatedInput(1.0, 0.6)
    for fn in (lambda t: g2_spontaneous(moderate, geom, x, -x, "I", t),
               lambda t: g2_stimulated(p, moderate, geom, inp, x, x, "II", t),
               lambda t: g1_stimulated(p, moderate, geom, inp, x, Beam.SUMMED, t)):
        assert fn(1).tobytes() == fn(threads).tobytes()


def test_correlation_map(moderate, geom):
    grid = DetectionGrid.uniform(-1, 1, 21, "full")
    cm = correlation_map("g2", moderate.params, geom, grid, kernels=moderate)
    assert cm.values.shape == (21, 21)
    assert np.array_equal(cm.values, cm.values.T)
    assert cm.meta["theta_convention"].startswith("constant")
    assert cm.meta["eta_hat"] == moderate.eta_hat
    g1 = correlation_map("g1", moderate.params, geom, DetectionGrid.uniform(-1, 1, 21), kernels=moderate,
                         inp=StimulatedInput(1.0, 0.2))
    assert g1.meta["beam"] == "typeI"
    with pytest.raises(ValueError):
        correlation_map("g3", moderate.params, geom, grid, kernels=moderate)


def test_broadband_signature(broadband):
    assert broadband.params.crystal_type is CrystalType.TYPE_I
    assert broadband.params.g == LOW_GAIN
