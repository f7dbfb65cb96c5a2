import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_
from scipy import integrate

import levymult as lm
from levymult.exceptions import InvalidInputError, UnsupportedMeasureError
from levymult.measures import (
    dumps_measure,
    loads_measure,
    measure_from_dict,
    measure_to_dict,
    modulator_from_dict,
    modulator_to_dict,
)


def axes_measure_1d(weight=1.0):
    return lm.DiscreteLevyMeasure.from_atoms([([1.0], weight), ([-1.0], weight)])


# ---------------------------------------------------------------------------
# construction invariants
# ---------------------------------------------------------------------------

def test_rejects_origin_atom():
    with pytest.raises(InvalidInputError):
        lm.DiscreteLevyMeasure.from_atoms([([0.0], 1.0)])


def test_rejects_asymmetric_measure():
    with pytest.raises(InvalidInputError):
        lm.DiscreteLevyMeasure.from_atoms([([1.0], 1.0), ([-1.0], 2.0)])
    with pytest.raises(InvalidInputError):
        lm.DiscreteLevyMeasure.from_atoms([([1.0, 0.0], 1.0)])


def test_rejects_nonpositive_weight():
    with pytest.raises(InvalidInputError):
        lm.DiscreteLevyMeasure.from_atoms([([1.0], -1.0), ([-1.0], -1.0)])


def test_stable_validation():
    with pytest.raises(InvalidInputError):
        lm.TruncatedStableMeasure.axes(1, alpha=2.5, epsilon=1e-3)
    with pytest.raises(InvalidInputError):
        lm.TruncatedStableMeasure.axes(1, alpha=1.0, epsilon=-1.0)
    with pytest.raises(InvalidInputError):
        lm.TruncatedStableMeasure.axes(1, alpha=1.0, epsilon=2.0, outer_radius=1.0)


# ---------------------------------------------------------------------------
# characteristic exponent
# ---------------------------------------------------------------------------

def test_char_exponent_four_axis_atoms_at_pi():
    # each of the 4 atoms contributes cos(+-pi) - 1 = -2
    m = lm.DiscreteLevyMeasure.axes(2)
    assert lm.char_exponent(m, np.array([np.pi, np.pi])) == pytest.approx(-8.0, abs=1e-12)


def test_char_exponent_zero_frequency():
    for m in (lm.DiscreteLevyMeasure.axes(1),
              lm.TruncatedStableMeasure.axes(1, 1.2, 1e-3)):
        assert lm.char_exponent(m, np.zeros(m.dimension)) == 0.0


def test_char_exponent_rejects_nonfinite():
    m = lm.DiscreteLevyMeasure.axes(1)
    with pytest.raises(InvalidInputError):
        lm.char_exponent(m, np.array([np.nan]))
    with pytest.raises(InvalidInputError):
        lm.char_exponent(m, np.array([np.inf]))


def quad_radial(b, alpha):
    """Independent oracle: integral_0^inf (cos(b r) - 1) r^(-1-alpha) dr."""
    split = 2 * np.pi / b
    core, _ = integrate.quad(lambda r: (np.cos(b * r) - 1) * r ** (-1 - alpha),
                             0, split, limit=300)
    tail_cos = integrate.quad(lambda r: r ** (-1 - alpha), split, np.inf,
                              weight="cos", wvar=b, limit=300)[0]
    return core + tail_cos - split ** (-alpha) / alpha


def test_stable_alpha1_against_quadrature_oracle():
    # the alpha = 1, b = 2 radial integral equals -pi
    oracle = quad_radial(2.0, 1.0)
    assert oracle == pytest.approx(-np.pi, abs=1e-9)
    st = lm.TruncatedStableMeasure.axes(1, alpha=1.0, epsilon=1e-9)
    # both +-1 atoms contribute the same radial integral
    assert lm.char_exponent(st, np.array([2.0])) == pytest.approx(2 * oracle, rel=1e-7)


def test_stable_closed_form_constant():
    # c_1 = -pi/2: sin(pi/2) = 1 and Gamma(2) = 1
    assert lm.stable_power_coefficient(1.0) == pytest.approx(-np.pi / 2, abs=1e-14)
    st = lm.TruncatedStableMeasure.axes(1, 1.0, 1e-6)
    val = lm.char_exponent_stable_closed_form(
        1.0, np.array([2.0]), st.directions, st.angular_weights)
    assert val == pytest.approx(-2 * np.pi, abs=1e-12)


def test_stable_closed_form_alpha_half_oracle():
    # 2 * integral (cos r - 1) r^(-1.5) dr with the quadrature oracle
    oracle = 2 * quad_radial(1.0, 0.5)
    st = lm.TruncatedStableMeasure.axes(1, 0.5, 1e-6)
    val = lm.char_exponent_stable_closed_form(
        0.5, np.array([1.0]), st.directions, st.angular_weights)
    assert val == pytest.approx(oracle, rel=1e-8)
    assert lm.char_exponent_stable_closed_form(
        0.5, np.zeros(1), st.directions, st.angular_weights) == 0.0


def test_stable_closed_form_rejects_bad_alpha():
    st = lm.TruncatedStableMeasure.axes(1, 0.5, 1e-6)
    for bad in (0.0, 2.0, -1.0):
        with pytest.raises(InvalidInputError):
            lm.char_exponent_stable_closed_form(
                bad, np.ones(1), st.directions, st.angular_weights)


def test_truncated_vs_closed_form_converges():
    # the missing inner window contributes ~ b^2 eps^(2-alpha) / (2 (2-alpha))
    alpha, b = 1.3, 1.7
    closed = lm.char_exponent_stable_closed_form(
        alpha, np.array([b]),
        np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]))
    prev = None
    for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
        st = lm.TruncatedStableMeasure.axes(1, alpha, eps)
        err = abs(lm.char_exponent(st, np.array([b])) - closed)
        if prev is not None:
            assert err < prev
        rate_bound = 2 * b * b * eps ** (2 - alpha) / (2 * (2 - alpha))
        assert err <= rate_bound * 1.1
        prev = err
    assert prev < 1e-3


@settings(max_examples=40, deadline=None)
@given(st_.lists(st_.floats(-8, 8), min_size=2, max_size=2))
def test_psi_even_and_nonpositive(xi):
    m = lm.DiscreteLevyMeasure.from_atoms(
        [([1.0, 0.0], 0.5), ([-1.0, 0.0], 0.5),
         ([1.0, 1.0], 1.25), ([-1.0, -1.0], 1.25)])
    xi = np.asarray(xi)
    a = lm.char_exponent(m, xi)
    b = lm.char_exponent(m, -xi)
    assert a == b  # cosine evenness is exact in floating point
    assert a <= 0.0


def test_radial_series_and_quadrature_paths_agree():
    # the vectorised series route and the adaptive-quadrature route are
    # independent implementations of the same truncated radial integral
    from levymult.measures import _radial_integral, _radial_integral_quad

    for (b, alpha, eps, outer) in ((1.7, 1.3, 1e-2, np.inf),
                                   (5.0, 0.5, 1e-1, np.inf),
                                   (0.9, 1.9, 1e-3, np.inf),
                                   (2.0, 1.0, 1e-2, 10.0)):
        series = float(_radial_integral(np.array([b]), alpha, eps, outer)[0])
        quad = _radial_integral_quad(b, alpha, eps, outer)
        assert series == pytest.approx(quad, rel=1e-8, abs=1e-10)


def test_modulated_exponent_constant_reduces_to_psi():
    m = lm.DiscreteLevyMeasure.axes(2)
    mod = lm.JumpModulator.constant(0.5)
    xi = np.array([0.7, -1.2])
    assert lm.modulated_exponent(m, mod, xi) == pytest.approx(
        0.5 * lm.char_exponent(m, xi), abs=1e-14)


# ---------------------------------------------------------------------------
# modulators
# ---------------------------------------------------------------------------

def test_modulator_bound_enforced():
    with pytest.raises(InvalidInputError):
        lm.JumpModulator.constant(1.5)
    m = lm.DiscreteLevyMeasure.axes(1)
    tab = lm.JumpModulator.table({(1.0,): 2.0, (-1.0,): 2.0})
    with pytest.raises(InvalidInputError):
        tab.validate_on(m)


def test_antisymmetric_modulator_rejected():
    m = lm.DiscreteLevyMeasure.axes(1)
    tab = lm.JumpModulator.table({(1.0,): 1.0, (-1.0,): -1.0})
    with pytest.raises(InvalidInputError):
        tab.validate_on(m)


def test_axis_indicator_values():
    m = lm.DiscreteLevyMeasure.axes(2)
    mod = lm.JumpModulator.axis_indicator(1)
    vals = mod.values_at(m.locations)
    on_axis1 = np.abs(m.locations[:, 0]) > 0
    assert np.array_equal(vals.real.astype(bool), on_axis1)


def test_table_missing_atom():
    mod = lm.JumpModulator.table({(1.0,): 1.0})
    with pytest.raises(InvalidInputError):
        mod.values_at(np.array([[2.0]]))


@settings(max_examples=25, deadline=None)
@given(st_.floats(0, 1), st_.floats(0, 2 * np.pi))
def test_constant_modulator_magnitudes(r, angle):
    c = r * complex(np.cos(angle), np.sin(angle))
    mod = lm.JumpModulator.constant(c)
    vals = mod.values_at(np.array([[1.0], [-1.0]]))
    assert np.all(np.abs(vals) <= 1 + 1e-12)


# ---------------------------------------------------------------------------
# transition measures
# ---------------------------------------------------------------------------

def test_transition_t0_is_delta():
    pt = lm.transition_measure(axes_measure_1d(), 0.0)
    assert pt.weight_at(0.0) == 1.0
    assert pt.mass == pytest.approx(1.0, abs=1e-15)


def test_transition_weight_against_convolution_oracle():
    # atoms +-1 with weight 1/2, t = 1: return weight at the origin
    m = axes_measure_1d(weight=0.5)
    pt = lm.transition_measure(m, 1.0, tol=1e-13)
    oracle = sum(math.exp(-1.0) / math.factorial(n) * math.comb(n, n // 2) / 2 ** n
                 for n in range(0, 60, 2))
    assert pt.weight_at(0.0) == pytest.approx(oracle, abs=1e-13)


def test_transition_mass_within_tolerance():
    for t, tol in ((0.3, 1e-12), (2.0, 1e-10), (7.5, 1e-8)):
        pt = lm.transition_measure(axes_measure_1d(), t, tol=tol)
        assert 1.0 - tol <= pt.mass <= 1.0 + 1e-14
        assert pt.tail_bound < tol
        arr = pt.array
        assert np.all(arr >= 0)
        assert np.allclose(arr, arr[::-1], atol=0)  # symmetry z -> -z


def test_transition_rate_guard():
    with pytest.raises(InvalidInputError):
        lm.transition_measure(axes_measure_1d(), 100.0)


def test_transition_off_lattice_error():
    m = lm.DiscreteLevyMeasure.from_atoms(
        [([1.0], 1.0), ([-1.0], 1.0), ([np.sqrt(2)], 1.0), ([-np.sqrt(2)], 1.0)])
    with pytest.raises(UnsupportedMeasureError):
        lm.transition_measure(m, 1.0)


def test_transition_2d():
    m = lm.DiscreteLevyMeasure.axes(2)
    pt = lm.transition_measure(m, 0.5, tol=1e-12)
    assert pt.mass == pytest.approx(1.0, abs=1e-12)
    assert pt.weight_at([0.0, 0.0]) > 0
    assert pt.weight_at([1.0, 0.0]) == pytest.approx(pt.weight_at([-1.0, 0.0]), abs=0)


def test_semigroup_property():
    m = axes_measure_1d()
    tol = 1e-12
    p1 = lm.transition_measure(m, 0.4, tol=tol)
    p2 = lm.transition_measure(m, 0.9, tol=tol)
    p3 = lm.transition_measure(m, 1.3, tol=tol)
    conv = p1.convolve(p2)
    lo = -(p3.array.shape[0] // 2)
    diff = sum(abs(conv.weight_at(float(z)) - p3.weight_at(float(z)))
               for z in range(lo, -lo + 1))
    assert diff <= 2 * tol


def test_levy_khinchin_agreement():
    m = axes_measure_1d()
    tol = 1e-12
    lhs, rhs = lm.levy_khinchin_check(m, 0.7, 1.3, tol=tol)
    assert abs(lhs - rhs) < 10 * tol
    lhs0, rhs0 = lm.levy_khinchin_check(m, 0.0, 1.3)
    assert lhs0 == 1.0 and rhs0 == 1.0
    lhs_z, rhs_z = lm.levy_khinchin_check(m, 0.7, 0.0)
    assert abs(lhs_z - 1.0) < tol * 10 and rhs_z == 1.0


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def test_measure_roundtrip_json():
    m = lm.DiscreteLevyMeasure.from_atoms(
        [([0.1, -0.2], 0.3), ([-0.1, 0.2], 0.3)])
    doc = json.loads(dumps_measure(m))
    back = measure_from_dict(doc)
    assert np.array_equal(back.locations, m.locations)
    assert np.array_equal(back.weights, m.weights)


def test_stable_roundtrip_json():
    st = lm.TruncatedStableMeasure.axes(2, 1.5, 1e-4)
    back = measure_from_dict(measure_to_dict(st))
    assert back.alpha == st.alpha and back.epsilon == st.epsilon
    assert math.isinf(back.outer_radius)
    assert np.array_equal(back.directions, st.directions)


def test_decimal_string_weights_accepted():
    doc = {"kind": "discrete",
           "atoms": [{"z": ["0.1"], "w": "0.25"}, {"z": ["-0.1"], "w": "0.25"}]}
    m = measure_from_dict(doc)
    assert m.weights[0] == 0.25
    assert m.locations[0, 0] == 0.1
    # the emitted document reproduces the same decimal strings via repr
    out = measure_to_dict(m)
    assert out["atoms"][0]["w"] == 0.25
    assert repr(out["atoms"][0]["z"][0]) == "0.1"


def test_modulator_roundtrip():
    for mod in (lm.JumpModulator.constant(0.5 + 0.1j),
                lm.JumpModulator.axis_indicator(2),
                lm.JumpModulator.per_axis([0.5, -1.0]),
                lm.JumpModulator.sign_pattern([1, 1, -1, -1]),
                lm.JumpModulator.table({(1.0,): 0.5, (-1.0,): 0.5})):
        back = modulator_from_dict(modulator_to_dict(mod))
        assert back.kind == mod.kind


def test_measure_with_modulator_document():
    m = lm.DiscreteLevyMeasure.axes(1)
    mod = lm.JumpModulator.constant(1.0)
    text = dumps_measure(m, mod)
    m2, mod2 = loads_measure(text)
    assert mod2 is not None and mod2.kind == "constant"
    assert m2.total_mass == m.total_mass


def test_malformed_documents_raise():
    with pytest.raises(InvalidInputError):
        measure_from_dict({"kind": "nope", "atoms": []})
    with pytest.raises(InvalidInputError):
        measure_from_dict({"atoms": []})
    with pytest.raises(InvalidInputError):
        modulator_from_dict({"kind": "constant"})
