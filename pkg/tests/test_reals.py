import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzytvs import (
    FuzzyReal,
    crisp_norm,
    euclidean_felbin_norm,
    felbin_axioms_check,
    star_norm_on_K,
    validate_fuzzy_real,
)
from fuzzytvs.reals import DEFAULT_ALPHAS, level_index, scalar_scale

finite = st.floats(-50, 50, allow_nan=False)


def test_crisp_three_is_valid():
    assert validate_fuzzy_real(FuzzyReal.crisp(3.0)).passed


def test_growing_cut_violates_nesting():
    eta = FuzzyReal.from_cuts({0.5: (0.0, 1.0), 0.9: (-1.0, 2.0), 1.0: (0.0, 0.0)},
                              normal_point=0.0)
    rep = validate_fuzzy_real(eta)
    assert not rep.passed
    assert "nesting" in {v["axiom"] for v in rep.details["violations"]}


def test_inverted_cut_violates_boundedness():
    eta = FuzzyReal.from_cuts({1.0: (2.0, 1.0)}, normal_point=1.5)
    rep = validate_fuzzy_real(eta)
    assert rep.witness["axiom"] == "N2"


def test_missing_top_level_violates_normality():
    eta = FuzzyReal.from_cuts({0.5: (0.0, 1.0)})
    assert "N1" in {v["axiom"] for v in validate_fuzzy_real(eta).details["violations"]}


def test_negative_cut_flagged_when_required():
    eta = FuzzyReal.crisp(-1.0)
    assert validate_fuzzy_real(eta).passed
    assert not validate_fuzzy_real(eta, nonnegative=True).passed


def test_scalar_scale_examples():
    eta = FuzzyReal.crisp(3.0)
    same = scalar_scale(1, eta)
    assert np.array_equal(same.upper, eta.upper)
    assert scalar_scale(0, eta).is_crisp_zero
    six = scalar_scale(-2, eta)
    assert np.all(six.lower == 6) and np.all(six.upper == 6)


def test_level_index_snaps_down():
    assert DEFAULT_ALPHAS[level_index(DEFAULT_ALPHAS, 0.07)] == 0.05
    assert DEFAULT_ALPHAS[level_index(DEFAULT_ALPHAS, 1.0)] == 1.0
    assert level_index(DEFAULT_ALPHAS, 0.001) == 0


def test_euclidean_norm_examples():
    norm = euclidean_felbin_norm(2)
    five = norm([3.0, 4.0])
    assert all(five.cut(a) == (5.0, 5.0) for a in DEFAULT_ALPHAS)
    assert norm([0.0, 0.0]).is_crisp_zero
    assert norm(-3 * np.array([1.0, 0.0])).cut(0.5) == (3.0, 3.0)


def test_star_norm_examples():
    star = star_norm_on_K()
    assert star.membership(2.0, [1.0])[0] == 0.5
    assert star([2.0]).cut(0.5) == (0.0, 1.0)
    assert star([0.0]).is_crisp_zero


def test_star_upper_matches_cut():
    star = star_norm_on_K()
    pts = np.array([[-2.0], [0.5], [3.0]])
    for a in (0.05, 0.5, 0.95):
        assert np.array_equal(star.upper(pts, a), [star(p).cut(a)[1] for p in pts])


def test_euclidean_axioms_pass():
    vectors = [[0, 0], [1, 0], [0, -2], [3, 4], [-1.5, 0.5]]
    rep = felbin_axioms_check(euclidean_felbin_norm(2), vectors, np.linspace(0, 6, 25))
    assert rep.passed and rep.max_violation == 0


def test_star_axioms_pass():
    rep = felbin_axioms_check(star_norm_on_K(), [[1], [-1], [2], [-2]], np.linspace(0, 4, 17))
    assert rep.passed


def test_offset_norm_breaks_f1():
    rep = felbin_axioms_check(crisp_norm(1, offset=1.0), [[0.0], [1.0]], [0.5, 1.0])
    assert not rep.passed
    assert rep.details["axioms"]["F1"]["max_violation"] > 0


def test_weighted_and_sup_norms():
    assert crisp_norm(2, p=1)([1.0, -2.0]).cut(1.0) == (3.0, 3.0)
    assert crisp_norm(2, p=np.inf)([1.0, -2.0]).cut(1.0) == (2.0, 2.0)
    assert crisp_norm(2, weights=[3, 4])([1.0, 1.0]).cut(1.0) == (5.0, 5.0)
    with pytest.raises(ValueError):
        crisp_norm(2, p=0.5)


@given(st.lists(finite, min_size=2, max_size=2))
def test_norm_values_are_valid_fuzzy_reals(x):
    for norm in (euclidean_felbin_norm(2), crisp_norm(2, p=1)):
        assert validate_fuzzy_real(norm(x), nonnegative=True).passed
    assert validate_fuzzy_real(star_norm_on_K()(x[:1]), nonnegative=True).passed


@given(finite)
def test_star_cuts_nest(x):
    eta = star_norm_on_K()([x])
    assert np.all(np.diff(eta.upper) <= 0)
    assert np.all(np.diff(eta.lower) >= 0)


binary_scales = st.sampled_from([0.0] + [sign * 2.0 ** k for k in range(-4, 5) for sign in (1, -1)])


@given(binary_scales, binary_scales, st.floats(0, 20))
def test_scalar_scale_composes(r, s, value):
    # power-of-two factors make every product exact, so equality is bitwise
    eta = star_norm_on_K()([value])
    left = scalar_scale(r * s, eta)
    right = scalar_scale(r, scalar_scale(s, eta))
    assert np.array_equal(left.upper, right.upper)
    assert np.array_equal(left.lower, right.lower)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 1000))
def test_scalar_scale_composes_on_integers(r, s, value):
    eta = FuzzyReal.crisp(value)
    assert np.array_equal(scalar_scale(r * s, eta).upper,
                          scalar_scale(r, scalar_scale(s, eta)).upper)


@given(st.lists(finite, min_size=3, max_size=3))
def test_euclidean_upper_is_level_independent(x):
    norm = euclidean_felbin_norm(3)
    ups = {norm.upper([x], a)[0] for a in DEFAULT_ALPHAS}
    assert len(ups) == 1
