import numpy as np
import pytest

from fuzzytvs import (
    AffineMap,
    Domain,
    add,
    alpha_cut,
    ball,
    constant,
    grid_sample,
    halfspace,
    height,
    image,
    interval,
    join,
    meet,
    preimage,
    product,
    scalar_mul,
    singleton,
    translate,
    triangular,
    zero,
)

LINE = Domain.cube(1, -5, 5, 41)
PLANE = Domain.cube(2, -2, 2, 21)


def test_constant_value():
    assert constant(PLANE, 0.5)([1.3, -0.7]) == 0.5


def test_open_ball_interior_point():
    assert ball(PLANE)([0.5, 0.0]) == 1.0


def test_triangular_interpolates():
    assert triangular(LINE, 0, 1, 2)(0.5) == 0.5


def test_outside_box_is_zero():
    assert constant(PLANE, 0.7)([3.0, 0.0]) == 0.0


def test_unbounded_domain_keeps_values_outside_box():
    dom = Domain.cube(1, -1, 1, 5, unbounded=True)
    assert constant(dom, 0.7)(40.0) == 0.7


def test_lattice_axes_are_exact_on_symmetric_boxes():
    ax = Domain.cube(1, -3, 3, 121).axes[0]
    assert ax[60] == 0.0
    assert ax[0] == -3.0 and ax[-1] == 3.0
    assert np.all(np.diff(ax) > 0)


def test_image_identity_matches_lattice():
    mu = triangular(LINE, -1, 0.5, 3)
    out = image(np.eye(1), mu, LINE)
    assert np.array_equal(out.lattice_values, mu.lattice_values)


def test_image_projection_of_disc():
    target = Domain.cube(1, -2, 2, 21)
    out = image([[1.0, 0.0]], ball(PLANE), target)
    # projection of the open unit disc sampled on the 21x21 lattice
    expected = (np.abs(target.axes[0]) < 1).astype(float)
    assert np.array_equal(out.lattice_values, expected)


def test_image_of_empty_support_is_zero():
    out = image(np.eye(1), zero(LINE), LINE)
    assert not np.any(out.lattice_values)


def test_preimage_identity():
    mu = triangular(LINE, -1, 0, 1)
    back = preimage(np.eye(1), mu, LINE)
    assert np.array_equal(back.lattice_values, mu.lattice_values)


def test_preimage_of_sum_functional():
    scalar = Domain.cube(1, -5, 5, 101)
    eta = interval(scalar, -1, 1)
    back = preimage([[1.0, 1.0]], eta, PLANE)
    assert back([0.3, 0.3]) == 1.0


def test_preimage_of_constant():
    back = preimage([[1.0, -2.0]], constant(Domain.cube(1, -10, 10, 11), 0.4), PLANE)
    assert np.all(back.lattice_values == 0.4)


def test_add_of_intervals():
    mu = add(interval(LINE, 0, 1, closed=True), interval(LINE, 2, 3, closed=True))
    x = LINE.axes[0]
    expected = ((x >= 2) & (x <= 4)).astype(float)
    assert np.array_equal(mu.lattice_values, expected)


def test_add_singleton_identity():
    mu = triangular(LINE, -2, 0.5, 1)
    assert np.array_equal(add(mu, singleton(LINE)).lattice_values, mu.lattice_values)
    assert np.array_equal(add(singleton(LINE), mu).lattice_values, mu.lattice_values)


def test_add_triangular_peaks_add():
    tri = triangular(LINE, 0, 1, 2)
    assert add(tri, tri)(2.0) == 1.0


def test_add_of_zero_is_zero():
    mu = add(zero(LINE), triangular(LINE, 0, 1, 2))
    assert not np.any(mu.lattice_values)


def test_scalar_mul_one_and_two():
    mu = interval(LINE, -1, 1)
    assert scalar_mul(1, mu) is mu
    x = LINE.axes[0]
    assert np.array_equal(scalar_mul(2, mu).lattice_values, (np.abs(x) < 2).astype(float))


def test_scalar_mul_zero_is_point_mass_of_height():
    mu = triangular(LINE, 1, 2, 3)
    out = scalar_mul(0, mu)
    x = LINE.axes[0]
    assert np.array_equal(out.lattice_values, (x == 0).astype(float))
    half = scalar_mul(0, meet([constant(LINE, 0.4), mu]))
    assert half(0.0) == 0.4 and half(1.0) == 0.0


def test_product_examples():
    box = Domain.cube(1, -3, 3, 13)
    assert np.all(product(constant(box, 1), constant(box, 1)).lattice_values == 1)
    unit = interval(box, -1, 1)
    assert product(unit, unit)([0.5, 2.0]) == 0.0
    assert product(triangular(box, 0, 1, 2), constant(box, 0.3))([1.0, -2.5]) == 0.3


def test_product_domain_shape():
    box = Domain.cube(1, -3, 3, 13)
    assert product(interval(box, -1, 1), interval(box, -1, 1)).domain.resolution == (13, 13)


def test_meet_join_identities():
    mu = triangular(LINE, -1, 0, 2)
    assert np.array_equal(meet([mu, constant(LINE, 1)]).lattice_values, mu.lattice_values)
    assert np.array_equal(join([mu, constant(LINE, 0)]).lattice_values, mu.lattice_values)
    neg = halfspace(LINE, [1.0], 0.0)
    pos = halfspace(LINE, [-1.0], 0.0)
    assert not np.any(meet([neg, pos]).lattice_values)


def test_meet_rejects_mixed_domains():
    with pytest.raises(ValueError):
        meet([constant(LINE, 1), constant(PLANE, 1)])


def test_alpha_cut_examples():
    half = constant(LINE, 0.5)
    assert len(alpha_cut(half, 0.5)) == LINE.size
    assert len(alpha_cut(half, 0.6)) == 0
    cut = alpha_cut(triangular(LINE, 0, 1, 2), 0.5)
    assert np.array_equal(cut.points[:, 0], [0.5, 0.75, 1.0, 1.25, 1.5])


def test_alpha_cut_rejects_zero_level():
    with pytest.raises(ValueError):
        alpha_cut(constant(LINE, 1), 0.0)


def test_height_examples():
    assert height(constant(LINE, 0.3)) == 0.3
    assert height(triangular(LINE, 0, 1, 2)) == 1.0
    assert height(zero(LINE)) == 0.0


def test_translate_examples():
    mu = ball(PLANE)
    assert translate([0, 0], mu) is mu
    assert translate([1, 0], mu)([1.0, 0.0]) == 1.0
    back = translate([-0.5, 0.25], translate([0.5, -0.25], mu))
    assert np.array_equal(back.lattice_values, mu.lattice_values)


def test_grid_sample_nearest_point_lookup():
    dom = Domain.cube(1, 0, 1, 3)
    mu = grid_sample(dom, [0.0, 0.5, 1.0])
    assert mu(0.4) == 0.5
    assert mu(0.8) == 1.0


def test_affine_map_dimensions_checked():
    with pytest.raises(ValueError):
        image(AffineMap.linear(np.eye(2)), triangular(LINE, 0, 1, 2), LINE)
