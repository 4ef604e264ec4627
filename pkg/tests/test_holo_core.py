import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from surfembed.errors import (
    ContourThroughZero,
    DuplicateZero,
    NodeNotZeroOfB,
    NonIntegerWinding,
    ZeroDerivative,
)
from surfembed.holo_core import EntireFn, build_interpolant, build_weierstrass, count_zeros_in_disk

from conftest import complexes, separated

X = sp.symbols("x")


def test_empty_product_is_one():
    b = build_weierstrass([])
    assert b(3.7 - 2j) == 1
    assert b.derivative(0.5) == 0


def test_cubic_product_values():
    b = build_weierstrass([0, 1, 2])
    assert b(3) == pytest.approx(6)
    # independent: symbolic derivative of x(x-1)(x-2)
    expr = X * (X - 1) * (X - 2)
    for k in (1, 2, 3):
        want = float(sp.diff(expr, X, k).subs(X, 0))
        assert b.derivative(0, k) == pytest.approx(want)
    assert b.derivative(0) == pytest.approx(2)


def test_taylor_shape_broadcasts():
    b = build_weierstrass([0, 1j])
    out = b.taylor(np.zeros((3, 4)), 2)
    assert out.shape == (3, 3, 4)


def test_duplicate_zero_rejected():
    with pytest.raises(DuplicateZero):
        build_weierstrass([1.0, 1.0 + 1e-13])
    build_weierstrass([1.0, 1.0 + 1e-11])


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        build_weierstrass([complex("nan")])


def test_interp_node_must_be_factor():
    with pytest.raises(ValueError):
        EntireFn(0.0, (0.0, 1.0), ((2.0, 1.0),))


def test_interpolant_single_node_constant():
    a = build_interpolant([(0, 5)], build_weierstrass([0]))
    for x in (0, 1.5, -3 + 2j):
        assert a(x) == pytest.approx(5)


def test_interpolant_linear():
    a = build_interpolant([(0, 1), (1, 2)], build_weierstrass([0, 1]))
    assert a(0) == pytest.approx(1)
    assert a(1) == pytest.approx(2)
    assert a(5) == pytest.approx(6)
    np.testing.assert_allclose(a.coefficients(), [1, 1])


def test_interpolant_empty_is_zero():
    a = build_interpolant([], build_weierstrass([1, 2]))
    assert a(7) == 0


def test_interpolant_errors():
    b = build_weierstrass([0, 1])
    with pytest.raises(NodeNotZeroOfB):
        build_interpolant([(2.0, 1)], b)
    # double zero: b'(0) vanishes
    b2 = EntireFn(1.0, (0.0, 1e-14, 3.0))
    with pytest.raises(ZeroDerivative):
        build_interpolant([(0.0, 1.0)], b2)


def test_interpolant_against_sympy_lagrange():
    nodes = [(0, 2), (1, -1), (3, 4), (-2, 0.5)]
    a = build_interpolant(nodes, build_weierstrass([x for x, _ in nodes]))
    poly = sp.interpolate([(sp.Rational(x), sp.nsimplify(y)) for x, y in nodes], X)
    for x in (0.3, 2.2, -5.0):
        assert a(x) == pytest.approx(float(poly.subs(X, x)), rel=1e-12)


def test_zero_count_examples():
    assert count_zeros_in_disk(build_weierstrass([0]), 0, 1) == 1
    assert count_zeros_in_disk(build_weierstrass([0, 1, 2]), 0, 1.5) == 2
    assert count_zeros_in_disk(EntireFn.constant(1.0), 3 - 1j, 2.0) == 0


def test_zero_count_contour_errors():
    b = build_weierstrass([0, 1, 2])
    with pytest.raises(ContourThroughZero):
        count_zeros_in_disk(b, 0, 1.0)
    with pytest.raises(ContourThroughZero):
        count_zeros_in_disk(b, 0, 1.0 + 1e-8)
    with pytest.raises(ValueError):
        count_zeros_in_disk(b, 0, 1.5, samples=32)
    with pytest.raises(ValueError):
        count_zeros_in_disk(b, 0, -1.0)


def test_zero_count_interpolant_hits_zero():
    # a(x) = x + 1 has its zero on the circle |x| = 1 but is not a pure product
    a = build_interpolant([(0, 1), (1, 2)], build_weierstrass([0, 1]))
    with pytest.raises(ContourThroughZero):
        count_zeros_in_disk(a, 0, 1.0)


def test_nonintegral_winding_reported(monkeypatch):
    import surfembed.holo_core as hc

    monkeypatch.setattr(hc, "_winding_estimate", lambda f, c, r, n: 1.4)
    with pytest.raises(NonIntegerWinding):
        hc.count_zeros_in_disk(EntireFn.constant(1.0), 0, 1.0)


@given(st.lists(complexes(5.0), min_size=0, max_size=12), complexes(5.0), st.floats(0.3, 8.0))
def test_zero_set_exactness(zeros, center, radius):
    assume(separated(zeros, 1e-3))
    gaps = [abs(abs(z - center) - radius) for z in zeros]
    assume(not gaps or min(gaps) > 1e-2 * radius)
    b = build_weierstrass(zeros)
    inside = sum(abs(z - center) < radius for z in zeros)
    assert count_zeros_in_disk(b, center, radius) == inside


@given(st.lists(st.tuples(complexes(4.0), complexes(10.0)), min_size=1, max_size=10))
def test_interpolation_exactness(nodes):
    xs = [x for x, _ in nodes]
    assume(separated(xs, 0.1))
    a = build_interpolant(nodes, build_weierstrass(xs))
    for x, y in nodes:
        assert abs(a(x) - y) <= 1e-9 * (1 + abs(y))


def test_entirety_on_large_disk(rng):
    xs = rng.uniform(-4, 4, 8) + 1j * rng.uniform(-4, 4, 8)
    b = build_weierstrass(xs)
    a = build_interpolant(zip(xs, rng.normal(size=8)), b)
    r = 1e3 * np.sqrt(rng.random(10_000))
    z = r * np.exp(2j * np.pi * rng.random(10_000))
    for f in (a, b):
        vals = f.taylor(z, 2)
        assert np.all(np.isfinite(vals))


@given(st.lists(complexes(3.0), min_size=1, max_size=6), complexes(4.0))
def test_derivative_matches_central_difference(zeros, x):
    assume(separated(zeros, 1e-2))
    assume(min(abs(x - z) for z in zeros) >= 0.1)
    b = build_weierstrass(zeros)
    a = build_interpolant([(z, 1 + k) for k, z in enumerate(zeros)], b)
    h = 1e-6
    for f in (a, b):
        fd = (f(x + h) - f(x - h)) / (2 * h)
        exact = f.derivative(x)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


@given(st.lists(complexes(3.0), min_size=1, max_size=6), complexes(3.0), complexes(0.5))
def test_offset_evaluation_matches_direct(zeros, x0, delta):
    assume(separated(zeros, 1e-2))
    b = build_weierstrass(zeros)
    a = build_interpolant([(z, 1.0) for z in zeros], b)
    for f in (a, b):
        assert f.at_offset(x0, delta) == pytest.approx(f(x0 + delta), rel=1e-9, abs=1e-9)


def test_offset_keeps_tiny_steps_exact():
    b = build_weierstrass([512.0, 3.0])
    assert b.at_offset(512.0, 1e-14) == pytest.approx(1e-14 * 509.0, rel=1e-12)


def test_scaled_and_coefficients():
    b = build_weierstrass([1, 2, 3]).scaled(2.0)
    np.testing.assert_allclose(b.coefficients(), 2 * np.poly([1, 2, 3]))
    assert b.is_product
