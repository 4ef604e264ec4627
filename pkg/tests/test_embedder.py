import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from surfembed.embedder import (
    POLE_STRENGTH_FLOOR,
    ShearMap,
    embed,
    embed_curve_minus_P,
    embed_sphere_finite,
    embed_sphere_one_acc,
    rebuild_with_targets,
    shear_apply,
)
from surfembed.errors import DuplicatePuncture, HypothesisFailure, ModelError
from surfembed.fixtures import (
    SQRT6,
    genus_two_mixed,
    infinite_genus_truncated,
    sphere_two_accumulation,
    sphere_two_accumulation_mixed,
)
from surfembed.holo_core import EntireFn
from surfembed.surfaces import INF, CStar, CurvePoint, PlaneGraph, Sphere, Torus, is_inf

R6 = SQRT6


def const(c):
    return EntireFn.constant(c)


def lin(r):
    return EntireFn(1.0, (r,))


# the shear on plane graphs


def test_shear_exact_cancellation():
    f = EntireFn(1.0, (0.0, 0.0))  # x**2
    emb = shear_apply(PlaneGraph(f), ShearMap(const(0.0), lin(0.0), (0.0,)))
    assert emb.second(np.array([2.0]), np.array([4.0]))[0] == pytest.approx(2.0)
    (entry,) = emb.extensions
    assert entry.value == 0 and entry.slope == pytest.approx(1.0)
    assert emb.second(0.0, 0.0) == 0


def test_shear_shifted_parabola():
    f = EntireFn(1.0, (1j, -1j))  # x**2 + 1
    emb = shear_apply(PlaneGraph(f), ShearMap(const(1.0), lin(0.0), (0.0,)))
    assert emb.extensions[0].value == pytest.approx(0.0)
    assert emb.second(3.0, 10.0) == pytest.approx(3.0)


def test_shear_constant_result():
    f = lin(0.0)  # x
    emb = shear_apply(PlaneGraph(f), ShearMap(const(1.0), lin(1.0), (1.0,)))
    assert emb.extensions[0].value == pytest.approx(1.0)
    assert emb.second(5.0, 5.0) == pytest.approx(1.0)


def test_shear_hypothesis_failure():
    with pytest.raises(HypothesisFailure):
        shear_apply(PlaneGraph(lin(0.0)), ShearMap(const(0.0), lin(1.0), (1.0,)))


def test_shear_rejects_double_pole():
    with pytest.raises(ModelError):
        ShearMap(const(0.0), EntireFn(1.0, (0.0, 0.0)), (0.0,))
    with pytest.raises(ModelError):
        ShearMap(const(0.0), lin(1.0), (0.0,))


# sphere pipelines


def test_sphere_infinity_only():
    art = embed(Sphere((INF,)))
    x, g = art.image(np.array([2.5 + 1j]), np.array([0.0]))
    assert g[0] == pytest.approx(1.0)


def test_sphere_infinity_and_zero():
    art = embed(Sphere((INF, 0.0)))
    assert art.image(1.0, 0.0)[1] == pytest.approx(1.0)


def test_sphere_three_points():
    art = embed(Sphere((INF, 0.0, 1.0)))
    x, g = art.image(2.0, 0.0)
    assert (x, g) == (2.0, 0.5)


def test_sphere_finite_without_infinity_moves_a_point():
    model = Sphere((0.0, 1.0, 2.0))
    art = embed_sphere_finite(model)
    m = art.mobius
    assert is_inf(m(0.0)) and m(1.0) == 0
    assert sorted(abs(p) for p in art.shear.poles) == pytest.approx(sorted([0.0, abs(m(2.0))]))


def test_one_acc_examples():
    art = embed_sphere_one_acc(Sphere((0.0,), (INF,)), 1)
    assert art.image(4.0, 0.0)[1] == pytest.approx(0.25)
    art = embed_sphere_one_acc(Sphere((1.0, 2.0, 3.0), (INF,)), 3)
    assert art.normalization == 1.0
    assert art.image(0.0, 0.0)[1] == pytest.approx(-1 / 6)


def test_one_acc_truncation_recorded():
    art = embed(Sphere(tuple(float(i) for i in range(1, 31)), (INF,)), 20)
    assert len(art.shear.poles) == 20
    assert "20 of 30" in art.truncation_note


def test_one_acc_pole_blows_up():
    art = embed(Sphere((1.0, 2.0, 3.0), (INF,)), 3)
    norms = [abs(art.image(2 + r, 0.0)[1]) for r in (1e-2, 1e-4, 1e-6)]
    assert norms[0] < norms[1] < norms[2] and norms[2] > 1e5


def test_duplicate_punctures():
    with pytest.raises(DuplicatePuncture):
        Sphere((1.0, 1.0 + 1e-13), (INF,))


def test_weak_poles_are_rescaled():
    art = embed(Sphere(tuple(float(i) for i in range(1, 21)), (INF,)), 20)
    assert art.normalization < 1
    b = art.shear.b
    strengths = [1 / abs(b.derivative(c)) for c in range(1, 21)]
    assert min(strengths) == pytest.approx(POLE_STRENGTH_FLOOR)


def test_two_acc_chart():
    model, _ = sphere_two_accumulation()
    art = embed(model)
    assert art.chart_model.family == "cstar"
    assert art.model is model
    assert all(c.case == "full" for c in art.columns)


def test_two_acc_mixed_has_half_fibers():
    art = embed(sphere_two_accumulation_mixed()[0])
    # t and -1/t land on different columns of the hyperbola, so every column keeps a point
    assert sum(c.case == "half" for c in art.columns) == 10


# torus pipelines


def test_torus_weierstrass_column():
    art = embed_curve_minus_P(Torus(2.0, (CurvePoint(0, 0),)))
    assert art.shear.b(5.0) == pytest.approx(5.0)
    assert art.shear.a(7.3) == pytest.approx(1.0)
    x, g = art.image(3.0, R6)
    assert g == pytest.approx((R6 - 1) / 3)


def _limit_oracle(x0=3, sign=-1):
    """Symmetric 50-digit evaluation of (y(x) - a)/(x - 3) at distance 1e-20, y the kept sheet."""
    with mpmath.workdps(50):
        a = -mpmath.sqrt(6)

        def g(x):
            return (sign * mpmath.sqrt(x * (x - 1) * (x - 2)) - a) / (x - x0)

        h = mpmath.mpf("1e-20")
        return complex((g(x0 + h) + g(x0 - h)) / 2)


def test_torus_half_fiber_lhopital():
    art = embed(Torus(2.0, (CurvePoint(3, R6),)))
    assert art.shear.b(4.0) == pytest.approx(1.0)
    assert art.shear.a(10.0) == pytest.approx(-R6)
    (entry,) = art.extensions
    assert entry.y == pytest.approx(-R6)
    analytic = -11 / (2 * R6)
    assert abs(entry.value - analytic) < 1e-10
    assert abs(entry.value - _limit_oracle()) < 1e-10
    assert art.image(3.0, -R6)[1] == pytest.approx(analytic)


def test_empty_puncture_set_is_identity(rng):
    art = embed(Torus(2.0))
    x = rng.normal(size=20) + 1j * rng.normal(size=20)
    y = np.sqrt(x * (x - 1) * (x - 2))
    w1, w2 = art.image(x, y)
    np.testing.assert_array_equal(w1, x)
    np.testing.assert_allclose(w2, y, rtol=1e-15)


def test_rebuild_with_targets():
    art = embed(Torus(2.0, (CurvePoint(3, R6), CurvePoint(3, -R6))))
    new = rebuild_with_targets(art, [R6])
    assert new.shear.a(3.0) == pytest.approx(R6)
    assert new.shear.b is art.shear.b


def test_higher_genus_and_role_swap():
    art = embed(*genus_two_mixed())
    assert [c.case for c in art.columns] == ["full", "half"]
    model, trunc = infinite_genus_truncated()
    art = embed(model, trunc)
    assert art.model.genus == 7
    assert len(art.columns) == 7


# invariants over random torus puncture sets


@st.composite
def torus_punctures(draw):
    n = draw(st.integers(0, 5))
    xs = draw(st.lists(st.floats(-4, 6).map(lambda v: round(v, 2)), min_size=n, max_size=n, unique=True))
    pts = []
    for x in xs:
        y = cmath.sqrt(complex(x * (x - 1) * (x - 2)))
        which = draw(st.sampled_from(["+", "-", "both"]))
        if abs(y) < 1e-6:
            pts.append(CurvePoint(x, 0.0))
            continue
        if which in "+both":
            pts.append(CurvePoint(x, y))
        if which in "-both":
            pts.append(CurvePoint(x, -y))
    return Torus(2.0, tuple(pts))


@given(torus_punctures(), st.integers(0, 2**32 - 1))
def test_pipeline_invariants(model, seed):
    art = embed(model)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-5, 6, 200) + 1j * rng.uniform(-3, 3, 200)
    cols = np.array([c.x_i for c in art.columns])
    if cols.size:
        x = x[np.min(np.abs(x[:, None] - cols[None, :]), axis=1) > 1e-2]
    s = np.sqrt(x * (x - 1) * (x - 2))
    for y in (s, -s):
        w1, w2 = art.image(x, y)
        # x-preservation is exact; graph consistency against the raw formula
        assert np.array_equal(w1, x)
        raw = (y - art.shear.a(x)) / art.shear.b(x)
        np.testing.assert_allclose(w2, raw, rtol=1e-10)
    # fiber injectivity
    b = np.abs(art.shear.b(x))
    gap = np.abs(art.image(x, s)[1] - art.image(x, -s)[1])
    assert np.all(gap >= 2 * np.abs(s) / b * (1 - 1e-9))
    # extension table matches the sampled limit
    for e in art.extensions:
        for r in (1e-2, 1e-3, 1e-4):
            z = e.x + r * np.exp(1j * np.array([0.3, 2.0, 4.1]))
            g = art.shear(z, art.domain.sheet_point(z, e.y))
            assert np.max(np.abs(g - e.value)) < 10 * r * (1 + abs(e.slope)) + 1e-6
