"""The shear ``(x, y) -> (x, (y - a(x)) / b(x))`` and the per-family pipelines.

A pipeline classifies the puncture columns, builds ``b`` with a simple zero on
each column and an interpolant ``a`` through the column targets, then shears
the affine model.  Kept points over a column are removable singularities of
the sheared graph; their limit values (and limit derivatives) are stored in an
extension table computed from exact Taylor coefficients.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DuplicatePuncture, HypothesisFailure, ModelError
from .holo_core import EntireFn, build_interpolant, build_weierstrass
from .surfaces import (
    INF,
    AffineCurve,
    CStar,
    CurvePoint,
    Domain,
    FiberClassification,
    Hyperelliptic,
    InfiniteGenus,
    MobiusMap,
    PlaneGraph,
    Sphere,
    SurfaceModel,
    Torus,
    classify_fibers,
    is_inf,
    mobius_two_points,
)

log = logging.getLogger(__name__)

MATCH_TOL = 1e-9
POLE_ZERO_TOL = 1e-12
POLE_DERIV_MIN = 1e-12
# b is rescaled by a constant when some pole is weaker than this
POLE_STRENGTH_FLOOR = 0.25
SPHERE_TARGET = -1.0
EXTENSION_SNAP = 1e-13


@dataclass(frozen=True)
class ShearMap:
    a: EntireFn
    b: EntireFn
    poles: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))
        # simplicity is judged on the monic part; a constant rescaling of b is allowed
        unit = abs(self.b.leading) if self.b.is_product and self.b.leading != 0 else 1.0
        for x in self.poles:
            b0, b1 = self.b.taylor(x, 1)
            if abs(b0) > POLE_ZERO_TOL * unit or abs(b1) < POLE_DERIV_MIN * unit:
                raise ModelError(f"pole {x} is not a simple zero of b (b={b0:.3g}, b'={b1:.3g})")

    def __call__(self, x, y):
        return (np.asarray(y) - self.a(x)) / self.b(x)


@dataclass(frozen=True)
class ExtensionEntry:
    """Removable singularity at the kept point ``(x, y)``: limit value and limit slope."""

    x: complex
    y: complex
    value: complex
    slope: complex


def _extension(domain: Domain, shear: ShearMap, x0: complex, y0: complex) -> ExtensionEntry:
    f = domain.local_taylor(x0, y0, 2)
    a = shear.a.taylor(x0, 2)
    b = shear.b.taylor(x0, 2)
    h = f - a
    value = h[1] / b[1]
    slope = (h[2] - value * b[2]) / b[1]
    return ExtensionEntry(complex(x0), complex(y0), complex(value), complex(slope))


@dataclass(frozen=True)
class GraphEmbedding:
    """Image ``(x, g(x, y))`` of chart points, with ``g`` extended across kept poles."""

    domain: Domain
    shear: ShearMap
    extensions: tuple[ExtensionEntry, ...] = ()

    def _table_mask(self, x, y):
        for e in self.extensions:
            tol = EXTENSION_SNAP * (1 + abs(e.x))
            yield e, (np.abs(x - e.x) <= tol) & (np.abs(y - e.y) <= 1e-6 * (1 + abs(e.y)))

    def second(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.asarray(self.shear(x, y), dtype=complex)
        for e, mask in self._table_mask(x, y):
            g = np.where(mask, e.value, g)
        return g

    def image(self, x, y):
        x = np.asarray(x, dtype=complex)
        return x, self.second(x, y)

    def image_near(self, x0, delta, y_ref):
        """Image of the domain point over ``x0 + delta`` on the sheet through ``y_ref``."""
        delta = np.asarray(delta, dtype=complex)
        y = self.domain.sheet_point_offset(x0, delta, y_ref)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (y - self.shear.a.at_offset(x0, delta)) / self.shear.b.at_offset(x0, delta)
        return x0 + delta, g

    def tangent(self, x, y):
        """Image of the unit tangent of the local chart parameter at ``(x, y)``."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        dx, dy, _ = self.domain.chart_direction(x, y)
        a0, a1 = self.shear.a.taylor(x, 1)
        b0, b1 = self.shear.b.taylor(x, 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            dg = (dy - a1 * dx) / b0 - (y - a0) * b1 * dx / b0**2
        for e, mask in self._table_mask(x, y):
            dg = np.where(mask, e.slope * dx, dg)
        return dx, dg


@dataclass(frozen=True)
class ComponentMap:
    """Explicit pair of component functions of chart points, with their partials.

    ``partials(x, y)`` returns ``((F1_x, F1_y), (F2_x, F2_y))``.
    """

    domain: Domain
    first: Callable
    second_fn: Callable
    partials: Callable

    def second(self, x, y):
        return np.asarray(self.second_fn(np.asarray(x, complex), np.asarray(y, complex)), dtype=complex)

    def image(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return np.asarray(self.first(x, y), complex) * np.ones_like(x), self.second(x, y) * np.ones_like(x)

    def image_near(self, x0, delta, y_ref):
        z = x0 + np.asarray(delta, dtype=complex)
        return self.image(z, self.domain.sheet_point(z, y_ref))

    def tangent(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        dx, dy, _ = self.domain.chart_direction(x, y)
        (f1x, f1y), (f2x, f2y) = self.partials(x, y)
        return f1x * dx + f1y * dy, f2x * dx + f2y * dy


@dataclass(frozen=True)
class EmbeddingArtifact:
    model: SurfaceModel
    domain: Domain
    map: object
    shear: Optional[ShearMap]
    columns: tuple[FiberClassification, ...]
    provenance: str
    truncation: Optional[int] = None
    truncation_note: str = ""
    mobius: Optional[MobiusMap] = None
    chart_model: Optional[SurfaceModel] = None
    normalization: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def extensions(self) -> tuple[ExtensionEntry, ...]:
        return getattr(self.map, "extensions", ())

    def removed_points(self) -> list[CurvePoint]:
        return [p for c in self.columns for p in c.removed_points]

    def image(self, x, y):
        return self.map.image(x, y)


def shear_apply(domain: Domain, shear: ShearMap, kept: Optional[dict] = None) -> GraphEmbedding:
    """Shear ``domain`` and install the L'Hopital values at kept points over poles.

    ``kept`` maps pole columns to the second coordinate of the domain point kept
    there.  For a plane graph every pole is kept; for a curve only the columns
    with one surviving fiber point are listed.
    """
    if kept is None:
        if isinstance(domain, PlaneGraph):
            kept = {x: domain.f(x) for x in shear.poles}
        else:
            kept = {}
    entries = []
    for x0, y0 in kept.items():
        a0 = shear.a(x0)
        if abs(a0 - y0) > MATCH_TOL * (1 + abs(y0)):
            raise HypothesisFailure(f"a({x0}) = {a0} but the kept point has y = {y0}")
        entries.append(_extension(domain, shear, x0, y0))
    return GraphEmbedding(domain, shear, tuple(entries))


# --------------------------------------------------------------------------
# pipelines


def _normalize_poles(b: EntireFn, columns: Sequence[FiberClassification]) -> tuple[EntireFn, float]:
    """Rescale ``b`` so every column's weakest pole has strength at least the floor.

    Pole strength at a removed point is |y_removed - y_i| / |b'(x_i)|.  A
    constant factor changes neither the zeros of ``b`` nor the embedding.
    """
    if not columns:
        return b, 1.0
    strengths = []
    for col in columns:
        sep = min(abs(p.y - col.y_i) for p in col.removed_points)
        strengths.append(sep / abs(b.derivative(col.x_i)))
    weakest = min(strengths)
    if weakest >= POLE_STRENGTH_FLOOR:
        return b, 1.0
    kappa = weakest / POLE_STRENGTH_FLOOR
    log.info("rescaling b by %.3e (weakest pole strength %.3e)", kappa, weakest)
    return b.scaled(kappa), kappa


def _shear_columns(domain: Domain, columns: Sequence[FiberClassification]):
    xs = [c.x_i for c in columns]
    b_monic = build_weierstrass(xs)
    a = build_interpolant([(c.x_i, c.y_i) for c in columns], b_monic)
    b, kappa = _normalize_poles(b_monic, columns)
    shear = ShearMap(a, b, tuple(xs))
    kept = {c.x_i: c.y_i for c in columns if c.kept is not None}
    return shear_apply(domain, shear, kept), shear, kappa


def _truncate(items, truncation):
    items = tuple(items)
    if truncation is None or truncation >= len(items):
        return items, f"all {len(items)} listed punctures used"
    return items[:truncation], f"first {truncation} of {len(items)} listed punctures used"


def _line_columns(points: Sequence[complex]) -> tuple[FiberClassification, ...]:
    cols = []
    for c in points:
        pt = CurvePoint(c, 0.0)
        cols.append(FiberClassification(c, (pt,), (True,), complex(SPHERE_TARGET)))
    return tuple(cols)


def _sphere_graph(model: Sphere, finite: Sequence[complex], provenance: str, **kw) -> EmbeddingArtifact:
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            if abs(finite[i] - finite[j]) <= 1e-12:
                raise DuplicatePuncture(f"puncture {finite[i]} listed twice")
    domain = PlaneGraph()
    columns = _line_columns(finite)
    # the constant -1 interpolates the targets, so the shear is x -> (x, 1/b(x))
    b_monic = build_weierstrass(finite)
    b, kappa = _normalize_poles(b_monic, columns)
    shear = ShearMap(EntireFn.constant(SPHERE_TARGET), b, tuple(finite))
    emb = GraphEmbedding(domain, shear, ())
    return EmbeddingArtifact(
        model=model, domain=domain, map=emb, shear=shear, columns=columns,
        provenance=provenance, normalization=kappa, **kw,
    )


def embed_sphere_finite(model: Sphere) -> EmbeddingArtifact:
    """Graph of prod 1/(x - c_i) after sending one puncture to infinity."""
    pts = list(model.punctures)
    if model.accumulation:
        raise ModelError("finite sphere case takes no accumulation points")
    mobius = None
    if not any(is_inf(c) for c in pts):
        p = pts[0]
        q = pts[1] if len(pts) > 1 else (0.0 if p != 0 else 1.0)
        mobius = mobius_two_points(p, q)
        pts = [mobius(c) for c in pts]
    finite = [c for c in pts if not is_inf(c)]
    return _sphere_graph(model, finite, "sphere-finite", mobius=mobius,
                         truncation_note=f"all {len(finite)} finite punctures used")


def embed_sphere_one_acc(model: Sphere, truncation: Optional[int] = None) -> EmbeddingArtifact:
    """Graph of 1/b over C minus the first ``truncation`` terms of a sequence escaping to infinity."""
    if len(model.accumulation) != 1:
        raise ModelError("one-accumulation case needs exactly one accumulation point")
    acc = model.accumulation[0]
    mobius = None
    seq, note = _truncate(model.punctures, truncation)
    if not is_inf(acc):
        mobius = mobius_two_points(acc, 0.0 if acc != 0 else 1.0)
        seq = tuple(mobius(c) for c in seq)
    if any(is_inf(c) for c in seq):
        raise DuplicatePuncture("a puncture coincides with the accumulation point")
    return _sphere_graph(model, list(seq), "sphere-one-accumulation", mobius=mobius,
                         truncation=truncation, truncation_note=note)


def embed_sphere_two_acc(model: Sphere, truncation: Optional[int] = None) -> EmbeddingArtifact:
    """Send the accumulation points to infinity and 0, then shear ``y**2 = x**2 - 1``."""
    if len(model.accumulation) != 2:
        raise ModelError("two-accumulation case needs exactly two accumulation points")
    p, q = model.accumulation
    mobius = mobius_two_points(p, q)
    seq, note = _truncate(model.punctures, truncation)
    ts = [mobius(c) for c in seq]
    if any(is_inf(t) or t == 0 for t in ts):
        raise DuplicatePuncture("a puncture coincides with an accumulation point")
    art = embed_curve_minus_P(CStar(tuple(ts)))
    return replace(art, model=model, chart_model=art.model, mobius=mobius,
                   provenance="sphere-two-accumulation", truncation=truncation, truncation_note=note)


def embed_curve_minus_P(model, truncation: Optional[int] = None) -> EmbeddingArtifact:
    """Shear pipeline for the curve families (C*, torus, hyperelliptic, x^2 = f(y))."""
    domain = model.curve()
    punctures = model.chart_punctures()
    note = ""
    if isinstance(model, InfiniteGenus):
        note = f"f truncated to {len(model.f_roots)} roots"
    elif truncation is not None:
        punctures, note = _truncate(punctures, truncation)
    else:
        note = f"all {len(punctures)} listed punctures used"
    columns = tuple(classify_fibers(model, punctures, domain))
    emb, shear, kappa = _shear_columns(domain, columns)
    return EmbeddingArtifact(
        model=model, domain=domain, map=emb, shear=shear, columns=columns,
        provenance=f"{model.family}-shear", truncation=truncation,
        truncation_note=note, normalization=kappa,
    )


def embed(model: SurfaceModel, truncation: Optional[int] = None) -> EmbeddingArtifact:
    """Dispatch to the pipeline for ``model``'s family."""
    if isinstance(model, Sphere):
        k = len(model.accumulation)
        if k == 0:
            return embed_sphere_finite(model)
        if k == 1:
            return embed_sphere_one_acc(model, truncation)
        return embed_sphere_two_acc(model, truncation)
    if isinstance(model, (CStar, Torus, Hyperelliptic, InfiniteGenus)):
        return embed_curve_minus_P(model, truncation)
    raise ModelError(f"unknown model {model!r}")


def rebuild_with_targets(artifact: EmbeddingArtifact, targets: Sequence[complex]) -> EmbeddingArtifact:
    """Same columns and ``b`` but new interpolation targets (used by designed counterexamples)."""
    columns = tuple(replace(c, y_i=complex(t)) for c, t in zip(artifact.columns, targets))
    b_monic = build_weierstrass([c.x_i for c in columns])
    a = build_interpolant([(c.x_i, c.y_i) for c in columns], b_monic)
    shear = ShearMap(a, artifact.shear.b, artifact.shear.poles)
    emb = GraphEmbedding(artifact.domain, shear, artifact.extensions)
    return replace(artifact, map=emb, shear=shear, columns=columns)
