"""Deliberately broken artifacts; each should be caught by exactly one check."""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np

from .embedder import ComponentMap, EmbeddingArtifact, GraphEmbedding, ShearMap, rebuild_with_targets
from .errors import ConfigError
from .holo_core import build_interpolant, build_weierstrass
from .surfaces import INF, PlaneGraph, Sphere, classify_fibers


def tamper_interpolant(artifact: EmbeddingArtifact, shift: complex = 1.0) -> EmbeddingArtifact:
    """Replace ``a`` by ``a + shift`` at every column, leaving the recorded targets alone.

    The extension table is dropped: it was computed for the untampered ``a``.
    """
    if artifact.shear is None or not artifact.columns:
        raise ConfigError("tampering needs an artifact with at least one column")
    cols = artifact.columns
    b_monic = build_weierstrass([c.x_i for c in cols])
    a = build_interpolant([(c.x_i, c.y_i + shift) for c in cols], b_monic)
    shear = ShearMap(a, artifact.shear.b, artifact.shear.poles)
    return replace(artifact, map=GraphEmbedding(artifact.domain, shear, ()), shear=shear,
                   provenance=artifact.provenance + "+tampered-a")


def colliding_graph(model) -> EmbeddingArtifact:
    """(x, y) -> (x, 1/p(x)) on ``y**2 = p(x)``: proper and immersive, but fiber mates collide."""
    domain = model.curve()
    p = domain.p

    def second(x, y):
        return 1.0 / p(x)

    def partials(x, y):
        p0, p1 = p.taylor(x, 1)
        zero = np.zeros_like(x)
        return (np.ones_like(x), zero), (-p1 / p0**2, zero)

    fake = ComponentMap(domain, lambda x, y: x, second, partials)
    columns = tuple(classify_fibers(model, model.chart_punctures(), domain))
    return EmbeddingArtifact(model=model, domain=domain, map=fake, shear=None, columns=columns,
                             provenance="fake-colliding-graph")


def cubic_sextic() -> EmbeddingArtifact:
    """x -> (x**3, x**6) on the plane: injective near 0 on a disk, but the derivative vanishes at 0."""
    domain = PlaneGraph()

    def partials(x, y):
        zero = np.zeros_like(x)
        return (3 * x**2, zero), (6 * x**5, zero)

    fake = ComponentMap(domain, lambda x, y: x**3, lambda x, y: x**6, partials)
    return EmbeddingArtifact(model=Sphere((INF,)), domain=domain, map=fake, shear=None,
                             columns=(), provenance="fake-cubic-sextic")


def with_targets(artifact: EmbeddingArtifact, targets: Sequence[complex]) -> EmbeddingArtifact:
    if len(targets) != len(artifact.columns):
        raise ConfigError(f"need {len(artifact.columns)} targets, got {len(targets)}")
    out = rebuild_with_targets(artifact, targets)
    return replace(out, provenance=artifact.provenance + "+retargeted")
