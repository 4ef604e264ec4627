"""Proper holomorphic embeddings of punctured Riemann surfaces into C^2, with numerical checks."""

from .embedder import EmbeddingArtifact, embed
from .holo_core import EntireFn, build_interpolant, build_weierstrass, count_zeros_in_disk
from .surfaces import INF, CStar, CurvePoint, Hyperelliptic, InfiniteGenus, Sphere, Torus
from .verify import VerificationReport

__all__ = [
    "INF",
    "CStar",
    "CurvePoint",
    "EmbeddingArtifact",
    "EntireFn",
    "Hyperelliptic",
    "InfiniteGenus",
    "Sphere",
    "Torus",
    "VerificationReport",
    "build_interpolant",
    "build_weierstrass",
    "count_zeros_in_disk",
    "embed",
]
