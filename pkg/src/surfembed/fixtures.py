"""Named models used by the acceptance suite, the scripts and the example configs."""

from __future__ import annotations

import cmath
import math

from .surfaces import INF, CurvePoint, Hyperelliptic, InfiniteGenus, Sphere, Torus

SQRT6 = math.sqrt(6.0)


def sphere_finite() -> tuple[Sphere, None]:
    return Sphere((INF, 0.0, 1.0)), None


def sphere_one_accumulation(n: int = 20) -> tuple[Sphere, int]:
    return Sphere(tuple(float(i) for i in range(1, n + 1)), (INF,)), n


def sphere_two_accumulation(n: int = 10) -> tuple[Sphere, None]:
    """Accumulation at infinity and 0; punctures 2**i and 2**-i."""
    seq = [2.0**i for i in range(1, n + 1)] + [2.0**-i for i in range(1, n + 1)]
    return Sphere(tuple(seq), (INF, 0.0)), None


def sphere_two_accumulation_mixed(n: int = 5) -> tuple[Sphere, None]:
    """Same shape, but 2**i and -2**-i land on different columns, so every column keeps a point."""
    seq = [2.0**i for i in range(1, n + 1)] + [-(2.0**-i) for i in range(1, n + 1)]
    return Sphere(tuple(seq), (INF, 0.0)), None


def torus_weierstrass() -> tuple[Torus, None]:
    return Torus(2.0, (CurvePoint(0.0, 0.0),)), None


def torus_half_fiber() -> tuple[Torus, None]:
    return Torus(2.0, (CurvePoint(3.0, SQRT6),)), None


def torus_full_fiber() -> tuple[Torus, None]:
    return Torus(2.0, (CurvePoint(3.0, SQRT6), CurvePoint(3.0, -SQRT6))), None


def torus_finite_weierstrass() -> tuple[Torus, None]:
    """All three finite ramification points removed (base of the colliding fake)."""
    return Torus(2.0, tuple(CurvePoint(e, 0.0) for e in (0.0, 1.0, 2.0))), None


def genus_two_mixed() -> tuple[Hyperelliptic, None]:
    """y**2 = x(x-1)...(x-5); the fiber over 6 is removed, one point over 7 is removed."""
    r720, r5040 = math.sqrt(720.0), math.sqrt(5040.0)
    pts = (CurvePoint(6.0, r720), CurvePoint(6.0, -r720), CurvePoint(7.0, r5040))
    return Hyperelliptic(tuple(float(e) for e in range(6)), pts), None


def infinite_genus_truncated(n_roots: int = 15) -> tuple[InfiniteGenus, int]:
    """x**2 = f(y), f with ``n_roots`` roots on |y| = 1.5; ten punctures over seven y-columns.

    The first three columns lose both points, the other four keep one.
    """
    roots = tuple(1.5 * cmath.exp(2j * math.pi * k / n_roots) for k in range(n_roots))
    pts = []
    for j in range(7):
        y = 2.2 * cmath.exp(2j * math.pi * (j + 0.5) / 7)
        fy = 1.0
        for r in roots:
            fy *= y - r
        x = cmath.sqrt(fy)
        pts.append(CurvePoint(x, y))
        if j < 3:
            pts.append(CurvePoint(-x, y))
    return InfiniteGenus(roots, tuple(pts), n_roots), n_roots


PIPELINE_FIXTURES = {
    "sphere_finite": sphere_finite,
    "sphere_one_accumulation": sphere_one_accumulation,
    "sphere_two_accumulation": sphere_two_accumulation,
    "sphere_two_accumulation_mixed": sphere_two_accumulation_mixed,
    "torus_weierstrass": torus_weierstrass,
    "torus_half_fiber": torus_half_fiber,
    "torus_full_fiber": torus_full_fiber,
    "torus_finite_weierstrass": torus_finite_weierstrass,
    "genus_two_mixed": genus_two_mixed,
    "infinite_genus_truncated": infinite_genus_truncated,
}
