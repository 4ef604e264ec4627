"""Affine models of the punctured surfaces and the normalizations between them.

Every curve family is carried on a chart ``w**2 = p(z)`` where ``z`` is the
base coordinate of the projection.  For ``x**2 = f(y)`` the roles are swapped:
the base is ``y`` and chart points are stored as ``(y, x)``.

Points at infinity are never stored.  The fiber over infinity of the chart is
always part of the removed set.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (
    CoincidentPoints,
    DuplicatePuncture,
    HypothesisViolation,
    ModelError,
    NotABranchPoint,
    PointOffCurve,
    PunctureOffCurve,
    ZeroInput,
)
from .holo_core import EntireFn

INF = complex(math.inf, 0.0)

RESIDUAL_TOL = 1e-9
RAMIFICATION_TOL = 1e-12
COLUMN_MERGE_TOL = 1e-9
SUBMERSION_TOL = 1e-9
DISTINCT_TOL = 1e-9


def is_inf(z) -> bool:
    return z is None or cmath.isinf(complex(z))


@dataclass(frozen=True)
class CurvePoint:
    x: complex
    y: complex

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "y", complex(self.y))

    def __iter__(self):
        return iter((self.x, self.y))


# --------------------------------------------------------------------------
# domains: what the embedding is a graph over


@dataclass(frozen=True)
class AffineCurve:
    """The plane curve ``w**2 = p(z)``; two sheets over each unramified base point."""

    p: EntireFn
    sheets = 2

    @property
    def branch_points(self) -> tuple[complex, ...]:
        return self.p.linear_factors

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.p.coefficients())))

    def is_ramified(self, x) -> bool:
        return abs(self.p(x)) <= RAMIFICATION_TOL * (1 + self.scale)

    def fiber(self, x) -> list[CurvePoint]:
        x = complex(x)
        px = self.p(x)
        if abs(px) <= RAMIFICATION_TOL * (1 + self.scale):
            return [CurvePoint(x, 0.0)]
        s = cmath.sqrt(px)
        return [CurvePoint(x, s), CurvePoint(x, -s)]

    def residual(self, x, y):
        px = self.p(x)
        return np.abs(np.asarray(y) ** 2 - px) / (1 + np.abs(px))

    def sheet_point(self, x, y_ref):
        """Fiber point over ``x`` closest to ``y_ref`` (continuation along a short step)."""
        s = np.sqrt(np.asarray(self.p(x), dtype=complex))
        return np.where(np.abs(s - y_ref) <= np.abs(-s - y_ref), s, -s)

    def sheet_point_offset(self, x0, delta, y_ref):
        s = np.sqrt(np.asarray(self.p.at_offset(x0, delta), dtype=complex))
        return np.where(np.abs(s - y_ref) <= np.abs(-s - y_ref), s, -s)

    def local_taylor(self, x0, y0, order: int) -> np.ndarray:
        """Taylor coefficients of the local graph function through ``(x0, y0)``, ``y0 != 0``."""
        pc = self.p.taylor(complex(x0), order)
        f = np.zeros(order + 1, dtype=complex)
        f[0] = y0
        for j in range(1, order + 1):
            acc = pc[j] - sum(f[i] * f[j - i] for i in range(1, j))
            f[j] = acc / (2 * y0)
        return f

    def chart_direction(self, x, y):
        """Tangent (dx, dy) along a local parameter: x where possible, else y."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        dp = np.asarray(self.p.derivative(x), dtype=complex)
        use_x = np.abs(2 * y) >= np.abs(dp)
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = np.where(use_x, 1.0, 2 * y / dp)
            dy = np.where(use_x, dp / (2 * y), 1.0)
        return dx.astype(complex), dy.astype(complex), use_x


@dataclass(frozen=True)
class PlaneGraph:
    """The graph ``y = f(x)`` of an entire function; one sheet, no ramification."""

    f: EntireFn = field(default_factory=lambda: EntireFn.constant(0.0))
    sheets = 1
    branch_points: tuple = ()

    def is_ramified(self, x) -> bool:
        return False

    def fiber(self, x) -> list[CurvePoint]:
        return [CurvePoint(x, self.f(complex(x)))]

    def residual(self, x, y):
        fx = self.f(x)
        return np.abs(np.asarray(y) - fx) / (1 + np.abs(fx))

    def sheet_point(self, x, y_ref):
        return np.asarray(self.f(x), dtype=complex)

    def sheet_point_offset(self, x0, delta, y_ref):
        return np.asarray(self.f.at_offset(x0, delta), dtype=complex)

    def local_taylor(self, x0, y0, order: int) -> np.ndarray:
        return self.f.taylor(complex(x0), order)

    def chart_direction(self, x, y):
        x = np.asarray(x, dtype=complex)
        dy = np.asarray(self.f.derivative(x), dtype=complex)
        return np.ones_like(x), dy, np.ones(x.shape, dtype=bool)


Domain = Union[AffineCurve, PlaneGraph]


# --------------------------------------------------------------------------
# surface models


def _check_on(curve: AffineCurve, pts: Sequence[CurvePoint], err=PunctureOffCurve) -> None:
    for pt in pts:
        px = curve.p(pt.x)
        if abs(pt.y**2 - px) > RESIDUAL_TOL * (1 + abs(px)):
            raise err(f"point ({pt.x}, {pt.y}) is off the curve: residual {abs(pt.y**2 - px):.3g}")


def _check_distinct(values, what: str, err=ModelError) -> None:
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= DISTINCT_TOL:
                raise err(f"{what} {values[i]} and {values[j]} must be distinct")


def _genus(n_branch: int) -> int:
    return max(0, math.ceil((n_branch - 2) / 2))


@dataclass(frozen=True)
class Sphere:
    """P^1 minus ``punctures`` (discrete part) and ``accumulation`` (at most two points)."""

    punctures: tuple[complex, ...]
    accumulation: tuple[complex, ...] = ()
    family = "sphere"

    def __post_init__(self):
        object.__setattr__(self, "punctures", tuple(complex(c) for c in self.punctures))
        object.__setattr__(self, "accumulation", tuple(complex(c) for c in self.accumulation))
        if len(self.accumulation) > 2:
            raise ModelError("at most 2 accumulation points may be designated")
        if not self.punctures and not self.accumulation:
            raise ModelError("the removed set must be nonempty")
        finite = [c for c in self.punctures + self.accumulation if not is_inf(c)]
        n_inf = len(self.punctures + self.accumulation) - len(finite)
        if n_inf > 1:
            raise DuplicatePuncture("infinity listed more than once")
        _check_distinct(finite, "punctures", DuplicatePuncture)

    genus = 0
    weierstrass_points = 0


@dataclass(frozen=True)
class CStar:
    """C* minus ``removed``, realized on ``y**2 = x**2 - 1`` through t -> ((t+1/t)/2, (t-1/t)/2)."""

    removed: tuple[complex, ...]
    family = "cstar"

    def __post_init__(self):
        object.__setattr__(self, "removed", tuple(complex(t) for t in self.removed))
        if any(t == 0 or is_inf(t) for t in self.removed):
            raise ModelError("removed points of C* must be finite and nonzero")
        _check_distinct(list(self.removed), "removed points")

    def curve(self) -> AffineCurve:
        return AffineCurve(EntireFn(1.0, (1.0, -1.0)))

    def chart_punctures(self) -> tuple[CurvePoint, ...]:
        return tuple(cstar_on_curve(t) for t in self.removed)

    genus = 0
    weierstrass_points = 2


@dataclass(frozen=True)
class Torus:
    """``y**2 = x(x-1)(x-A)`` minus ``punctures`` and the point at infinity."""

    A: complex
    punctures: tuple[CurvePoint, ...] = ()
    family = "torus"

    def __post_init__(self):
        object.__setattr__(self, "A", complex(self.A))
        object.__setattr__(self, "punctures", tuple(self.punctures))
        if abs(self.A) <= DISTINCT_TOL or abs(self.A - 1) <= DISTINCT_TOL:
            raise ModelError("A must differ from 0 and 1")
        _check_on(self.curve(), self.punctures)

    @property
    def a2(self) -> complex:
        return -(1 + self.A)

    @property
    def a4(self) -> complex:
        return self.A

    def curve(self) -> AffineCurve:
        return AffineCurve(EntireFn(1.0, (0.0, 1.0, self.A)))

    def chart_punctures(self) -> tuple[CurvePoint, ...]:
        return self.punctures

    genus = 1
    weierstrass_points = 4


@dataclass(frozen=True)
class Hyperelliptic:
    """``y**2 = leading * prod(x - e)`` minus ``punctures`` and the fiber over infinity."""

    branch: tuple[complex, ...]
    punctures: tuple[CurvePoint, ...] = ()
    leading: complex = 1.0
    family = "hyperelliptic"

    def __post_init__(self):
        object.__setattr__(self, "branch", tuple(complex(e) for e in self.branch))
        object.__setattr__(self, "punctures", tuple(self.punctures))
        object.__setattr__(self, "leading", complex(self.leading))
        if len(self.branch) < 3:
            raise ModelError("a hyperelliptic model needs at least 3 finite branch points")
        if self.leading == 0:
            raise ModelError("leading coefficient must be nonzero")
        _check_distinct(list(self.branch), "branch points")
        _check_on(self.curve(), self.punctures)

    def curve(self) -> AffineCurve:
        return AffineCurve(EntireFn(self.leading, self.branch))

    def chart_punctures(self) -> tuple[CurvePoint, ...]:
        return self.punctures

    @property
    def genus(self) -> int:
        return _genus(len(self.branch))

    @property
    def weierstrass_points(self) -> int:
        # odd degree: one more ramification point sits at infinity
        return len(self.branch) + len(self.branch) % 2


@dataclass(frozen=True)
class InfiniteGenus:
    """``x**2 = f(y)`` with ``f`` the product over the (truncated) prescribed roots.

    Punctures are given in the model's own (x, y) order; the chart swaps them.
    """

    f_roots: tuple[complex, ...]
    punctures: tuple[CurvePoint, ...] = ()
    truncation: Optional[int] = None
    family = "infinite_genus"

    def __post_init__(self):
        roots = tuple(complex(r) for r in self.f_roots)
        if self.truncation is not None:
            roots = roots[: self.truncation]
        object.__setattr__(self, "f_roots", roots)
        object.__setattr__(self, "punctures", tuple(self.punctures))
        if not roots:
            raise ModelError("f needs at least one root")
        _check_distinct(list(roots), "roots of f")
        _check_on(self.curve(), self.chart_punctures())

    def curve(self) -> AffineCurve:
        return AffineCurve(EntireFn(1.0, self.f_roots))

    def chart_punctures(self) -> tuple[CurvePoint, ...]:
        return tuple(CurvePoint(pt.y, pt.x) for pt in self.punctures)

    @staticmethod
    def to_model(pt: CurvePoint) -> CurvePoint:
        return CurvePoint(pt.y, pt.x)

    @property
    def genus(self) -> int:
        return _genus(len(self.f_roots))

    @property
    def weierstrass_points(self) -> int:
        return len(self.f_roots) + len(self.f_roots) % 2


SurfaceModel = Union[Sphere, CStar, Torus, Hyperelliptic, InfiniteGenus]
CurveModel = Union[CStar, Torus, Hyperelliptic, InfiniteGenus]


# --------------------------------------------------------------------------
# fibers


def fiber(model: CurveModel, x) -> list[CurvePoint]:
    """Points over the base value ``x``: (x, +s), (x, -s), or one ramification point."""
    return model.curve().fiber(x)


@dataclass(frozen=True)
class FiberClassification:
    x_i: complex
    fiber_points: tuple[CurvePoint, ...]
    punctured: tuple[bool, ...]
    y_i: complex
    kept: Optional[CurvePoint] = None

    @property
    def case(self) -> str:
        return "half" if self.kept is not None else "full"

    @property
    def removed_points(self) -> tuple[CurvePoint, ...]:
        return tuple(p for p, hit in zip(self.fiber_points, self.punctured) if hit)


def _group_columns(points: Sequence[CurvePoint]) -> list[list[CurvePoint]]:
    groups: list[list[CurvePoint]] = []
    for pt in points:
        for g in groups:
            if abs(g[0].x - pt.x) <= COLUMN_MERGE_TOL:
                g.append(pt)
                break
        else:
            groups.append([pt])
    return groups


def classify_fibers(model, punctures: Sequence[CurvePoint], domain: Domain = None) -> list[FiberClassification]:
    """One classification per puncture column, in order of first appearance.

    ``punctures`` are chart points.  A column whose whole fiber is removed gets
    the target ``1 + max |y|`` over the fiber; a column with one kept point gets
    that point's second coordinate.
    """
    curve = domain if domain is not None else model.curve()
    out = []
    for group in _group_columns(punctures):
        x = group[0].x
        fib = curve.fiber(x)
        hit = [False] * len(fib)
        for pt in group:
            res = curve.residual(pt.x, pt.y)
            if float(res) > RESIDUAL_TOL:
                raise PunctureOffCurve(f"puncture ({pt.x}, {pt.y}) is off the curve: residual {float(res):.3g}")
            k = min(range(len(fib)), key=lambda i: abs(fib[i].y - pt.y))
            hit[k] = True
        if all(hit):
            y_i = 1 + max(abs(p.y) for p in fib)
            out.append(FiberClassification(x, tuple(fib), tuple(hit), complex(y_i)))
        else:
            kept = fib[hit.index(False)]
            if abs(kept.y) <= SUBMERSION_TOL:
                raise HypothesisViolation(f"kept point over {x} is a ramification point")
            out.append(FiberClassification(x, tuple(fib), tuple(hit), kept.y, kept))
    return out


# --------------------------------------------------------------------------
# Moebius moves on P^1


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __call__(self, z) -> complex:
        if is_inf(z):
            return self.a / self.c if self.c != 0 else INF
        z = complex(z)
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    @property
    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d


def mobius_two_points(p, q) -> MobiusMap:
    """Map sending ``q`` to 0 and ``p`` to infinity."""
    if is_inf(p) and is_inf(q):
        raise CoincidentPoints("p and q are both infinity")
    if is_inf(p):
        return MobiusMap(1, -complex(q), 0, 1)
    if is_inf(q):
        return MobiusMap(0, 1, 1, -complex(p))
    p, q = complex(p), complex(q)
    if p == q:
        raise CoincidentPoints(f"p = q = {p}")
    return MobiusMap(1, -q, 1, -p)


def cstar_on_curve(t) -> CurvePoint:
    t = complex(t)
    if t == 0:
        raise ZeroInput("t must be nonzero")
    return CurvePoint((t + 1 / t) / 2, (t - 1 / t) / 2)


# --------------------------------------------------------------------------
# group law on y^2 = x^3 + a2 x^2 + a4 x   (None is the point at infinity)


def _on_torus(model: Torus, pt: CurvePoint, tol: float = RESIDUAL_TOL) -> None:
    px = pt.x * (pt.x - 1) * (pt.x - model.A)
    if abs(pt.y**2 - px) > tol * (1 + abs(px)):
        raise PointOffCurve(f"({pt.x}, {pt.y}) is not on y^2 = x(x-1)(x-{model.A})")


def ec_neg(P: Optional[CurvePoint]) -> Optional[CurvePoint]:
    return None if P is None else CurvePoint(P.x, -P.y)


def ec_add(model: Torus, P: Optional[CurvePoint], Q: Optional[CurvePoint]) -> Optional[CurvePoint]:
    if P is None:
        return Q
    if Q is None:
        return P
    a2, a4 = model.a2, model.a4
    if P.x == Q.x:
        if P.y == -Q.y:
            return None
        lam = (3 * P.x**2 + 2 * a2 * P.x + a4) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam**2 - a2 - P.x - Q.x
    y3 = -(P.y + lam * (x3 - P.x))
    return CurvePoint(x3, y3)


def ec_double(model: Torus, P: Optional[CurvePoint]) -> Optional[CurvePoint]:
    return ec_add(model, P, P)


def elliptic_translate(
    model: Torus, p0: CurvePoint, infinity_removed: bool = True
) -> tuple[Torus, Callable[[Optional[CurvePoint]], Optional[CurvePoint]]]:
    """Translation by ``-p0``: sends ``p0`` to infinity.

    The returned torus removes the image of ``model``'s removed set together
    with the image of ``p0`` (now at infinity).  With ``infinity_removed`` the
    old point at infinity is part of that set and lands on ``-p0``.
    """
    _on_torus(model, p0)
    shift = ec_neg(p0)

    def move(q: Optional[CurvePoint]) -> Optional[CurvePoint]:
        return ec_add(model, q, shift)

    images = [move(q) for q in model.punctures if not (q.x == p0.x and q.y == p0.y)]
    if infinity_removed:
        images.append(shift)
    images = [q for q in images if q is not None]
    return Torus(model.A, tuple(images)), move


# --------------------------------------------------------------------------
# branch point to infinity:  u = 1/(x - e),  v = y u^ceil(n/2)


def move_branch_point_to_infinity(
    model: Hyperelliptic, e_k, infinity_removed: bool = True
) -> tuple[Hyperelliptic, Callable[[CurvePoint], Optional[CurvePoint]]]:
    """Send the Weierstrass point over ``e_k`` to infinity.

    For even degree ``n`` the new model has degree ``n - 1`` with branch points
    ``1/(e_j - e_k)``; for odd ``n`` the old point at infinity becomes the
    extra branch point ``u = 0`` and the degree stays ``n``.  A puncture over
    ``e_k`` maps to infinity (returned as ``None``) and is dropped.
    """
    e_k = complex(e_k)
    idx = [i for i, e in enumerate(model.branch) if abs(e - e_k) <= DISTINCT_TOL]
    if not idx:
        raise NotABranchPoint(f"{e_k} is not a branch point")
    e_k = model.branch[idx[0]]
    others = [e for i, e in enumerate(model.branch) if i != idx[0]]
    n = len(model.branch)
    m = (n + 1) // 2
    new_branch = [1 / (e - e_k) for e in others]
    lead = model.leading * np.prod([e_k - e for e in others])
    if n % 2:
        new_branch.append(0.0)

    def move(pt: CurvePoint) -> Optional[CurvePoint]:
        if abs(pt.x - e_k) <= DISTINCT_TOL:
            return None
        u = 1 / (pt.x - e_k)
        return CurvePoint(u, pt.y * u**m)

    images = [move(q) for q in model.punctures]
    images = [q for q in images if q is not None]
    if infinity_removed:
        if n % 2:
            images.append(CurvePoint(0.0, 0.0))
        else:
            s = cmath.sqrt(model.leading)
            images += [CurvePoint(0.0, s), CurvePoint(0.0, -s)]
    return Hyperelliptic(tuple(new_branch), tuple(images), complex(lead)), move
