"""Finite closed-form entire functions and argument-principle zero counting.

An :class:`EntireFn` is stored as

    leading * prod_r (x - r)  +  sum_k w_k * prod_{r != node_k} (x - r)

over one shared list of linear factors ``r``.  A Weierstrass product has no
interpolation terms; an interpolant has ``leading == 0`` and one term per node.
Both pieces are polynomials, so the function is entire by construction.

Derivatives are exact: evaluation propagates truncated Taylor series through
the products, so ``taylor(x, k)`` returns the first ``k + 1`` coefficients
f(x), f'(x), f''(x)/2, ... without any finite differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ContourThroughZero,
    DuplicateZero,
    NodeNotZeroOfB,
    NonIntegerWinding,
    ZeroDerivative,
)

DUPLICATE_TOL = 1e-12
INTERP_NODE_TOL = 1e-9
MIN_DERIVATIVE = 1e-12
CONTOUR_ZERO_TOL = 1e-9
ROOT_CLEARANCE = 1e-6
WINDING_TOL = 0.1
WINDING_CONVERGENCE = 0.05
DEFAULT_SAMPLES = 256
MAX_SAMPLES = 1 << 15


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    return z


def _mul_linear(series: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Multiply truncated series (..., K) by (d + h)."""
    out = series * d[..., None]
    out[..., 1:] += series[..., :-1]
    return out


def _mul_series(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    order = s.shape[-1]
    out = np.zeros_like(s)
    for j in range(order):
        out[..., j:] += s[..., j : j + 1] * t[..., : order - j]
    return out


@dataclass(frozen=True)
class EntireFn:
    leading: complex = 1.0
    linear_factors: tuple[complex, ...] = ()
    interp_terms: tuple[tuple[complex, complex], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "leading", _as_complex(self.leading))
        factors = tuple(_as_complex(r) for r in self.linear_factors)
        object.__setattr__(self, "linear_factors", factors)
        terms = tuple((_as_complex(n), _as_complex(w)) for n, w in self.interp_terms)
        object.__setattr__(self, "interp_terms", terms)
        for node, _ in terms:
            if node not in factors:
                raise ValueError(
                    f"interpolation node {node!r} is not a linear factor; the term would not be entire"
                )

    @classmethod
    def constant(cls, c) -> "EntireFn":
        return cls(leading=c)

    @cached_property
    def _roots(self) -> np.ndarray:
        return np.array(self.linear_factors, dtype=complex)

    @cached_property
    def _term_index(self) -> np.ndarray:
        return np.array([self.linear_factors.index(n) for n, _ in self.interp_terms], dtype=int)

    @cached_property
    def _term_weight(self) -> np.ndarray:
        return np.array([w for _, w in self.interp_terms], dtype=complex)

    @property
    def is_product(self) -> bool:
        """True when there are no interpolation terms (zeros are exactly the factors)."""
        return not self.interp_terms

    @property
    def degree_bound(self) -> int:
        return len(self.linear_factors)

    def taylor(self, x, order: int = 1, offset=None) -> np.ndarray:
        """Taylor coefficients at ``x`` (or at ``x + offset``); shape ``(order + 1, *x.shape)``.

        With ``offset`` each factor is formed as ``(x - r) + offset``, so a
        factor vanishing at ``x`` contributes exactly ``offset``.
        """
        x = np.asarray(x, dtype=complex)
        if offset is not None:
            x, offset = np.broadcast_arrays(x, np.asarray(offset, dtype=complex))
        shape = x.shape
        flat = x.reshape(-1)
        K = order + 1
        n = len(self.linear_factors)
        d = flat[:, None] - self._roots[None, :]
        if offset is not None:
            d = d + offset.reshape(-1)[:, None]

        prefix = np.zeros((n + 1, flat.size, K), dtype=complex)
        prefix[0, :, 0] = 1.0
        for i in range(n):
            prefix[i + 1] = _mul_linear(prefix[i], d[:, i])
        total = self.leading * prefix[n]

        if self.interp_terms:
            suffix = np.zeros((n + 1, flat.size, K), dtype=complex)
            suffix[n, :, 0] = 1.0
            for i in range(n - 1, -1, -1):
                suffix[i] = _mul_linear(suffix[i + 1], d[:, i])
            for k, w in zip(self._term_index, self._term_weight):
                total = total + w * _mul_series(prefix[k], suffix[k + 1])

        return np.moveaxis(total, -1, 0).reshape((K, *shape))

    def __call__(self, x):
        out = self.taylor(x, 0)[0]
        return out.item() if out.ndim == 0 else out

    def at_offset(self, x0, delta):
        """Value at ``x0 + delta`` without first rounding ``x0 + delta``."""
        out = self.taylor(x0, 0, offset=delta)[0]
        return out.item() if out.ndim == 0 else out

    def derivative(self, x, order: int = 1):
        out = self.taylor(x, order)[order] * math.factorial(order)
        return out.item() if out.ndim == 0 else out

    def scaled(self, c) -> "EntireFn":
        c = _as_complex(c)
        return EntireFn(
            self.leading * c,
            self.linear_factors,
            tuple((n, w * c) for n, w in self.interp_terms),
        )

    def coefficients(self) -> np.ndarray:
        """Monomial coefficients, highest degree first (for display and tests only)."""
        roots = self._roots
        out = self.leading * np.poly(roots) if len(roots) else np.array([self.leading])
        out = np.atleast_1d(out).astype(complex)
        for k, w in zip(self._term_index, self._term_weight):
            part = w * np.poly(np.delete(roots, k))
            out = np.polyadd(out, part)
        return np.trim_zeros(out, "f") if np.any(out) else np.array([0j])


def _check_distinct(points: Sequence[complex], tol: float = DUPLICATE_TOL) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) <= tol:
                raise DuplicateZero(f"zeros {points[i]!r} and {points[j]!r} coincide within {tol}")


def build_weierstrass(zeros: Iterable) -> EntireFn:
    """Monic product with a simple zero at each prescribed point and no others."""
    zs = tuple(_as_complex(z) for z in zeros)
    _check_distinct(zs)
    return EntireFn(1.0, zs)


def build_interpolant(nodes: Iterable, b: EntireFn) -> EntireFn:
    """Entire ``a`` with ``a(x_i) = y_i``, written as sum y_i b(x) / (b'(x_i)(x - x_i)).

    Each node must sit on a simple zero of ``b``, which must be a pure product.
    """
    nodes = [(_as_complex(x), _as_complex(y)) for x, y in nodes]
    if not b.is_product:
        raise ValueError("interpolant basis b must be a pure product of linear factors")
    _check_distinct([x for x, _ in nodes])
    if not nodes:
        return EntireFn(0.0, b.linear_factors)

    roots = b._roots
    terms = []
    for x, y in nodes:
        b0, b1 = b.taylor(x, 1)
        if abs(b1) < MIN_DERIVATIVE:
            raise ZeroDerivative(f"b'({x!r}) = {b1!r} vanishes; {x!r} is not a simple zero")
        if abs(b0) > INTERP_NODE_TOL * (1 + abs(b1)):
            raise NodeNotZeroOfB(f"|b({x!r})| = {abs(b0):.3g} is not a zero of b")
        factor = b.linear_factors[int(np.argmin(np.abs(roots - x)))]
        # exact node: b'(factor) equals the product of the other factors term for term
        b1 = b.derivative(factor)
        terms.append((factor, y * b.leading / b1))
    return EntireFn(0.0, b.linear_factors, tuple(terms))


def _winding_estimate(f: EntireFn, center: complex, radius: float, samples: int) -> float:
    theta = 2 * np.pi * np.arange(samples) / samples
    offset = radius * np.exp(1j * theta)
    val, der = f.taylor(center + offset, 1)
    mag = np.abs(val)
    if mag.min() <= CONTOUR_ZERO_TOL * mag.max() or mag.max() == 0:
        k = int(np.argmin(mag))
        raise ContourThroughZero(
            f"|f| = {mag[k]:.3g} at contour node {center + offset[k]!r} (radius {radius})"
        )
    return float(np.mean(der / val * offset).real)


def count_zeros_in_disk(
    f: EntireFn, center, radius: float, samples: int = DEFAULT_SAMPLES
) -> int:
    """Number of zeros of ``f`` in the open disk, by the argument principle.

    The trapezoidal rule starts at ``samples`` nodes and doubles until two
    successive estimates agree to ``WINDING_CONVERGENCE``.
    """
    center = _as_complex(center)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if samples < 64:
        raise ValueError("need at least 64 quadrature samples")
    if f.is_product and f.linear_factors:
        gap = np.abs(np.abs(f._roots - center) - radius)
        if gap.min() < ROOT_CLEARANCE * radius:
            raise ContourThroughZero(
                f"zero {f.linear_factors[int(np.argmin(gap))]!r} lies within "
                f"{gap.min():.3g} of the circle |x - {center}| = {radius}"
            )

    prev = _winding_estimate(f, center, radius, samples)
    n = samples
    while True:
        n *= 2
        cur = _winding_estimate(f, center, radius, n)
        if abs(cur - prev) < WINDING_CONVERGENCE or n >= MAX_SAMPLES:
            break
        prev = cur
    nearest = round(cur)
    if abs(cur - nearest) > WINDING_TOL:
        raise NonIntegerWinding(f"winding estimate {cur:.6f} is not near an integer")
    return int(nearest)
