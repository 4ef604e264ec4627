"""Numerical certification of a constructed embedding.

Six checks run over a recorded probe seed: interpolation, zero audit,
injectivity, immersion (including the removable-singularity limit law),
properness, and curve residual.  Each returns a :class:`CheckResult`; failures
are results, never exceptions.  Reports serialize deterministically.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ContourThroughZero
from .holo_core import count_zeros_in_disk
from .surfaces import AffineCurve, PlaneGraph

INTERPOLATION_TOL = 1e-9
INJECTIVITY_MIN_SEP = 1e-9
DOMAIN_MIN_SEP = 1e-3
IMMERSION_MIN_NORM = 1e-9
FD_REL_TOL = 1e-6
FD_FRACTION = 0.01
EXTENSION_RADII = (1e-2, 1e-3, 1e-4)
EXTENSION_TOL = 1e-5
EXTENSION_NOISE_FLOOR = 1e-12
EXTENSION_PROBE_DIST = 1e-3
PROPERNESS_RADII = (1e-1, 1e-2, 1e-3, 1e-4)
ESCAPE_NORM = 1e3
SLOPE_TOL = 0.2
LADDER_FLOOR = 1e-12
BASE_ESCAPE = (1e2, 1e3)
RESIDUAL_TOL = 1e-9
EXCLUSION = 1e-2
AUDIT_NUDGE = 1e-3
AUDIT_RETRIES = 5

CHECK_ORDER = ("interpolation", "zero_audit", "injectivity", "immersion", "properness", "curve_residual")


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    probes: int = 0
    details: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    checks: list
    seed: int
    probe_counts: dict
    truncation_note: str
    model_info: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "seed": self.seed,
            "probe_counts": self.probe_counts,
            "truncation": self.truncation_note,
            "model": self.model_info,
            "checks": [_clean(asdict(c)) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# --------------------------------------------------------------------------
# probes


def _avoid(artifact) -> np.ndarray:
    pts = [c.x_i for c in artifact.columns] + list(artifact.domain.branch_points)
    return np.array(pts, dtype=complex)


def probe_radius(artifact) -> float:
    pts = _avoid(artifact)
    scale = float(np.max(np.abs(pts))) if pts.size else 0.0
    return max(4.0, 1.5 * scale + 1.0)


def base_probes(artifact, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of the probe disk staying ``EXCLUSION`` away from columns and branch points."""
    R = probe_radius(artifact)
    avoid = _avoid(artifact)
    out = np.empty(0, dtype=complex)
    while out.size < n:
        m = 2 * (n - out.size) + 8
        z = R * np.sqrt(rng.random(m)) * np.exp(2j * np.pi * rng.random(m))
        if avoid.size:
            ok = np.min(np.abs(z[:, None] - avoid[None, :]), axis=1) > EXCLUSION
            z = z[ok]
        out = np.concatenate([out, z])
    return out[:n]


def domain_probes(artifact, n: int, rng: np.random.Generator):
    """``n`` chart points with random sheets; returns (x, y, sheet)."""
    x = base_probes(artifact, n, rng)
    dom = artifact.domain
    if isinstance(dom, AffineCurve):
        s = np.sqrt(np.asarray(dom.p(x), dtype=complex))
        sheet = rng.integers(0, 2, size=n)
        y = np.where(sheet == 0, s, -s)
    else:
        sheet = np.zeros(n, dtype=int)
        y = np.asarray(dom.f(x), dtype=complex) * np.ones(n)
    return x, y, sheet


def _norm2(w1, w2):
    return np.sqrt(np.abs(w1) ** 2 + np.abs(w2) ** 2)


# --------------------------------------------------------------------------
# checks


def verify_interpolation(artifact) -> CheckResult:
    cols = artifact.columns
    if not cols or artifact.shear is None:
        return CheckResult("interpolation", True, 0.0, INTERPOLATION_TOL, 0, {"columns": 0})
    a = artifact.shear.a
    errs = [abs(a(c.x_i) - c.y_i) / (1 + abs(c.y_i)) for c in cols]
    worst = float(max(errs))
    return CheckResult("interpolation", worst < INTERPOLATION_TOL, worst, INTERPOLATION_TOL,
                       len(cols), {"columns": len(cols), "worst_column": int(np.argmax(errs))})


def default_audit_disks(artifact) -> list[tuple[complex, float]]:
    xs = np.array([c.x_i for c in artifact.columns], dtype=complex)
    disks = []
    if xs.size:
        disks.append((0j, float(1.5 * np.max(np.abs(xs)) + 1.0)))
        for i, x in enumerate(xs):
            others = np.delete(xs, i)
            gap = float(np.min(np.abs(others - x))) if others.size else 2.0
            disks.append((complex(x), 0.5 * gap))
        far = complex(2 * np.max(np.abs(xs)) + 10)
        disks.append((far, 1.0))
    else:
        disks.append((0j, 10.0))
    return disks


def verify_zero_audit(artifact, disks: Optional[Sequence] = None) -> CheckResult:
    """Argument-principle count of zeros of ``b`` against the columns inside each disk."""
    if artifact.shear is None:
        return CheckResult("zero_audit", True, 0.0, 0.0, 0, {"disks": 0})
    b = artifact.shear.b
    xs = np.array([c.x_i for c in artifact.columns], dtype=complex)
    disks = list(disks) if disks is not None else default_audit_disks(artifact)
    worst = 0
    nudges = 0
    rows = []
    for center, radius in disks:
        r = float(radius)
        for _ in range(AUDIT_RETRIES):
            try:
                count = count_zeros_in_disk(b, center, r)
                break
            except ContourThroughZero:
                r += AUDIT_NUDGE
                nudges += 1
        else:
            count = -1
        expected = int(np.sum(np.abs(xs - center) < r)) if xs.size else 0
        worst = max(worst, abs(count - expected))
        rows.append({"center": complex(center), "radius": r, "count": count, "expected": expected})
    return CheckResult("zero_audit", worst == 0, float(worst), 0.0, len(disks),
                       {"disks": rows, "nudges": nudges})


def verify_injectivity(artifact, n_probes: int = 10_000, seed: int = 0) -> CheckResult:
    """Image separation over random pairs, half of them fiber mates on two-sheeted charts."""
    rng = np.random.default_rng(seed)
    dom = artifact.domain
    n_mates = n_probes // 2 if isinstance(dom, AffineCurve) else 0
    n_rand = n_probes - n_mates

    x1, y1, _ = domain_probes(artifact, n_rand, rng)
    x2, y2, _ = domain_probes(artifact, n_rand, rng)
    if n_mates:
        xm = base_probes(artifact, n_mates, rng)
        s = np.sqrt(np.asarray(dom.p(xm), dtype=complex))
        x1, y1 = np.concatenate([x1, xm]), np.concatenate([y1, s])
        x2, y2 = np.concatenate([x2, xm]), np.concatenate([y2, -s])

    dsep = _norm2(x1 - x2, y1 - y2)
    keep = dsep >= DOMAIN_MIN_SEP
    u1, u2 = artifact.image(x1[keep], y1[keep])
    v1, v2 = artifact.image(x2[keep], y2[keep])
    isep = _norm2(u1 - v1, u2 - v2)
    ratio = isep / dsep[keep]
    worst = float(np.min(isep)) if isep.size else math.inf
    return CheckResult("injectivity", worst > INJECTIVITY_MIN_SEP, worst, INJECTIVITY_MIN_SEP,
                       int(keep.sum()), {"min_ratio": float(np.min(ratio)) if ratio.size else math.inf,
                                         "fiber_mate_pairs": n_mates})


def _extension_law(artifact, entry) -> dict:
    """Antipodal circle means of the raw shear converge to the stored limit value.

    The mean of g over two antipodal points differs from the limit by O(r^2),
    using only raw evaluations away from the pole.
    """
    dom = artifact.domain
    shear = artifact.shear
    theta = np.pi * np.array([0.1, 0.35, 0.6, 0.85])
    scale = max(1.0, abs(entry.value))
    devs, slope_devs = [], []
    for r in EXTENSION_RADII:
        z1 = entry.x + r * np.exp(1j * theta)
        z2 = entry.x - r * np.exp(1j * theta)
        g1 = shear(z1, dom.sheet_point(z1, entry.y))
        g2 = shear(z2, dom.sheet_point(z2, entry.y))
        devs.append(float(np.max(np.abs((g1 + g2) / 2 - entry.value))) / scale)
        quotient = (g1 - g2) / (z1 - z2)
        slope_devs.append(float(np.max(np.abs(quotient - entry.slope))) / max(1.0, abs(entry.slope)))
    monotone = all(b <= a or b <= EXTENSION_NOISE_FLOOR for a, b in zip(devs, devs[1:]))
    ok = monotone and devs[-1] < EXTENSION_TOL and slope_devs[-1] < EXTENSION_TOL
    return {"x": complex(entry.x), "deviations": devs, "slope_deviations": slope_devs,
            "monotone": monotone, "passed": ok}


def _fd_tangent(artifact, x, y, h):
    dom = artifact.domain
    yp = dom.sheet_point(x + h, y)
    ym = dom.sheet_point(x - h, y)
    p1, p2 = artifact.image(x + h, yp)
    m1, m2 = artifact.image(x - h, ym)
    return (p1 - m1) / (2 * h), (p2 - m2) / (2 * h)


def verify_immersion(artifact, n_probes: int = 2_000, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed + 1)
    dom = artifact.domain
    x, y, _ = domain_probes(artifact, n_probes, rng)

    # deterministic probes: chart origin and unpunctured ramification points
    cols = np.array([c.x_i for c in artifact.columns], dtype=complex)
    extra = []
    if not cols.size or np.min(np.abs(cols)) > 0:
        extra += [(p.x, p.y) for p in dom.fiber(0.0)]
    for e in dom.branch_points:
        if not cols.size or np.min(np.abs(cols - e)) > 1e-9:
            extra.append((e, 0.0))
    for entry in artifact.extensions:
        for k in range(10):
            z = entry.x + EXTENSION_PROBE_DIST * np.exp(2j * np.pi * k / 10)
            extra.append((z, complex(dom.sheet_point(z, entry.y))))
        extra.append((entry.x, entry.y))
    if extra:
        ex = np.array(extra, dtype=complex)
        x = np.concatenate([x, ex[:, 0]])
        y = np.concatenate([y, ex[:, 1]])

    t1, t2 = artifact.map.tangent(x, y)
    norms = _norm2(t1, t2)
    worst = float(np.nanmin(np.where(np.isfinite(norms), norms, 0.0)))

    # finite-difference cross-check where x is the chart parameter
    _, _, use_x = dom.chart_direction(x, y)
    idx = np.flatnonzero(use_x)
    m = max(1, int(FD_FRACTION * idx.size)) if idx.size else 0
    pick = rng.choice(idx, size=m, replace=False) if m else np.array([], dtype=int)
    fd_worst = 0.0
    for i in pick:
        h = 1e-6 * (1 + abs(x[i]))
        f1, f2 = _fd_tangent(artifact, x[i], y[i], h)
        err = _norm2(f1 - t1[i], f2 - t2[i]) / max(1.0, float(_norm2(t1[i], t2[i])))
        fd_worst = max(fd_worst, float(err))
    fd_ok = fd_worst < FD_REL_TOL

    ext = [_extension_law(artifact, e) for e in artifact.extensions]
    ext_ok = all(r["passed"] for r in ext)
    ok = worst > IMMERSION_MIN_NORM and fd_ok and ext_ok
    return CheckResult("immersion", bool(ok), worst, IMMERSION_MIN_NORM, int(x.size),
                       {"fd_checked": int(len(pick)), "fd_worst_rel": fd_worst,
                        "extension_limits": ext,
                        "extension_final_worst": max((r["deviations"][-1] for r in ext), default=0.0)})


def _approach_direction(x0: complex, avoid: np.ndarray, reach: float) -> complex:
    best, best_gap = None, -1.0
    for theta in (0.7, 2.3, 3.9, 5.5, 1.5, 3.1, 4.7, 6.1):
        u = complex(np.exp(1j * theta))
        pts = x0 + u * np.array(PROPERNESS_RADII)
        others = avoid[np.abs(avoid - x0) > 1e-9]
        gap = float(np.min(np.abs(pts[:, None] - others[None, :]))) if others.size else math.inf
        if gap > reach:
            return u
        if gap > best_gap:
            best, best_gap = u, gap
    return best


def _window_verdict(radii, norms, second) -> dict:
    with np.errstate(divide="ignore"):
        slope = float(np.polyfit(np.log(radii), np.log(second), 1)[0]) if np.all(second > 0) else 0.0
    increasing = bool(np.all(np.diff(norms) > 0))
    ok = increasing and norms[-1] > ESCAPE_NORM and abs(slope + 1) <= SLOPE_TOL
    return {"slope": slope, "increasing": increasing, "passed": bool(ok)}


def escape_profile(artifact, point, radii=PROPERNESS_RADII) -> dict:
    """Image norms approaching a removed chart point along one direction.

    Points are formed as offsets from the puncture, so tiny radii keep full
    precision.  The ladder starts at ``radii`` and descends a decade at a time,
    down to ``LADDER_FLOOR``, until the deepest ``len(radii)`` rungs show
    pole behaviour.  A large regular part of the graph can mask the pole at
    the first rungs; a missing pole never shows it at any depth.
    """
    avoid = _avoid(artifact)
    radii = [float(r) for r in radii]
    u = _approach_direction(point.x, avoid, 2 * max(radii))
    floor = LADDER_FLOOR
    width = len(radii)

    def sample(rs):
        w1, w2 = artifact.map.image_near(point.x, u * np.asarray(rs, dtype=float), point.y)
        return _norm2(w1, w2), np.abs(w2)

    norms, second = sample(radii)
    verdict = _window_verdict(radii[-width:], norms[-width:], second[-width:])
    while not verdict["passed"] and radii[-1] / 10 >= floor:
        r = radii[-1] / 10
        n, s2 = sample([r])
        radii.append(r)
        norms, second = np.append(norms, n), np.append(second, s2)
        verdict = _window_verdict(radii[-width:], norms[-width:], second[-width:])
    return {"x": complex(point.x), "y": complex(point.y), "radii": radii, "norms": norms.tolist(),
            "window_start": radii[-width], **verdict}


def verify_properness(artifact, punctures=None, radii=PROPERNESS_RADII) -> CheckResult:
    """Every removed point escapes like a simple pole; the base escapes to infinity."""
    pts = list(punctures) if punctures is not None else artifact.removed_points()
    profiles = [escape_profile(artifact, p, radii) for p in pts]

    dom = artifact.domain
    theta = 2 * np.pi * (np.arange(8) + 0.25) / 8
    esc_x = np.concatenate([R * np.exp(1j * theta) for R in BASE_ESCAPE])
    if isinstance(dom, AffineCurve):
        s = np.sqrt(np.asarray(dom.p(esc_x), dtype=complex))
        ex, ey = np.concatenate([esc_x, esc_x]), np.concatenate([s, -s])
    else:
        ex, ey = esc_x, np.asarray(dom.f(esc_x), dtype=complex) * np.ones(esc_x.size)
    w1, w2 = artifact.image(ex, ey)
    margin = _norm2(w1, w2) / np.abs(ex)
    base_ok = bool(np.all(margin >= 1.0 - 1e-12))

    slopes = [p["slope"] for p in profiles]
    worst = max((abs(s + 1) for s in slopes), default=0.0)
    ok = base_ok and all(p["passed"] for p in profiles)
    return CheckResult("properness", bool(ok), float(worst), SLOPE_TOL, len(pts) * len(radii) + ex.size,
                       {"punctures": profiles, "base_escape_min_ratio": float(np.min(margin)),
                        "escape_norm_threshold": ESCAPE_NORM})


def verify_curve_residual(artifact, n_probes: int = 1_000, seed: int = 0, extra=None) -> CheckResult:
    rng = np.random.default_rng(seed + 2)
    x, y, _ = domain_probes(artifact, n_probes, rng)
    if extra is not None:
        ex = np.array([complex(p[0]) for p in extra]), np.array([complex(p[1]) for p in extra])
        x, y = np.concatenate([x, ex[0]]), np.concatenate([y, ex[1]])
    res = np.asarray(artifact.domain.residual(x, y), dtype=float)
    worst = float(np.max(res)) if res.size else 0.0
    return CheckResult("curve_residual", worst < RESIDUAL_TOL, worst, RESIDUAL_TOL, int(x.size))


def model_info(artifact) -> dict:
    model = artifact.chart_model or artifact.model
    info = {
        "family": artifact.model.family,
        "chart_family": model.family,
        "provenance": artifact.provenance,
        "genus": int(model.genus),
        "weierstrass_points": int(model.weierstrass_points),
        "columns": len(artifact.columns),
        "half_fiber_columns": sum(1 for c in artifact.columns if c.kept is not None),
        "b_normalization": float(artifact.normalization),
    }
    return info


def verify(artifact, seed: int = 0, checks: Sequence[str] = CHECK_ORDER,
           n_pairs: int = 10_000, n_probes: int = 2_000) -> VerificationReport:
    runners = {
        "interpolation": lambda: verify_interpolation(artifact),
        "zero_audit": lambda: verify_zero_audit(artifact),
        "injectivity": lambda: verify_injectivity(artifact, n_pairs, seed),
        "immersion": lambda: verify_immersion(artifact, n_probes, seed),
        "properness": lambda: verify_properness(artifact),
        "curve_residual": lambda: verify_curve_residual(artifact, n_probes, seed),
    }
    unknown = set(checks) - set(runners)
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}")
    results = [runners[name]() for name in CHECK_ORDER if name in checks]
    return VerificationReport(
        checks=results, seed=seed, probe_counts={r.name: r.probes for r in results},
        truncation_note=artifact.truncation_note, model_info=model_info(artifact),
    )
