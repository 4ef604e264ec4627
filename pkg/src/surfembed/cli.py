"""Config-driven front end: construct, verify, sample and export.

Configs are JSON.  Complex values are a number, an ``[re, im]`` pair, or the
token ``"inf"``; curve points are ``[x, y]`` pairs of such values.

Exit codes: 0 success, 1 verification failure (report still written),
2 configuration or model error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .counterexamples import colliding_graph, tamper_interpolant, with_targets
from .embedder import EmbeddingArtifact, embed
from .errors import ConfigError, EmbeddingError
from .surfaces import (
    INF,
    AffineCurve,
    CStar,
    CurvePoint,
    Hyperelliptic,
    InfiniteGenus,
    Sphere,
    Torus,
    is_inf,
)
from .verify import CHECK_ORDER, verify

log = logging.getLogger("surfembed")

COMMANDS = ("construct", "verify", "sample", "export")
REGION_KINDS = ("segment", "disk", "points")
PERTURB_KINDS = ("tamper_a", "collide", "targets")
SAMPLE_HEADER = ("sheet", "base_re", "base_im", "w1_re", "w1_im", "w2_re", "w2_im")


# --------------------------------------------------------------------------
# complex values in config documents


def parse_complex(v) -> complex:
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity"):
            return INF
        raise ConfigError(f"unrecognised complex token {v!r}")
    if isinstance(v, bool):
        raise ConfigError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise ConfigError(f"cannot read {v!r} as a complex number")


def dump_complex(z: complex):
    z = complex(z)
    if is_inf(z):
        return "inf"
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def parse_point(v) -> CurvePoint:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"a curve point is an [x, y] pair, got {v!r}")
    return CurvePoint(parse_complex(v[0]), parse_complex(v[1]))


def dump_point(p: CurvePoint):
    return [dump_complex(p.x), dump_complex(p.y)]


# --------------------------------------------------------------------------
# job config


@dataclass
class SamplingConfig:
    region: dict = field(default_factory=lambda: {"kind": "disk", "center": 0.0, "radius": 4.0})
    count: int = 100
    seed: int = 0


@dataclass
class JobConfig:
    surface: dict
    truncation: Optional[int] = None
    checks: list = field(default_factory=lambda: list(CHECK_ORDER))
    seed: int = 0
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    output: dict = field(default_factory=lambda: {"dir": "out"})
    perturb: Optional[dict] = None

    @classmethod
    def from_dict(cls, d: dict) -> "JobConfig":
        if not isinstance(d, dict) or "surface" not in d:
            raise ConfigError("config needs a 'surface' section")
        unknown = set(d) - {"surface", "truncation", "checks", "seed", "sampling", "output", "perturb"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        samp = d.get("sampling", {}) or {}
        cfg = cls(
            surface=_normalize_surface(d["surface"]),
            truncation=d.get("truncation"),
            checks=list(d.get("checks", CHECK_ORDER)),
            seed=int(d.get("seed", 0)),
            sampling=SamplingConfig(
                region=_normalize_region(samp.get("region", SamplingConfig().region)),
                count=int(samp.get("count", 100)),
                seed=int(samp.get("seed", 0)),
            ),
            output=dict(d.get("output", {"dir": "out"})),
            perturb=_normalize_perturb(d.get("perturb")),
        )
        bad = [c for c in cfg.checks if c not in CHECK_ORDER]
        if bad:
            raise ConfigError(f"unknown checks {bad}; choose from {list(CHECK_ORDER)}")
        if cfg.truncation is not None and (not isinstance(cfg.truncation, int) or cfg.truncation < 0):
            raise ConfigError("truncation must be a nonnegative integer")
        if cfg.sampling.count < 1:
            raise ConfigError("sampling count must be positive")
        return cfg

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "truncation": self.truncation,
            "checks": list(self.checks),
            "seed": self.seed,
            "sampling": asdict(self.sampling),
            "output": dict(self.output),
            "perturb": self.perturb,
        }

    @classmethod
    def loads(cls, text: str) -> "JobConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None
        return cls.from_dict(d)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _complex_list(v, what):
    if not isinstance(v, (list, tuple)):
        raise ConfigError(f"'{what}' must be a list")
    return [dump_complex(parse_complex(t)) for t in v]


def _point_list(v, what):
    if not isinstance(v, (list, tuple)):
        raise ConfigError(f"'{what}' must be a list of [x, y] pairs")
    return [dump_point(parse_point(t)) for t in v]


def _normalize_surface(s: dict) -> dict:
    """Canonical form of a surface section (so parse -> dump -> parse is stable)."""
    if not isinstance(s, dict) or "family" not in s:
        raise ConfigError("surface needs a 'family'")
    fam = s["family"]
    if fam == "sphere":
        return {"family": fam, "punctures": _complex_list(s.get("punctures", []), "punctures"),
                "accumulation": _complex_list(s.get("accumulation", []), "accumulation")}
    if fam == "cstar":
        return {"family": fam, "removed": _complex_list(s.get("removed", []), "removed")}
    if fam == "torus":
        if "A" not in s:
            raise ConfigError("torus needs 'A'")
        return {"family": fam, "A": dump_complex(parse_complex(s["A"])),
                "punctures": _point_list(s.get("punctures", []), "punctures")}
    if fam == "hyperelliptic":
        return {"family": fam, "branch": _complex_list(s.get("branch", []), "branch"),
                "leading": dump_complex(parse_complex(s.get("leading", 1.0))),
                "punctures": _point_list(s.get("punctures", []), "punctures")}
    if fam == "infinite_genus":
        return {"family": fam, "f_roots": _complex_list(s.get("f_roots", []), "f_roots"),
                "punctures": _point_list(s.get("punctures", []), "punctures")}
    raise ConfigError(f"unknown surface family {fam!r}")


def _normalize_region(r: dict) -> dict:
    if not isinstance(r, dict) or r.get("kind") not in REGION_KINDS:
        raise ConfigError(f"sampling region kind must be one of {REGION_KINDS}")
    kind = r["kind"]
    if kind == "segment":
        return {"kind": kind, "start": dump_complex(parse_complex(r["start"])),
                "end": dump_complex(parse_complex(r["end"]))}
    if kind == "disk":
        radius = float(r.get("radius", 4.0))
        if radius <= 0:
            raise ConfigError("disk radius must be positive")
        return {"kind": kind, "center": dump_complex(parse_complex(r.get("center", 0.0))), "radius": radius}
    return {"kind": kind, "values": _complex_list(r.get("values", []), "values")}


def _normalize_perturb(p) -> Optional[dict]:
    if p is None:
        return None
    if not isinstance(p, dict) or p.get("kind") not in PERTURB_KINDS:
        raise ConfigError(f"perturb kind must be one of {PERTURB_KINDS}")
    if p["kind"] == "tamper_a":
        return {"kind": "tamper_a", "shift": dump_complex(parse_complex(p.get("shift", 1.0)))}
    if p["kind"] == "targets":
        return {"kind": "targets", "values": _complex_list(p.get("values", []), "values")}
    return {"kind": "collide"}


def build_model(surface: dict, truncation: Optional[int] = None):
    """Surface model from a canonical surface section; ``truncation`` cuts the roots of f for x**2 = f(y)."""
    fam = surface["family"]
    cx = lambda vs: tuple(parse_complex(v) for v in vs)
    pts = lambda vs: tuple(parse_point(v) for v in vs)
    if fam == "sphere":
        return Sphere(cx(surface["punctures"]), cx(surface["accumulation"]))
    if fam == "cstar":
        return CStar(cx(surface["removed"]))
    if fam == "torus":
        return Torus(parse_complex(surface["A"]), pts(surface["punctures"]))
    if fam == "hyperelliptic":
        return Hyperelliptic(cx(surface["branch"]), pts(surface["punctures"]),
                             parse_complex(surface["leading"]))
    return InfiniteGenus(cx(surface["f_roots"]), pts(surface["punctures"]), truncation)


def build_artifact(cfg: JobConfig) -> EmbeddingArtifact:
    model = build_model(cfg.surface, cfg.truncation)
    pert = cfg.perturb
    if pert is not None and pert["kind"] == "collide":
        if not hasattr(model, "curve"):
            raise ConfigError("the colliding fake needs a curve model")
        return colliding_graph(model)
    art = embed(model, cfg.truncation)
    if pert is None:
        return art
    if pert["kind"] == "tamper_a":
        return tamper_interpolant(art, parse_complex(pert["shift"]))
    return with_targets(art, [parse_complex(v) for v in pert["values"]])


# --------------------------------------------------------------------------
# outputs


def describe(art: EmbeddingArtifact) -> dict:
    """JSON description of an artifact (what ``construct`` writes)."""
    cols = [{"x": dump_complex(c.x_i), "target": dump_complex(c.y_i), "case": c.case,
             "removed": [dump_point(p) for p in c.removed_points],
             "kept": dump_point(c.kept) if c.kept is not None else None} for c in art.columns]
    out = {
        "family": art.model.family,
        "chart_family": (art.chart_model or art.model).family,
        "provenance": art.provenance,
        "truncation": art.truncation,
        "truncation_note": art.truncation_note,
        "b_normalization": art.normalization,
        "columns": cols,
        "extensions": [{"x": dump_complex(e.x), "y": dump_complex(e.y), "value": dump_complex(e.value),
                        "slope": dump_complex(e.slope)} for e in art.extensions],
    }
    if art.shear is not None:
        out["b"] = {"leading": dump_complex(art.shear.b.leading),
                    "zeros": [dump_complex(r) for r in art.shear.b.linear_factors]}
        out["a"] = {"nodes": [[dump_complex(n), dump_complex(w)] for n, w in art.shear.a.interp_terms]}
    if art.mobius is not None:
        m = art.mobius
        out["mobius"] = [dump_complex(m.a), dump_complex(m.b), dump_complex(m.c), dump_complex(m.d)]
    if isinstance(art.domain, AffineCurve):
        out["chart_branch_points"] = [dump_complex(e) for e in art.domain.branch_points]
    return out


def region_points(region: dict, count: int, seed: int) -> np.ndarray:
    kind = region["kind"]
    if kind == "segment":
        a, b = parse_complex(region["start"]), parse_complex(region["end"])
        return np.linspace(a, b, count) if count > 1 else np.array([a])
    if kind == "disk":
        rng = np.random.default_rng(seed)
        c = parse_complex(region["center"])
        r = region["radius"] * np.sqrt(rng.random(count))
        return c + r * np.exp(2j * np.pi * rng.random(count))
    return np.array([parse_complex(v) for v in region["values"]], dtype=complex)


def sample_rows(art: EmbeddingArtifact, base: np.ndarray) -> list[tuple]:
    """One row per (base point, sheet); removed chart points are skipped."""
    removed = art.removed_points()
    rows = []
    for x in np.asarray(base, dtype=complex):
        for sheet, pt in enumerate(art.domain.fiber(x)):
            if any(abs(pt.x - q.x) <= 1e-12 * (1 + abs(q.x)) and abs(pt.y - q.y) <= 1e-9 * (1 + abs(q.y))
                   for q in removed):
                continue
            w1, w2 = art.image(np.array([pt.x]), np.array([pt.y]))
            rows.append((sheet, complex(pt.x), complex(w1[0]), complex(w2[0])))
    return rows


def _fmt(v: float) -> str:
    v = float(v)
    return repr(0.0 if v == 0 else v)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAMPLE_HEADER)
    for sheet, x, w1, w2 in rows:
        w.writerow([sheet, _fmt(x.real), _fmt(x.imag), _fmt(w1.real), _fmt(w1.imag), _fmt(w2.real), _fmt(w2.imag)])
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands


def run(cfg: JobConfig, command: str, out_dir: Path) -> int:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    art = build_artifact(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    if command in ("construct", "export"):
        (out_dir / "artifact.json").write_text(json.dumps(describe(art), indent=2, sort_keys=True) + "\n")
    if command in ("verify", "export"):
        report = verify(art, seed=cfg.seed, checks=cfg.checks)
        (out_dir / "report.json").write_text(report.to_json() + "\n")
        if not report.passed:
            log.warning("verification failed: %s", ", ".join(report.failed()))
            status = 1
    if command in ("sample", "export"):
        s = cfg.sampling
        rows = sample_rows(art, region_points(s.region, s.count, s.seed))
        (out_dir / "samples.csv").write_text(rows_to_csv(rows))
    if command == "export":
        (out_dir / "config.json").write_text(cfg.dumps() + "\n")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="surfembed", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, type=Path)
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--truncation", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    try:
        cfg = JobConfig.loads(args.config.read_text())
        if args.seed is not None:
            cfg.seed = args.seed
            cfg.sampling.seed = args.seed
        if args.truncation is not None:
            cfg.truncation = args.truncation
        out_dir = args.out if args.out is not None else Path(cfg.output.get("dir", "out"))
        return run(cfg, args.command, out_dir)
    except (OSError, ConfigError, EmbeddingError, ValueError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
