"""Write the example job configs in configs/ from the named fixtures."""

import argparse
import json
from pathlib import Path

from surfembed import fixtures as fx
from surfembed.cli import JobConfig, dump_complex, dump_point


def surface_of(model) -> dict:
    fam = model.family
    if fam == "sphere":
        return {"family": fam, "punctures": [dump_complex(c) for c in model.punctures],
                "accumulation": [dump_complex(c) for c in model.accumulation]}
    if fam == "torus":
        return {"family": fam, "A": dump_complex(model.A), "punctures": [dump_point(p) for p in model.punctures]}
    if fam == "hyperelliptic":
        return {"family": fam, "branch": [dump_complex(e) for e in model.branch],
                "leading": dump_complex(model.leading), "punctures": [dump_point(p) for p in model.punctures]}
    return {"family": fam, "f_roots": [dump_complex(r) for r in model.f_roots],
            "punctures": [dump_point(p) for p in model.punctures]}


def job(fixture, region=None, count=200, perturb=None) -> dict:
    model, truncation = fixture
    d = {"surface": surface_of(model), "truncation": truncation, "seed": 0,
         "sampling": {"region": region or {"kind": "disk", "center": 0, "radius": 4}, "count": count, "seed": 0},
         "perturb": perturb}
    return JobConfig.from_dict(d).to_dict()


def all_jobs() -> dict:
    return {
        "sphere_finite": job(fx.sphere_finite(), {"kind": "segment", "start": 2, "end": 101}, 100),
        "sphere_one_accumulation": job(fx.sphere_one_accumulation()),
        "sphere_two_accumulation": job(fx.sphere_two_accumulation()),
        "sphere_two_accumulation_mixed": job(fx.sphere_two_accumulation_mixed()),
        "torus_weierstrass": job(fx.torus_weierstrass()),
        "torus_half_fiber": job(fx.torus_half_fiber()),
        "genus_two_mixed": job(fx.genus_two_mixed(), {"kind": "disk", "center": 2.5, "radius": 5}),
        "infinite_genus_truncated": job(fx.infinite_genus_truncated(), {"kind": "disk", "center": 0, "radius": 3}),
        "counter_tampered_a": job(fx.torus_weierstrass(), perturb={"kind": "tamper_a", "shift": 1.0}),
        "counter_colliding": job(fx.torus_finite_weierstrass(), perturb={"kind": "collide"}),
        "counter_equal_target": job(fx.torus_full_fiber(), perturb={"kind": "targets", "values": [fx.SQRT6]}),
        "bad_torus_A": {"surface": {"family": "torus", "A": 1.0, "punctures": []}},
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", type=Path, default=Path(__file__).resolve().parent.parent / "configs")
    args = ap.parse_args()
    args.dir.mkdir(parents=True, exist_ok=True)
    for name, d in all_jobs().items():
        path = args.dir / f"{name}.json"
        path.write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
