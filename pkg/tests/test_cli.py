import csv
import json
import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from surfembed.cli import JobConfig, dump_complex, main, parse_complex
from surfembed.errors import ConfigError
from surfembed.surfaces import INF, is_inf

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, d, name="job.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return p


def run(*args):
    return main([str(a) for a in args])


def test_complex_tokens():
    assert is_inf(parse_complex("inf"))
    assert parse_complex([1, -2]) == 1 - 2j
    assert parse_complex(3) == 3
    assert dump_complex(INF) == "inf"
    assert dump_complex(2 + 0j) == 2.0
    assert dump_complex(1 - 1j) == [1.0, -1.0]
    for bad in ("nan?", True, [1, 2, 3], {"re": 1}):
        with pytest.raises(ConfigError):
            parse_complex(bad)


finite = st.floats(-1e6, 1e6, allow_nan=False)
cval = st.one_of(finite, st.tuples(finite, finite).map(list))


@st.composite
def configs(draw):
    fam = draw(st.sampled_from(["sphere", "cstar", "torus", "hyperelliptic", "infinite_genus"]))
    pts = st.lists(st.tuples(cval, cval).map(list), max_size=4)
    if fam == "sphere":
        surf = {"family": fam, "punctures": draw(st.lists(st.one_of(cval, st.just("inf")), max_size=4)),
                "accumulation": draw(st.lists(cval, max_size=2))}
    elif fam == "cstar":
        surf = {"family": fam, "removed": draw(st.lists(cval, max_size=4))}
    elif fam == "torus":
        surf = {"family": fam, "A": draw(cval), "punctures": draw(pts)}
    elif fam == "hyperelliptic":
        surf = {"family": fam, "branch": draw(st.lists(cval, max_size=6)), "leading": draw(cval), "punctures": draw(pts)}
    else:
        surf = {"family": fam, "f_roots": draw(st.lists(cval, max_size=6)), "punctures": draw(pts)}
    region = draw(st.one_of(
        st.builds(lambda a, b: {"kind": "segment", "start": a, "end": b}, cval, cval),
        st.builds(lambda c, r: {"kind": "disk", "center": c, "radius": r}, cval, st.floats(0.1, 100)),
        st.builds(lambda v: {"kind": "points", "values": v}, st.lists(cval, max_size=5)),
    ))
    perturb = draw(st.one_of(
        st.none(),
        st.builds(lambda s: {"kind": "tamper_a", "shift": s}, cval),
        st.just({"kind": "collide"}),
        st.builds(lambda v: {"kind": "targets", "values": v}, st.lists(cval, max_size=3)),
    ))
    return {
        "surface": surf,
        "truncation": draw(st.one_of(st.none(), st.integers(0, 50))),
        "checks": draw(st.lists(st.sampled_from(["interpolation", "zero_audit", "injectivity", "immersion",
                                                 "properness", "curve_residual"]), unique=True)),
        "seed": draw(st.integers(0, 2**31)),
        "sampling": {"region": region, "count": draw(st.integers(1, 1000)), "seed": draw(st.integers(0, 99))},
        "output": {"dir": "somewhere"},
        "perturb": perturb,
    }


@given(configs())
def test_config_round_trip(d):
    cfg = JobConfig.from_dict(d)
    text = cfg.dumps()
    again = JobConfig.loads(text)
    assert again == cfg
    assert again.dumps() == text


def test_config_errors():
    for bad in ({}, {"surface": {"family": "klein"}}, {"surface": {"family": "torus"}},
                {"surface": {"family": "torus", "A": 2}, "checks": ["speed"]},
                {"surface": {"family": "torus", "A": 2}, "whatever": 1},
                {"surface": {"family": "torus", "A": 2}, "sampling": {"region": {"kind": "cube"}}},
                {"surface": {"family": "torus", "A": 2}, "perturb": {"kind": "explode"}}):
        with pytest.raises(ConfigError):
            JobConfig.from_dict(bad)
    with pytest.raises(ConfigError):
        JobConfig.loads("{not json")


def test_verify_exit_zero(tmp_path):
    assert run("verify", "--config", CONFIGS / "torus_weierstrass.json", "--out", tmp_path) == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["passed"] and len(rep["checks"]) == 6
    assert all(c["passed"] for c in rep["checks"])


def test_bad_A_exit_two(tmp_path, capsys):
    assert run("construct", "--config", CONFIGS / "bad_torus_A.json", "--out", tmp_path) == 2
    assert "A must differ from 0 and 1" in capsys.readouterr().err


def test_missing_config_exit_two(tmp_path):
    assert run("construct", "--config", tmp_path / "nope.json") == 2


def test_off_curve_puncture_exit_two(tmp_path):
    cfg = write(tmp_path, {"surface": {"family": "torus", "A": 2, "punctures": [[3, 2]]}})
    assert run("construct", "--config", cfg, "--out", tmp_path) == 2


def test_sample_sphere_segment(tmp_path):
    assert run("sample", "--config", CONFIGS / "sphere_finite.json", "--out", tmp_path) == 0
    rows = list(csv.reader((tmp_path / "samples.csv").open()))
    assert rows[0] == ["sheet", "base_re", "base_im", "w1_re", "w1_im", "w2_re", "w2_im"]
    assert len(rows) == 101
    assert [float(v) for v in rows[1][1:]] == [2, 0, 2, 0, 0.5, 0]
    assert rows[1][1:] == ["2.0", "0.0", "2.0", "0.0", "0.5", "0.0"]


def test_sample_skips_removed_points(tmp_path):
    d = {"surface": {"family": "torus", "A": 2, "punctures": [[3, math.sqrt(6)]]},
         "sampling": {"region": {"kind": "points", "values": [3, 4]}, "count": 2}}
    assert run("sample", "--config", write(tmp_path, d), "--out", tmp_path) == 0
    rows = list(csv.reader((tmp_path / "samples.csv").open()))[1:]
    assert len(rows) == 3  # the kept point over 3 and both points over 4
    kept = [r for r in rows if r[1] == "3.0"]
    assert float(kept[0][5]) == pytest.approx(-11 / (2 * math.sqrt(6)))


def test_sample_determinism(tmp_path):
    for k in (1, 2):
        assert run("sample", "--config", CONFIGS / "torus_weierstrass.json", "--out", tmp_path / str(k)) == 0
    assert (tmp_path / "1" / "samples.csv").read_bytes() == (tmp_path / "2" / "samples.csv").read_bytes()
    assert run("sample", "--config", CONFIGS / "torus_weierstrass.json", "--out", tmp_path / "3", "--seed", 5) == 0
    assert (tmp_path / "1" / "samples.csv").read_bytes() != (tmp_path / "3" / "samples.csv").read_bytes()


def test_export_bundle(tmp_path):
    assert run("export", "--config", CONFIGS / "torus_half_fiber.json", "--out", tmp_path) == 0
    for name in ("artifact.json", "report.json", "samples.csv", "config.json"):
        assert (tmp_path / name).exists()
    art = json.loads((tmp_path / "artifact.json").read_text())
    assert art["columns"][0]["case"] == "half"
    assert art["extensions"][0]["value"] == pytest.approx(-11 / (2 * math.sqrt(6)))


def test_truncation_override(tmp_path):
    assert run("construct", "--config", CONFIGS / "sphere_one_accumulation.json", "--out", tmp_path,
               "--truncation", 5) == 0
    art = json.loads((tmp_path / "artifact.json").read_text())
    assert len(art["b"]["zeros"]) == 5
    assert "first 5 of 20" in art["truncation_note"]


@pytest.mark.parametrize("name", ["counter_tampered_a", "counter_colliding", "counter_equal_target"])
def test_counterexample_configs_exit_one(tmp_path, name):
    assert run("verify", "--config", CONFIGS / f"{name}.json", "--out", tmp_path) == 1
    assert (tmp_path / "report.json").exists()
