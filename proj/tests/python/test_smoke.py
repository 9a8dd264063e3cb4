import json

import pytest

import photobeamsolver as pbs

CENTRAL = {
    "length": 10,
    "units": {"length": "m", "force": "kN"},
    "supports": [{"kind": "simple", "position": 0}, {"kind": "roller", "position": 10}],
    "point_loads": [{"magnitude": 100, "position": 5}],
    "distributed_loads": [],
    "moments": [],
}


def test_solve_central_load():
    sol = pbs.solve(CENTRAL, ei=1e6)
    assert [r["force"] for r in sol["reactions"]] == [50.0, 50.0]
    assert sol["ei"] == 1e6
    assert sol["ei_normalized"] is False


def test_diagram_peak_and_deflection():
    moment = pbs.diagram(CENTRAL, "moment", samples=11)
    assert max(p[1] for p in moment["points"]) == pytest.approx(250.0, rel=1e-12)
    deflection = pbs.diagram(json.dumps(CENTRAL), "deflection", samples=11, ei=1e6)
    assert min(p[1] for p in deflection["points"]) == pytest.approx(-100 * 10**3 / 48e6, rel=1e-12)


def test_validation_and_errors():
    unstable = dict(CENTRAL, supports=[{"kind": "roller", "position": 5}])
    problems = pbs.validate(unstable)
    assert [p[0] for p in problems] == ["unstable"]
    assert pbs.validate(CENTRAL) == []
    with pytest.raises(pbs.PbsError) as info:
        pbs.solve(unstable)
    assert info.value.code == "unstable"
    with pytest.raises(pbs.PbsError) as info:
        pbs.solve(dict(CENTRAL, color="red"))
    assert info.value.code == "unknown_field"
    assert info.value.path == "color"
    with pytest.raises(ValueError):
        pbs.diagram(CENTRAL, "torsion")


def test_schema_matches_cli():
    code, out, _ = pbs.run_cli("schema")
    assert code == 0
    assert json.loads(out) == pbs.schema()


def test_summary_matches_cli(tmp_path):
    spec = tmp_path / "beam.json"
    spec.write_text(json.dumps(CENTRAL))
    code, out, err = pbs.run_cli("solve", spec, "--ei", "1e6", "--out", tmp_path)
    assert code == 0, err
    assert out == pbs.summary(CENTRAL, ei=1e6)
    assert (tmp_path / "summary.txt").read_text() == out


def test_infer_round_trip():
    detections = {
        "image": {"width": 1280, "height": 720},
        "detections": [
            {"class": "simple", "bbox": [0.1, 0.53, 0.04, 0.06], "confidence": 0.9},
            {"class": "roller", "bbox": [0.9, 0.53, 0.04, 0.06], "confidence": 0.9},
            {"class": "pload", "bbox": [0.5, 0.44, 0.02, 0.12], "confidence": 0.9},
        ],
        "annotations": [
            {"bbox": [0.5, 0.35, 0.06, 0.04], "text": "100 kN"},
            {"bbox": [0.5, 0.75, 0.06, 0.04], "text": "10 m"},
        ],
    }
    report = pbs.infer(detections)
    assert report["needs_review"] == []
    assert report["spec"] == CENTRAL
    assert pbs.solve(report["spec"])["reactions"][0]["force"] == 50.0
