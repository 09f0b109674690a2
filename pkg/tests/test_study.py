import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from pcedgsm.study import (
    CSV_HEADER,
    StudyConfig,
    StudyError,
    StudyReport,
    emit_report,
    render_report,
    report_csv,
    report_svg,
    run_study,
)

SVG = "{http://www.w3.org/2000/svg}"


def linear_config(**kw):
    base = dict(model="linear", n=60, replications=4, seed=3, mc_n=200, morris_n=20)
    base.update(kw)
    return StudyConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        StudyConfig(replications=0)
    with pytest.raises(ValueError):
        StudyConfig(n=0)
    with pytest.raises(ValueError):
        StudyConfig(method="ridge")
    with pytest.raises(ValueError):
        StudyConfig(model="oakley")
    with pytest.raises(ValueError):
        StudyConfig.from_dict({"model": "linear", "bogus": 1})
    assert StudyConfig(model="morris").degree == 3
    cfg = linear_config()
    assert StudyConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_linear_study_agrees_with_analytic():
    rep = run_study(linear_config(n=100, replications=10, mc_n=10_000, morris_n=0))
    exact = np.arange(1.0, 6.0) ** 2 / 55
    np.testing.assert_allclose(rep.median("pce", "s_total"), exact, atol=1e-10)
    np.testing.assert_allclose(rep.median("pce", "s_dgsm"), exact, atol=1e-10)
    np.testing.assert_allclose(rep.median("mc", "s_total"), exact, atol=0.03)


def test_single_replication_interval_collapses():
    rep = run_study(linear_config(replications=1))
    for method, metrics in rep.stats.items():
        for metric, arr in metrics.items():
            assert np.array_equal(arr[0], arr[1]) and np.array_equal(arr[0], arr[2])


def test_interval_ordering():
    rep = run_study(linear_config(method="lar", n=30))
    for metrics in rep.stats.values():
        for arr in metrics.values():
            assert np.all(arr[1] <= arr[0]) and np.all(arr[0] <= arr[2])


def test_evaluation_counts():
    cfg = linear_config()
    rep = run_study(cfg)
    assert rep.counts == {
        "pce": cfg.n * cfg.replications,
        "mc": cfg.mc_n * (5 + 2) * cfg.replications,
        "morris": cfg.morris_n * (5 + 1) * cfg.replications,
    }


def test_deterministic_across_workers():
    cfg = linear_config(method="lar")
    a = run_study(cfg, workers=1).to_json()
    b = run_study(cfg, workers=1).to_json()
    c = run_study(cfg, workers=3).to_json()
    assert a == b == c


def test_replication_failure_reports_index():
    # 3 points cannot determine 6 coefficients
    with pytest.raises(StudyError, match="replication 1") as info:
        run_study(StudyConfig(model="linear", n=3, degree=1, method="ols", replications=2))
    assert info.value.replication == 1


def test_json_schema_and_round_trip():
    rep = run_study(linear_config())
    doc = json.loads(rep.to_json())
    assert set(doc) == {"version", "config", "variables", "counts"}
    v = doc["variables"][0]
    assert v["name"] == "X1"
    assert set(v["methods"]) == {"pce", "mc", "morris"}
    assert set(v["methods"]["pce"]["s_dgsm"]) == {"median", "lo", "hi"}
    assert set(v["methods"]["morris"]) == {"mu", "mu_star", "sigma"}
    assert StudyReport.from_json(rep.to_json()).to_json() == rep.to_json()


def test_empty_report():
    rep = StudyReport({}, [])
    doc = json.loads(render_report(rep, "json"))
    assert doc["variables"] == []
    assert report_csv(rep).splitlines() == [",".join(CSV_HEADER)]
    ET.fromstring(report_svg(rep).split("?>", 1)[1])


def test_csv_rows():
    rep = run_study(linear_config())
    lines = report_csv(rep).splitlines()
    assert lines[0] == "variable,method,metric,median,ci_low,ci_high"
    # pce: 2 metrics, mc: 1, morris: 3
    assert len(lines) == 1 + 5 * 6
    assert lines[1].startswith("X1,pce,s_total,")


def test_svg_structure(tmp_path):
    rep = run_study(linear_config())
    path = emit_report(rep, "svg", tmp_path / "sub" / "fig.svg")
    root = ET.parse(path).getroot()
    assert root.tag == SVG + "svg"
    groups = [g for g in root.iter(SVG + "g") if g.get("class") == "variable"]
    assert [g.get("data-name") for g in groups] == rep.variables
    for g in groups:
        assert len(g.findall(SVG + "rect")) == 3
        assert len([ln for ln in g.findall(SVG + "line") if ln.get("class") == "ci"]) == 3


def test_render_unknown_format():
    with pytest.raises(ValueError):
        render_report(StudyReport({}, []), "png")
