import json
import pathlib

import numpy as np
import pytest

import qeffects as qe

SCHEMA = pathlib.Path(__file__).resolve().parents[2] / "docs" / "report.schema.json"

S = 1 / np.sqrt(2)
SZ = np.diag([1.0, -1.0])
DEPHASING = [S * np.eye(2), S * SZ]


def test_family_validation():
    qe.family([np.eye(2)])
    with pytest.raises(qe.QEffectsError) as info:
        qe.family([np.eye(2), np.eye(2)])
    assert info.value.code == "InvalidFamily"


def test_dephasing_analysis():
    fam = qe.family(DEPHASING)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(fam.apply(sx), 0)
    assert np.allclose(qe.superoperator(fam), np.diag([1, 0, 0, 1]))
    cls = qe.classify(fam)
    assert all(cls.values())
    report = qe.check_containment(fam)
    assert report == {**report, "contained": True, "fix_dim": 2, "comm_dim": 2}
    assert qe.check_equivalence(fam)["agree"]
    assert qe.schwarz_gap(fam, sx) == pytest.approx(1.0)


def test_fixed_points_match_numpy_nullspace():
    fam = qe.gen_kraus(3, 2, seed=4, cls="trace_preserving")
    sup = sum(np.kron(a.conj(), a) for a in fam.operators)
    sing = np.linalg.svd(sup - np.eye(9), compute_uv=False)
    assert len(qe.fixed_point_space(fam)) == int(np.sum(sing < 1e-8))
    for b in qe.fixed_point_space(fam):
        assert np.linalg.norm(fam.apply(b) - b) < 1e-9


def test_channel_json_round_trip():
    fam = qe.gen_kraus(2, 3, seed=1, cls="unital")
    back = qe.channel_from_json(qe.channel_to_json(fam))
    for a, b in zip(fam.operators, back.operators):
        assert np.array_equal(a, b)


def test_effects():
    a = qe.Effect(np.diag([0.5, 0.0]))
    s = qe.classify_sharpness(a)
    assert s["almost_sharp"] and not s["nearly_sharp"]
    p, q = qe.pqp_decompose(a)
    assert np.allclose(q, 0.5 * np.ones((2, 2)), atol=1e-12)
    assert np.allclose(p @ q @ p, a.matrix)
    with pytest.raises(qe.QEffectsError) as info:
        qe.pqp_decompose(qe.Effect(0.5 * np.eye(2)))
    assert info.value.code == "NotAlmostSharp"
    h = qe.apply_function(np.diag([0.25, 1.0]), {"family": "power", "t": 2})
    assert np.allclose(h.matrix, np.diag([1 / 16, 1]))
    assert np.allclose(qe.fuzzy_projection(qe.Effect(0.5 * np.eye(2))), np.eye(2))


def test_search():
    assert qe.counterexample_search(1, 10) is None
    assert qe.counterexample_search(3, 200, seed=3, mode="trace_nonincreasing") is None


def test_report_matches_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(SCHEMA.read_text())
    report = qe.run_suite(dims=[1, 2], trials=2, seed=5, search_budget=3)
    jsonschema.validate(report, schema)
    assert report["total_failures"] == 0
    assert [s["suite"] for s in report["suites"]] == list(qe.suite_tags())
    again = qe.run_suite(dims=[1, 2], trials=2, seed=5, search_budget=3, include_timing=False)
    jsonschema.validate(again, schema)
    code, out, _ = qe.run_cli(["verify", "--suites", "T2.6,T3.2", "--dims", "2", "--trials", "2",
                               "--format", "json"])
    assert code == 0
    jsonschema.validate(json.loads(out), schema)


def test_cli_exit_codes():
    assert qe.run_cli(["verify", "--suites", "bogus"])[0] == 1
    assert qe.run_cli(["verify", "--trials", "0"])[0] == 1
