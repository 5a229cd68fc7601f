import math

import pytest

gbl = pytest.importorskip("gbl")


def test_gallery_families():
    fams = gbl.gallery_families()
    assert len(fams) >= 4
    patterns = [p for p, _, _ in fams]
    assert any("canonical" in p for p in patterns)


def test_analyze_trivial_instance():
    rep = gbl.analyze(gbl.gallery("l2-canonical-3"), budget=200)
    assert rep["schema"] == "gbl/1"
    assert rep["estimates"]["ksu"]["value"] == 1.0
    assert rep["estimates"]["cw"]["value"] == 1.0
    assert rep["verdict"]["consistent"] is True


def test_analyze_shear_certificate():
    rep = gbl.analyze(gbl.gallery("shear-2"), budget=400)
    ksu = rep["estimates"]["ksu"]["value"]
    assert math.isclose(ksu, math.sqrt(5.0) / 2.0, rel_tol=0, abs_tol=1e-9)
    assert rep["estimates"]["ksu"]["method"] == "eigen"
    assert math.isclose(rep["certificate"]["ratio"], ksu, rel_tol=1e-6)


def test_witness_and_renorm_round_trip():
    wit = gbl.witness(gbl.gallery("summing-2"), budget=300)
    assert wit["result"] == "certificate"
    assert math.isclose(wit["certificate"]["ratio"], 2.0, rel_tol=0, abs_tol=1e-9)

    renormed = gbl.renorm(gbl.gallery("shear-2"))
    assert renormed["norm"]["type"] == "suppression_renorm"
    rep = gbl.analyze(renormed, budget=300)
    assert math.isclose(rep["estimates"]["ksu"]["value"], 1.0, rel_tol=0, abs_tol=1e-12)


def test_hilbert_witness_pairs():
    pairs = gbl.witness(gbl.gallery("shear-2"), hilbert=True)
    assert pairs["kind"] == "hilbert_witnesses"
    assert len(pairs["pairs"]) == 1
    assert pairs["pairs"][0]["epsilon"] == -1
    assert math.isclose(pairs["pairs"][0]["t"], 0.4, rel_tol=0, abs_tol=1e-12)


def test_numeric_helpers():
    inst = gbl.gallery("summing-2")
    assert math.isclose(gbl.norm(inst, [1.0, -2.0]), 1.0, abs_tol=1e-12)
    assert math.isclose(gbl.norm(inst, [0.0, -2.0]), 2.0, abs_tol=1e-12)
    coeffs = gbl.dual_coefficients(inst, [1.0, -2.0])
    assert list(coeffs) == pytest.approx([1.0, -2.0])
    assert gbl.greedy_indices(inst, [1.0, -2.0], 1) == [1]


def test_constants_native():
    res = gbl.constants(gbl.gallery("summing-2"), budget=400)
    assert math.isclose(res["ksu"]["value"], 2.0, rel_tol=0, abs_tol=1e-9)
    assert res["ksu"]["exactness"] == "exact"
    assert res["cw"]["value"] <= res["ksu"]["value"] + 1e-9
    assert res["consistent"] is True


def test_invalid_instance_raises():
    with pytest.raises(ValueError):
        gbl.analyze({"dim": 2, "norm": {"type": "frobnicate"}})
