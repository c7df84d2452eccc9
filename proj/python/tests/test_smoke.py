import os
from fractions import Fraction
from pathlib import Path

import pytest

import ftcausal

DATA = Path(os.environ.get("FTCAUSAL_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def doc(name):
    return ftcausal.load(DATA / name)


def test_version():
    assert ftcausal.__version__.count(".") == 2


def test_canonical_round_trip():
    text = doc("pr-box.json")
    assert ftcausal.kind(text) == "phenomenon"
    once = ftcausal.canonical(text)
    assert ftcausal.canonical(once) == once


def test_check_nd():
    assert ftcausal.check_nd(doc("pr-box.json"))["holds"]
    nd = ftcausal.check_nd(doc("signalling-box.json"))
    assert not nd["holds"] and nd["violations"]


def test_pr_box_is_not_factorisable():
    cert = ftcausal.factorisable(doc("pr-box.json"))
    assert not cert["feasible"]
    assert cert["witness_value"] > cert["witness_bound"]


def test_uniform_noise_weights_sum_to_one():
    cert = ftcausal.factorisable(doc("uniform-noise.json"))
    assert cert["feasible"]
    assert sum(w for _, w in cert["weights"]) == 1
    assert all(isinstance(w, Fraction) for _, w in cert["weights"])


def test_disturbance_is_a_precondition_error():
    with pytest.raises(ftcausal.PreconditionError):
        ftcausal.factorisable(doc("signalling-box.json"))
    assert not ftcausal.factorisable(doc("signalling-box.json"), allow_disturbing=True)["feasible"]


def test_dsep():
    assert not ftcausal.dsep(doc("chain.json"), "X,Z|")
    assert ftcausal.dsep(doc("chain.json"), "X,Z|Y")
    assert ftcausal.dsep(doc("collider.json"), "X,Z|")


def test_faithful():
    assert ftcausal.faithful(doc("bell-dag.json"), doc("bell-dag-phenomenon.json"))["faithful"]
    f = ftcausal.faithful(doc("hidden-edge-pr.json"), doc("pr-box.json"))
    assert not f["faithful"] and f["witnesses"]


def test_corollary_summary():
    s = ftcausal.summary(ftcausal.corollary(doc("pr-box.json")))
    assert s["verdict"] == "fine-tuning-required"
    s = ftcausal.summary(ftcausal.corollary(doc("uniform-noise.json")))
    assert s["faithful_model_found"] == "yes"


def test_parse_error_names_location():
    bad = (Path(__file__).resolve().parents[2] / "tests" / "data" / "malformed-rational.json").read_text()
    with pytest.raises(ftcausal.ParseError, match="/table/0/p/1"):
        ftcausal.check_nd(bad)
    with pytest.raises(ftcausal.Error):
        ftcausal.canonical("{")
