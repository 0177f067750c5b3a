import math

import pytest

import rotchaos


def test_interval_encloses():
    x = rotchaos.Interval(0.1)
    s = rotchaos.sin(x)
    assert s.lo <= math.sin(0.1) <= s.hi
    third = rotchaos.Interval(1.0) / rotchaos.Interval(3.0)
    assert third.lo < third.hi and third.contains(1 / 3)
    assert rotchaos.hex(0.5) == "0x1p-1"
    with pytest.raises(rotchaos.Error) as e:
        rotchaos.Interval(2.0, 1.0)
    assert e.value.code == "InvalidInterval"


def test_chaos_certificate_replays():
    doc = rotchaos.certify("chaos", rotchaos.load("configs/standard_k6.json"))
    assert doc["verdict"] == "Certified"
    assert doc["evidence"]["dpd"]["rho"] == 3
    r = rotchaos.replay(doc)
    assert r["agrees"] and r["claimed"] == "Certified" and r["enclosures_recomputed"]

    doc["evidence"]["theorem_applied"] = "A"
    r = rotchaos.replay(doc)
    assert not r["agrees"] and r["mismatches"]

    svg = rotchaos.render(doc, "annulus")
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")


def test_rigid_rotation_is_not_chaotic():
    doc = rotchaos.certify("chaos", rotchaos.load("configs/rigid_rotation.json"))
    assert doc["verdict"] != "Certified"
    assert doc["evidence"]["theorem_applied"] == "None"


def test_markov_and_chain():
    markov = rotchaos.certify("markov", rotchaos.load("configs/standard_markov.json"))
    assert markov["verdict"] == "Certified"
    chain = rotchaos.certify("chain", rotchaos.load("configs/standard_chain.json"))
    assert chain["verdict"] == "Certified"
    assert rotchaos.replay(chain)["agrees"]


def test_explorer_and_errors():
    pairs = rotchaos.explore(rotchaos.load("configs/standard_explore.json"))
    assert pairs and pairs[0]["predicted_rho"] >= 3
    cfg = rotchaos.load("configs/standard_k6.json")
    cfg["surprise"] = 1
    with pytest.raises(rotchaos.Error) as e:
        rotchaos.certify("dpd", cfg)
    assert "surprise" in str(e.value)
    with pytest.raises(ValueError):
        rotchaos.certify("torus", rotchaos.load("configs/standard_k6.json"))
