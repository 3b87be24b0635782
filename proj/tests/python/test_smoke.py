from fractions import Fraction

import pytest

import guillopack as gp


def test_hard_family_is_separable():
    for k in range(1, 6):
        r = gp.check(gp.gen_hard(k))
        assert r["valid"] and r["separable"]
        assert r["items"] == 2 * k


def test_pinwheel():
    pw = gp.pinwheel()
    assert gp.check(pw)["separable"] is False
    assert gp.oracle(pw, "free")["value"] == 4
    g = gp.oracle(pw, "guillotine")
    assert g["value"] == 3 and g["complete"]
    assert gp.check(g["packing"])["separable"]
    t = gp.ratio([pw])
    assert Fraction(t["max_ratio"]) == Fraction(4, 3)


def test_solve_is_sound():
    inst = gp.gen_random(6, 64, "skewed", seed=3)
    r = gp.solve(inst, eps="1/3", eps_large="1/4", eps_small="1/16", max_trees=30)
    c = gp.check(r["packing"])
    assert c["valid"] and c["separable"]
    assert r["stats"]["trees_evaluated"] == 30


def test_nfdh_and_lpack():
    inst = gp.gen_random(20, 64, "small", seed=2)
    nf = gp.nfdh(inst)
    assert gp.check(nf["packing"])["separable"]
    hard = gp.gen_hard(3)
    lp = gp.lpack(hard["instance"], 7, 7)
    assert len(lp["placements"]) == 6


def test_classify_and_render():
    inst = gp.gen_random(10, 64, "skewed", seed=5)
    cl = gp.classify(inst, eps="1/2", eps_large="1/4", eps_small="1/16")
    assert set(cl["items"].values()) <= {"horizontal", "vertical"}
    svg = gp.render_svg(gp.gen_hard(2))
    assert svg.startswith("<svg") and "<line" in svg


def test_compose():
    comps = {"N": 8, "root": {"region": [0, 0, 8, 8], "kind": "cut",
                              "cut": {"orientation": "vertical", "position": 4},
                              "children": [{"region": [0, 0, 4, 8], "kind": "box", "box_kind": "any"},
                                           {"region": [4, 0, 8, 8], "kind": "box", "box_kind": "any"}]}}
    inst = {"N": 8, "items": [{"id": 1, "w": 3, "h": 5}, {"id": 2, "w": 4, "h": 2}]}
    out = gp.compose(comps, inst, {"0": [{"id": 1, "x": 0, "y": 0}], "1": [{"id": 2, "x": 4, "y": 3}]})
    assert gp.check(out["packing"])["separable"]


def test_bad_input_raises():
    with pytest.raises(ValueError):
        gp.oracle(gp.pinwheel(), "stages:x")
    with pytest.raises(ValueError):
        gp.check("{not json")
