import random

import pytest

from palfkit.ainfcat import check_ainf_relation, directed_restriction
from palfkit.data import load_category, load_diagram
from palfkit.diagram import BraneAssignment, sub_diagram
from palfkit.exactalg import Field
from palfkit.fscat import build_fs_category, floer_differential_squared_check, match_reference

from planar import samples


@pytest.mark.parametrize("diagram, ref", [("pi1", "a1"), ("pi2", "a2"), ("pi3", "a3")])
def test_fixtures_give_reference_categories(diagram, ref):
    d, b = load_diagram(diagram)
    res = build_fs_category(d, b)
    assert res.complete and res.relation_checked
    rep = match_reference(res.category, load_category(ref))
    assert rep["ok"], rep["problems"]


def test_pi2_composition():
    d, b = load_diagram("pi2")
    cat = build_fs_category(d, b).category
    assert cat.mu_eval(("p23", "p12")) == {"p13": 1}
    assert cat.degree("p13") == 0


def test_pi3_degrees():
    d, b = load_diagram("pi3")
    cat = build_fs_category(d, b).category
    assert cat.degree("p13") == -2
    assert cat.mu_eval(("p23", "p12")) == {}


@pytest.mark.parametrize("name", ["pi1", "pi2", "pi3", "annulus", "core"])
def test_floer_square_on_fixtures(name):
    d, b = load_diagram(name)
    rep = floer_differential_squared_check(build_fs_category(d, b))
    assert rep.ok
    assert not rep.nonzero_mu1


def test_random_arrangements_are_ainf():
    nonzero = 0
    for d, b in samples(12):
        res = build_fs_category(d, b)
        assert res.complete and res.relation_checked
        assert not res.sign_rule_disagreements
        rep = floer_differential_squared_check(res)
        assert rep.ok
        nonzero += rep.nonzero_mu1
        cat = res.category
        for args, out in cat.mu.items():
            for y in out:
                assert cat.degree(y) == sum(cat.degree(a) for a in args) + 2 - len(args)
    assert nonzero > 0


def test_random_arrangements_over_fp():
    d, b = samples(12)[3]
    res = build_fs_category(d, b, field=Field(3))
    assert res.relation_checked


def _abs_table(cat):
    return {k: {y: abs(c) for y, c in v.items()} for k, v in cat.mu.items()}


def test_switching_points_only_change_signs():
    rng = random.Random(5)
    for d, b in samples(6):
        base = build_fs_category(d, b).category
        for _ in range(3):
            sp = {c.name: rng.choice(d.curve_arcs(c.name)) for c in d.curves}
            moved = build_fs_category(d, BraneAssignment(b.indices, sp)).category
            assert _abs_table(moved) == _abs_table(base)


def test_grading_shift():
    for d, b in samples(4):
        base = build_fs_category(d, b).category
        name = d.curves[1].name
        res = build_fs_category(d, b.shifted(d, name, 3))
        assert res.relation_checked
        cat = res.category
        assert _abs_table(cat) == _abs_table(base)
        for g in base.generators:
            if g.label in base.units.values():
                continue
            shift = 3 if g.target == name else -3 if g.source == name else 0
            assert cat.degree(g.label) == g.degree + shift


def _shape(cat):
    gens = sorted((g.label, g.source, g.target, g.degree) for g in cat.generators)
    return cat.objects, gens, cat.mu


@pytest.mark.parametrize("name", ["pi1", "pi2", "pi3"])
@pytest.mark.parametrize("keep", [("L1", "L2"), ("L1", "L3"), ("L2", "L3")])
def test_restriction_matches_sub_diagram(name, keep):
    d, b = load_diagram(name)
    whole = build_fs_category(d, b).category
    sd, sb = sub_diagram(d, keep, b)
    assert _shape(build_fs_category(sd, sb).category) == _shape(directed_restriction(whole, keep))


def test_restriction_on_random_arrangements():
    for d, b in samples(4):
        whole = build_fs_category(d, b).category
        keep = (d.curves[0].name, d.curves[2].name)
        sd, sb = sub_diagram(d, keep, b)
        part = build_fs_category(sd, sb).category
        # polygons of the pair never use the removed curve, so the tables agree
        assert _shape(part) == _shape(directed_restriction(whole, keep))


def test_thread_count_does_not_change_result(monkeypatch):
    d, b = samples(12)[5]
    monkeypatch.setenv("PALFKIT_THREADS", "1")
    one = build_fs_category(d, b)
    monkeypatch.setenv("PALFKIT_THREADS", "4")
    four = build_fs_category(d, b)
    assert one.category.canonical() == four.category.canonical()
    assert {k: [x.key() for x, _ in v] for k, v in one.polygon_log.items()} == \
        {k: [x.key() for x, _ in v] for k, v in four.polygon_log.items()}
