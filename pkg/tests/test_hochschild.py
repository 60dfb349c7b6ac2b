import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from palfkit import data
from palfkit.ainfcat import AInfCategory, Generator
from palfkit.exactalg import ExactMatrix, Field, rank
from palfkit.hochschild import (
    build_complex, cc_basis, cochain_degree, cochain_label, differential_squares_to_zero,
    gerstenhaber_bracket, gerstenhaber_product, hh_groups, mu_cochain,
    simplified_differential_crosscheck, three_term_formula,
)

SIGN = -1  # bracket M^1 versus the three-term formula on these categories


@pytest.fixture(scope="module")
def cats():
    return {n: data.load_category(n) for n in ("a1", "a2", "a3")}


def table(cx, r):
    return {cx.label(g): {k: int(v) for k, v in cx.image_of(r, g).items()} for g in cx.basis[r]}


def scaled(d, s=SIGN):
    return {k: s * v for k, v in d.items()}


def test_hh_dimensions(cats):
    expected = {"a1": (1, 1), "a2": (1, 0), "a3": (2, 1)}
    for n, (h0, h1) in expected.items():
        hh, cx = hh_groups(cats[n])
        assert (hh[0].dim, hh[1].dim) == (h0, h1), n
        assert hh[-1].dim == 0 and len(cx.basis[-1]) == 0
        assert cx.complete


def test_degree_zero_tables(cats):
    for n in ("a1", "a2"):
        _, cx = hh_groups(cats[n])
        t = table(cx, 0)
        assert t["1"] == scaled({"21": -1, "31": -1})
        assert t["2"] == scaled({"21": 1, "32": -1})
        assert t["3"] == scaled({"31": 1, "32": 1})


def test_a2_degree_one_table(cats):
    _, cx = hh_groups(cats["a2"])
    t = table(cx, 1)
    assert t["21"] == scaled({"321": 1})
    assert t["31"] == scaled({"321": -1})
    assert t["32"] == scaled({"321": 1})
    assert t["11"] == scaled({"111": 1, "211": 1, "311": 1})


def transpose_table(cx, r):
    """m = transpose of M^1 as {target label: {source label: coeff}}."""
    out = {}
    for src, img in table(cx, r).items():
        for tgt, c in img.items():
            out.setdefault(tgt, {})[src] = c
    return out


def test_dual_differential(cats):
    _, cx = hh_groups(cats["a2"])
    m = transpose_table(cx, 1)
    assert m["321"] == scaled({"32": 1, "31": -1, "21": 1})
    _, cx1 = hh_groups(cats["a1"])
    assert "321" not in transpose_table(cx1, 1)
    _, cx3 = hh_groups(cats["a3"])
    m3 = transpose_table(cx3, 1)
    assert m3["32111"] == scaled({"3211": 1})
    assert m3["32221"] == scaled({"3221": -1})
    assert m3["33321"] == scaled({"3321": 1})
    for lab in ("32211", "33211", "33221"):
        assert lab not in m3


def test_a3_low_cochains(cats):
    cat = cats["a3"]
    labs0 = sorted(cochain_label(cat, g) for g in cc_basis(cat, 0)[0])
    assert labs0 == ["1", "2", "3", "321"]
    labs1 = {cochain_label(cat, g) for g in cc_basis(cat, 1)[0]}
    assert {"3211", "3221", "3321"} <= labs1
    assert {"21", "31", "32", "11", "22", "33"} <= labs1
    _, cx = hh_groups(cat)
    assert table(cx, 0)["321"] == {}


def test_crosscheck_reports_global_sign(cats):
    for cat in cats.values():
        rep = simplified_differential_crosscheck(cat)
        assert rep.applicable and rep.agree, rep.mismatches[:3]
        assert rep.global_sign == SIGN


def test_three_term_oracle_gives_same_hh(cats):
    """Independent route: build matrices from the three-term formula, dense ranks."""
    for n, cat in cats.items():
        dims = {}
        for r in (-1, 0, 1):
            src, dst = cc_basis(cat, r)[0], cc_basis(cat, r + 1)[0]
            idx = {g: i for i, g in enumerate(dst)}
            rows = [[0] * len(src) for _ in dst]
            for j, g in enumerate(src):
                for chain in cat.chains(len(g[0]) + 1):
                    for out, c in three_term_formula(cat, g, chain).items():
                        rows[idx[(chain, out)]][j] = c
            dims[r] = (len(src), rank(ExactMatrix.from_dense(rows)) if rows and src else 0)
        hh0 = dims[0][0] - dims[0][1] - dims[-1][1]
        hh1 = dims[1][0] - dims[1][1] - dims[0][1]
        ours, _ = hh_groups(cat)
        assert (hh0, hh1) == (ours[0].dim, ours[1].dim), n


def test_differential_squares_to_zero(cats):
    for cat in cats.values():
        _, cx = hh_groups(cat)
        assert all(differential_squares_to_zero(cx).values())


def test_mu_star_mu_vanishes(cats):
    for cat in cats.values():
        mu = mu_cochain(cat)
        assert gerstenhaber_product(cat, mu, mu, 2) == {}


def test_bad_table_gives_nonzero_mu_star_mu():
    gens = tuple(Generator(l, s, t, 0) for l, s, t in
                 [("e12", "1", "2"), ("e13", "1", "3"), ("e14", "1", "4"),
                  ("e23", "2", "3"), ("e24", "2", "4"), ("e34", "3", "4")])
    mu = {("e23", "e12"): {"e13": 1}, ("e34", "e23"): {"e24": 1}, ("e34", "e13"): {"e14": 1}}
    cat = AInfCategory(("1", "2", "3", "4"), gens, mu)
    mm = gerstenhaber_product(cat, mu_cochain(cat), mu_cochain(cat), 2)
    assert mm == {(("e34", "e23", "e12"), "e14"): 1} or mm == {(("e34", "e23", "e12"), "e14"): -1}


def random_cochain(cat, r, rnd, k=3):
    basis = cc_basis(cat, r)[0]
    picks = rnd.sample(basis, min(k, len(basis)))
    return {g: Fraction(rnd.randint(-3, 3) or 1) for g in picks}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["a1", "a2", "a3"]), st.integers(0, 2), st.integers(0, 2),
       st.randoms(use_true_random=False))
def test_bracket_graded_antisymmetry(name, r, t, rnd):
    cat = data.load_category(name)
    psi, phi = random_cochain(cat, r, rnd), random_cochain(cat, t, rnd)
    lhs = gerstenhaber_bracket(cat, psi, phi, r, t)
    rhs = gerstenhaber_bracket(cat, phi, psi, t, r)
    s = -((-1) ** ((r - 1) * (t - 1)))
    assert lhs == {k: s * v for k, v in rhs.items() if v}
    for g in lhs:
        assert cochain_degree(cat, g) == r + t - 1


def test_prime_field_agrees(cats):
    for cat in cats.values():
        q, _ = hh_groups(cat)
        f7, _ = hh_groups(cat.over(Field(7)))
        assert {r: g.dim for r, g in q.items()} == {r: g.dim for r, g in f7.items()}


def test_positive_degrees_flag_truncation():
    cat = AInfCategory(("1", "2"), (Generator("x", "1", "2", 1),))
    cx = build_complex(cat, (0, 1))
    assert not cx.complete and cx.length_cap is not None


def test_representatives_are_cocycles(cats):
    hh, cx = hh_groups(cats["a3"])
    assert len(hh[0].representatives) == 2
    for r in (0, 1):
        for rep in hh[r].representatives:
            vec = [rep.get(cx.label(g), 0) for g in cx.basis[r]]
            assert all(x == 0 for x in cx.differentials[r].apply(vec))
