import dataclasses

import pytest

from palfkit.ainfcat import AInfCategory, Generator
from palfkit.data import load_category, load_diagram
from palfkit.diagram import Arc, Crossing, Curve, CurveDiagram, Face, validate_diagram
from palfkit.exactalg import AbelianGroup, IntMatrix
from palfkit.fscat import build_fs_category
from palfkit.invariants import (
    EulerForm, MilnorLattice, cellular_h1_surface, cellular_h1_total_space, compare_lattices, euler_pairing,
    milnor_lattice, total_space_h1,
)

from planar import samples


def test_euler_pairing_a1():
    m = euler_pairing(load_category("a1")).pairing.tolist()
    assert m == [[0, 1, 1], [-1, 0, 1], [-1, -1, 0]]


def test_euler_pairing_a3_degree_minus_two():
    m = euler_pairing(load_category("a3")).pairing.tolist()
    assert m[0][2] == 1 and m[2][0] == -1


def test_euler_pairing_cancels():
    gens = (Generator("u", "1", "2", 0), Generator("v", "1", "2", 1))
    cat = AInfCategory(("1", "2"), gens, {("u",): {"v": 1}}, units={"1": "e1", "2": "e2"})
    assert euler_pairing(cat).pairing.tolist() == [[0, 0], [0, 0]]


def two_positive_crossings():
    """Two curves on a torus with two holes meeting twice with the same sign."""
    arcs = (Arc("a1", "L1", "x", "y"), Arc("a2", "L1", "y", "x"), Arc("b1", "L2", "x", "y"), Arc("b2", "L2", "y", "x"))
    cs = (Crossing("x", ("L1", "L2"), (("a1", 0), ("b1", 0), ("a2", 1), ("b2", 1))),
          Crossing("y", ("L1", "L2"), (("a2", 0), ("b2", 0), ("a1", 1), ("b1", 1))))
    faces = (Face("F0", (("a1", 1), ("b2", 1), ("a2", -1), ("b1", -1)), True, 1),
             Face("F1", (("a1", -1), ("b2", -1), ("a2", 1), ("b1", 1)), True, 1))
    curves = (Curve("L1", 1, (1, 0, 0)), Curve("L2", 1, (1, 2, 0)))
    return CurveDiagram(1, 2, curves, cs, arcs, faces, (), "twice")


def test_milnor_lattices():
    for name in ("pi1", "pi2", "pi3"):
        d, _ = load_diagram(name)
        m = milnor_lattice(d)
        assert m.rank == 3
        assert all(abs(x) == (i != j) for i, row in enumerate(m.pairing.tolist()) for j, x in enumerate(row))
    d, _ = load_diagram("annulus")
    assert milnor_lattice(d).pairing.tolist() == [[0, 0], [0, 0]]
    d = two_positive_crossings()
    assert validate_diagram(d).ok
    assert milnor_lattice(d).pairing.tolist() == [[0, 2], [-2, 0]]


@pytest.mark.parametrize("diagram, ref", [("pi1", "a1"), ("pi2", "a2"), ("pi3", "a3")])
def test_lattice_matches_euler_form(diagram, ref):
    d, b = load_diagram(diagram)
    for cat in (build_fs_category(d, b).category, load_category(ref)):
        rep = compare_lattices(milnor_lattice(d), euler_pairing(cat))
        assert rep.match and rep.global_sign == -1


def test_lattice_matches_on_random_arrangements():
    # with geometric gradings (-1)^i(p) is minus the crossing sign
    hits = 0
    for d, b in samples(12):
        m = milnor_lattice(d)
        e = euler_pairing(build_fs_category(d, b).category)
        rep = compare_lattices(m, e)
        assert rep.match
        if any(any(row) for row in m.pairing.tolist()):
            hits += 1
            assert rep.global_sign == -1
            flags = [c.orientation for c in d.curves]
            assert [s * flags[0] for s in rep.signs] == flags or \
                all(rep.signs[i] * rep.signs[j] == flags[i] * flags[j]
                    for i in range(len(flags)) for j in range(len(flags)) if m.pairing.tolist()[i][j])


def test_compare_trivial_cases():
    z = IntMatrix.zeros(2, 2)
    rep = compare_lattices(MilnorLattice(2, z), EulerForm(z))
    assert rep.match and rep.signs == (1, 1) and rep.global_sign == 1
    with pytest.raises(ValueError):
        compare_lattices(MilnorLattice(2, z), EulerForm(IntMatrix.zeros(3, 3)))
    bad = EulerForm(IntMatrix.from_rows([[0, 2], [-2, 0]]))
    one = MilnorLattice(2, IntMatrix.from_rows([[0, 1], [-1, 0]]))
    assert not compare_lattices(one, bad).match


def test_grading_shift_law():
    for d, b in samples(4):
        base = euler_pairing(build_fs_category(d, b).category).pairing.tolist()
        k = 1
        for n in (1, 2, -3):
            got = euler_pairing(build_fs_category(d, b.shifted(d, d.curves[k].name, n)).category).pairing.tolist()
            for i in range(len(base)):
                for j in range(len(base)):
                    flip = (-1) ** n if (i == k) != (j == k) else 1
                    assert got[i][j] == flip * base[i][j]


@pytest.mark.parametrize("name, expected", [
    ("pi1", AbelianGroup(4, ())),
    ("pi2", AbelianGroup(3, ())),
    ("pi3", AbelianGroup(3, (2,))),
])
def test_total_space_h1(name, expected):
    d, _ = load_diagram(name)
    assert total_space_h1(d) == expected
    assert cellular_h1_total_space(d) == expected
    assert cellular_h1_surface(d) == AbelianGroup(d.h1_rank(), ())


def test_total_space_h1_zero_attaching():
    d, _ = load_diagram("pi1")
    zero = tuple(dataclasses.replace(c, homology_class=(0,) * 6) for c in d.curves)
    assert str(total_space_h1(dataclasses.replace(d, curves=zero))) == "Z^6"
    bare = CurveDiagram(3, 1, (), (), (), ())
    assert total_space_h1(bare) == AbelianGroup(6, ())


def test_total_space_h1_rank_formula():
    d, _ = load_diagram("annulus")
    assert total_space_h1(d) == cellular_h1_total_space(d) == AbelianGroup(0, ())
    # the cell structure alone fixes the answer for the two-crossing torus
    assert cellular_h1_total_space(two_positive_crossings()) == AbelianGroup(1, ())


def test_missing_classes_rejected():
    d, _ = load_diagram("pi1")
    curves = (dataclasses.replace(d.curves[0], homology_class=None),) + d.curves[1:]
    with pytest.raises(ValueError):
        total_space_h1(dataclasses.replace(d, curves=curves))
