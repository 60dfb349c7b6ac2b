"""Regenerate the shipped curve-diagram fixtures in src/palfkit/data.

pi1..pi3: three curves on a genus-3 surface with one boundary circle,
pairwise crossing once.  The rotation system is the one whose two triangular
regions both run L1 -> L2 -> L3 counterclockwise; the variants differ only in
how the complementary regions are joined up by extra topology.

annulus: two core curves of an annulus, perturbed to cross twice.  Built from
plane geometry with the helper in tests/planar.py.

core: a single crossing-free core curve of an annulus, cut open at a marker.
"""

import dataclasses
import json
import sys
from fractions import Fraction as Q
from pathlib import Path

from palfkit.diagram import (
    Arc, BraneAssignment, CurveWrithe, Crossing, Curve, CurveDiagram, DeclaredWalk, Face, Marker,
    validate_diagram,
)

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "src" / "palfkit" / "data"

ARCS = (Arc("a1", "L1", "p12", "p13"), Arc("a2", "L1", "p13", "p12"),
        Arc("b1", "L2", "p12", "p23"), Arc("b2", "L2", "p23", "p12"),
        Arc("c1", "L3", "p13", "p23"), Arc("c2", "L3", "p23", "p13"))
CROSSINGS = (
    Crossing("p12", ("L1", "L2"), (("a1", 0), ("b2", 1), ("a2", 1), ("b1", 0))),
    Crossing("p13", ("L1", "L3"), (("a2", 0), ("c2", 1), ("a1", 1), ("c1", 0))),
    Crossing("p23", ("L2", "L3"), (("b2", 0), ("c1", 1), ("b1", 1), ("c2", 0))),
)
T1 = (("a1", -1), ("b1", 1), ("c1", -1))
T2 = (("a2", 1), ("b2", -1), ("c2", 1))
HEX = (("a1", 1), ("c2", -1), ("b1", -1), ("a2", -1), ("c1", 1), ("b2", 1))


def curves(classes, orient=(1, 1, 1)):
    return tuple(Curve(n, o, tuple(h)) for n, o, h in zip(("L1", "L2", "L3"), orient, classes))


def three_curve(name, faces, classes, branes, orient=(1, 1, 1)):
    d = CurveDiagram(3, 1, curves(classes, orient), CROSSINGS, ARCS, faces, (), name)
    return d, branes


def pi1():
    faces = (Face("T1", T1), Face("T2", T2), Face("H", HEX, True, 1, 2))
    classes = ([0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [1, -1, 0, 0, 0, 0])
    b = BraneAssignment({"p12": 0, "p13": 0, "p23": 0}, {"L1": "a1", "L2": "b1", "L3": "c1"})
    return three_curve("pi1", faces, classes, b)


def pi2():
    faces = (Face("T1", T1), Face("T2+H", T2, True, 1, 1, (HEX,)))
    classes = ([0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [1, -1, 1, 0, 0, 0])
    b = BraneAssignment({"p12": 0, "p13": 0, "p23": 0}, {"L1": "a2", "L2": "b2", "L3": "c2"})
    return three_curve("pi2", faces, classes, b)


def pi3():
    faces = (Face("T1+T2", T1, False, 0, 0, (T2,)), Face("H", HEX, True, 1, 1))
    classes = ([0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [1, -1, 2, 0, 0, 0])
    walks = [DeclaredWalk("S2", -2), DeclaredWalk("S3", 2),
             DeclaredWalk("S5", 0, ("L1", "L2", "L3"), ("p13", "p12", "p23"))]
    rel = [CurveWrithe("L1", ("S3", "S5"), -2), CurveWrithe("L2", ("S2", "S5"), 2),
           CurveWrithe("L3", ("S2", "S3"), 0)]
    b = BraneAssignment({"p12": 0, "p13": -2, "p23": 0}, {"L1": "a1", "L2": "b1", "L3": "c1"}, walks, rel)
    return three_curve("pi3", faces, classes, b)


def annulus():
    sys.path.insert(0, str(ROOT / "tests"))
    from planar import build

    def octagon(cx, cy, r):
        pts = [(1, 0), (2, 1), (2, 2), (1, 3), (0, 3), (-1, 2), (-1, 1), (0, 0)]
        return [(cx + r * (x - Q(1, 2)), cy + r * (y - Q(3, 2))) for x, y in pts]

    polys = [octagon(Q(0), Q(0), Q(1, 2)), octagon(Q(3, 10), Q(1, 7), Q(1, 2))]
    d, b = build(polys, [(Q(3, 20), Q(1, 20))], name="annulus")
    curves = tuple(dataclasses.replace(c, homology_class=(1,)) for c in d.curves)
    return dataclasses.replace(d, curves=curves), b


def core():
    d = CurveDiagram(0, 2, (Curve("L1", 1, (1,)),), (), (Arc("a", "L1", "m", "m"),),
                     (Face("inner", (("a", 1),), True, 1), Face("outer", (("a", -1),), True, 1)),
                     (Marker("m", "L1"),), "core")
    return d, BraneAssignment({}, {"L1": "a"})


BUILDERS = {"pi1": pi1, "pi2": pi2, "pi3": pi3, "annulus": annulus, "core": core}


def main(argv=None):
    names = (argv or sys.argv[1:]) or list(BUILDERS)
    for n in names:
        d, b = BUILDERS[n]()
        rep = validate_diagram(d, b)
        if not rep.ok:
            raise SystemExit("%s: %s" % (n, "; ".join(map(str, rep.issues))))
        (OUT / ("%s.diagram.json" % n)).write_text(json.dumps(d.to_json(b), indent=1) + "\n", encoding="utf-8")
        print("wrote", n)


if __name__ == "__main__":
    main()
