"""Milnor lattice, Euler pairing of a directed category, and H_1 of the total space."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ainfcat import AInfCategory
from .diagram import CurveDiagram, intersection_matrix
from .exactalg import AbelianGroup, IntMatrix, cokernel, smith_normal_form


@dataclass
class MilnorLattice:
    rank: int
    pairing: IntMatrix
    labels: tuple = ()


@dataclass
class EulerForm:
    pairing: IntMatrix
    labels: tuple = ()


def _check_antisymmetric(m: IntMatrix):
    rows = m.tolist()
    for i in range(m.rows):
        if rows[i][i]:
            raise AssertionError("diagonal entry %d is %d" % (i, rows[i][i]))
        for j in range(m.cols):
            if rows[i][j] != -rows[j][i]:
                raise AssertionError("pairing not antisymmetric at (%d, %d)" % (i, j))


def euler_pairing(cat: AInfCategory) -> EulerForm:
    """(X_i, X_j) = sum_d (-1)^d dim hom^d(X_i, X_j) for i < j, antisymmetrized."""
    n = len(cat.objects)
    m = [[0] * n for _ in range(n)]
    for i, x in enumerate(cat.objects):
        for j in range(i + 1, n):
            y = cat.objects[j]
            s = sum((-1) ** (cat.degree(g) % 2) for g in cat.hom(x, y))
            m[i][j], m[j][i] = s, -s
    out = EulerForm(IntMatrix.from_rows(m), tuple(cat.objects))
    _check_antisymmetric(out.pairing)
    return out


def milnor_lattice(d: CurveDiagram) -> MilnorLattice:
    m = intersection_matrix(d)
    _check_antisymmetric(m)
    return MilnorLattice(len(d.curves), m, tuple(c.name for c in d.curves))


@dataclass
class LatticeComparison:
    match: bool
    signs: tuple | None = None     # epsilon_i per curve
    global_sign: int | None = None

    def to_json(self):
        return {"match": self.match, "signs": list(self.signs) if self.signs else None,
                "global_sign": self.global_sign}


def compare_lattices(m: MilnorLattice, e: EulerForm) -> LatticeComparison:
    """Find eps in {+1,-1}^N and sigma in {+1,-1} with sigma*eps_i*eps_j*m_ij = e_ij.

    sigma = +1 is tried first.  eps_1 is fixed to +1 since (eps, sigma) and
    (-eps, sigma) act identically.
    """
    if m.rank != e.pairing.rows:
        raise ValueError("rank mismatch: lattice %d, Euler form %d" % (m.rank, e.pairing.rows))
    a, b = m.pairing.tolist(), e.pairing.tolist()
    n = m.rank
    for sigma in (1, -1):
        for tail in itertools.product((1, -1), repeat=max(n - 1, 0)):
            eps = (1,) + tail if n else ()
            if all(sigma * eps[i] * eps[j] * a[i][j] == b[i][j] for i in range(n) for j in range(n)):
                return LatticeComparison(True, eps, sigma)
    return LatticeComparison(False)


def attaching_matrix(d: CurveDiagram) -> IntMatrix:
    rows = []
    for c in d.curves:
        if c.homology_class is None:
            raise ValueError("curve %s has no homology class" % c.name)
        if len(c.homology_class) != d.h1_rank():
            raise ValueError("curve %s: class length %d, expected %d" % (c.name, len(c.homology_class), d.h1_rank()))
        rows.append(list(c.homology_class))
    return IntMatrix.from_rows(rows) if rows else IntMatrix.zeros(0, d.h1_rank())


def total_space_h1(d: CurveDiagram) -> AbelianGroup:
    """H_1 of the fibre with one disc attached along each curve: coker of the class matrix."""
    m = attaching_matrix(d)
    return cokernel(m.transpose()) if m.rows else AbelianGroup(d.h1_rank(), ())


# -- an independent route through a cell complex built from the faces ----------


def _face_cells(d: CurveDiagram):
    """Cellular chain data for the fibre.

    Disc faces are 2-cells.  Any other face gets a centre vertex, one spoke to
    each of its walks, 2h loops for its genus and one loop per boundary circle;
    a single 2-cell is attached along sum(walks) + sum(boundary loops) (the
    commutators and spokes cancel in cellular chains).
    """
    verts = list(d.vertices())
    edges = []   # (name, tail, head)
    for a in d.arcs:
        edges.append((a.id, a.start, a.end))
    cells = []   # dict edge -> coeff
    for f in d.faces:
        bd = {}
        for walk in f.walks:
            for aid, side in walk:
                bd[aid] = bd.get(aid, 0) + side
        if not f.is_disc:
            z = "z:" + f.id
            verts.append(z)
            for w, walk in enumerate(f.walks):
                first = walk[0]
                a = d.arc(first[0])
                start = a.start if first[1] == 1 else a.end
                edges.append(("spoke:%s:%d" % (f.id, w), z, start))
            for h in range(2 * f.genus):
                edges.append(("genus:%s:%d" % (f.id, h), z, z))
            for k in range(f.boundary_circles):
                name = "delta:%s:%d" % (f.id, k)
                edges.append((name, z, z))
                bd[name] = bd.get(name, 0) + 1
        cells.append({e: c for e, c in bd.items() if c})
    return verts, edges, cells


def _h1(verts, edges, cells) -> AbelianGroup:
    vi = {v: k for k, v in enumerate(verts)}
    ei = {e[0]: k for k, e in enumerate(edges)}
    d1 = [[0] * len(edges) for _ in verts]
    for k, (_, t, h) in enumerate(edges):
        d1[vi[h]][k] += 1
        d1[vi[t]][k] -= 1
    d2 = [[0] * len(cells) for _ in edges]
    for j, cell in enumerate(cells):
        for e, c in cell.items():
            d2[ei[e]][j] += c
    m1 = IntMatrix.from_rows(d1) if verts else IntMatrix.zeros(0, len(edges))
    m2 = IntMatrix.from_rows(d2) if cells else IntMatrix.zeros(len(edges), 0)
    if cells and not (m1 @ m2).tolist() == [[0] * len(cells) for _ in verts]:
        raise AssertionError("cellular boundary of a 2-cell is not a cycle")
    r1 = sum(1 for x in smith_normal_form(m1).diagonal if x) if edges and verts else 0
    s2 = smith_normal_form(m2).diagonal if cells and edges else ()
    r2 = sum(1 for x in s2 if x)
    torsion = tuple(x for x in s2 if x > 1)
    return AbelianGroup(len(edges) - r1 - r2, torsion)


def cellular_h1_surface(d: CurveDiagram) -> AbelianGroup:
    return _h1(*_face_cells(d))


def cellular_h1_total_space(d: CurveDiagram) -> AbelianGroup:
    """H_1 of the fibre plus a disc along every curve, from faces and arcs only."""
    verts, edges, cells = _face_cells(d)
    for c in d.curves:
        cells.append({aid: 1 for aid in d.curve_arcs(c.name)})
    return _h1(verts, edges, cells)
