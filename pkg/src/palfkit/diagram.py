"""Curve diagrams on a bordered surface: a ribbon-graph model of a distinguished
basis of vanishing cycles, plus grading and switching-point data.

Conventions
-----------
* Each arc carries the direction of its curve's parametrization.  An arc end
  is ``(arc_id, 0)`` for the start of the arc and ``(arc_id, 1)`` for its end.
  In files they are written ``[arc_id, "out"]`` and ``[arc_id, "in"]``.
* Every vertex lists its arc ends in counterclockwise order.
* A face walk is a cyclic list of ``(arc_id, side)``; ``side = +1`` means the
  arc is traversed forwards with the face on its left, ``-1`` backwards with
  the face on its right.  Walks keep their face on the left.  Arriving at a
  vertex through end ``h`` the walk leaves through ``ccw_prev(h)``.
* A crossing of curves (A, B) is positive when B's outgoing end directly
  follows A's outgoing end counterclockwise (after both orientation flags).
* Homology classes are coordinates in (a_1, b_1, ..., a_g, b_g, d_1, ...,
  d_{k-1}) with a_i . b_i = 1 and all boundary classes isotropic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .exactalg import IntMatrix

FORMAT = "palfkit-diagram"
END_NAMES = {"out": 0, "in": 1}


class DiagramFormatError(ValueError):
    """Malformed diagram document (schema or dangling reference)."""


@dataclass(frozen=True)
class Curve:
    name: str
    orientation: int = 1
    homology_class: tuple | None = None


@dataclass(frozen=True)
class Crossing:
    id: str
    curves: tuple
    cyclic_order: tuple  # ccw tuple of ends (arc_id, 0|1)


@dataclass(frozen=True)
class Marker:
    id: str
    curve: str


@dataclass(frozen=True)
class Arc:
    id: str
    curve: str
    start: str
    end: str


@dataclass(frozen=True)
class Face:
    id: str
    walk: tuple
    touches_boundary: bool = False
    boundary_circles: int = 0
    genus: int = 0
    extra_walks: tuple = ()

    @property
    def walks(self):
        return (self.walk,) + tuple(self.extra_walks)

    @property
    def is_disc(self) -> bool:
        return not self.touches_boundary and not self.boundary_circles and not self.genus and not self.extra_walks

    def euler_char(self) -> int:
        return 2 - 2 * self.genus - len(self.walks) - self.boundary_circles


@dataclass(frozen=True)
class DeclaredWalk:
    label: str
    value: int
    curves: tuple = ()
    corners: tuple = ()


@dataclass(frozen=True)
class CurveWrithe:
    curve: str
    walks: tuple
    correction: int = 0


@dataclass
class BraneAssignment:
    indices: dict                    # crossing id -> i(p) for (lower curve, higher curve)
    switching_points: dict           # curve name -> arc id
    declared_writhes: list = dc_field(default_factory=list)
    curve_writhes: list = dc_field(default_factory=list)

    def shifted(self, d: "CurveDiagram", curve: str, n: int) -> "BraneAssignment":
        """Grading shift alpha[n] of one curve: degrees of morphisms into it rise by n."""
        k = d.curve_index(curve)
        out = dict(self.indices)
        for c in d.crossings:
            lo, hi = d.ordered_curves(c.id)
            if hi == curve:
                out[c.id] += n
            elif lo == curve:
                out[c.id] -= n
        return BraneAssignment(out, dict(self.switching_points), list(self.declared_writhes),
                               list(self.curve_writhes))


@dataclass
class CurveDiagram:
    genus: int
    boundary_count: int
    curves: tuple
    crossings: tuple
    arcs: tuple
    faces: tuple
    markers: tuple = ()
    name: str = ""

    # -- lookups -------------------------------------------------------------

    @cached_property
    def _curve_pos(self):
        return {c.name: k for k, c in enumerate(self.curves)}

    @cached_property
    def _arc(self):
        return {a.id: a for a in self.arcs}

    @cached_property
    def _face(self):
        return {f.id: f for f in self.faces}

    @cached_property
    def _crossing(self):
        return {c.id: c for c in self.crossings}

    @cached_property
    def _vertex_ends(self):
        out = {c.id: tuple(c.cyclic_order) for c in self.crossings}
        for m in self.markers:
            arcs = [a for a in self.arcs if a.curve == m.curve]
            ins = [(a.id, 1) for a in arcs if a.end == m.id]
            outs = [(a.id, 0) for a in arcs if a.start == m.id]
            out[m.id] = tuple(outs + ins)
        return out

    @cached_property
    def _end_pos(self):
        pos = {}
        for v, ends in self._vertex_ends.items():
            for k, e in enumerate(ends):
                pos[e] = (v, k)
        return pos

    def curve(self, name: str) -> Curve:
        return self.curves[self._curve_pos[name]]

    def curve_index(self, name: str) -> int:
        return self._curve_pos[name]

    def arc(self, arc_id: str) -> Arc:
        return self._arc[arc_id]

    def face(self, face_id: str) -> Face:
        return self._face[face_id]

    def crossing(self, cid: str) -> Crossing:
        return self._crossing[cid]

    def is_crossing(self, vid: str) -> bool:
        return vid in self._crossing

    def vertices(self):
        return [c.id for c in self.crossings] + [m.id for m in self.markers]

    def vertex_ends(self, vid: str):
        return self._vertex_ends[vid]

    def end_vertex(self, end) -> str:
        a = self.arc(end[0])
        return a.start if end[1] == 0 else a.end

    def ccw_prev(self, end):
        v, k = self._end_pos[end]
        ends = self._vertex_ends[v]
        return ends[(k - 1) % len(ends)]

    def ccw_next(self, end):
        v, k = self._end_pos[end]
        ends = self._vertex_ends[v]
        return ends[(k + 1) % len(ends)]

    def opposite_end(self, end):
        v, k = self._end_pos[end]
        ends = self._vertex_ends[v]
        return ends[(k + len(ends) // 2) % len(ends)]

    def ordered_curves(self, cid: str):
        a, b = self.crossing(cid).curves
        return (a, b) if self._curve_pos[a] < self._curve_pos[b] else (b, a)

    @cached_property
    def _sides(self):
        """(arc, side) -> (face id, walk number, position)."""
        out = {}
        for f in self.faces:
            for w, walk in enumerate(f.walks):
                for k, step in enumerate(walk):
                    out[tuple(step)] = (f.id, w, k)
        return out

    def face_of_side(self, arc_id: str, side: int) -> str:
        return self._sides[(arc_id, side)][0]

    def left_face(self, arc_id: str) -> str:
        return self.face_of_side(arc_id, 1)

    def right_face(self, arc_id: str) -> str:
        return self.face_of_side(arc_id, -1)

    @cached_property
    def _curve_cycles(self):
        """curve -> arcs in parametrization order, starting from the first listed arc."""
        out = {}
        for c in self.curves:
            arcs = [a for a in self.arcs if a.curve == c.name]
            if not arcs:
                out[c.name] = []
                continue
            by_start = {a.start: a for a in arcs}
            seq, cur = [], arcs[0]
            while True:
                seq.append(cur.id)
                nxt = by_start.get(cur.end)
                if nxt is None or nxt.id == arcs[0].id or len(seq) > len(arcs):
                    break
                cur = nxt
            out[c.name] = seq
        return out

    def curve_arcs(self, curve: str):
        return list(self._curve_cycles[curve])

    def crossings_between(self, ci: str, cj: str):
        return [c.id for c in self.crossings if set(c.curves) == {ci, cj}]

    def crossing_sign(self, cid: str, first: str | None = None) -> int:
        """Local intersection sign of (first, other) at a crossing, orientation flags applied."""
        c = self.crossing(cid)
        a, b = c.curves if first is None or first == c.curves[0] else (c.curves[1], c.curves[0])
        ends = c.cyclic_order
        pa = next(k for k, e in enumerate(ends) if e[1] == 0 and self.arc(e[0]).curve == a)
        pb = next(k for k, e in enumerate(ends) if e[1] == 0 and self.arc(e[0]).curve == b)
        s = 1 if pb == (pa + 1) % 4 else -1
        return s * self.curve(a).orientation * self.curve(b).orientation

    def face_corners(self, face_id: str) -> int:
        """Number of turns at crossings along the face's walks."""
        n = 0
        for walk in self.face(face_id).walks:
            for arc_id, side in walk:
                end = (arc_id, 1) if side == 1 else (arc_id, 0)
                if self.is_crossing(self.end_vertex(end)):
                    n += 1
        return n

    def euler_measure(self, face_id: str):
        from fractions import Fraction
        return 1 - Fraction(self.face_corners(face_id), 4)

    def h1_rank(self) -> int:
        return 2 * self.genus + self.boundary_count - 1

    # -- ribbon graph faces --------------------------------------------------

    def traced_walks(self):
        """All boundary cycles of the ribbon graph, from the cyclic orders alone."""
        seen, cycles = set(), []
        for a in self.arcs:
            for side in (1, -1):
                if (a.id, side) in seen:
                    continue
                cyc, step = [], (a.id, side)
                while step not in seen:
                    seen.add(step)
                    cyc.append(step)
                    step = self.next_step(step)
                cycles.append(tuple(cyc))
        return cycles

    def next_step(self, step):
        arc_id, side = step
        arrive = (arc_id, 1) if side == 1 else (arc_id, 0)
        leave = self.ccw_prev(arrive)
        return (leave[0], 1 if leave[1] == 0 else -1)

    # -- serialization -------------------------------------------------------

    def to_json(self, branes: BraneAssignment | None = None) -> dict:
        inv = {v: k for k, v in END_NAMES.items()}
        doc = {
            "format": FORMAT,
            "version": 1,
            "name": self.name,
            "surface": {"genus": self.genus, "boundary_count": self.boundary_count},
            "curves": [{"name": c.name, "orientation": c.orientation,
                        "homology_class": list(c.homology_class) if c.homology_class is not None else None}
                       for c in self.curves],
            "crossings": [{"id": c.id, "curves": list(c.curves),
                           "cyclic_order": [[e[0], inv[e[1]]] for e in c.cyclic_order]} for c in self.crossings],
            "markers": [{"id": m.id, "curve": m.curve} for m in self.markers],
            "arcs": [{"id": a.id, "curve": a.curve, "endpoints": [a.start, a.end]} for a in self.arcs],
            "faces": [],
        }
        for f in self.faces:
            fd = {"id": f.id, "boundary_walk": [list(s) for s in f.walk], "touches_boundary": f.touches_boundary}
            if f.boundary_circles != (1 if f.touches_boundary else 0):
                fd["boundary_circles"] = f.boundary_circles
            if f.genus:
                fd["genus"] = f.genus
            if f.extra_walks:
                fd["extra_walks"] = [[list(s) for s in w] for w in f.extra_walks]
            doc["faces"].append(fd)
        if branes is not None:
            doc["branes"] = branes_to_json(branes)
        return doc


def branes_to_json(b: BraneAssignment) -> dict:
    return {
        "indices": dict(b.indices),
        "switching_points": dict(b.switching_points),
        "declared_writhes": [{"walk": w.label, "value": w.value, "curves": list(w.curves),
                              "corners": list(w.corners)} for w in b.declared_writhes],
        "curve_writhes": [{"curve": c.curve, "walks": list(c.walks), "correction": c.correction}
                          for c in b.curve_writhes],
    }


# -- parsing -----------------------------------------------------------------


def _req(obj, key, typ, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DiagramFormatError("%s: missing field %r" % (where, key))
    val = obj[key]
    if typ is int and isinstance(val, bool):
        raise DiagramFormatError("%s.%s: expected integer" % (where, key))
    if not isinstance(val, typ):
        raise DiagramFormatError("%s.%s: expected %s" % (where, key, getattr(typ, "__name__", typ)))
    return val


def _parse_end(raw, where):
    if not (isinstance(raw, list) and len(raw) == 2 and isinstance(raw[0], str) and raw[1] in END_NAMES):
        raise DiagramFormatError("%s: arc end must be [arc_id, 'out'|'in'], got %r" % (where, raw))
    return (raw[0], END_NAMES[raw[1]])


def _parse_walk(raw, where):
    if not isinstance(raw, list) or not raw:
        raise DiagramFormatError("%s: walk must be a nonempty list" % where)
    out = []
    for step in raw:
        if not (isinstance(step, list) and len(step) == 2 and isinstance(step[0], str) and step[1] in (1, -1)):
            raise DiagramFormatError("%s: walk step must be [arc_id, 1|-1], got %r" % (where, step))
        out.append((step[0], step[1]))
    return tuple(out)


def diagram_from_json(doc) -> tuple[CurveDiagram, BraneAssignment | None]:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DiagramFormatError("not valid JSON: %s" % exc) from None
    if not isinstance(doc, dict):
        raise DiagramFormatError("top level must be an object")
    if doc.get("format", FORMAT) != FORMAT:
        raise DiagramFormatError("unexpected format %r" % doc.get("format"))
    surf = _req(doc, "surface", dict, "document")
    g = _req(surf, "genus", int, "surface")
    k = _req(surf, "boundary_count", int, "surface")
    curves = []
    for n, c in enumerate(_req(doc, "curves", list, "document")):
        where = "curves[%d]" % n
        name = _req(c, "name", str, where)
        ori = c.get("orientation", 1)
        if ori not in (1, -1):
            raise DiagramFormatError("%s.orientation must be 1 or -1" % where)
        hc = c.get("homology_class")
        if hc is not None:
            if not isinstance(hc, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in hc):
                raise DiagramFormatError("%s.homology_class must be a list of integers" % where)
            hc = tuple(hc)
        curves.append(Curve(name, ori, hc))
    names = [c.name for c in curves]
    if len(set(names)) != len(names):
        raise DiagramFormatError("duplicate curve names")
    crossings = []
    for n, c in enumerate(doc.get("crossings", [])):
        where = "crossings[%d]" % n
        cid = _req(c, "id", str, where)
        cc = _req(c, "curves", list, where)
        if len(cc) != 2 or not all(isinstance(x, str) for x in cc):
            raise DiagramFormatError("%s.curves must name two curves" % where)
        order = tuple(_parse_end(e, where) for e in _req(c, "cyclic_order", list, where))
        crossings.append(Crossing(cid, tuple(cc), order))
    markers = []
    for n, m in enumerate(doc.get("markers", [])):
        where = "markers[%d]" % n
        markers.append(Marker(_req(m, "id", str, where), _req(m, "curve", str, where)))
    arcs = []
    for n, a in enumerate(_req(doc, "arcs", list, "document")):
        where = "arcs[%d]" % n
        ep = _req(a, "endpoints", list, where)
        if len(ep) != 2 or not all(isinstance(x, str) for x in ep):
            raise DiagramFormatError("%s.endpoints must be two vertex ids" % where)
        arcs.append(Arc(_req(a, "id", str, where), _req(a, "curve", str, where), ep[0], ep[1]))
    faces = []
    for n, f in enumerate(_req(doc, "faces", list, "document")):
        where = "faces[%d]" % n
        tb = bool(f.get("touches_boundary", False))
        bc = f.get("boundary_circles", 1 if tb else 0)
        gen = f.get("genus", 0)
        for key, val in (("boundary_circles", bc), ("genus", gen)):
            if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                raise DiagramFormatError("%s.%s must be a nonnegative integer" % (where, key))
        extra = tuple(_parse_walk(w, where + ".extra_walks") for w in f.get("extra_walks", []))
        faces.append(Face(_req(f, "id", str, where), _parse_walk(_req(f, "boundary_walk", list, where), where),
                          tb, bc, gen, extra))
    # references
    arc_ids = {a.id for a in arcs}
    vert_ids = {c.id for c in crossings} | {m.id for m in markers}
    if len(arc_ids) != len(arcs):
        raise DiagramFormatError("duplicate arc ids")
    if len(vert_ids) != len(crossings) + len(markers):
        raise DiagramFormatError("duplicate vertex ids")
    if len({f.id for f in faces}) != len(faces):
        raise DiagramFormatError("duplicate face ids")
    for c in crossings:
        for x in c.curves:
            if x not in names:
                raise DiagramFormatError("crossing %s names unknown curve %r" % (c.id, x))
        for e in c.cyclic_order:
            if e[0] not in arc_ids:
                raise DiagramFormatError("crossing %s names unknown arc %r" % (c.id, e[0]))
    for m in markers:
        if m.curve not in names:
            raise DiagramFormatError("marker %s names unknown curve %r" % (m.id, m.curve))
    for a in arcs:
        if a.curve not in names:
            raise DiagramFormatError("arc %s names unknown curve %r" % (a.id, a.curve))
        for v in (a.start, a.end):
            if v not in vert_ids:
                raise DiagramFormatError("arc %s names unknown vertex %r" % (a.id, v))
    for f in faces:
        for w in f.walks:
            for s in w:
                if s[0] not in arc_ids:
                    raise DiagramFormatError("face %s names unknown arc %r" % (f.id, s[0]))
    d = CurveDiagram(g, k, tuple(curves), tuple(crossings), tuple(arcs), tuple(faces), tuple(markers),
                     doc.get("name", ""))
    branes = None
    if "branes" in doc:
        branes = _parse_branes(doc["branes"], d)
    return d, branes


def _parse_branes(b, d: CurveDiagram) -> BraneAssignment:
    if not isinstance(b, dict):
        raise DiagramFormatError("branes must be an object")
    idx = b.get("indices", {})
    if not isinstance(idx, dict) or not all(isinstance(v, int) and not isinstance(v, bool) for v in idx.values()):
        raise DiagramFormatError("branes.indices must map crossing ids to integers")
    for cid in idx:
        if cid not in d._crossing:
            raise DiagramFormatError("branes.indices names unknown crossing %r" % cid)
    sp = b.get("switching_points", {})
    if not isinstance(sp, dict):
        raise DiagramFormatError("branes.switching_points must be an object")
    for cname, aid in sp.items():
        if cname not in d._curve_pos or aid not in d._arc:
            raise DiagramFormatError("branes.switching_points: unknown %r -> %r" % (cname, aid))
    walks = []
    for n, w in enumerate(b.get("declared_writhes", [])):
        where = "declared_writhes[%d]" % n
        for cid in w.get("corners", []):
            if cid not in d._crossing:
                raise DiagramFormatError("%s names unknown crossing %r" % (where, cid))
        for cn in w.get("curves", []):
            if cn not in d._curve_pos:
                raise DiagramFormatError("%s names unknown curve %r" % (where, cn))
        walks.append(DeclaredWalk(_req(w, "walk", str, where), _req(w, "value", int, where),
                                  tuple(w.get("curves", [])), tuple(w.get("corners", []))))
    cw = []
    for n, c in enumerate(b.get("curve_writhes", [])):
        where = "curve_writhes[%d]" % n
        cw.append(CurveWrithe(_req(c, "curve", str, where), tuple(_req(c, "walks", list, where)),
                              c.get("correction", 0)))
    return BraneAssignment(dict(idx), dict(sp), walks, cw)


def load_diagram(path) -> tuple[CurveDiagram, BraneAssignment | None]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return diagram_from_json(text)


# -- validation --------------------------------------------------------------


@dataclass
class Issue:
    code: str
    element: str
    message: str

    def __str__(self):
        return "%s [%s]: %s" % (self.code, self.element, self.message)


@dataclass
class ValidationReport:
    ok: bool
    issues: list
    stats: dict
    notes: list = dc_field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "issues": [{"code": i.code, "element": i.element, "message": i.message}
                                          for i in self.issues],
                "stats": self.stats, "notes": list(self.notes)}


def _cyclic_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    return any(all(a[(s + t) % n] == b[t] for t in range(n)) for s in range(n))


def _local_structure(d: CurveDiagram, issues):
    names = {c.name for c in d.curves}
    for c in d.crossings:
        a, b = c.curves
        if a == b:
            issues.append(Issue("self_crossing", c.id, "crossing involves curve %s twice; two distinct curves are required" % a))
            continue
        if len(c.cyclic_order) != 4 or len(set(c.cyclic_order)) != 4:
            issues.append(Issue("crossing_valence", c.id, "a crossing needs four distinct arc ends"))
            continue
        curves_at = [d.arc(e[0]).curve for e in c.cyclic_order]
        if set(curves_at) != {a, b}:
            issues.append(Issue("crossing_curves", c.id, "arc ends belong to %s, expected %s and %s"
                                % (sorted(set(curves_at)), a, b)))
            continue
        if curves_at[0] != curves_at[2] or curves_at[1] != curves_at[3]:
            issues.append(Issue("not_transverse", c.id, "arc ends of the two curves must alternate"))
            continue
        for x in (a, b):
            kinds = sorted(e[1] for e in c.cyclic_order if d.arc(e[0]).curve == x)
            if kinds != [0, 1]:
                issues.append(Issue("crossing_ends", c.id, "curve %s must enter and leave once" % x))
        for e in c.cyclic_order:
            arc = d.arc(e[0])
            if (arc.start if e[1] == 0 else arc.end) != c.id:
                issues.append(Issue("arc_endpoint", arc.id, "end %r listed at %s disagrees with endpoints" % (e, c.id)))
    for m in d.markers:
        if any(a.curve == m.curve for c in d.crossings for a in [d.arc(e[0]) for e in c.cyclic_order]):
            issues.append(Issue("marker_on_crossed_curve", m.id, "markers are only for crossing-free curves"))
    used_ends = {}
    for v in d.vertices():
        for e in d.vertex_ends(v):
            used_ends.setdefault(e, []).append(v)
    for a in d.arcs:
        for end, vid in (((a.id, 0), a.start), ((a.id, 1), a.end)):
            if used_ends.get(end) != [vid]:
                issues.append(Issue("arc_endpoint", a.id, "end %r must appear exactly once, at %s" % (end, vid)))
    for c in d.curves:
        arcs = [a for a in d.arcs if a.curve == c.name]
        if not arcs:
            issues.append(Issue("empty_curve", c.name, "curve has no arcs"))
            continue
        if len(d.curve_arcs(c.name)) != len(arcs):
            issues.append(Issue("curve_not_closed", c.name, "arcs do not form a single closed curve"))
    for a in d.arcs:
        if a.curve not in names:
            issues.append(Issue("arc_curve", a.id, "unknown curve"))


def validate_diagram(d: CurveDiagram, b: BraneAssignment | None = None) -> ValidationReport:
    issues: list = []
    notes: list = []
    _local_structure(d, issues)
    V, E, F = len(d.crossings) + len(d.markers), len(d.arcs), len(d.faces)
    stats = {"vertices": V, "arcs": E, "faces": F}
    if issues:
        return ValidationReport(False, issues, stats, ["face and Euler checks skipped"])

    # faces against the rotation system
    steps = {}
    for f in d.faces:
        for w in f.walks:
            for s in w:
                steps.setdefault(s, []).append(f.id)
    for a in d.arcs:
        for side in (1, -1):
            owners = steps.get((a.id, side), [])
            if len(owners) != 1:
                issues.append(Issue("arc_sides", a.id, "side %+d belongs to %d face walks" % (side, len(owners))))
    traced = d.traced_walks()
    declared = [w for f in d.faces for w in f.walks]
    for w in declared:
        if not any(_cyclic_equal(list(w), list(t)) for t in traced):
            issues.append(Issue("face_walk", d.face_of_side(*w[0]) if tuple(w[0]) in d._sides else "?",
                                "walk %s does not close up under the cyclic orders" % ([s[0] for s in w],)))
    if len(traced) != len(declared):
        issues.append(Issue("face_walk", "*", "cyclic orders give %d boundary walks, faces list %d"
                            % (len(traced), len(declared))))
    # Euler characteristic and boundary circles
    chi = V - E + sum(f.euler_char() for f in d.faces)
    stats["euler_characteristic"] = chi
    if chi != 2 - 2 * d.genus - d.boundary_count:
        issues.append(Issue("euler", "surface", "V - E + sum chi(face) = %d, expected 2 - 2g - k = %d"
                            % (chi, 2 - 2 * d.genus - d.boundary_count)))
    nb = sum(f.boundary_circles for f in d.faces)
    if nb != d.boundary_count:
        issues.append(Issue("boundary_circles", "surface", "faces carry %d boundary circles, surface has %d"
                            % (nb, d.boundary_count)))
    for f in d.faces:
        if f.touches_boundary != (f.boundary_circles > 0):
            issues.append(Issue("boundary_flag", f.id, "touches_boundary disagrees with boundary_circles"))
    if d.boundary_count < 1:
        issues.append(Issue("boundary_circles", "surface", "at least one boundary circle is required"))
    # homology classes
    n = d.h1_rank()
    classes = [c.homology_class for c in d.curves]
    if all(h is not None for h in classes) and classes:
        bad = [c.name for c in d.curves if len(c.homology_class) != n]
        for name in bad:
            issues.append(Issue("homology_length", name, "class must have %d entries" % n))
        if not bad:
            m = intersection_matrix(d).tolist()
            form = [[homology_pairing(d, classes[i], classes[j]) for j in range(len(classes))]
                    for i in range(len(classes))]
            for i in range(len(classes)):
                for j in range(i + 1, len(classes)):
                    if (form[i][j] - m[i][j]) % 2:
                        issues.append(Issue("homology_mod2", "%s,%s" % (d.curves[i].name, d.curves[j].name),
                                            "class pairing %d vs signed crossings %d differ mod 2"
                                            % (form[i][j], m[i][j])))
            notes.append("homology classes reproduce the signed intersection numbers exactly"
                         if form == m else "homology classes agree with intersections mod 2 only")
    elif any(h is not None for h in classes):
        issues.append(Issue("homology_partial", "curves", "either all or no curves carry homology classes"))
    if b is not None:
        issues.extend(_brane_issues(d, b))
    return ValidationReport(not issues, issues, stats, notes)


def _brane_issues(d: CurveDiagram, b: BraneAssignment):
    out = []
    for c in d.crossings:
        if c.id not in b.indices:
            out.append(Issue("missing_index", c.id, "no index recorded"))
    for c in d.curves:
        aid = b.switching_points.get(c.name)
        if aid is None:
            out.append(Issue("missing_switching_point", c.name, "no switching point"))
        elif d.arc(aid).curve != c.name:
            out.append(Issue("switching_point_curve", c.name, "arc %s lies on %s" % (aid, d.arc(aid).curve)))
    return out


def homology_pairing(d: CurveDiagram, x, y) -> int:
    s = 0
    for i in range(d.genus):
        s += x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i]
    return s


# -- generators, indices, pairing ----------------------------------------------


def index_of(d: CurveDiagram, b: BraneAssignment, cid: str, source: str, target: str) -> int:
    """Degree of the crossing as a morphism from ``source`` to ``target``."""
    lo, hi = d.ordered_curves(cid)
    i = b.indices[cid]
    if (source, target) == (lo, hi):
        return i
    if (source, target) == (hi, lo):
        return 1 - i
    raise ValueError("crossing %s does not join %s and %s" % (cid, source, target))


def intersection_generators(d: CurveDiagram, b: BraneAssignment, i: str, j: str):
    if d.curve_index(i) >= d.curve_index(j):
        raise ValueError("generators are defined only for i < j in the distinguished order (%s, %s)" % (i, j))
    return [(cid, b.indices[cid]) for cid in d.crossings_between(i, j)]


def intersection_matrix(d: CurveDiagram) -> IntMatrix:
    n = len(d.curves)
    m = [[0] * n for _ in range(n)]
    for c in d.crossings:
        a, bb = c.curves
        if a == bb:
            continue
        i, j = d.curve_index(a), d.curve_index(bb)
        s = d.crossing_sign(c.id, a)
        m[i][j] += s
        m[j][i] -= s
    return IntMatrix.from_rows(m)


@dataclass
class IndexReport:
    ok: bool
    polygons_checked: int
    walks_checked: int
    violations: list
    parity_mismatches: list = dc_field(default_factory=list)


def check_index_consistency(d: CurveDiagram, b: BraneAssignment, polygons=()) -> IndexReport:
    """Index formula on polygons and declared walks; curve writhes must vanish.

    ``polygons`` is an iterable of objects with ``corners`` (y_0, y_1, ..., y_d)
    and ``curves`` (i_0, ..., i_d) attributes.
    """
    viol = []
    npoly = 0
    for p in polygons:
        npoly += 1
        dd = len(p.corners) - 1
        lhs = index_of(d, b, p.corners[0], p.curves[0], p.curves[-1])
        rhs = sum(index_of(d, b, p.corners[k], p.curves[k - 1], p.curves[k]) for k in range(1, dd + 1)) + 2 - dd
        if lhs != rhs:
            viol.append(("polygon", tuple(p.corners), lhs, rhs))
    nw = 0
    values = {}
    for w in b.declared_writhes:
        values[w.label] = w.value
        if not w.corners:
            continue
        nw += 1
        n = len(w.corners) - 1
        cv = w.curves
        lhs = index_of(d, b, w.corners[0], cv[0], cv[n])
        rhs = sum(index_of(d, b, w.corners[k], cv[k - 1], cv[k]) for k in range(1, n + 1)) + w.value - n
        if lhs != rhs:
            viol.append(("walk", w.label, lhs, rhs))
    for cw in b.curve_writhes:
        missing = [x for x in cw.walks if x not in values]
        if missing:
            viol.append(("curve_writhe", cw.curve, "undeclared walks %s" % missing, None))
            continue
        total = sum(values[x] for x in cw.walks) + cw.correction
        if total != 0:
            viol.append(("curve_writhe", cw.curve, total, 0))
    # a grading orients each curve along its parametrization, so the parity
    # of i(p) is tied to the crossing sign with orientation flags stripped
    parity = []
    for c in d.crossings:
        lo, hi = d.ordered_curves(c.id)
        plain = d.crossing_sign(c.id, lo) * d.curve(lo).orientation * d.curve(hi).orientation
        if c.id in b.indices and plain != -((-1) ** b.indices[c.id]):
            parity.append(c.id)
    return IndexReport(not viol, npoly, nw, viol, parity)


# -- restriction to a subset of curves ------------------------------------------


def sub_diagram(d: CurveDiagram, keep, b: BraneAssignment | None = None):
    """Diagram of a subset of the curves (order preserved), faces merged across removed arcs.

    Crossings with removed curves disappear; arcs of kept curves are joined
    through them.  Merged faces get their genus from the Euler characteristic.
    """
    keep = [c.name for c in d.curves if c.name in set(keep)]
    kset = set(keep)
    kept_x = [c for c in d.crossings if set(c.curves) <= kset]
    kept_ids = {c.id for c in kept_x}
    new_arcs, old_to_new, markers = [], {}, list(m for m in d.markers if m.curve in kset)
    for name in keep:
        seq = d.curve_arcs(name)
        if not seq:
            continue
        cut = [k for k, aid in enumerate(seq) if d.arc(aid).start in kept_ids or d.arc(aid).start in
               {m.id for m in markers}]
        if not cut:
            # the curve now crosses nothing: join everything behind a fresh marker
            mid = "m_" + name
            markers.append(Marker(mid, name))
            aid = seq[0]
            new_arcs.append(Arc(aid, name, mid, mid))
            for old in seq:
                old_to_new[old] = aid
            continue
        for t, k in enumerate(cut):
            nxt = cut[(t + 1) % len(cut)]
            run = [seq[(k + s) % len(seq)] for s in range(((nxt - k - 1) % len(seq)) + 1)]
            first = d.arc(run[0])
            new_arcs.append(Arc(first.id, name, first.start, d.arc(run[-1]).end))
            for old in run:
                old_to_new[old] = first.id
    arc_by_id = {a.id: a for a in new_arcs}
    crossings = []
    for c in kept_x:
        order = []
        for aid, w in c.cyclic_order:
            new = old_to_new[aid]
            order.append((new, w))
        crossings.append(Crossing(c.id, c.curves, tuple(order)))
    tmp = CurveDiagram(d.genus, d.boundary_count, tuple(c for c in d.curves if c.name in kset),
                       tuple(crossings), tuple(new_arcs), (), tuple(markers), d.name)
    # regions: union-find over old faces across removed arcs
    parent = {f.id: f.id for f in d.faces}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    removed_arcs = [a for a in d.arcs if a.curve not in kset]
    for a in removed_arcs:
        x, y = find(d.left_face(a.id)), find(d.right_face(a.id))
        if x != y:
            parent[x] = y
    # interior vertices of regions: vertices touching only removed curves
    region_chi = {}
    for f in d.faces:
        r = find(f.id)
        region_chi[r] = region_chi.get(r, 0) + f.euler_char()
    for a in removed_arcs:
        region_chi[find(d.left_face(a.id))] -= 1
    for v in d.vertices():
        if all(d.arc(e[0]).curve not in kset for e in d.vertex_ends(v)):
            some = d.vertex_ends(v)[0]
            f = d.left_face(some[0])
            region_chi[find(f)] += 1
    walks = tmp.traced_walks()
    region_walks = {}
    for w in walks:
        aid, side = w[0]
        # locate the old face on that side of the first old arc of this new arc
        old_face = d.face_of_side(aid, side)
        region_walks.setdefault(find(old_face), []).append(w)
    faces = []
    for r in sorted(region_walks, key=lambda x: [f.id for f in d.faces].index(x)):
        members = [f for f in d.faces if find(f.id) == r]
        bc = sum(f.boundary_circles for f in members)
        ws = region_walks[r]
        h2 = 2 - region_chi[r] - len(ws) - bc
        if h2 < 0 or h2 % 2:
            raise AssertionError("inconsistent merged region %s" % r)
        fid = "+".join(f.id for f in members)
        faces.append(Face(fid, ws[0], bc > 0, bc, h2 // 2, tuple(ws[1:])))
    sub = CurveDiagram(d.genus, d.boundary_count, tmp.curves, tmp.crossings, tmp.arcs, tuple(faces),
                       tmp.markers, d.name)
    if b is None:
        return sub, None
    sp = {}
    for name in keep:
        if name in b.switching_points:
            sp[name] = old_to_new[b.switching_points[name]]
    sb = BraneAssignment({c: b.indices[c] for c in kept_ids if c in b.indices}, sp)
    return sub, sb
