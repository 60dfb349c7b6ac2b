"""Immersed polygons in a curve diagram, as face-multiplicity domains.

A (d+1)-gon with corners y_0, ..., y_d on curves i_0 < ... < i_d has sides

    side k (0 <= k < d): along L_{i_k} from y_k to y_{k+1}
    side d:              along L_{i_d} from y_d back to y_0

traversed counterclockwise, so the polygon is on the left and the path turns
left (convexly) at every corner.  Candidates are produced by choosing a
direction and a winding number for each side, solving for the face
multiplicities that bound the resulting 1-chain, and then certified by
gluing face copies back into a disc.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .diagram import BraneAssignment, CurveDiagram, index_of
from .exactalg import ExactMatrix, rref

log = logging.getLogger(__name__)

DEFAULT_MAX_MULT = 4
DEVELOPMENT_BUDGET = 20000


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PolygonDomain:
    corners: tuple          # (y_0, y_1, ..., y_d)
    curves: tuple           # (i_0, ..., i_d) curve names
    multiplicities: tuple   # ((face, m), ...) with m > 0, sorted by face order
    sides: tuple            # per side: tuple of (arc, +1|-1) traversals
    directions: tuple       # per side: +1 along the curve's parametrization, -1 against
    sign: int | None = None

    @property
    def d(self) -> int:
        return len(self.corners) - 1

    @property
    def boundary_path(self):
        return tuple(s for side in self.sides for s in side)

    def mult(self, face: str) -> int:
        return dict(self.multiplicities).get(face, 0)

    def key(self):
        return (self.corners, self.curves, self.multiplicities)

    def with_sign(self, s: int) -> "PolygonDomain":
        return PolygonDomain(self.corners, self.curves, self.multiplicities, self.sides, self.directions, s)

    def to_json(self):
        return {"corners": list(self.corners), "curves": list(self.curves),
                "multiplicities": {f: m for f, m in self.multiplicities},
                "boundary_path": [[a, s] for a, s in self.boundary_path], "sign": self.sign}


@dataclass
class Enumeration:
    domains: list
    complete: bool = True
    discarded: list = dc_field(default_factory=list)   # (reason, multiplicities)
    over_cap: list = dc_field(default_factory=list)

    def __iter__(self):
        return iter(self.domains)

    def __len__(self):
        return len(self.domains)


# -- corner bookkeeping --------------------------------------------------------


def corner_curves(d: CurveDiagram, inputs, output=None):
    """Curves i_0 < ... < i_d for inputs (y_d, ..., y_1) and optional output y_0."""
    ys = list(reversed(inputs))   # y_1 .. y_d
    if not ys:
        raise PreconditionError("empty corner sequence")
    for y in ys + ([output] if output else []):
        if not d.is_crossing(y):
            raise PreconditionError("unknown crossing %r" % y)
    if len(ys) == 1:
        curves = list(d.ordered_curves(ys[0]))
    else:
        curves = []
        for k in range(len(ys)):
            here = set(d.crossing(ys[k]).curves)
            if k + 1 < len(ys):
                shared = here & set(d.crossing(ys[k + 1]).curves)
                if len(shared) != 1:
                    raise PreconditionError("corners %s and %s do not share exactly one curve" % (ys[k], ys[k + 1]))
                (s,) = shared
                if k == 0:
                    curves.append((here - shared).pop())
                curves.append(s)
            else:
                curves.append((here - {curves[-1]}).pop())
    pos = [d.curve_index(c) for c in curves]
    if any(a >= b for a, b in zip(pos, pos[1:])):
        raise PreconditionError("curve indices along the corners must increase, got %s" % curves)
    if output is not None and set(d.crossing(output).curves) != {curves[0], curves[-1]}:
        raise PreconditionError("output %s does not join %s and %s" % (output, curves[0], curves[-1]))
    return tuple(curves)


def _side_options(d: CurveDiagram, curve: str, s: str, t: str, wmax: int):
    """(direction, winding, traversals) for paths along ``curve`` from s to t."""
    seq = d.curve_arcs(curve)
    n = len(seq)
    starts = [d.arc(a).start for a in seq]
    j = starts.index(s)
    out = []
    # forwards
    k = 0
    while d.arc(seq[(j + k) % n]).end != t:
        k += 1
        if k > n:
            raise PreconditionError("%s not on %s" % (t, curve))
    base = [(seq[(j + m) % n], 1) for m in range(k + 1)]
    for w in range(wmax + 1):
        out.append((1, w, tuple(base + [(seq[(j + k + 1 + m) % n], 1) for m in range(w * n)])))
    # backwards
    k = 1
    while d.arc(seq[(j - k) % n]).start != t:
        k += 1
        if k > n + 1:
            raise PreconditionError("%s not on %s" % (t, curve))
    base = [(seq[(j - m) % n], -1) for m in range(1, k + 1)]
    for w in range(wmax + 1):
        out.append((-1, w, tuple(base + [(seq[(j - k - 1 - m) % n], -1) for m in range(w * n)])))
    return out


def _first_end(step):
    arc, s = step
    return (arc, 0) if s == 1 else (arc, 1)


def _last_end(step):
    arc, s = step
    return (arc, 1) if s == 1 else (arc, 0)


def _convex(d: CurveDiagram, arriving_step, leaving_step) -> bool:
    return d.ccw_prev(_last_end(arriving_step)) == _first_end(leaving_step)


# -- solving for multiplicities --------------------------------------------------


def _face_graph(d: CurveDiagram):
    adj = {f.id: [] for f in d.faces}
    for a in d.arcs:
        L, R = d.left_face(a.id), d.right_face(a.id)
        adj[L].append((a.id, R, 1))
        adj[R].append((a.id, L, -1))
    return adj


def _solve_affine(d: CurveDiagram, chain0, per_side, nsides):
    """Face values as affine functions of the winding vector, plus consistency equations.

    ``chain0`` maps arc -> coefficient at zero winding; ``per_side[k]`` maps
    arc -> coefficient per unit of winding of side k.  Returns (values,
    equations) with vectors [const, w_0, ..., w_{n-1}].
    """
    width = nsides + 1

    def cvec(a):
        v = [0] * width
        v[0] = chain0.get(a, 0)
        for k in range(nsides):
            v[k + 1] = per_side[k].get(a, 0)
        return v

    adj = _face_graph(d)
    pinned = [f.id for f in d.faces if not f.is_disc]
    vals, eqs = {}, []
    roots = [f.id for f in d.faces if f.touches_boundary] or pinned
    if not roots:
        raise PreconditionError("diagram has no face meeting the boundary")
    for r in roots:
        if r in vals:
            eqs.append(vals[r])
            continue
        vals[r] = [0] * width
        queue = [r]
        while queue:
            f = queue.pop()
            for a, g, s in adj[f]:
                # s = +1: f is left of a, g right: m(g) = m(f) - c(a); s = -1: m(g) = m(f) + c(a)
                c = cvec(a)
                want = [x - s * y for x, y in zip(vals[f], c)]
                if g in vals:
                    diff = [x - y for x, y in zip(vals[g], want)]
                    if any(diff):
                        eqs.append(diff)
                else:
                    vals[g] = want
                    queue.append(g)
    for f in d.faces:
        if f.id not in vals:
            raise PreconditionError("face %s is not connected to the boundary" % f.id)
    for f in pinned:
        if any(vals[f]):
            eqs.append(vals[f])
    return vals, eqs


def _winding_solutions(eqs, nsides, wmax):
    """Winding vectors satisfying the equations: exact when unique, else a box search."""
    if not eqs:
        free = list(range(nsides))
        particular = None
    else:
        m = ExactMatrix.from_dense([[Fraction(x) for x in e[1:]] + [Fraction(-e[0])] for e in eqs])
        rows, pivots = rref(m)
        if nsides in pivots:
            return [], False
        free = [k for k in range(nsides) if k not in pivots]
        particular = None
        if not free:
            sol = [Fraction(0)] * nsides
            for row, p in zip(rows, pivots):
                sol[p] = row.get(nsides, Fraction(0))
            if any(x.denominator != 1 or x < 0 for x in sol):
                return [], False
            return [tuple(int(x) for x in sol)], False
    out = []
    for w in itertools.product(range(wmax + 1), repeat=nsides):
        if all(e[0] + sum(c * x for c, x in zip(e[1:], w)) == 0 for e in eqs):
            out.append(w)
    return out, bool(free)


# -- development ----------------------------------------------------------------


def develop(d: CurveDiagram, mult: dict, path, corner_positions, budget: int = DEVELOPMENT_BUDGET):
    """Glue ``mult[f]`` copies of each face into a disc whose boundary reads ``path``.

    ``corner_positions`` is the set of indices t such that the path turns
    (convexly) at the end of traversal t.  Returns (ok, reason).
    """
    walks = {f: d.face(f).walk for f in mult}
    left, right = {}, {}
    for f, m in mult.items():
        for r in range(m):
            for j, (a, s) in enumerate(walks[f]):
                (left if s == 1 else right).setdefault(a, []).append((f, r, j))
    net = {}
    for a, s in path:
        net[a] = net.get(a, 0) + s
    arcs = sorted(set(left) | set(right))
    for a in arcs:
        if len(left.get(a, [])) - len(right.get(a, [])) != net.get(a, 0):
            return False, "multiplicities do not bound the path at arc %s" % a
    choices = []
    for a in arcs:
        L, R = left.get(a, []), right.get(a, [])
        small, big = (R, L) if len(R) <= len(L) else (L, R)
        choices.append((small, big))
    tried = 0

    def assignments(i, glue):
        nonlocal tried
        if i == len(choices):
            tried += 1
            yield glue
            return
        small, big = choices[i]
        for perm in itertools.permutations(big, len(small)):
            if tried >= budget:
                return
            g = dict(glue)
            for x, y in zip(small, perm):
                g[x], g[y] = y, x
            yield from assignments(i + 1, g)

    target = list(path)
    last = "no gluing tried"
    for glue in assignments(0, {}):
        ok, why = _check_development(d, mult, walks, glue, target, corner_positions)
        if ok:
            return True, "ok"
        last = why
        if tried >= budget:
            return None, "development budget exhausted"
    if tried >= budget:
        return None, "development budget exhausted"
    return False, last


def _check_development(d, mult, walks, glue, target, corner_positions):
    slots = [(f, r, j) for f, m in mult.items() for r in range(m) for j in range(len(walks[f]))]
    L = {f: len(walks[f]) for f in walks}
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x != y:
            parent[x] = y

    copies = {}

    def cfind(x):
        copies.setdefault(x, x)
        while copies[x] != x:
            x = copies[x]
        return x

    for f, m in mult.items():
        for r in range(m):
            cfind((f, r))
            for j in range(L[f]):
                find((f, r, j))
    for s1, s2 in glue.items():
        f, r, j = s1
        g, q, k = s2
        union((f, r, j), (g, q, (k + 1) % L[g]))
        union((f, r, (j + 1) % L[f]), (g, q, k))
        a, b = cfind((f, r)), cfind((g, q))
        if a != b:
            copies[a] = b
    if len({cfind(c) for c in copies}) != 1:
        return False, "disconnected"
    npairs = len(glue) // 2
    free = [s for s in slots if s not in glue]
    V = len({find(s) for s in slots})
    chi = V - (npairs + len(free)) + sum(mult.values())
    if chi != 1:
        return False, "euler characteristic %d" % chi

    def succ(sector):
        f, r, j = sector
        out_side = (f, r, j)
        if out_side not in glue:
            return None
        g, q, k = glue[out_side]
        return (g, q, (k + 1) % L[g])

    def vertex_of(sector):
        f, r, j = sector
        a, s = walks[f][j]
        arc = d.arc(a)
        return arc.start if s == 1 else arc.end

    classes = {}
    for s in slots:
        classes.setdefault(find(s), []).append(s)
    for members in classes.values():
        v = vertex_of(members[0])
        valence = len(d.vertex_ends(v))
        incoming_free = [s for s in members if (s[0], s[1], (s[2] - 1) % L[s[0]]) not in glue]
        if not incoming_free:
            seen, cur = [], members[0]
            while cur not in seen:
                seen.append(cur)
                cur = succ(cur)
                if cur is None:
                    return False, "broken link"
            if len(seen) != len(members) or len(seen) != valence:
                return False, "interior vertex at %s covered %d times" % (v, len(members))
        else:
            if len(incoming_free) != 1:
                return False, "boundary touches itself at %s" % v
            n, cur = 0, incoming_free[0]
            while cur is not None:
                n += 1
                cur = succ(cur)
                if n > len(members):
                    return False, "broken link"
            if n != len(members):
                return False, "vertex %s is not a manifold point" % v
    # boundary cycle
    if not free:
        return False, "no boundary"
    order, turns = [], []
    cur = free[0]
    while True:
        f, r, j = cur
        order.append(walks[f][j])
        sector, n = (f, r, (j + 1) % L[f]), 1
        while True:
            nxt = succ(sector)
            if nxt is None:
                break
            sector, n = nxt, n + 1
        turns.append(n)
        cur = sector
        if cur == free[0]:
            break
        if len(order) > len(free):
            return False, "boundary does not close"
    if len(order) != len(free):
        return False, "more than one boundary component"
    n = len(target)
    if len(order) != n:
        return False, "boundary length differs"
    for shift in range(n):
        if all(order[(shift + t) % n] == target[t] for t in range(n)):
            break
    else:
        return False, "boundary reads differently from the requested path"
    for t in range(n):
        got = turns[(shift + t) % n]
        a = target[t][0]
        v = d.arc(a).end if target[t][1] == 1 else d.arc(a).start
        want = 1 if t in corner_positions else (2 if d.is_crossing(v) else 1)
        if got != want:
            return False, "wrong turn at %s" % v
    return True, "ok"


# -- enumeration ----------------------------------------------------------------


def _euler_measure(d: CurveDiagram, mult: dict):
    return sum(m * d.euler_measure(f) for f, m in mult.items())


def enumerate_polygons(d: CurveDiagram, inputs, output=None, max_mult: int = DEFAULT_MAX_MULT,
                       budget: int = DEVELOPMENT_BUDGET) -> Enumeration:
    """All certified polygons with inputs (y_d, ..., y_1) and output y_0.

    Every domain with all face multiplicities <= ``max_mult`` is found.  When a
    valid candidate above the cap shows up, ``complete`` is False.
    """
    curves = corner_curves(d, inputs, output)
    ys = list(reversed(inputs))
    outs = [output] if output is not None else d.crossings_between(curves[0], curves[-1])
    res = Enumeration([])
    for y0 in outs:
        corners = (y0,) + tuple(ys)
        if len(corners) == 2 and corners[0] == corners[1]:
            continue
        _enumerate_one(d, corners, curves, max_mult, budget, res)
    res.domains.sort(key=lambda p: (p.corners, p.multiplicities, p.directions))
    return res


def _enumerate_one(d, corners, curves, cap, budget, res):
    n = len(corners)
    wmax = cap + 1
    opts = [_side_options(d, curves[k], corners[k], corners[(k + 1) % n], 0) for k in range(n)]
    face_order = [f.id for f in d.faces]
    seen = set()
    for dirs in itertools.product((1, -1), repeat=n):
        base = [next(o for o in opts[k] if o[0] == dirs[k])[2] for k in range(n)]
        if not all(_convex(d, base[k - 1][-1], base[k][0]) for k in range(n)):
            continue
        chain0 = {}
        per_side = []
        for k in range(n):
            for a, s in base[k]:
                chain0[a] = chain0.get(a, 0) + s
            per_side.append({a: dirs[k] for a in d.curve_arcs(curves[k])})
        vals, eqs = _solve_affine(d, chain0, per_side, n)
        winds, family = _winding_solutions(eqs, n, wmax)
        for w in winds:
            mult = {}
            for f, v in vals.items():
                x = v[0] + sum(c * y for c, y in zip(v[1:], w))
                if x:
                    mult[f] = x
            if not mult or min(mult.values()) < 0:
                continue
            if any(not d.face(f).is_disc for f in mult):
                res.discarded.append(("non-disc face covered", mult))
                continue
            key = tuple(sorted(mult.items(), key=lambda kv: face_order.index(kv[0])))
            if _euler_measure(d, mult) != 1 - Fraction(n, 4):
                res.discarded.append(("euler measure", dict(key)))
                continue
            if max(mult.values()) > cap:
                res.over_cap.append((corners, dict(key)))
                res.complete = False
                log.warning("polygon at %s needs multiplicity %d > cap %d", corners, max(mult.values()), cap)
                continue
            if key in seen:
                continue
            sides = [next(o for o in _side_options(d, curves[k], corners[k], corners[(k + 1) % n], w[k])
                          if o[0] == dirs[k] and o[1] == w[k])[2] for k in range(n)]
            path = [s for side in sides for s in side]
            cpos, t = set(), -1
            for side in sides:
                t += len(side)
                cpos.add(t)
            ok, why = develop(d, mult, path, cpos, budget)
            if ok is None:
                res.complete = False
                res.discarded.append((why, dict(key)))
                continue
            if not ok:
                log.info("discarded candidate at %s: %s", corners, why)
                res.discarded.append((why, dict(key)))
                continue
            seen.add(key)
            res.domains.append(PolygonDomain(corners, curves, key, tuple(tuple(s) for s in sides), dirs))
        if family:
            log.info("winding family at %s searched up to %d", corners, wmax)


def enumerate_bigons(d: CurveDiagram, p: str, q: str, max_mult: int = DEFAULT_MAX_MULT) -> Enumeration:
    """Bigons from input p to output q (both on the same two curves)."""
    if set(d.crossing(p).curves) != set(d.crossing(q).curves):
        raise PreconditionError("%s and %s do not lie on the same pair of curves" % (p, q))
    if p == q:
        return Enumeration([])
    return enumerate_polygons(d, (p,), q, max_mult)


# -- post-hoc checks ------------------------------------------------------------


def check_domain(d: CurveDiagram, dom: PolygonDomain) -> list:
    """The four domain invariants, re-derived from the domain data alone."""
    errs = []
    mult = dict(dom.multiplicities)
    for f, m in mult.items():
        face = d.face(f)
        if m < 0:
            errs.append("negative multiplicity on %s" % f)
        if face.touches_boundary and m:
            errs.append("boundary face %s covered" % f)
    net = {}
    for a, s in dom.boundary_path:
        net[a] = net.get(a, 0) + s
    for a in d.arcs:
        if mult.get(d.left_face(a.id), 0) - mult.get(d.right_face(a.id), 0) != net.get(a.id, 0):
            errs.append("arc %s: side difference does not match the path" % a.id)
    n = len(dom.corners)
    for k in range(n):
        side = dom.sides[k]
        if not side:
            errs.append("empty side %d" % k)
            continue
        if any(d.arc(a).curve != dom.curves[k] for a, _ in side):
            errs.append("side %d leaves curve %s" % (k, dom.curves[k]))
        start = d.end_vertex(_first_end(side[0]))
        if start != dom.corners[k]:
            errs.append("side %d starts at %s, not %s" % (k, start, dom.corners[k]))
        prev = dom.sides[k - 1][-1]
        if not _convex(d, prev, side[0]):
            errs.append("corner %s is not convex" % dom.corners[k])
    if _euler_measure(d, mult) != 1 - Fraction(n, 4):
        errs.append("euler measure %s" % _euler_measure(d, mult))
    return errs


def degree_identity(d: CurveDiagram, b: BraneAssignment, dom: PolygonDomain) -> bool:
    c = dom.curves
    lhs = index_of(d, b, dom.corners[0], c[0], c[-1])
    rhs = sum(index_of(d, b, dom.corners[k], c[k - 1], c[k]) for k in range(1, dom.d + 1)) + 2 - dom.d
    return lhs == rhs


# -- signs ------------------------------------------------------------------------


def _switch_count(b: BraneAssignment, curve: str, side) -> int:
    sp = b.switching_points.get(curve)
    return sum(1 for a, _ in side if a == sp)


def vertex_signs(d: CurveDiagram, b: BraneAssignment, dom: PolygonDomain) -> list:
    """+-1 per corner y_0, ..., y_d."""
    c = dom.curves
    out = []
    for k in range(dom.d + 1):
        side = dom.d if k == 0 else k   # y_0 and y_k (k >= 1) look at L_{i_d} and L_{i_k}
        curve = c[side]
        disagree = dom.directions[side] != d.curve(curve).orientation
        i = index_of(d, b, dom.corners[0], c[0], c[-1]) if k == 0 else \
            index_of(d, b, dom.corners[k], c[k - 1], c[k])
        out.append(-1 if disagree and i % 2 else 1)
    return out


def edge_signs(d: CurveDiagram, b: BraneAssignment, dom: PolygonDomain) -> list:
    return [(-1) ** _switch_count(b, dom.curves[k], dom.sides[k]) for k in range(dom.d + 1)]


def polygon_sign(d: CurveDiagram, b: BraneAssignment, dom: PolygonDomain) -> int:
    s = 1
    for x in vertex_signs(d, b, dom) + edge_signs(d, b, dom):
        s *= x
    return s


def bigon_sign(d: CurveDiagram, b: BraneAssignment, dom: PolygonDomain) -> int:
    """The separate rule for bigons u in M^2(p; q), p = y_1 input, q = y_0 output."""
    if dom.d != 1:
        raise ValueError("not a bigon")
    li, lj = dom.curves
    q, p = dom.corners
    s = 1
    if dom.directions[1] != d.curve(lj).orientation:
        s *= (-1) ** index_of(d, b, p, li, lj) * (-1) ** index_of(d, b, q, li, lj)
    marks = {b.switching_points.get(li), b.switching_points.get(lj)}
    for side in dom.sides:
        if marks & {a for a, _ in side}:
            s = -s
    return s


# -- brute-force oracle -----------------------------------------------------------


ORACLE_FACE_CAP = 12


def oracle_embedded_polygons(d: CurveDiagram, inputs, output=None, max_faces: int = ORACLE_FACE_CAP):
    """Exhaustive search over 0/1 face multiplicities.

    Works from the region side: reads the boundary of each union of faces off
    the sectors at each vertex, with no winding or development machinery.
    """
    if not inputs:
        raise PreconditionError("empty corner sequence")
    if len(d.faces) > max_faces:
        raise PreconditionError("oracle refuses diagrams with more than %d faces" % max_faces)
    curves = corner_curves(d, inputs, output)
    ys = list(reversed(inputs))
    outs = [output] if output is not None else d.crossings_between(curves[0], curves[-1])
    want = {(y0,) + tuple(ys) for y0 in outs if not (len(ys) == 1 and y0 == ys[0])}
    cand = [f.id for f in d.faces if f.is_disc]
    # sector of a face at a vertex is named by the end its walk leaves through
    sector_face = {}
    for f in d.faces:
        for walk in f.walks:
            for a, s in walk:
                sector_face[_first_end((a, s))] = f.id
    found = []
    for bits in itertools.product((0, 1), repeat=len(cand)):
        S = {f for f, x in zip(cand, bits) if x}
        if not S:
            continue
        r = _read_region(d, S, sector_face)
        if r is None:
            continue
        path, turns = r
        for dom in _match_corners(d, path, turns, curves, want, S):
            found.append(dom)
    found.sort(key=lambda p: (p.corners, p.multiplicities, p.directions))
    return found


def _read_region(d, S, sector_face):
    """Boundary traversal of a union of faces, or None if it is not a disc."""
    bsteps = []
    for a in d.arcs:
        inL, inR = d.left_face(a.id) in S, d.right_face(a.id) in S
        if inL and not inR:
            bsteps.append((a.id, 1))
        elif inR and not inL:
            bsteps.append((a.id, -1))
    if not bsteps:
        return None
    nxt, turns = {}, {}
    for st in bsteps:
        h = _last_end(st)
        n = 1
        e = d.ccw_prev(h)
        # sweep clockwise through sectors inside S until the next boundary edge
        while True:
            leave = (e[0], 1 if e[1] == 0 else -1)
            if leave in bsteps:
                break
            # e is an interior edge of S; step to the next sector
            e = d.ccw_prev(e)
            n += 1
            if n > 4:
                return None
        nxt[st], turns[st] = leave, n
    start = bsteps[0]
    cyc, cur = [], start
    while True:
        cyc.append(cur)
        cur = nxt[cur]
        if cur == start or len(cyc) > len(bsteps):
            break
    if len(cyc) != len(bsteps) or cur != start:
        return None
    # Euler characteristic with vertices counted per sector run
    edges = {a.id for a in d.arcs if d.left_face(a.id) in S or d.right_face(a.id) in S}
    V = 0
    for v in d.vertices():
        ends = d.vertex_ends(v)
        inside = [sector_face.get(e) in S for e in ends]
        if not any(inside):
            continue
        if all(inside):
            V += 1
        else:
            V += sum(1 for k in range(len(ends)) if inside[k] and not inside[k - 1])
    if V - len(edges) + len(S) != 1:
        return None
    return cyc, [turns[s] for s in cyc]


def _match_corners(d, path, turns, curves, want, S):
    n = len(path)
    corner_at = [k for k in range(n) if d.arc(path[k][0]).curve != d.arc(path[(k + 1) % n][0]).curve]
    for k in range(n):
        v = d.end_vertex(_last_end(path[k]))
        if k in corner_at:
            if turns[k] != 1:
                return
        elif turns[k] != (2 if d.is_crossing(v) else 1):
            return
    if len(corner_at) != len(curves):
        return
    # rotate so the path starts leaving y_0 along L_{i_0}
    for start_idx in corner_at:
        first = (start_idx + 1) % n
        rot = path[first:] + path[:first]
        sides, cur = [], []
        for k, st in enumerate(rot):
            cur.append(st)
            if (first + k) % n in corner_at:
                sides.append(tuple(cur))
                cur = []
        side_curves = tuple(d.arc(s[0][0]).curve for s in sides)
        if side_curves != curves:
            continue
        corners = tuple(d.end_vertex(_first_end(s[0])) for s in sides)
        if corners not in want:
            continue
        dirs = tuple(s[0][1] * 1 for s in sides)
        faces = [f.id for f in d.faces]
        mult = tuple((f, 1) for f in faces if f in S)
        yield PolygonDomain(corners, curves, mult, tuple(sides), dirs)
