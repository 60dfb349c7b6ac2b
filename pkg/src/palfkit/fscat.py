"""Directed A-infinity category of a curve diagram with brane data."""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .ainfcat import AInfCategory, Generator, check_ainf_relation
from .diagram import BraneAssignment, CurveDiagram, intersection_generators
from .exactalg import QQ, ExactMatrix, Field
from .moduli import DEFAULT_MAX_MULT, bigon_sign, degree_identity, enumerate_polygons, polygon_sign

log = logging.getLogger(__name__)


class FSBuildError(RuntimeError):
    """The data produce something that is not an A-infinity category."""


@dataclass
class FSBuildResult:
    category: AInfCategory
    polygon_log: dict                  # (inputs, output) -> [(PolygonDomain, sign)]
    complete: bool = True
    sign_rule_disagreements: list = dc_field(default_factory=list)
    relation_checked: bool = False

    def mu_entries(self):
        return self.category.mu


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PALFKIT_THREADS", "1")))
    except ValueError:
        return 1


def corner_sequences(d: CurveDiagram):
    """All (inputs, curves) with strictly increasing curves, inputs as (y_d, ..., y_1)."""
    names = [c.name for c in d.curves]
    for size in range(2, len(names) + 1):
        for curves in itertools.combinations(names, size):
            per_step = [d.crossings_between(curves[k], curves[k + 1]) for k in range(size - 1)]
            if not all(per_step) or not d.crossings_between(curves[0], curves[-1]):
                continue
            for ys in itertools.product(*per_step):
                yield tuple(reversed(ys)), curves


def build_fs_category(d: CurveDiagram, b: BraneAssignment, max_mult: int = DEFAULT_MAX_MULT,
                      field: Field = QQ, check_relation: bool = True) -> FSBuildResult:
    objects = tuple(c.name for c in d.curves)
    gens = []
    for i, j in itertools.combinations(objects, 2):
        for cid, deg in intersection_generators(d, b, i, j):
            gens.append(Generator(cid, i, j, deg))
    units = {o: "e" + o for o in objects}
    seqs = list(corner_sequences(d))

    def run(item):
        inputs, _ = item
        return enumerate_polygons(d, inputs, None, max_mult)

    workers = _threads()
    if workers > 1 and len(seqs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, seqs))
    else:
        results = [run(s) for s in seqs]

    mu, plog, complete, flags = {}, {}, True, []
    bad_degree = []
    for (inputs, curves), res in zip(seqs, results):
        complete = complete and res.complete
        for dom in res:
            if not degree_identity(d, b, dom):
                bad_degree.append((inputs, dom.corners[0]))
                continue
            s = polygon_sign(d, b, dom)
            if dom.d == 1:
                s2 = bigon_sign(d, b, dom)
                if s2 != s:
                    flags.append((inputs, dom.corners[0], dom.multiplicities, s, s2))
            plog.setdefault((inputs, dom.corners[0]), []).append((dom, s))
            out = mu.setdefault(inputs, {})
            out[dom.corners[0]] = out.get(dom.corners[0], 0) + s
    if bad_degree:
        raise FSBuildError("index formula fails on polygons %s" % bad_degree[:5])
    for inputs in list(mu):
        mu[inputs] = {k: v for k, v in mu[inputs].items() if v}
        if not mu[inputs]:
            del mu[inputs]
    if flags:
        log.warning("bigon sign rules disagree on %d bigons", len(flags))
    cat = AInfCategory(objects, tuple(gens), mu, field, units)
    res = FSBuildResult(cat, plog, complete, flags)
    if not complete:
        log.warning("polygon enumeration hit the multiplicity cap; A-infinity check skipped")
    elif check_relation:
        rep = check_ainf_relation(cat)
        if not rep.ok:
            raise FSBuildError("A-infinity relation fails at %s (residual %s)" % (rep.failing_chain, rep.residual))
        res.relation_checked = True
    return res


@dataclass
class SquareReport:
    ok: bool
    per_pair: dict          # (source, target) -> bool
    nonzero_mu1: bool


def mu1_matrix(cat: AInfCategory, x: str, y: str) -> tuple[list, ExactMatrix]:
    basis = cat.hom(x, y)
    idx = {g: k for k, g in enumerate(basis)}
    ent = {}
    for j, g in enumerate(basis):
        for out, c in cat.mu_eval((g,)).items():
            ent[idx[out], j] = c
    return basis, ExactMatrix(len(basis), len(basis), ent, cat.field)


def floer_differential_squared_check(result: FSBuildResult) -> SquareReport:
    if not result.complete:
        raise ValueError("enumeration incomplete; the check needs every bigon")
    cat = result.category
    per, nonzero = {}, False
    for i, x in enumerate(cat.objects):
        for y in cat.objects[i + 1:]:
            _, m = mu1_matrix(cat, x, y)
            nonzero = nonzero or not m.is_zero()
            per[(x, y)] = (m @ m).is_zero()
    return SquareReport(all(per.values()), per, nonzero)


def match_reference(built: AInfCategory, ref: AInfCategory) -> dict:
    """Match objects by position and generators by (hom space, degree).

    Only for hom spaces of dimension at most one.  Returns a report with the
    generator map and whether the mu tables agree exactly under it.
    """
    rep = {"objects": dict(zip(built.objects, ref.objects)), "generators": {}, "ok": True, "problems": []}
    if len(built.objects) != len(ref.objects):
        return {**rep, "ok": False, "problems": ["object counts differ"]}
    omap = rep["objects"]
    gmap = {built.units[o]: ref.units[omap[o]] for o in built.objects}
    for x in built.objects:
        for y in built.objects:
            a, b2 = built.hom(x, y), ref.hom(omap[x], omap[y])
            if len(a) > 1 or len(b2) > 1:
                rep["problems"].append("hom(%s,%s) has dimension > 1" % (x, y))
                rep["ok"] = False
                continue
            if len(a) != len(b2):
                rep["problems"].append("hom(%s,%s): %d vs %d generators" % (x, y, len(a), len(b2)))
                rep["ok"] = False
                continue
            if a and built.degree(a[0]) != ref.degree(b2[0]):
                rep["problems"].append("hom(%s,%s): degree %d vs %d" % (x, y, built.degree(a[0]), ref.degree(b2[0])))
                rep["ok"] = False
            if a:
                gmap[a[0]] = b2[0]
    rep["generators"] = {k: v for k, v in gmap.items() if k not in built.units.values()}
    if not rep["ok"]:
        return rep
    mapped = {}
    for args, combo in built.mu.items():
        mapped[tuple(gmap[a] for a in args)] = {gmap[k]: v for k, v in combo.items()}
    ref_mu = {args: {k: v for k, v in combo.items() if v} for args, combo in ref.mu.items()}
    if mapped != ref_mu:
        rep["ok"] = False
        rep["problems"].append("mu tables differ: %s vs %s" % (mapped, ref_mu))
    return rep
