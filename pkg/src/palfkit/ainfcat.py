"""Finite directed A-infinity categories on explicit bases.

Morphism sequences are always written in composition order
``(a_d, ..., a_1)``: ``a_1`` is applied first, so its source is the source of
the whole chain and ``a_d`` ends at the target.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exactalg import QQ, ExactMatrix, Field, kernel_basis, solve_in_span


class CategoryError(ValueError):
    """Structurally invalid category data."""


@dataclass(frozen=True)
class Generator:
    label: str
    source: str
    target: str
    degree: int


def _combo_add(acc: dict, other: dict, scale, fld: Field):
    for k, v in other.items():
        nv = acc.get(k, fld.zero) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


@dataclass(frozen=True)
class AInfCategory:
    """Directed A-infinity category with strict units.

    ``mu`` maps argument tuples of non-unit generator labels to linear
    combinations ``{label: coefficient}``.  Entries with a unit among their
    arguments are never stored; ``mu_eval`` supplies them from the unit rules.
    """

    objects: tuple
    generators: tuple
    mu: dict = dc_field(default_factory=dict)
    field: Field = QQ
    units: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        objs = tuple(str(o) for o in self.objects)
        if len(set(objs)) != len(objs):
            raise CategoryError("duplicate objects")
        object.__setattr__(self, "objects", objs)
        gens = {}
        for g in self.generators:
            if g.label in gens:
                raise CategoryError("duplicate generator %r" % g.label)
            gens[g.label] = g
        pos = {o: i for i, o in enumerate(objs)}
        units = dict(self.units)
        for o in objs:
            units.setdefault(o, "e%s" % o)
        for o, u in units.items():
            if u in gens:
                g = gens[u]
                if (g.source, g.target, g.degree) != (o, o, 0):
                    raise CategoryError("unit %r must be a degree 0 endomorphism of %r" % (u, o))
            else:
                gens[u] = Generator(u, o, o, 0)
        unit_labels = set(units.values())
        for g in gens.values():
            if g.source not in pos or g.target not in pos:
                raise CategoryError("generator %r has unknown endpoint" % g.label)
            if pos[g.source] > pos[g.target]:
                raise CategoryError("generator %r goes downward (%s > %s)" % (g.label, g.source, g.target))
            if g.source == g.target and g.label not in unit_labels:
                raise CategoryError("hom(%s, %s) must be spanned by the unit alone; found %r"
                                    % (g.source, g.target, g.label))
        order = sorted(gens.values(), key=lambda g: (pos[g.source], pos[g.target], g.degree, g.label))
        object.__setattr__(self, "generators", tuple(order))
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "_gen", {g.label: g for g in order})
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_unit_labels", frozenset(unit_labels))

        clean = {}
        for args, out in self.mu.items():
            args = tuple(args)
            if not args:
                raise CategoryError("mu^0 entries are not allowed")
            for a in args:
                if a not in gens:
                    raise CategoryError("mu entry uses unknown generator %r" % a)
                if a in unit_labels:
                    raise CategoryError("mu entry %r has a unit argument; units follow fixed rules" % (args,))
            if not self.composable(args):
                raise CategoryError("mu entry %r is not composable" % (args,))
            src, tgt = gens[args[-1]].source, gens[args[0]].target
            deg_in = sum(gens[a].degree for a in args)
            combo = {}
            for lab, c in out.items():
                if lab not in gens:
                    raise CategoryError("mu output uses unknown generator %r" % lab)
                g = gens[lab]
                if (g.source, g.target) != (src, tgt):
                    raise CategoryError("mu%r outputs %r outside hom(%s, %s)" % (args, lab, src, tgt))
                if g.degree != deg_in + 2 - len(args):
                    raise CategoryError("mu^%d%r -> %r has degree %d, expected %d"
                                        % (len(args), args, lab, g.degree, deg_in + 2 - len(args)))
                c = self.field(c)
                if c:
                    combo[lab] = c
            if combo:
                clean[args] = dict(sorted(combo.items()))
        object.__setattr__(self, "mu", dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    # -- basic queries ---------------------------------------------------

    def gen(self, label) -> Generator:
        return self._gen[label]

    def degree(self, label) -> int:
        return self._gen[label].degree

    def is_unit(self, label) -> bool:
        return label in self._unit_labels

    def position(self, obj) -> int:
        return self._pos[obj]

    def hom(self, x, y) -> list:
        """Basis labels of hom(x, y) in canonical order."""
        return [g.label for g in self.generators if g.source == x and g.target == y]

    def composable(self, args) -> bool:
        g = self._gen
        return all(g[args[k]].source == g[args[k + 1]].target for k in range(len(args) - 1))

    def max_mu_arity(self) -> int:
        return max((len(a) for a in self.mu), default=0)

    # -- evaluation ------------------------------------------------------

    def mu_eval(self, args) -> dict:
        """mu^d on basis generators, including the strict unit rules."""
        args = tuple(args)
        if not self.composable(args):
            return {}
        d = len(args)
        units = [a for a in args if a in self._unit_labels]
        if units:
            if d == 2:
                a2, a1 = args
                if a1 in self._unit_labels:
                    return {a2: self.field.one}
                sign = -1 if self.degree(a1) % 2 else 1
                return {a1: self.field(sign)}
            return {}
        return dict(self.mu.get(args, {}))

    def mu_multi(self, slots) -> dict:
        """mu applied to a list of linear combinations (multilinear expansion)."""
        acc = {}
        for choice in itertools.product(*[list(s.items()) for s in slots]):
            coeff = self.field.one
            labels = []
            for lab, c in choice:
                coeff = coeff * c
                labels.append(lab)
            if coeff:
                _combo_add(acc, self.mu_eval(labels), coeff, self.field)
        return acc

    def chains(self, length):
        """All composable chains of basis generators of a given length."""
        by_source = {}
        for g in self.generators:
            by_source.setdefault(g.source, []).append(g.label)

        def grow(chain):  # chain stored a_1 first
            if len(chain) == length:
                yield tuple(reversed(chain))
                return
            for nxt in by_source.get(self._gen[chain[-1]].target, ()):
                yield from grow(chain + [nxt])

        if length == 0:
            return
        for g in self.generators:
            yield from grow([g.label])

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        fmt = self.field.to_text
        return {
            "format": "palfkit-category",
            "version": 1,
            "field": self.field.name,
            "objects": list(self.objects),
            "units": {o: self.units[o] for o in self.objects},
            "generators": [
                {"label": g.label, "source": g.source, "target": g.target, "degree": g.degree}
                for g in self.generators if not self.is_unit(g.label)
            ],
            "mu": [
                {"arity": len(args), "args": list(args), "out": {k: fmt(v) for k, v in out.items()}}
                for args, out in self.mu.items()
            ],
        }

    @classmethod
    def from_json(cls, doc: dict, fld: Field | None = None) -> "AInfCategory":
        if doc.get("format", "palfkit-category") != "palfkit-category":
            raise CategoryError("not a category document")
        fld = fld or Field.parse(doc.get("field", "q"))
        gens = [Generator(str(g["label"]), str(g["source"]), str(g["target"]), int(g["degree"]))
                for g in doc.get("generators", [])]
        mu = {}
        for entry in doc.get("mu", []):
            args = tuple(entry["args"])
            if "arity" in entry and entry["arity"] != len(args):
                raise CategoryError("mu entry arity %s does not match %r" % (entry["arity"], args))
            mu[args] = {k: fld(Fraction(str(v))) for k, v in entry["out"].items()}
        return cls(tuple(doc["objects"]), tuple(gens), mu, fld, dict(doc.get("units", {})))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False, ensure_ascii=False) + "\n"

    def canonical(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def over(self, fld: Field) -> "AInfCategory":
        """Same structure constants read in another field."""
        doc = self.to_json()
        doc["field"] = fld.name
        return AInfCategory.from_json(doc, fld)


# -- A-infinity relation ------------------------------------------------------


@dataclass
class RelationReport:
    ok: bool
    chains_checked: int
    failing_chain: tuple | None = None
    terms: list = dc_field(default_factory=list)
    residual: dict = dc_field(default_factory=dict)

    def __str__(self):
        if self.ok:
            return "A-infinity relations hold on %d chains" % self.chains_checked
        return "A-infinity relation fails at %r: residual %r" % (self.failing_chain, self.residual)


def relation_terms(cat: AInfCategory, chain) -> list:
    """Signed terms of the A-infinity relation on one chain.

    Each term is ``(inner_start, inner_length, sign, value)`` where the inner
    operation eats ``a_{i+1}..a_{i+j}``.
    """
    d = len(chain)
    a = {l: chain[d - l] for l in range(1, d + 1)}  # a[l] = a_l
    terms = []
    for j in range(1, d + 1):
        for i in range(0, d - j + 1):
            star = sum(cat.degree(a[l]) - 1 for l in range(1, i + 1))
            sign = -1 if star % 2 else 1
            inner = cat.mu_eval(tuple(a[l] for l in range(i + j, i, -1)))
            if not inner:
                continue
            left = [{a[l]: cat.field.one} for l in range(d, i + j, -1)]
            right = [{a[l]: cat.field.one} for l in range(i, 0, -1)]
            val = cat.mu_multi(left + [inner] + right)
            if val:
                terms.append((i, j, sign, val))
    return terms


def check_ainf_relation(cat: AInfCategory, max_chain_length: int | None = None) -> RelationReport:
    """Verify the A-infinity associativity relation on all composable basis chains."""
    if max_chain_length is None:
        max_chain_length = len(cat.objects) + 2
    checked = 0
    for d in range(1, max_chain_length + 1):
        for chain in cat.chains(d):
            checked += 1
            terms = relation_terms(cat, chain)
            total = {}
            for _, _, sign, val in terms:
                _combo_add(total, val, cat.field(sign), cat.field)
            if total:
                return RelationReport(False, checked, chain, terms, total)
    return RelationReport(True, checked)


# -- cohomology category ------------------------------------------------------


@dataclass
class CohomologyCategory:
    """Graded linear category H(A): hom dims, representatives, composition."""

    objects: tuple
    field: Field
    classes: dict          # (x, y) -> list of (name, degree, representative combo)
    composition: dict      # (class2, class1) -> {class: coeff}

    def dims(self, x, y) -> dict:
        out = {}
        for _, deg, _ in self.classes.get((x, y), []):
            out[deg] = out.get(deg, 0) + 1
        return out

    def total_dim(self, x, y) -> int:
        return len(self.classes.get((x, y), []))

    def compose(self, c2, c1) -> dict:
        return dict(self.composition.get((c2, c1), {}))


def _mu1_matrix(cat, basis_from, basis_to):
    idx = {b: k for k, b in enumerate(basis_to)}
    ent = {}
    for j, b in enumerate(basis_from):
        for lab, c in cat.mu_eval((b,)).items():
            ent[idx[lab], j] = c
    return ExactMatrix(len(basis_to), len(basis_from), ent, cat.field)


def cohomology_category(cat: AInfCategory, check_associative: bool = True) -> CohomologyCategory:
    fld = cat.field
    classes = {}
    images = {}
    for x in cat.objects:
        for y in cat.objects:
            basis = cat.hom(x, y)
            if not basis:
                continue
            degs = sorted({cat.degree(b) for b in basis})
            reps, img_vecs = [], []
            for deg in degs:
                here = [b for b in basis if cat.degree(b) == deg]
                up = [b for b in basis if cat.degree(b) == deg + 1]
                down = [b for b in basis if cat.degree(b) == deg - 1]
                ker = kernel_basis(_mu1_matrix(cat, here, up)) if up else \
                    [[fld.one if k == i else fld.zero for k in range(len(here))] for i in range(len(here))]
                im = []
                if down:
                    m = _mu1_matrix(cat, down, here)
                    im = [[m[i, j] for i in range(len(here))] for j in range(len(down))]
                    im = [v for v in im if any(v)]
                span = list(im)
                for v in ker:
                    if solve_in_span(span, v, fld) is None:
                        span.append(v)
                        name = "[%s]" % "+".join(
                            ("%s*%s" % (fld.to_text(c), b) if c != 1 else b) for c, b in zip(v, here) if c)
                        reps.append((name, deg, {b: c for c, b in zip(v, here) if c}))
                for v in im:
                    img_vecs.append({b: c for c, b in zip(v, here) if c})
            classes[x, y] = reps
            images[x, y] = img_vecs

    def express(combo, x, y):
        basis = cat.hom(x, y)
        vecs = [[r[2].get(b, fld.zero) for b in basis] for r in classes.get((x, y), [])]
        vecs += [[v.get(b, fld.zero) for b in basis] for v in images.get((x, y), [])]
        target = [combo.get(b, fld.zero) for b in basis]
        coeffs = solve_in_span(vecs, target, fld)
        if coeffs is None:
            raise CategoryError("composition left the cocycles; is mu^1 a derivation?")
        return {r[0]: c for r, c in zip(classes.get((x, y), []), coeffs) if c}

    composition = {}
    for (x, y), c1s in classes.items():
        for (y2, z), c2s in classes.items():
            if y2 != y:
                continue
            for n1, d1, r1 in c1s:
                for n2, _, r2 in c2s:
                    val = cat.mu_multi([r2, r1])
                    sign = fld(-1 if d1 % 2 else 1)
                    val = {k: sign * v for k, v in val.items()}
                    res = express(val, x, z) if val else {}
                    if res:
                        composition[n2, n1] = res
    hc = CohomologyCategory(cat.objects, fld, classes, composition)
    if check_associative:
        _assert_associative(hc)
    return hc


def _assert_associative(hc: CohomologyCategory):
    fld = hc.field
    owner = {}
    for (x, y), cs in hc.classes.items():
        for name, _, _ in cs:
            owner[name] = (x, y)

    def comp(c2, c1):
        acc = {}
        for n2, a in c2.items():
            for n1, b in c1.items():
                _combo_add(acc, hc.compose(n2, n1), a * b, fld)
        return acc

    names = list(owner)
    for c1, c2, c3 in itertools.product(names, repeat=3):
        if owner[c1][1] != owner[c2][0] or owner[c2][1] != owner[c3][0]:
            continue
        one = fld.one
        lhs = comp({c3: one}, comp({c2: one}, {c1: one}))
        rhs = comp(comp({c3: one}, {c2: one}), {c1: one})
        if lhs != rhs:
            raise CategoryError("cohomology composition is not associative on %s, %s, %s" % (c3, c2, c1))


# -- directed restriction -----------------------------------------------------


def directed_restriction(cat: AInfCategory, ordered_objects) -> AInfCategory:
    """Directed subcategory on the given objects in the given order."""
    ordered = [str(o) for o in ordered_objects]
    if len(set(ordered)) != len(ordered):
        raise CategoryError("duplicate objects in restriction")
    for o in ordered:
        if o not in cat.objects:
            raise CategoryError("unknown object %r" % o)
    pos = {o: i for i, o in enumerate(ordered)}
    keep = [g for g in cat.generators if not cat.is_unit(g.label)
            and g.source in pos and g.target in pos and pos[g.source] < pos[g.target]]
    kept = {g.label for g in keep}
    mu = {}
    for args, out in cat.mu.items():
        if all(a in kept for a in args):
            objs = [cat.gen(args[-1]).source] + [cat.gen(a).target for a in reversed(args)]
            if all(pos[objs[k]] < pos[objs[k + 1]] for k in range(len(objs) - 1)):
                mu[args] = {k: v for k, v in out.items() if k in kept}
    return AInfCategory(tuple(ordered), tuple(keep), mu, cat.field, {o: cat.units[o] for o in ordered})
