"""Hochschild cochains, Gerstenhaber product and bracket, HH of a directed category.

A cochain basis element is a pair ``(inputs, output)``: the multilinear map
sending the basis chain ``inputs = (a_s, ..., a_1)`` to the basis morphism
``output`` in hom(X_0, X_s) and every other basis chain to zero.  Its degree is

    r = s + |output| - sum |a_k|.

A general cochain is a dict ``{(inputs, output): coefficient}``.  The complex
is the non-reduced one: units may appear among the inputs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .ainfcat import AInfCategory, _combo_add
from .exactalg import ExactMatrix, kernel_basis, rank, solve_in_span

log = logging.getLogger(__name__)

DEFAULT_DEGREES = (-2, 3)


def cochain_degree(cat: AInfCategory, gen) -> int:
    inputs, out = gen
    return len(inputs) + cat.degree(out) - sum(cat.degree(a) for a in inputs)


def cochain_endpoints(cat: AInfCategory, gen):
    inputs, out = gen
    g = cat.gen(out)
    return g.source, g.target


def cochain_label(cat: AInfCategory, gen) -> str:
    """Object-string name such as ``3211`` (X_s ... X_0).

    Falls back to an explicit ``a_s.....a_1->out`` form whenever the object
    path does not pin the generators down.
    """
    inputs, out = gen
    if inputs:
        objs = [cat.gen(inputs[0]).target] + [cat.gen(a).source for a in inputs]
    else:
        objs = [cat.gen(out).source]
    simple = all(len(o) == 1 for o in objs)
    for k in range(len(objs) - 1):
        if len(cat.hom(objs[k + 1], objs[k])) != 1:
            simple = False
    if len(cat.hom(objs[-1], objs[0])) != 1:
        simple = False
    if simple:
        return "".join(objs)
    return "%s->%s" % (".".join(inputs), out)


def _max_abs_degree(cat):
    return max((abs(g.degree) for g in cat.generators), default=0)


def default_length_cap(cat: AInfCategory, degrees) -> int:
    lo, hi = degrees
    return 2 * len(cat.objects) + (hi - lo + 1)


def cc_basis(cat: AInfCategory, r: int, length_cap: int | None = None):
    """Basis of CC^r.  Returns ``(generators, complete)``.

    When every morphism degree is <= 0 the length is bounded by
    ``r + max|deg|`` and the list is complete.  Otherwise lengths beyond
    ``length_cap`` are cut and ``complete`` is False.
    """
    nonpositive = all(g.degree <= 0 for g in cat.generators)
    if nonpositive:
        bound = r + _max_abs_degree(cat)
        complete = True
        if length_cap is not None and length_cap < bound:
            bound, complete = length_cap, False
    else:
        bound = length_cap if length_cap is not None else 2 * len(cat.objects) + 6
        complete = False
    gens = []
    for s in range(0, max(bound, -1) + 1):
        if s == 0:
            for o in cat.objects:
                for out in cat.hom(o, o):
                    gen = ((), out)
                    if cochain_degree(cat, gen) == r:
                        gens.append(gen)
            continue
        for chain in cat.chains(s):
            src = cat.gen(chain[-1]).source
            tgt = cat.gen(chain[0]).target
            din = sum(cat.degree(a) for a in chain)
            for out in cat.hom(src, tgt):
                if s + cat.degree(out) - din == r:
                    gens.append((chain, out))
    return gens, complete


def mu_cochain(cat: AInfCategory) -> dict:
    """The structure maps as one cochain of degree 2, unit rules included."""
    out = {}
    for g in cat.generators:
        a = g.label
        _combo_add(out, {((a, cat.units[g.source]), a): cat.field.one}, cat.field.one, cat.field)
        if a != cat.units[g.target] or a != cat.units[g.source]:
            sign = -1 if g.degree % 2 else 1
            _combo_add(out, {((cat.units[g.target], a), a): cat.field(sign)}, cat.field.one, cat.field)
    for args, combo in cat.mu.items():
        for lab, c in combo.items():
            _combo_add(out, {(args, lab): c}, cat.field.one, cat.field)
    return out


def _homogeneous_degree(cat, cochain):
    degs = {cochain_degree(cat, g) for g in cochain}
    if len(degs) > 1:
        raise ValueError("cochain is not homogeneous: degrees %s" % sorted(degs))
    return degs.pop() if degs else None


def gerstenhaber_product(cat: AInfCategory, psi: dict, phi: dict, t: int | None = None) -> dict:
    """psi * phi: insert phi into each slot of psi with the sign (t-1)*sum(|a_j|-1).

    ``t`` is the degree of phi; it is read off phi when omitted.
    """
    fld = cat.field
    if t is None:
        t = _homogeneous_degree(cat, phi)
        if t is None:
            return {}
    by_output = {}
    for (J, o), c in phi.items():
        by_output.setdefault(o, []).append((J, c))
    acc = {}
    for (I, o_psi), c1 in psi.items():
        for k, x in enumerate(I):
            for J, c2 in by_output.get(x, ()):
                right = I[k + 1:]
                heart = (t - 1) * sum(cat.degree(a) - 1 for a in right)
                sign = -1 if heart % 2 else 1
                new = (I[:k] + J + right, o_psi)
                if not cat.composable(new[0]) and new[0]:
                    continue
                v = acc.get(new, fld.zero) + fld(sign) * c1 * c2
                if v:
                    acc[new] = v
                else:
                    acc.pop(new, None)
    return acc


def gerstenhaber_bracket(cat: AInfCategory, psi: dict, phi: dict, r: int | None = None,
                         t: int | None = None) -> dict:
    if r is None:
        r = _homogeneous_degree(cat, psi)
    if t is None:
        t = _homogeneous_degree(cat, phi)
    if r is None or t is None:
        return {}
    acc = dict(gerstenhaber_product(cat, psi, phi, t))
    sign = -1 if ((r - 1) * (t - 1)) % 2 else 1
    _combo_add(acc, gerstenhaber_product(cat, phi, psi, r), cat.field(-sign), cat.field)
    return acc


def hochschild_apply(cat: AInfCategory, psi: dict, r: int | None = None, mu: dict | None = None) -> dict:
    """M^1(psi) = [psi, mu]."""
    if mu is None:
        mu = mu_cochain(cat)
    return gerstenhaber_bracket(cat, psi, mu, r, 2)


def hochschild_differential(cat: AInfCategory, r: int, length_cap: int | None = None,
                            bases: dict | None = None) -> ExactMatrix:
    """Matrix of M^1 : CC^r -> CC^(r+1) in the canonical bases (columns = sources)."""
    if bases is None:
        bases = {}
    for q in (r, r + 1):
        if q not in bases:
            bases[q] = cc_basis(cat, q, length_cap)[0]
    src, dst = bases[r], bases[r + 1]
    idx = {g: k for k, g in enumerate(dst)}
    mu = mu_cochain(cat)
    ent = {}
    for j, g in enumerate(src):
        for h, c in hochschild_apply(cat, {g: cat.field.one}, r, mu).items():
            if h not in idx:
                if len(h[0]) > max((len(x[0]) for x in dst), default=0):
                    continue  # beyond the length cap
                raise AssertionError("M^1 produced %r outside the CC^%d basis" % (h, r + 1))
            ent[idx[h], j] = c
    return ExactMatrix(len(dst), len(src), ent, cat.field)


@dataclass
class HochschildComplex:
    category: AInfCategory
    degree_range: tuple
    basis: dict                   # r -> list of cochain generators
    differentials: dict           # r -> ExactMatrix CC^r -> CC^(r+1)
    complete: bool = True
    length_cap: int | None = None

    def label(self, gen) -> str:
        return cochain_label(self.category, gen)

    def image_of(self, r: int, gen) -> dict:
        """M^1(gen) as {label: coeff} (convenience for tables)."""
        m = self.differentials[r]
        j = self.basis[r].index(gen)
        return {self.label(self.basis[r + 1][i]): v for (i, jj), v in m.entries.items() if jj == j}

    def find(self, r: int, label: str):
        for g in self.basis[r]:
            if self.label(g) == label:
                return g
        raise KeyError("no cochain %r in CC^%d" % (label, r))


def build_complex(cat: AInfCategory, degrees=DEFAULT_DEGREES, length_cap: int | None = None) -> HochschildComplex:
    lo, hi = degrees
    if length_cap is None and any(g.degree > 0 for g in cat.generators):
        length_cap = default_length_cap(cat, degrees)
        log.warning("positive-degree morphisms: Hochschild cochains truncated at length %d", length_cap)
    bases, complete = {}, True
    for r in range(lo - 1, hi + 2):
        bases[r], ok = cc_basis(cat, r, length_cap)
        complete = complete and ok
    diffs = {r: hochschild_differential(cat, r, length_cap, bases) for r in range(lo - 1, hi + 1)}
    return HochschildComplex(cat, (lo, hi), bases, diffs, complete, length_cap)


@dataclass
class HHGroup:
    degree: int
    dim_cochains: int
    rank_out: int
    rank_in: int
    dim: int
    representatives: list = dc_field(default_factory=list)


def hh_groups(cat: AInfCategory, degrees=DEFAULT_DEGREES, length_cap: int | None = None,
              complex_: HochschildComplex | None = None) -> tuple[dict, HochschildComplex]:
    """HH^r for r in the degree range.  Returns ``({r: HHGroup}, complex)``."""
    cx = complex_ or build_complex(cat, degrees, length_cap)
    fld = cat.field
    lo, hi = cx.degree_range
    out = {}
    for r in range(lo, hi + 1):
        n = len(cx.basis[r])
        d_out = cx.differentials[r]
        d_in = cx.differentials[r - 1]
        rk_out, rk_in = rank(d_out), rank(d_in)
        ker = kernel_basis(d_out) if n else []
        image = [[d_in[i, j] for i in range(n)] for j in range(d_in.cols)]
        span = [v for v in image if any(v)]
        reps = []
        for v in ker:
            if solve_in_span(span, v, fld) is None:
                span.append(v)
                reps.append({cx.label(g): c for g, c in zip(cx.basis[r], v) if c})
        dim = n - rk_out - rk_in
        if dim != len(reps):
            raise AssertionError("HH^%d: rank count %d disagrees with %d representatives" % (r, dim, len(reps)))
        out[r] = HHGroup(r, n, rk_out, rk_in, dim, reps)
    return out, cx


def differential_squares_to_zero(cx: HochschildComplex) -> dict:
    """{r: bool} for M^1 o M^1 on CC^r -> CC^(r+2) within the computed range."""
    res = {}
    lo, hi = cx.degree_range
    for r in range(lo - 1, hi):
        res[r] = (cx.differentials[r + 1] @ cx.differentials[r]).is_zero()
    return res


# -- the three-term formula for mu^2-only, even-degree categories -------------


@dataclass
class CrosscheckReport:
    applicable: bool
    agree: bool = False
    global_sign: int | None = None
    checked: int = 0
    mismatches: list = dc_field(default_factory=list)
    notice: str = ""


def _eval_cochain(cochain_gen, args):
    """Value of a basis cochain on a basis chain: {} or {out: 1}."""
    inputs, out = cochain_gen
    return {out: 1} if tuple(args) == inputs else {}


def three_term_formula(cat: AInfCategory, gen, chain) -> dict:
    """M^1 f (a_d, ..., a_0) = mu2(f(a_d..a_1), a_0) + sum_i (-1)^i f(.., mu2(a_i, a_{i-1}), ..)
    + (-1)^(d+1) mu2(a_d, f(a_{d-1}..a_0)), evaluated on one chain of length d+1."""
    fld = cat.field
    n = len(chain)
    d = n - 1
    a = {k: chain[n - 1 - k] for k in range(n)}  # a[k] = a_k, a_0 applied first
    acc = {}
    f_top = _eval_cochain(gen, tuple(a[k] for k in range(d, 0, -1)))
    for lab, c in f_top.items():
        _combo_add(acc, cat.mu_eval((lab, a[0])), fld(c), fld)
    for i in range(1, d + 1):
        inner = cat.mu_eval((a[i], a[i - 1]))
        for lab, c in inner.items():
            args = tuple(a[k] for k in range(d, i, -1)) + (lab,) + tuple(a[k] for k in range(i - 2, -1, -1))
            for out, c2 in _eval_cochain(gen, args).items():
                _combo_add(acc, {out: fld(c) * c2}, fld(-1 if i % 2 else 1), fld)
    f_low = _eval_cochain(gen, tuple(a[k] for k in range(d - 1, -1, -1)))
    for lab, c in f_low.items():
        _combo_add(acc, cat.mu_eval((a[d], lab)), fld((-1) ** (d + 1) * c), fld)
    return acc


def simplified_differential_crosscheck(cat: AInfCategory, degrees=(0, 2)) -> CrosscheckReport:
    """Compare bracket-defined M^1 with the three-term formula on every basis cochain.

    Only applies when mu^d = 0 for d != 2 and all degrees are even.  The two
    may differ by one overall sign, which is reported in ``global_sign``.
    """
    if any(len(args) != 2 for args in cat.mu) or any(g.degree % 2 for g in cat.generators):
        return CrosscheckReport(False, notice="skipped: needs mu^d = 0 for d != 2 and even degrees")
    fld = cat.field
    lo, hi = degrees
    sign = None
    rep = CrosscheckReport(True)
    mu = mu_cochain(cat)
    for r in range(lo, hi + 1):
        basis, _ = cc_basis(cat, r)
        for gen in basis:
            bracket = hochschild_apply(cat, {gen: fld.one}, r, mu)
            s = len(gen[0])
            formula = {}
            for chain in cat.chains(s + 1):
                for out, c in three_term_formula(cat, gen, chain).items():
                    formula[(chain, out)] = c
            rep.checked += 1
            keys = set(bracket) | set(formula)
            for k in sorted(keys, key=repr):
                b, f = bracket.get(k, fld.zero), formula.get(k, fld.zero)
                if f == b == fld.zero:
                    continue
                if sign is None and f:
                    sign = 1 if b == f else (-1 if b == -f else None)
                if sign is None or b != fld(sign) * f:
                    rep.mismatches.append((cochain_label(cat, gen), k, b, f))
    rep.global_sign = sign if sign is not None else 1
    rep.agree = not rep.mismatches
    return rep
