"""Command line interface: palfkit validate|category|hh|invariants|report <file>.

<file> is a diagram or category JSON document, or the name of a shipped
fixture (pi1, pi2, pi3, annulus, core, a1, a2, a3).  Output is canonical JSON
(sorted keys, two-space indent) on stdout or in --out.

Exit codes: 0 success, 1 domain violation, 2 malformed input, 3 incomplete
polygon enumeration under --strict.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .ainfcat import AInfCategory, CategoryError, check_ainf_relation
from .data import DATA_DIR
from .diagram import DiagramFormatError, check_index_consistency, diagram_from_json, validate_diagram
from .exactalg import Field, FieldError
from .fscat import FSBuildError, build_fs_category, floer_differential_squared_check
from .hochschild import differential_squares_to_zero, hh_groups, simplified_differential_crosscheck
from .invariants import (
    cellular_h1_total_space, compare_lattices, euler_pairing, milnor_lattice, total_space_h1,
)
from .moduli import DEFAULT_MAX_MULT, PreconditionError

log = logging.getLogger("palfkit")

OK, VIOLATION, MALFORMED, INCOMPLETE = 0, 1, 2, 3


class Malformed(Exception):
    pass


class Violation(Exception):
    def __init__(self, message, doc=None):
        super().__init__(message)
        self.doc = doc


# -- input ------------------------------------------------------------------------


def resolve(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    for cand in (DATA_DIR / name, DATA_DIR / (name + ".diagram.json"), DATA_DIR / (name + ".category.json")):
        if cand.exists():
            return cand
    raise Malformed("no such file or shipped fixture: %s" % name)


def read_document(name: str) -> tuple[str, dict]:
    p = resolve(name)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as e:
        raise Malformed("cannot read %s: %s" % (p, e))
    except json.JSONDecodeError as e:
        raise Malformed("%s: invalid JSON at line %d column %d: %s" % (p, e.lineno, e.colno, e.msg))
    if not isinstance(doc, dict):
        raise Malformed("%s: top level must be an object" % p)
    kind = doc.get("format")
    if kind == "palfkit-diagram" or (kind is None and "crossings" in doc):
        return "diagram", doc
    if kind == "palfkit-category" or (kind is None and "objects" in doc):
        return "category", doc
    raise Malformed("%s: unknown document format %r" % (p, kind))


def load_diagram_doc(doc):
    try:
        return diagram_from_json(doc)
    except DiagramFormatError as e:
        raise Malformed(str(e))


def load_category_doc(doc, fld: Field | None):
    try:
        return AInfCategory.from_json(doc, fld)
    except (CategoryError, FieldError, KeyError, TypeError, ValueError) as e:
        raise Malformed("category document: %s" % e)


# -- JSON helpers -------------------------------------------------------------------


def combo(c: dict, fld: Field) -> dict:
    return {str(k): fld.to_text(v) for k, v in sorted(c.items())}


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- pieces -------------------------------------------------------------------------


def validation_doc(d, b, max_mult):
    rep = validate_diagram(d, b)
    out = {"diagram": d.name, "validation": rep.to_json()}
    if rep.ok and b is not None:
        from .fscat import corner_sequences
        from .moduli import enumerate_polygons
        polys, complete = [], True
        for inputs, _ in corner_sequences(d):
            res = enumerate_polygons(d, inputs, None, max_mult)
            polys.extend(res)
            complete = complete and res.complete
        idx = check_index_consistency(d, b, polys)
        out["index_consistency"] = {
            "ok": idx.ok, "polygons_checked": idx.polygons_checked, "walks_checked": idx.walks_checked,
            "violations": [[str(x) for x in v] for v in idx.violations],
            "parity_mismatches": idx.parity_mismatches, "complete": complete,
        }
    return out


def category_doc(d, b, fld, max_mult):
    if b is None:
        raise Violation("diagram has no brane data")
    rep = validate_diagram(d, b)
    if not rep.ok:
        raise Violation("diagram does not validate", {"validation": rep.to_json()})
    try:
        res = build_fs_category(d, b, max_mult, fld)
    except (FSBuildError, PreconditionError) as e:
        raise Violation(str(e))
    polys = []
    for (inputs, out), doms in sorted(res.polygon_log.items()):
        polys.append({"inputs": list(inputs), "output": out,
                      "domains": [dom.with_sign(s).to_json() for dom, s in doms]})
    doc = {"category": res.category.to_json(), "complete": res.complete,
           "relation_checked": res.relation_checked, "polygons": polys,
           "sign_rule_disagreements": [[str(x) for x in f] for f in res.sign_rule_disagreements]}
    if res.complete:
        sq = floer_differential_squared_check(res)
        doc["mu1_squared_zero"] = sq.ok
        doc["mu1_nonzero"] = sq.nonzero_mu1
    else:
        doc["banner"] = "INCOMPLETE: polygon enumeration hit the multiplicity cap %d" % max_mult
    return res, doc


def hh_doc(cat, degrees):
    groups, cx = hh_groups(cat, degrees)
    sq = differential_squares_to_zero(cx)
    if not all(sq.values()):
        raise Violation("Hochschild differential does not square to zero in degrees %s"
                        % [r for r, ok in sq.items() if not ok])
    cc = simplified_differential_crosscheck(cat)
    table = {}
    for r, g in sorted(groups.items()):
        table[str(r)] = {"dim": g.dim, "cochains": g.dim_cochains, "rank_out": g.rank_out, "rank_in": g.rank_in,
                         "representatives": [combo(v, cat.field) for v in g.representatives]}
    return {"field": cat.field.name, "degrees": list(degrees), "complete": cx.complete,
            "length_cap": cx.length_cap, "groups": table,
            "dims": [groups[r].dim for r in sorted(groups)],
            "differential_squares_to_zero": all(sq.values()),
            "crosscheck": {"applicable": cc.applicable, "agree": cc.agree, "global_sign": cc.global_sign,
                           "checked": cc.checked, "notice": cc.notice}}


def invariants_doc(d, cat):
    m = milnor_lattice(d)
    out = {"milnor_lattice": {"rank": m.rank, "labels": list(m.labels), "pairing": m.pairing.tolist()}}
    if cat is not None:
        e = euler_pairing(cat)
        out["euler_form"] = {"labels": list(e.labels), "pairing": e.pairing.tolist()}
        out["comparison"] = compare_lattices(m, e).to_json()
    try:
        h = total_space_h1(d)
        out["total_space_h1"] = {"group": str(h), **h.to_json()}
    except ValueError as e:
        out["total_space_h1"] = {"error": str(e)}
    cell = cellular_h1_total_space(d)
    out["total_space_h1_cellular"] = {"group": str(cell), **cell.to_json()}
    return out


# -- commands -----------------------------------------------------------------------


def cmd_validate(args):
    kind, doc = read_document(args.file)
    if kind == "category":
        cat = load_category_doc(doc, args.field)
        rep = check_ainf_relation(cat)
        out = {"category": True, "ainf_relation": {"ok": rep.ok, "chains_checked": rep.chains_checked,
                                                     "failing_chain": list(rep.failing_chain or ())}}
        return (OK if rep.ok else VIOLATION), out
    d, b = load_diagram_doc(doc)
    out = validation_doc(d, b, args.max_mult)
    ok = out["validation"]["ok"] and out.get("index_consistency", {}).get("ok", True)
    return (OK if ok else VIOLATION), out


def _category_from(args, kind, doc):
    if kind == "category":
        return load_category_doc(doc, args.field), None, {}
    d, b = load_diagram_doc(doc)
    res, cdoc = category_doc(d, b, args.field or Field(), args.max_mult)
    return res.category, res, cdoc


def _status(args, res):
    if res is not None and not res.complete:
        log.warning("polygon enumeration incomplete (multiplicity cap %d)", args.max_mult)
        if args.strict:
            return INCOMPLETE
    return OK


def cmd_category(args):
    kind, doc = read_document(args.file)
    if kind != "diagram":
        raise Malformed("category needs a diagram document")
    d, b = load_diagram_doc(doc)
    res, out = category_doc(d, b, args.field or Field(), args.max_mult)
    return _status(args, res), out


def cmd_hh(args):
    kind, doc = read_document(args.file)
    cat, res, _ = _category_from(args, kind, doc)
    if args.field is not None and cat.field != args.field:
        cat = cat.over(args.field)
    return _status(args, res), hh_doc(cat, args.degrees)


def cmd_invariants(args):
    kind, doc = read_document(args.file)
    if kind != "diagram":
        raise Malformed("invariants needs a diagram document")
    d, b = load_diagram_doc(doc)
    cat, res = None, None
    if b is not None:
        cat, res, _ = _category_from(args, kind, doc)
    return _status(args, res), invariants_doc(d, cat)


def cmd_report(args):
    kind, doc = read_document(args.file)
    if kind != "diagram":
        raise Malformed("report needs a diagram document")
    d, b = load_diagram_doc(doc)
    out = {"palfkit": __version__}
    out.update(validation_doc(d, b, args.max_mult))
    if not out["validation"]["ok"]:
        raise Violation("diagram does not validate", out)
    res, cdoc = category_doc(d, b, args.field or Field(), args.max_mult)
    out["fs_category"] = cdoc
    out["hochschild"] = hh_doc(res.category, args.degrees)
    out["invariants"] = invariants_doc(d, res.category)
    return _status(args, res), out


COMMANDS = {"validate": cmd_validate, "category": cmd_category, "hh": cmd_hh,
            "invariants": cmd_invariants, "report": cmd_report}


# -- argument handling ----------------------------------------------------------------


def parse_degrees(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError("degrees must look like A..B, got %r" % text)
    if lo > hi:
        raise argparse.ArgumentTypeError("empty degree range %r" % text)
    return lo, hi


def parse_field(text: str) -> Field:
    try:
        return Field.parse(text)
    except (FieldError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="palfkit", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version="palfkit " + __version__)
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file", help="diagram/category JSON file or shipped fixture name")
    ap.add_argument("--out", help="write the JSON result here instead of stdout")
    ap.add_argument("--degrees", type=parse_degrees, default=(-2, 3), metavar="A..B",
                    help="Hochschild degree range (default -2..3)")
    ap.add_argument("--field", type=parse_field, default=None, metavar="q|fp:P")
    ap.add_argument("--strict", action="store_true", help="exit 3 when polygon enumeration is incomplete")
    ap.add_argument("--max-mult", type=int, default=DEFAULT_MAX_MULT, metavar="N",
                    help="face multiplicity cap for polygon enumeration (default %d)" % DEFAULT_MAX_MULT)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _join_negative(argv):
    # "--degrees -2..2" would otherwise be read as an option
    out, it = [], iter(argv)
    for a in it:
        if a == "--degrees":
            nxt = next(it, None)
            out.append(a if nxt is None else "--degrees=" + nxt)
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = _join_negative(list(sys.argv[1:] if argv is None else argv))
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return MALFORMED if e.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="palfkit: %(levelname)s: %(message)s")
    if args.max_mult < 0:
        print("palfkit: --max-mult must be nonnegative", file=sys.stderr)
        return MALFORMED
    try:
        status, doc = COMMANDS[args.command](args)
    except Malformed as e:
        print("palfkit: malformed input: %s" % e, file=sys.stderr)
        return MALFORMED
    except Violation as e:
        print("palfkit: %s" % e, file=sys.stderr)
        status, doc = VIOLATION, {"error": str(e), **(e.doc or {})}
    text = dump(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if status == VIOLATION and args.command == "validate":
        for issue in doc.get("validation", {}).get("issues", []):
            print("palfkit: %s %s: %s" % (issue["code"], issue["element"], issue["message"]), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
