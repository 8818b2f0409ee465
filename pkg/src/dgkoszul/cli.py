"""Command-line interface: presentation-file parsing, command dispatch,
deterministic report emission.

Exit codes: 0 success, 1 verdict failure, 2 parse error, 3 validation
error, 4 dangling reference.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from dgkoszul import __version__
from dgkoszul.exactlinalg import FieldSpec
from dgkoszul.gradedcomplex import (
    Complex,
    DegreeWindow,
    GradedMap,
    GradedSpace,
    check_d_squared,
    homology,
)
from dgkoszul import dgstruct
from dgkoszul.dgstruct import (
    DGAlgebra,
    validate_algebra,
    validate_coalgebra,
    validate_comodule,
    validate_module,
)
from dgkoszul.barcobar import bar, cobar
from dgkoszul.resolve import (
    class_of,
    derived_fiber,
    is_free_over_homology,
    minimize,
    semifree_resolve,
)
from dgkoszul.level import cert_from_resolution, cert_to_dict, cert_validate
from dgkoszul import koszul

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DANGLING = 4


class CliError(Exception):
    def __init__(self, code: int, message: str, pointer: str = ""):
        super().__init__(message)
        self.code = code
        self.pointer = pointer


# -------------------------------------------------------------------------
# scalars and fields
# -------------------------------------------------------------------------

def parse_field(spec: str) -> FieldSpec:
    if spec == "Q":
        return FieldSpec.rationals()
    if spec.startswith("F"):
        try:
            return FieldSpec.prime(int(spec[1:]))
        except ValueError as e:
            raise CliError(EXIT_PARSE, f"bad field spec {spec!r}: {e}")
    raise CliError(EXIT_PARSE, f"bad field spec {spec!r}")


def field_name(f: FieldSpec) -> str:
    return "Q" if f.kind == "rationals" else f"F{f.p}"


def parse_scalar(f: FieldSpec, v, pointer: str):
    if f.kind == "prime":
        if isinstance(v, int):
            return v % f.p
        raise CliError(EXIT_PARSE,
                       f"scalar over F_{f.p} must be an integer, got {v!r}",
                       pointer)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise CliError(EXIT_PARSE, f"bad rational {v!r}: {e}", pointer)
    raise CliError(EXIT_PARSE, f"bad rational scalar {v!r}", pointer)


def format_scalar(f: FieldSpec, v):
    if f.kind == "prime":
        return int(v)
    fr = Fraction(v)
    return str(fr.numerator) if fr.denominator == 1 else str(fr)


def format_combo(f: FieldSpec, combo: dict) -> dict:
    return {l: format_scalar(f, c) for l, c in sorted(combo.items())}


def parse_window(spec: str) -> DegreeWindow:
    try:
        lo, hi = spec.split(":")
        return DegreeWindow(int(lo), int(hi))
    except ValueError as e:
        raise CliError(EXIT_PARSE, f"bad window {spec!r}: {e}")


# -------------------------------------------------------------------------
# presentation files
# -------------------------------------------------------------------------

class Store:
    def __init__(self, field: FieldSpec, window: DegreeWindow):
        self.field = field
        self.window = window
        self.algebras: dict = {}
        self.coalgebras: dict = {}
        self.modules: dict = {}
        self.comodules: dict = {}

    def algebra(self, name: str) -> DGAlgebra:
        if name not in self.algebras:
            raise CliError(EXIT_DANGLING, f"unknown algebra {name!r}",
                           f"/algebras/{name}")
        return self.algebras[name]

    def module(self, name: str):
        if name not in self.modules:
            raise CliError(EXIT_DANGLING, f"unknown module {name!r}",
                           f"/modules/{name}")
        return self.modules[name]

    def carrier_of(self, name: str) -> Complex:
        for kind in ("algebras", "coalgebras", "modules", "comodules"):
            objs = getattr(self, kind)
            if name in objs:
                return objs[name].carrier
        raise CliError(EXIT_DANGLING, f"unknown object {name!r}", f"/{name}")


def _require(d: dict, key: str, pointer: str):
    if key not in d:
        raise CliError(EXIT_PARSE, f"missing key {key!r}", pointer)
    return d[key]


def _parse_table_algebra(f, w, spec: dict, pointer: str) -> DGAlgebra:
    basis = {}
    for ds, labels in _require(spec, "basis", pointer).items():
        basis[int(ds)] = tuple(labels)
    all_labels = {l for ls in basis.values() for l in ls}
    sp = GradedSpace(f, w, basis,
                     bounds=(min(basis), max(basis)) if basis else (1, 0))
    dcols = {}
    for l, combo in spec.get("differential", {}).items():
        if l not in all_labels:
            raise CliError(EXIT_DANGLING, f"unknown label {l!r}",
                           f"{pointer}/differential/{l}")
        col = {}
        for t, v in combo.items():
            if t not in all_labels:
                raise CliError(EXIT_DANGLING, f"unknown label {t!r}",
                               f"{pointer}/differential/{l}")
            col[t] = parse_scalar(f, v, f"{pointer}/differential/{l}")
        if col:
            dcols[l] = col
    cx = Complex(sp, GradedMap(sp, sp, 1, dcols))
    mult = {}
    for key, combo in _require(spec, "mult", pointer).items():
        try:
            a, b = key.split("|")
        except ValueError:
            raise CliError(EXIT_PARSE, f"mult key must be 'a|b', got "
                           f"{key!r}", f"{pointer}/mult/{key}")
        for l in (a, b, *combo):
            if l not in all_labels:
                raise CliError(EXIT_DANGLING, f"unknown label {l!r}",
                               f"{pointer}/mult/{key}")
        mult[(a, b)] = {t: parse_scalar(f, v, f"{pointer}/mult/{key}")
                        for t, v in combo.items()}
    return DGAlgebra(cx, _require(spec, "unit", pointer), mult,
                     _require(spec, "polarity", pointer),
                     simply_connected=spec.get("simply_connected", False),
                     name=spec.get("name", ""))


def parse_presentation(path: str) -> Store:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise CliError(EXIT_PARSE, f"invalid JSON in {path}: {e}")
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, "presentation must be a JSON object")
    f = parse_field(doc.get("field", "Q"))
    win = doc.get("window", [-16, 16])
    if (not isinstance(win, list) or len(win) != 2
            or not all(isinstance(x, int) for x in win)):
        raise CliError(EXIT_PARSE, "window must be [lo, hi]", "/window")
    w = DegreeWindow(win[0], win[1])
    store = Store(f, w)

    for name, spec in sorted(doc.get("algebras", {}).items()):
        ptr = f"/algebras/{name}"
        kind = spec.get("kind", "table")
        if kind == "trivial":
            a = dgstruct.trivial_algebra(f, w)
        elif kind == "polynomial":
            gens = [tuple(g) for g in _require(spec, "generators", ptr)]
            a = dgstruct.polynomial_algebra(f, w, gens)
        elif kind == "exterior":
            gens = [tuple(g) for g in _require(spec, "generators", ptr)]
            a = dgstruct.exterior_algebra(f, w, gens)
        elif kind == "truncated_polynomial":
            a = dgstruct.truncated_polynomial_algebra(
                f, w, _require(spec, "name", ptr),
                _require(spec, "degree", ptr),
                _require(spec, "power", ptr))
        elif kind == "table":
            a = _parse_table_algebra(f, w, spec, ptr)
        else:
            raise CliError(EXIT_PARSE, f"unknown algebra kind {kind!r}", ptr)
        rep = validate_algebra(a)
        if not rep.ok:
            raise CliError(EXIT_VALIDATION,
                           f"algebra {name!r} invalid: "
                           f"{'; '.join(rep.violations[:3])}", ptr)
        store.algebras[name] = a

    for name, spec in sorted(doc.get("coalgebras", {}).items()):
        ptr = f"/coalgebras/{name}"
        kind = spec.get("kind", "exterior")
        if kind == "exterior":
            gens = [tuple(g) for g in _require(spec, "generators", ptr)]
            c = dgstruct.exterior_coalgebra(f, w, gens)
        elif kind == "dual":
            c = dgstruct.graded_dual_algebra(
                store.algebra(_require(spec, "of", ptr)))
        else:
            raise CliError(EXIT_PARSE, f"unknown coalgebra kind {kind!r}",
                           ptr)
        rep = validate_coalgebra(c)
        if not rep.ok:
            raise CliError(EXIT_VALIDATION,
                           f"coalgebra {name!r} invalid: "
                           f"{'; '.join(rep.violations[:3])}", ptr)
        store.coalgebras[name] = c

    for name, spec in sorted(doc.get("modules", {}).items()):
        ptr = f"/modules/{name}"
        kind = _require(spec, "kind", ptr)
        if kind == "trivial":
            m = dgstruct.trivial_module(
                store.algebra(_require(spec, "over", ptr)))
        elif kind == "free":
            m = dgstruct.free_module(
                store.algebra(_require(spec, "over", ptr)))
        elif kind == "truncated":
            m = dgstruct.truncated_module(
                store.algebra(_require(spec, "over", ptr)),
                _require(spec, "name", ptr),
                _require(spec, "degree", ptr),
                _require(spec, "power", ptr))
        elif kind == "shift":
            m = dgstruct.module_shift(
                store.module(_require(spec, "of", ptr)),
                _require(spec, "k", ptr))
        elif kind == "direct_sum":
            parts = [store.module(nm)
                     for nm in _require(spec, "of", ptr)]
            m, _, _ = dgstruct.module_direct_sum(parts)
        else:
            raise CliError(EXIT_PARSE, f"unknown module kind {kind!r}", ptr)
        rep = validate_module(m)
        if not rep.ok:
            raise CliError(EXIT_VALIDATION,
                           f"module {name!r} invalid: "
                           f"{'; '.join(rep.violations[:3])}", ptr)
        store.modules[name] = m

    for name, spec in sorted(doc.get("comodules", {}).items()):
        ptr = f"/comodules/{name}"
        kind = _require(spec, "kind", ptr)
        over = _require(spec, "over", ptr)
        if over not in store.coalgebras:
            raise CliError(EXIT_DANGLING, f"unknown coalgebra {over!r}",
                           ptr)
        c = store.coalgebras[over]
        if kind == "trivial":
            n = dgstruct.trivial_comodule(c)
        elif kind == "over_self":
            n = dgstruct.comodule_over_self(c)
        else:
            raise CliError(EXIT_PARSE, f"unknown comodule kind {kind!r}",
                           ptr)
        rep = validate_comodule(n)
        if not rep.ok:
            raise CliError(EXIT_VALIDATION,
                           f"comodule {name!r} invalid: "
                           f"{'; '.join(rep.violations[:3])}", ptr)
        store.comodules[name] = n
    return store


# -------------------------------------------------------------------------
# reports
# -------------------------------------------------------------------------

def base_report(command: str, f: FieldSpec, w: DegreeWindow) -> dict:
    return {"schema_version": SCHEMA_VERSION,
            "engine_version": __version__,
            "command": command,
            "field": field_name(f),
            "window": [w.lo, w.hi]}


def emit(report: dict, args) -> None:
    lines = [f"# {report['command']}  field={report['field']}  "
             f"window={report['window'][0]}:{report['window'][1]}"]
    for key in sorted(report):
        if key in ("schema_version", "engine_version", "command", "field",
                   "window"):
            continue
        lines.append(f"{key}: {json.dumps(report[key], sort_keys=True)}")
    sys.stdout.write("\n".join(lines) + "\n")
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(report, sort_keys=True,
                                separators=(",", ":"),
                                ensure_ascii=False) + "\n")


def homology_dims(cx: Complex) -> dict:
    dims = {}
    for n in range(cx.space.window.lo, cx.space.window.hi + 1):
        if not (cx.space.complete_at(n - 1) and cx.space.complete_at(n)
                and cx.space.complete_at(n + 1)):
            continue
        h = homology(cx, n)
        if h.dimension:
            dims[str(n)] = h.dimension
    return dims


def space_dims(cx: Complex) -> dict:
    return {str(n): cx.space.dim(n) for n in cx.space.degrees()
            if cx.space.dim(n)}


# -------------------------------------------------------------------------
# commands
# -------------------------------------------------------------------------

def cmd_validate(args) -> int:
    store = parse_presentation(args.presentation)
    report = base_report("validate", store.field, store.window)
    report["objects"] = {
        "algebras": sorted(store.algebras),
        "coalgebras": sorted(store.coalgebras),
        "modules": sorted(store.modules),
        "comodules": sorted(store.comodules)}
    report["ok"] = True
    emit(report, args)
    return EXIT_OK


def cmd_homology(args) -> int:
    store = parse_presentation(args.presentation)
    cx = store.carrier_of(args.object)
    report = base_report("homology", store.field, store.window)
    report["object"] = args.object
    if args.degree is not None:
        h = homology(cx, args.degree)
        report["degree"] = args.degree
        report["dimension"] = h.dimension
        report["representatives"] = [format_combo(store.field, r)
                                     for r in h.representatives]
    else:
        report["dims"] = homology_dims(cx)
    emit(report, args)
    return EXIT_OK


def cmd_bar(args) -> int:
    store = parse_presentation(args.presentation)
    a = store.algebra(args.algebra)
    b = bar(a, store.window)
    report = base_report("bar", store.field, store.window)
    report["algebra"] = args.algebra
    report["dims"] = space_dims(b.carrier)
    report["homology_dims"] = homology_dims(b.carrier)
    dsq = check_d_squared(b.carrier)
    report["d_squared_ok"] = bool(dsq)
    emit(report, args)
    return EXIT_OK if dsq else EXIT_VERDICT


def cmd_cobar(args) -> int:
    store = parse_presentation(args.presentation)
    if args.coalgebra not in store.coalgebras:
        raise CliError(EXIT_DANGLING,
                       f"unknown coalgebra {args.coalgebra!r}",
                       f"/coalgebras/{args.coalgebra}")
    c = store.coalgebras[args.coalgebra]
    om = cobar(c, store.window)
    report = base_report("cobar", store.field, store.window)
    report["coalgebra"] = args.coalgebra
    report["dims"] = space_dims(om.carrier)
    report["homology_dims"] = homology_dims(om.carrier)
    dsq = check_d_squared(om.carrier)
    report["d_squared_ok"] = bool(dsq)
    emit(report, args)
    return EXIT_OK if dsq else EXIT_VERDICT


def _resolution_report(r, command, store) -> dict:
    report = base_report(command, store.field, store.window)
    report["generators"] = [[gl, d, s] for gl, d, s in
                            sorted(r.generators, key=lambda g: (g[1], g[0]))]
    report["minimal"] = r.is_minimal()
    if r.is_minimal():
        cls, exhausted = class_of(r)
        report["class"] = cls
        report["exhausted"] = exhausted
    return report


def cmd_resolve(args) -> int:
    store = parse_presentation(args.presentation)
    m = store.module(args.module)
    a = store.algebra(args.over)
    r = semifree_resolve(m, a, args.depth)
    report = _resolution_report(r, "resolve", store)
    report["module"] = args.module
    report["over"] = args.over
    emit(report, args)
    return EXIT_OK


def cmd_minimize(args) -> int:
    store = parse_presentation(args.presentation)
    m = store.module(args.module)
    a = store.algebra(args.over)
    r = minimize(semifree_resolve(m, a, args.depth))
    report = _resolution_report(r, "minimize", store)
    report["module"] = args.module
    report["over"] = args.over
    emit(report, args)
    return EXIT_OK


def cmd_level_bound(args) -> int:
    store = parse_presentation(args.presentation)
    m = store.module(args.module)
    a = store.algebra(args.over)
    fib = derived_fiber(m, a, args.depth)
    free = is_free_over_homology(m, a, args.depth)
    report = base_report("level-bound", store.field, store.window)
    report["module"] = args.module
    report["over"] = args.over
    report["fiber_dims"] = {str(n): d for n, d in fib.dimensions.items()}
    report["fiber_dim_total"] = sum(fib.dimensions.values())
    report["exhausted"] = fib.exhausted
    report["lower_bound"] = 1 if free["free"] else 2
    r = minimize(semifree_resolve(m, a, args.depth))
    cls, exhausted = class_of(r)
    report["class"] = cls
    verdict_ok = True
    if exhausted:
        cert = cert_from_resolution(r)
        rep = cert_validate(cert)
        verdict_ok = rep.ok
        report["certificate"] = cert_to_dict(cert)
        report["certificate_valid"] = rep.ok
        report["upper_bound"] = cert.claimed_level
    else:
        report["certificate"] = None
        report["upper_bound"] = None
    emit(report, args)
    return EXIT_OK if verdict_ok else EXIT_VERDICT


def _parse_degrees(spec: str):
    try:
        return [int(x) for x in spec.split(",") if x]
    except ValueError as e:
        raise CliError(EXIT_PARSE, f"bad degree list {spec!r}: {e}")


def cmd_koszul_pair(args) -> int:
    f = parse_field(args.field)
    w = parse_window(args.window)
    pair = koszul.make_koszul_pair(f, w, _parse_degrees(args.degrees))
    report = base_report("koszul-pair", f, w)
    report["generator_degrees"] = pair.generator_degrees
    report["algebra"] = pair.algebra.name
    report["coalgebra"] = pair.coalgebra.name
    report["algebra_dims"] = space_dims(pair.algebra.carrier)
    report["coalgebra_dims"] = space_dims(pair.coalgebra.carrier)
    report["ok"] = True
    emit(report, args)
    return EXIT_OK


def cmd_koszul_check(args) -> int:
    f = parse_field(args.field)
    w = parse_window(args.window)
    pair = koszul.make_koszul_pair(f, w, _parse_degrees(args.degrees))
    chk = koszul.koszul_pair_check(pair)
    report = base_report("koszul-check", f, w)
    report["generator_degrees"] = pair.generator_degrees
    report["tau_ok"] = chk["tau_ok"]
    report["two_sided_ok"] = chk["two_sided"]["ok"]
    report["two_sided_by_degree"] = {
        str(n): (v if isinstance(v, bool) else str(v))
        for n, v in chk["two_sided"]["by_degree"].items()}
    report["ok"] = chk["ok"]
    emit(report, args)
    return EXIT_OK if chk["ok"] else EXIT_VERDICT


def cmd_ext(args) -> int:
    store = parse_presentation(args.presentation)
    a = store.algebra(args.algebra)
    table = koszul.ext_algebra(a, store.window)
    report = base_report("ext", store.field, store.window)
    report["algebra"] = args.algebra
    report["dims"] = {str(n): d for n, d in sorted(table["dims"].items())}
    report["products"] = {
        f"({n1},{i1})*({n2},{i2})": {f"({n},{j})":
                                     format_scalar(store.field, c)
                                     for (n, j), c in sorted(val.items())}
        for ((n1, i1), (n2, i2)), val in sorted(table["products"].items())
        if val}
    emit(report, args)
    return EXIT_OK


def cmd_duality_check(args) -> int:
    f = parse_field(args.field)
    w = parse_window(args.window)
    pair = koszul.make_koszul_pair(f, w, _parse_degrees(args.degrees))
    sv = pair.algebra
    if args.module == "free":
        m = dgstruct.free_module(sv)
    elif args.module == "trivial":
        m = dgstruct.trivial_module(sv)
    elif args.module.startswith("truncated:"):
        power = int(args.module.split(":", 1)[1])
        m = dgstruct.truncated_module(sv, "y1",
                                      pair.generator_degrees[0], power)
    else:
        raise CliError(EXIT_PARSE, f"unknown module spec {args.module!r}")
    rep = koszul.level_duality_check(pair, m, args.depth)
    report = base_report("duality-check", f, w)
    report["module"] = args.module
    report["side_a"] = {k: rep["side_a"][k]
                        for k in sorted(rep["side_a"])}
    report["side_b"] = {
        "lower": rep["side_b"]["lower"],
        "upper": rep["side_b"]["upper"],
        "loewy_homology": rep["side_b"]["loewy_homology"],
        "loewy_chain": rep["side_b"]["loewy_chain"],
        "homology_dims": {str(n): d for n, d in
                          sorted(rep["side_b"]["homology_dims"].items())}}
    report["intervals_intersect"] = rep["intervals_intersect"]
    report["value"] = rep["value"]
    if "eta_trivial_qiso" in rep:
        report["eta_trivial_qiso"] = rep["eta_trivial_qiso"]
    emit(report, args)
    return EXIT_OK if rep["intervals_intersect"] else EXIT_VERDICT


# -------------------------------------------------------------------------
# dispatch
# -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dgkoszul",
        description="Exact DG (co)algebra computations on degree windows")
    sub = p.add_subparsers(dest="command", required=True)

    def with_presentation(sp):
        sp.add_argument("-p", "--presentation", required=True,
                        help="presentation JSON file")
        sp.add_argument("--json", help="write machine report to this path")

    def with_flags(sp):
        sp.add_argument("--field", default="F5", help="F<p> or Q")
        sp.add_argument("--window", default="-16:16", help="LO:HI")
        sp.add_argument("--json", help="write machine report to this path")

    sp = sub.add_parser("validate", help="validate a presentation file")
    with_presentation(sp)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("homology", help="homology of a named object")
    with_presentation(sp)
    sp.add_argument("--object", required=True)
    sp.add_argument("--degree", type=int)
    sp.set_defaults(fn=cmd_homology)

    sp = sub.add_parser("bar", help="bar construction of an algebra")
    with_presentation(sp)
    sp.add_argument("--algebra", required=True)
    sp.set_defaults(fn=cmd_bar)

    sp = sub.add_parser("cobar", help="cobar construction of a coalgebra")
    with_presentation(sp)
    sp.add_argument("--coalgebra", required=True)
    sp.set_defaults(fn=cmd_cobar)

    for nm, fn in (("resolve", cmd_resolve), ("minimize", cmd_minimize)):
        sp = sub.add_parser(nm, help=f"{nm} a module")
        with_presentation(sp)
        sp.add_argument("--module", required=True)
        sp.add_argument("--over", required=True)
        sp.add_argument("--depth", type=int)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("level-bound",
                        help="certified level bounds for a module")
    with_presentation(sp)
    sp.add_argument("--module", required=True)
    sp.add_argument("--over", required=True)
    sp.add_argument("--depth", type=int)
    sp.set_defaults(fn=cmd_level_bound)

    sp = sub.add_parser("koszul-pair", help="build and validate a pair")
    with_flags(sp)
    sp.add_argument("--degrees", required=True, help="comma-separated")
    sp.set_defaults(fn=cmd_koszul_pair)

    sp = sub.add_parser("koszul-check",
                        help="τ residual and two-sided quasi-iso")
    with_flags(sp)
    sp.add_argument("--degrees", required=True)
    sp.set_defaults(fn=cmd_koszul_check)

    sp = sub.add_parser("ext", help="Ext algebra H((BA)^∨)")
    with_presentation(sp)
    sp.add_argument("--algebra", required=True)
    sp.set_defaults(fn=cmd_ext)

    sp = sub.add_parser("duality-check",
                        help="level duality intervals for a Koszul pair")
    with_flags(sp)
    sp.add_argument("--degrees", required=True)
    sp.add_argument("--module", default="trivial",
                    help="free | trivial | truncated:<power>")
    sp.add_argument("--depth", type=int)
    sp.set_defaults(fn=cmd_duality_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        where = f" at {e.pointer}" if e.pointer else ""
        sys.stderr.write(f"error: {e}{where}\n")
        return e.code
    except (ValueError, KeyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
