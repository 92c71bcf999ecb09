"""``polarkind`` command line.

Every flag may also be set through an environment variable named
``POLARKIND_<FLAG>`` (``POLARKIND_SEED=7``); explicit flags win.  Exit status
is 0 on success, 1 on input errors and 2 on undetermined verdicts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence

from ..dualgraph import (
    DualGraph,
    GraphError,
    NotKindError,
    build_dual_graph,
    chi_graph,
    is_kind,
    ramify_graph,
    unramify_equising,
)
from ..foliation import (
    Direction,
    FormError,
    SamplingError,
    SamplingPolicy,
    camacho_sad_index,
    foliation_polygon,
    generic_polar_equisingularity,
    gstar_check,
    is_resolved_by,
    parse_form,
    polar_curve,
)
from ..logmodel import LogModel, discriminant_test, h_polynomial, membership_UC
from ..numfield import MAX_PRECISION, DomainError, ParseError, UndecidedError, parse_polys
from ..puiseux import (
    BivariateGerm,
    ExpansionError,
    InconsistentTypeError,
    InsufficientTruncation,
    LabeledType,
    TruncationPolicy,
    joint_equisingularity,
    newton_polygon,
    puiseux_expand,
)
from .formats import (
    describe_type,
    eqt_to_doc,
    read_curve_file,
    read_curve_text,
    read_dg_file,
    read_eqt_file,
    read_form_file,
    parse_lambda,
)

ENV_PREFIX = "POLARKIND_"
DEFAULT_SEED = 20240229
EXIT_OK, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2


class Undetermined(Exception):
    """A mathematical verdict could not be reached; carries the report text."""


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# option handling
# ---------------------------------------------------------------------------


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options (env: POLARKIND_<NAME>)")
    g.add_argument("--precision", default=None, help="working precision in bits for numeric display")
    g.add_argument("--trunc", default=None, help="largest Puiseux exponent numerator ever computed")
    g.add_argument("--samples", default=None, help="number of agreeing polar directions")
    g.add_argument("--seed", default=None, help="seed of the direction sampler")
    g.add_argument("--format", default=None, help="text, dot or structured")
    g.add_argument("--ramify", default=None, help="ramification order n of x = u^n")
    return p


def _int_option(args, name: str, default, lo: int, hi: Optional[int] = None) -> Optional[int]:
    raw = getattr(args, name)
    if raw is None:
        raw = _env(name, default)
    if raw is None:
        return None
    try:
        val = int(raw)
    except (TypeError, ValueError):
        raise InputError(f"--{name} must be an integer, got {raw!r}") from None
    if val < lo or (hi is not None and val > hi):
        rng = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise InputError(f"--{name} must lie in {rng}, got {val}")
    return val


def validate_options(args) -> None:
    """Resolve flags against the environment and check them before any work."""
    args.precision = _int_option(args, "precision", 128, 16, MAX_PRECISION)
    args.trunc = _int_option(args, "trunc", 400, 4)
    args.samples = _int_option(args, "samples", 3, 1, 50)
    args.seed = _int_option(args, "seed", DEFAULT_SEED, 0, 2**64 - 1)
    args.ramify = _int_option(args, "ramify", None, 1)
    fmt = args.format if args.format is not None else _env("format", "text")
    if fmt not in ("text", "dot", "structured"):
        raise InputError(f"--format must be text, dot or structured, got {fmt!r}")
    args.format = fmt


def _policy(args) -> SamplingPolicy:
    return SamplingPolicy(samples=args.samples, seed=args.seed)


def _trunc(args) -> TruncationPolicy:
    return TruncationPolicy(cap=args.trunc)


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------


def _curve_parts(args, field=None, required=True):
    if getattr(args, "curve_file", None):
        return read_curve_file(args.curve_file, field)
    if getattr(args, "curve", None):
        return read_curve_text(args.curve, field)
    if required:
        raise InputError("a curve is required (--curve EXPR or --curve-file FILE)")
    return None


def _product(parts):
    C = parts[0]
    for P in parts[1:]:
        C = C * P
    return C


def _labeled(args) -> LabeledType:
    if getattr(args, "eqt", None):
        return read_eqt_file(args.eqt)
    parts = _curve_parts(args)
    return joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in parts])


def _graph(args) -> DualGraph:
    if getattr(args, "dg", None):
        return read_dg_file(args.dg)
    return build_dual_graph(_labeled(args))


def _form_text(args) -> str:
    if getattr(args, "form_file", None):
        return read_form_file(args.form_file)
    if getattr(args, "form", None):
        return args.form
    raise InputError("a 1-form is required (--form EXPR or --form-file FILE)")


def _exact_inner(text: str) -> Optional[str]:
    t = text.strip()
    if t.startswith("d(") and t.endswith(")"):
        inner = t[2:-1]
        depth = 0
        for ch in inner:
            depth += (ch == "(") - (ch == ")")
            if depth < 0:
                return None
        return inner if depth == 0 else None
    return None


def _form_and_curve(args, curve_required=False):
    text = _form_text(args)
    w = parse_form(text)
    parts = _curve_parts(args, field=w.field, required=False)
    if parts is None:
        inner = _exact_inner(text)
        if inner is None:
            if curve_required:
                raise InputError("a separatrix curve is required for a non-exact form (--curve or --curve-file)")
            return w, None
        parts = parse_polys([inner], field=w.field)
    return w, parts


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _emit(args, text: str, doc: dict, dot: Optional[str] = None) -> str:
    if args.format == "structured":
        return json.dumps(doc, indent=2, sort_keys=True)
    if args.format == "dot":
        if dot is None:
            raise InputError("--format dot is only available for graph output")
        return dot.rstrip("\n")
    return text


def emit_graph(g: DualGraph, fmt: str, name: str = "G") -> str:
    """Render a graph deterministically (vertices by id, i.e. creation order)."""
    if fmt == "dot":
        return g.to_dot(name).rstrip("\n")
    if fmt == "structured":
        return json.dumps(g.to_structured(), indent=2, sort_keys=True)
    return g.summary()


def _elem(c, prec: int) -> str:
    if c.is_rational():
        return str(c.rational())
    return c.to_acb(prec).str(max(prec // 4, 6), radius=False)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_polygon(args) -> str:
    if getattr(args, "form", None) or getattr(args, "form_file", None):
        P = foliation_polygon(parse_form(_form_text(args)))
        doc = {
            "vertices": [list(v) for v in P.vertices],
            "sides": [[str(mu), str(k)] for mu, k in P.sides],
            "contributions": {f"{i},{j}": sorted(P.contributions[(i, j)]) for i, j in P.vertices},
        }
        return _emit(args, str(P), doc)
    C = _product(_curve_parts(args))
    P = newton_polygon(C)
    doc = {"vertices": [list(v) for v in P.vertices], "sides": [[str(mu), str(k)] for mu, k in P.sides]}
    return _emit(args, str(P), doc)


def cmd_puiseux(args) -> str:
    C = _product(_curve_parts(args))
    branches = puiseux_expand(BivariateGerm.from_poly(C), _trunc(args))
    lines = [str(b) for b in branches]
    doc = {"branches": [{"n": b.n, "series": str(b)} for b in branches]}
    return _emit(args, "\n".join(lines), doc)


def cmd_equis(args) -> str:
    lt = _labeled(args)
    return _emit(args, f"{lt.etype}\n{describe_type(lt)}", eqt_to_doc(lt))


def cmd_graph(args) -> str:
    return emit_graph(_graph(args), args.format)


def cmd_kind(args) -> str:
    g = _graph(args)
    k = is_kind(g)
    if k:
        text = "kind"
        doc = {"kind": True}
    else:
        b, t = k.witness
        text = f"not kind: dead arc (E{b},E{t}) with m={g.vertices[b].m},{g.vertices[t].m}"
        doc = {"kind": False, "dead_arc": [b, t], "m": [g.vertices[b].m, g.vertices[t].m]}
    return _emit(args, text, doc)


def cmd_chi(args) -> str:
    return emit_graph(chi_graph(_graph(args)), args.format, "chi")


def cmd_ramify(args) -> str:
    if args.ramify is None:
        raise InputError("--ramify n is required")
    rg = ramify_graph(_labeled(args), args.ramify)
    if args.format == "text":
        assoc = ", ".join(f"E{E} -> " + "/".join(f"E{x}" for x in xs) for E, xs in sorted(rg.association.items()))
        return rg.graph.summary() + f"\nassociated vertices: {assoc}"
    return emit_graph(rg.graph, args.format, "ramified")


def cmd_unramify(args) -> str:
    if args.ramify is None:
        raise InputError("--ramify n is required")
    C = _product(_curve_parts(args))
    branches = puiseux_expand(BivariateGerm.from_poly(C), _trunc(args))
    e = unramify_equising(branches, args.ramify)
    return _emit(args, f"{e}\n{describe_type(e)}", eqt_to_doc(e))


def cmd_polar(args) -> str:
    w = parse_form(_form_text(args))
    d = Direction.parse(args.direction)
    g = polar_curve(w, d)
    lt = joint_equisingularity([("G", g)])
    return _emit(args, f"polar {d}: {g}\n{describe_type(lt)}", {"direction": str(d), "polar": str(g), "type": eqt_to_doc(lt)})


def cmd_wp(args) -> str:
    w, parts = _form_and_curve(args, curve_required=True)
    res = generic_polar_equisingularity(w, _product(parts), _policy(args), curve_parts=parts)
    union_graph = res.graph()
    base = build_dual_graph(res.union.part("C"))
    k = is_kind(base)
    if k:
        attained = union_graph.isomorphic(chi_graph(base, "G"), {"G": "G"})
        chi_text = "χ_C attained" if attained else "χ_C not attained"
    else:
        attained = None
        chi_text = "χ_C undefined (C is not kind)"
    resolved = is_resolved_by(res.union)
    text = f"Γ: {describe_type(res.gamma)}; {chi_text}"
    text += f"\nresolved by π_C: {'yes' if resolved else 'no'}"
    text += f"\ndirections: {', '.join(str(d) for d in res.directions)}"
    if args.format == "dot":
        return emit_graph(union_graph, "dot", "union")
    doc = {
        "gamma": eqt_to_doc(res.gamma),
        "union": eqt_to_doc(res.union),
        "chi_attained": attained,
        "resolved_by_pi_C": resolved,
        "directions": [str(d) for d in res.directions],
    }
    return _emit(args, text, doc)


def cmd_cs_index(args) -> str:
    w = parse_form(_form_text(args))
    sep = None
    if args.separatrix:
        (P,) = parse_polys([args.separatrix], field=w.field)
        if any(j for _, j in P.terms):
            raise InputError("the separatrix is given as y = eta(x): pass eta as a polynomial in x")
        sep = P
        if P.field is not w.field and P.field.is_extension_of(w.field):
            w = w.lift(P.field)
    idx = camacho_sad_index(w, sep)
    return _emit(args, f"Camacho-Sad index: {idx}", {"index": str(idx)})


def _lambda_model(args) -> LogModel:
    if not args.lam:
        raise InputError("--lambda is required")
    parts = _curve_parts(args)
    return LogModel(parts, parse_lambda(args.lam), args.ramify)


def cmd_hpoly(args) -> str:
    m = _lambda_model(args)
    lines, docs = [], []
    for V in m.vertices:
        h = h_polynomial(m, V)
        st = discriminant_test(h) if V.b >= 2 else "n/a"
        lines.append(
            f"E~{V.id + 1}: level {V.p} (v={Fraction(V.p, m.n)}), {h.case}, b={h.b}; "
            f"points [{', '.join(_elem(c, args.precision) for c in h.points)}]; "
            f"H = [{', '.join(_elem(c, args.precision) for c in h.H)}]; discriminant {st}"
        )
        docs.append({
            "vertex": V.id + 1,
            "level": V.p,
            "v": str(Fraction(V.p, m.n)),
            "case": h.case,
            "b": h.b,
            "points": [str(c) for c in h.points],
            "H": [str(c) for c in h.H],
            "Lambda": str(h.Lambda),
            "discriminant": st,
        })
    return _emit(args, f"n = {m.n}\n" + "\n".join(lines), {"n": m.n, "divisors": docs})


def cmd_uc(args) -> str:
    if not args.lam:
        raise InputError("--lambda is required")
    parts = _curve_parts(args)
    rep = membership_UC(parts, parse_lambda(args.lam), args.ramify)
    doc = {
        "verdict": rep.verdict,
        "divisors": [{"v": str(Fraction(h.p, h.n)), "case": h.case, "discriminant": st} for h, st in rep.divisors],
        "reasons": rep.reasons,
    }
    if rep.verdict == "in":
        text = "in U_C"
    elif rep.verdict == "out":
        text = f"out of U_C: {rep.reasons[0]}"
    elif rep.verdict == "empty":
        text = f"U_C empty: {rep.reasons[0]}"
    else:
        text = "undetermined-resonance: " + "; ".join(rep.reasons)
    out = _emit(args, text, doc)
    if rep.verdict == "undetermined-resonance":
        raise Undetermined(out)
    return out


def cmd_gstar(args) -> str:
    w, parts = _form_and_curve(args, curve_required=True)
    rep = gstar_check(w, parts, args.ramify)
    text = rep.verdict + ("".join(f"\n  {r}" for r in rep.reasons))
    out = _emit(args, text, {"verdict": rep.verdict, "reasons": rep.reasons, "n": rep.n})
    if rep.verdict == "undetermined":
        raise Undetermined(out)
    return out


def cmd_corpus(args) -> str:
    from .corpus import run_corpus

    only = [s.strip() for s in args.only.split(",")] if args.only else None
    ok, text = run_corpus(only, args.expected)
    if not ok:
        raise CorpusFailure(text)
    return text


class CorpusFailure(Exception):
    pass


COMMANDS: Dict[str, Callable] = {
    "polygon": cmd_polygon,
    "puiseux": cmd_puiseux,
    "equis": cmd_equis,
    "graph": cmd_graph,
    "kind": cmd_kind,
    "chi": cmd_chi,
    "ramify": cmd_ramify,
    "unramify": cmd_unramify,
    "polar": cmd_polar,
    "wp": cmd_wp,
    "cs-index": cmd_cs_index,
    "hpoly": cmd_hpoly,
    "uc": cmd_uc,
    "gstar": cmd_gstar,
    "corpus": cmd_corpus,
}

# the module operation each command delegates to, named in error messages
OPERATIONS = {
    "polygon": "puiseux.newton_polygon / foliation.foliation_polygon",
    "puiseux": "puiseux.puiseux_expand",
    "equis": "puiseux.joint_equisingularity",
    "graph": "dualgraph.build_dual_graph",
    "kind": "dualgraph.is_kind",
    "chi": "dualgraph.chi_graph",
    "ramify": "dualgraph.ramify_graph",
    "unramify": "dualgraph.unramify_equising",
    "polar": "foliation.polar_curve",
    "wp": "foliation.generic_polar_equisingularity",
    "cs-index": "foliation.camacho_sad_index",
    "hpoly": "logmodel.h_polynomial",
    "uc": "logmodel.membership_UC",
    "gstar": "foliation.gstar_check",
    "corpus": "cli.corpus",
}


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="polarkind", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def curve_opts(p, eqt=False, dg=False):
        p.add_argument("--curve", action="append", help="curve equation; repeat for several parts")
        p.add_argument("--curve-file", help=".crv file, one equation per line")
        if eqt:
            p.add_argument("--eqt", help=".eqt EquisType document")
        if dg:
            p.add_argument("--dg", help=".dg dual graph (DOT or structured JSON)")

    def form_opts(p):
        p.add_argument("--form", help="1-form 'A dx + B dy' or 'd(f)'")
        p.add_argument("--form-file", help=".frm file")

    for name in ("polygon",):
        p = sub.add_parser(name, parents=[common], help="Newton polygon of a curve or a foliation")
        curve_opts(p)
        form_opts(p)
    p = sub.add_parser("puiseux", parents=[common], help="Puiseux expansions of every branch")
    curve_opts(p)
    p = sub.add_parser("equis", parents=[common], help="equisingularity type")
    curve_opts(p, eqt=True)
    for name, helptext in (("graph", "dual graph"), ("kind", "kind predicate"), ("chi", "graph of C with a perfect adjoint")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        curve_opts(p, eqt=True, dg=True)
    p = sub.add_parser("ramify", parents=[common], help="dual graph after x = u^n")
    curve_opts(p, eqt=True)
    p = sub.add_parser("unramify", parents=[common], help="type of the image of a curve under x = u^n")
    curve_opts(p)
    p = sub.add_parser("polar", parents=[common], help="polar curve in one direction")
    form_opts(p)
    p.add_argument("--direction", default="1:1", help="direction a:b")
    p = sub.add_parser("wp", parents=[common], help="generic polar type and the chi prediction")
    form_opts(p)
    curve_opts(p)
    p = sub.add_parser("cs-index", parents=[common], help="Camacho-Sad index along a smooth separatrix")
    form_opts(p)
    p.add_argument("--separatrix", help="eta(x) for the separatrix y = eta(x) (default y = 0)")
    for name, helptext in (("hpoly", "H polynomials of a logarithmic model"), ("uc", "membership of lambda in U_C")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        curve_opts(p)
        p.add_argument("--lambda", dest="lam", help="comma-separated residues, one per curve part")
    p = sub.add_parser("gstar", parents=[common], help="computable G* conditions")
    form_opts(p)
    curve_opts(p)
    p = sub.add_parser("corpus", parents=[common], help="run the golden corpus")
    p.add_argument("--only", help="comma-separated groups or item ids")
    p.add_argument("--expected", help="expected-values JSON file (default: bundled)")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    op = OPERATIONS[args.command]
    try:
        validate_options(args)
        text = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error ({args.command}): {exc}", file=err)
        return EXIT_INPUT
    except Undetermined as exc:
        print(str(exc), file=out)
        return EXIT_UNDETERMINED
    except CorpusFailure as exc:
        print(str(exc), file=out)
        return EXIT_INPUT
    except (UndecidedError, SamplingError, InsufficientTruncation) as exc:
        print(f"undetermined in {op}: {exc}", file=err)
        return EXIT_UNDETERMINED
    except (ParseError, DomainError) as exc:
        print(f"error in numfield.parse_expr (input of {args.command}): {exc}", file=err)
        return EXIT_INPUT
    except (InconsistentTypeError, FormError, GraphError, NotKindError,
            ExpansionError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error in {op}: {exc}", file=err)
        return EXIT_INPUT
    print(text, file=out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
