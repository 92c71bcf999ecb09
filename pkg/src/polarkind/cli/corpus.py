"""Golden corpus: worked examples with their expected invariants.

Each item computes a small JSON-able dictionary; the runner compares it key
by key with the expected-values document (bundled as
``corpus_expected.json``) and prints one status line per item, with the
expected and computed values on mismatch.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from ..dualgraph import build_dual_graph, chi_graph, is_kind, ramify_graph
from ..foliation import camacho_sad_index, generic_polar_equisingularity, gstar_check, is_resolved_by, parse_form
from ..logmodel import logarithmic_form, membership_UC, uc_nonempty
from ..numfield import parse_polys
from ..puiseux import BivariateGerm, BranchType, EquisType, joint_equisingularity
from .formats import describe_type, parse_lambda

__all__ = ["ITEMS", "run_corpus", "load_expected", "compute_item"]

F_PARTS = ["y", "y-x^2", "2*y-(1+sqrt(-3))*x^2"]
G_PARTS = ["y", "y-x^2", "y+x^2"]
PERTURBED_FORM = "(4*i*x*y^2+2*x^6*y)dx+(y^2-2*i*x^2*y-x^4-x^7)dy"
OMEGAS = {
    "omega1": "-11*x^10 dx + 5*y^4 dy",
    "omega2": "11*(-x^10+y^2*x^6) dx + 5*(y^4-x^7*y) dy",
    "omega3": "11*(-x^10+y*x^8) dx + 5*(y^4-x^9) dy",
}


def _product(parts):
    C = parts[0]
    for P in parts[1:]:
        C = C * P
    return C


def _graph_of(texts):
    parts = parse_polys(texts)
    return build_dual_graph(joint_equisingularity([("C", BivariateGerm.from_poly(P)) for P in parts]))


def _arrow_counts(g, kind: str) -> Dict[str, int]:
    out = {}
    for E, labels in sorted(g.arrows.items()):
        k = sum(1 for l in labels if l.rstrip("0123456789.") == kind)
        if k:
            out[f"E{E}"] = k
    return out


def _kind(texts):
    return lambda: {"kind": bool(is_kind(_graph_of(texts)))}


def _polar(form_text: str, curve_texts):
    w = parse_form(form_text)
    parts = parse_polys(curve_texts, field=w.field)
    return w, parts, generic_polar_equisingularity(w, _product(parts), curve_parts=parts)


def _chi_attained(res) -> bool:
    base = build_dual_graph(res.union.part("C"))
    return bool(is_kind(base)) and res.graph().isomorphic(chi_graph(base, "G"))


def _parabolas(form_text: str, parts_text, lam: str):
    def run():
        w, parts, res = _polar(form_text, parts_text)
        uc = membership_UC(parse_polys(parts_text), parse_lambda(lam))
        return {
            "gamma": describe_type(res.gamma),
            "chi_attained": _chi_attained(res),
            "uc": uc.verdict,
        }

    return run


def _perturbed():
    w, parts, res_f = _polar(PERTURBED_FORM, G_PARTS)
    lam = parse_lambda("1,-i,i")
    L = logarithmic_form(parts, lam)
    parts_l = [P.lift(L.field) if L.field.is_extension_of(P.field) else P for P in parts]
    res_l = generic_polar_equisingularity(L, _product(parts_l), curve_parts=parts_l)
    return {
        "gamma_F": describe_type(res_f.gamma),
        "gamma_L": describe_type(res_l.gamma),
        "unions_equal": res_f.graph().isomorphic(res_l.graph()),
        "uc": membership_UC(parse_polys(G_PARTS), lam).verdict,
        "gstar_F": gstar_check(w, parts).verdict,
    }


def _omega(name: str):
    def run():
        _, _, res = _polar(OMEGAS[name], ["y^5-x^11"])
        return {
            "gamma": describe_type(res.gamma),
            "resolved_by_pi_C": is_resolved_by(res.union),
            "polar_arrows": _arrow_counts(res.graph(), "G"),
        }

    return run


def _omega_distinct():
    graphs = [_polar(OMEGAS[k], ["y^5-x^11"])[2].graph() for k in sorted(OMEGAS)]
    return {
        "pairwise_non_isomorphic": all(
            not graphs[i].isomorphic(graphs[j]) for i in range(3) for j in range(i + 1, 3)
        )
    }


def _ramify(exps, n: int):
    def run():
        rg = ramify_graph(EquisType([BranchType(exps)]), n)
        g = rg.graph
        return {
            "vertices": len(g.vertices),
            "v": [str(g.vertices[E].v) for E in sorted(g.vertices)],
            "arrows": {f"E{E}": len(ls) for E, ls in sorted(g.arrows.items()) if ls},
            "associated": {f"E{E}": [f"E{x}" for x in xs] for E, xs in sorted(rg.association.items())},
        }

    return run


def _chi(texts):
    def run():
        g = _graph_of(texts)
        return {"adjoint_arrows": _arrow_counts(chi_graph(g), "Z")}

    return run


def _uc_nonempty(texts):
    return lambda: {"uc_nonempty": uc_nonempty(_graph_of(texts))}


def _cs(form_text: str):
    return lambda: {"index": str(camacho_sad_index(parse_form(form_text)))}


ITEMS: List[Tuple[str, str, Callable[[], dict]]] = [
    ("kind.cusp", "kind", _kind(["y^2-x^3"])),
    ("kind.y3-x5", "kind", _kind(["y^3-x^5"])),
    ("kind.y5-x11", "kind", _kind(["y^5-x^11"])),
    ("kind.three-lines", "kind", _kind(["y*(y-x)*(y+x)"])),
    ("parabolas.df", "parabolas", _parabolas("d(y*(y-x^2)*(2*y-(1+sqrt(-3))*x^2))", F_PARTS, "1,1,1")),
    ("parabolas.dg", "parabolas", _parabolas("d(y*(y-x^2)*(y+x^2))", G_PARTS, "1,1,1")),
    ("perturbed.omega", "perturbed", _perturbed),
    ("omega.1", "omega", _omega("omega1")),
    ("omega.2", "omega", _omega("omega2")),
    ("omega.3", "omega", _omega("omega3")),
    ("omega.distinct", "omega", _omega_distinct),
    ("ramify.cusp-n2", "ramify", _ramify((2, 3), 2)),
    ("ramify.4-6-7-n4", "ramify", _ramify((4, 6, 7), 4)),
    ("chi.cusp", "chi", _chi(["y^2-x^3"])),
    ("chi.two-cusps", "chi", _chi(["(y^2-x^5)*(y^2-4*x^5)"])),
    ("uc.cusp", "uc", _uc_nonempty(["y^2-x^3"])),
    ("uc.y3-x5", "uc", _uc_nonempty(["y^3-x^5"])),
    ("uc.y5-x11", "uc", _uc_nonempty(["y^5-x^11"])),
    ("cs.saddle", "cs", _cs("y dx + x dy")),
    ("cs.node", "cs", _cs("2*y dx + x dy")),
]


def load_expected(path: Optional[str] = None) -> dict:
    if path is None:
        text = resources.files(__package__).joinpath("corpus_expected.json").read_text()
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("the expected-values document must be a JSON object")
    return doc


def compute_item(item_id: str) -> dict:
    for iid, _, fn in ITEMS:
        if iid == item_id:
            return fn()
    raise KeyError(item_id)


def _select(only: Optional[List[str]]):
    if not only:
        return list(ITEMS)
    sel = [it for it in ITEMS if it[0] in only or it[1] in only]
    unknown = [o for o in only if not any(o in (it[0], it[1]) for it in ITEMS)]
    if unknown:
        raise ValueError(f"unknown corpus groups or items: {', '.join(unknown)}")
    return sel


def run_corpus(only: Optional[List[str]] = None, expected_path: Optional[str] = None) -> Tuple[bool, str]:
    """Run the selected items in id order; returns ``(all passed, report)``."""
    try:
        expected = load_expected(expected_path)
    except json.JSONDecodeError as exc:
        return False, f"corrupted expected-values document: {exc}"
    lines: List[str] = []
    ok = True
    for iid, group, fn in sorted(_select(only), key=lambda it: it[0]):
        exp = expected.get(iid)
        try:
            got = fn()
        except Exception as exc:  # report and continue: one broken item must not hide the rest
            ok = False
            lines.append(f"FAIL {iid}: {type(exc).__name__}: {exc}")
            continue
        if not isinstance(exp, dict):
            ok = False
            lines.append(f"FAIL {iid}: no expected values; computed {json.dumps(got, sort_keys=True)}")
            continue
        diffs = []
        for key in sorted(set(exp) | set(got)):
            if exp.get(key) != got.get(key):
                diffs.append(f"  {key}: expected {json.dumps(exp.get(key), sort_keys=True)}, "
                             f"computed {json.dumps(got.get(key), sort_keys=True)}")
        if diffs:
            ok = False
            lines.append(f"FAIL {iid}")
            lines.extend(diffs)
        else:
            lines.append(f"PASS {iid}")
    passed = sum(1 for l in lines if l.startswith("PASS"))
    total = sum(1 for l in lines if l.startswith(("PASS", "FAIL")))
    lines.append(f"{passed}/{total} corpus items pass")
    return ok, "\n".join(lines)
