"""Built-in catalog of Lie algebras, structures, curves and expected results.

Each entry is declared as plain JSON-compatible data and built by
:func:`entry_from_json`, so user-supplied manifold files follow exactly the
same schema::

    {
      "name": "...", "mode": "real" | "complex", "presentation": "(0^3,12,14,24)",
      "validity": "nilpotent" | "completely-solvable" | "compact-factor" | "unknown",
      "structures": {"J": {"coframe": ["e1+i*e2", ...]} | {"action": [...]} | {"matrix": [[...]]}},
      "forms": {"omega": "e12+e34" | [{"t": 0, "tb": 0, "form": "..."}, ...]},
      "curves": {"c": {"kind": "coframe", "structure": "J",
                       "changes": {"1": [{"t": 1, "tb": 0, "form": "e1-i*e2"}]}}
                 | {"kind": "endomorphism", "structure": "J", "direction": "b13" | [[...]]}},
      "expectations": [{"quantity": "betti", "args": {"k": 1}, "expected": 4, "note": "..."}]
    }

Matrix entries and scalars are strings such as ``"1/2"`` or ``"-i"``.
Complex-mode structures may omit ``structures``; the standard coframe
``e^{2a-1} + i e^{2a}`` is then registered as ``"J"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .cohomology import (betti_numbers, cohomology_space, cup_map, stage_report, type_subgroup)
from .complexstruct import (AlmostComplexStructure, acs_from_coframe, acs_from_coframe_action,
                            complex_structure_equations, format_psi_form, is_integrable, nijenhuis)
from .deform import (CoframeCurve, EndomorphismCurve, evaluate_curve, named_direction, obstruction,
                     semicontinuity_scan, validate_twist_formula)
from .exterior import Form, divided_power, e, format_form, parse_form, wedge
from .hermitian import HermitianData, form_predicates, harmonic_space
from .lie import LieAlgebraPresentation, check_presentation, parse_presentation
from .scalars import DEFAULT_ORDER, TSeries, format_scalar, parse_scalar

__all__ = [
    "ZooEntry",
    "Expectation",
    "UnknownEntryError",
    "zoo_catalog",
    "zoo_lookup",
    "zoo_names",
    "entry_from_json",
    "evaluate_expectation",
    "verify_entry",
    "ExpectationResult",
    "standard_coframe",
]

VALIDITY = ("nilpotent", "completely-solvable", "compact-factor", "unknown")


class UnknownEntryError(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no catalog entry named {self.name!r}; known: {', '.join(zoo_names())}"


@dataclass(frozen=True)
class Expectation:
    quantity: str
    args: dict
    expected: Any
    note: str = ""

    def as_dict(self) -> dict:
        return {"quantity": self.quantity, "args": dict(self.args), "expected": self.expected, "note": self.note}


@dataclass
class ZooEntry:
    name: str
    title: str
    mode: str
    presentation_text: str
    presentation: LieAlgebraPresentation
    validity: str
    structures: dict[str, AlmostComplexStructure] = field(default_factory=dict)
    forms: dict[str, Form] = field(default_factory=dict)
    curves: dict[str, object] = field(default_factory=dict)
    expectations: list[Expectation] = field(default_factory=list)
    source: dict = field(default_factory=dict)

    def structure(self, name: str | None = None) -> AlmostComplexStructure:
        if name is None:
            if not self.structures:
                raise KeyError(f"{self.name} has no almost-complex structure")
            return next(iter(self.structures.values()))
        try:
            return self.structures[name]
        except KeyError:
            raise KeyError(f"{self.name} has no structure {name!r}") from None

    def form(self, name: str) -> Form:
        try:
            return self.forms[name]
        except KeyError:
            raise KeyError(f"{self.name} has no form {name!r}") from None

    def curve(self, name: str | None = None):
        if name is None:
            if not self.curves:
                raise KeyError(f"{self.name} has no curve")
            return next(iter(self.curves.values()))
        try:
            return self.curves[name]
        except KeyError:
            raise KeyError(f"{self.name} has no curve {name!r}") from None

    def to_json(self) -> dict:
        return dict(self.source)


# --- building from data --------------------------------------------------------------------


def _matrix(rows) -> list[list]:
    return [[parse_scalar(str(x)) for x in r] for r in rows]


def _series_form(spec, dim: int, order: int = DEFAULT_ORDER) -> Form:
    if isinstance(spec, str):
        return parse_form(spec, dim)
    out = None
    for term in spec:
        coef = TSeries.t(order) ** int(term.get("t", 0)) * TSeries.tb(order) ** int(term.get("tb", 0))
        f = parse_form(term["form"], dim).map_coeffs(lambda c: coef * c)
        out = f if out is None else out + f
    if out is None:
        raise ValueError("empty series form")
    return out


def _structure(spec: dict, dim: int) -> AlmostComplexStructure:
    if "coframe" in spec:
        return acs_from_coframe(dim, [parse_form(s, dim) for s in spec["coframe"]])
    if "action" in spec:
        return acs_from_coframe_action([parse_form(s, dim) for s in spec["action"]])
    if "matrix" in spec:
        return AlmostComplexStructure(_matrix(spec["matrix"]))
    raise ValueError("structure needs one of 'coframe', 'action', 'matrix'")


def _curve(spec: dict, dim: int, structures: dict):
    kind = spec.get("kind")
    base = structures[spec["structure"]]
    if kind == "coframe":
        changes = {int(a): _series_form(v, dim) for a, v in spec.get("changes", {}).items()}
        changes = {a: (f if any(isinstance(c, TSeries) for _, c in f.items())
                       else f.map_coeffs(lambda c: TSeries.const(c))) for a, f in changes.items()}
        return CoframeCurve.perturb(base.coframe, changes)
    if kind == "endomorphism":
        d = spec["direction"]
        L = named_direction(d, dim // 2) if isinstance(d, str) else _matrix(d)
        return EndomorphismCurve(base, L)
    raise ValueError(f"unknown curve kind {kind!r}")


def standard_coframe(n: int) -> list[Form]:
    from .scalars import I

    return [e(2 * n, 2 * a - 1) + e(2 * n, 2 * a).scale(I) for a in range(1, n + 1)]


def entry_from_json(data: dict) -> ZooEntry:
    """Build an entry (catalog or user-supplied) from the JSON schema in the module docstring."""
    mode = data.get("mode", "real")
    validity = data.get("validity", "unknown")
    if validity not in VALIDITY:
        raise ValueError(f"validity must be one of {VALIDITY}")
    p = parse_presentation(data["presentation"], mode, name=data.get("name", ""))
    N = p.dim
    structures: dict[str, AlmostComplexStructure] = {}
    for name, spec in data.get("structures", {}).items():
        structures[name] = _structure(spec, N)
    if mode == "complex" and not structures:
        structures["J"] = acs_from_coframe(N, standard_coframe(N // 2))
    forms = {name: _series_form(spec, N) for name, spec in data.get("forms", {}).items()}
    curves = {name: _curve(spec, N, structures) for name, spec in data.get("curves", {}).items()}
    exps = [Expectation(x["quantity"], dict(x.get("args", {})), x["expected"], x.get("note", ""))
            for x in data.get("expectations", [])]
    return ZooEntry(data.get("name", ""), data.get("title", ""), mode, data["presentation"], p, validity,
                    structures, forms, curves, exps, source=data)


# --- evaluating expectations -------------------------------------------------------------------


def _cup_image(entry: ZooEntry, args: dict):
    """``c`` with ``[gamma ^ source] = c [target]``, or None when not proportional."""
    p = entry.presentation
    gamma = divided_power(entry.form(args["form"]), args.get("power", 1))
    src = parse_form(args["source"], p.dim)
    tgt = parse_form(args["target"], p.dim)
    H = cohomology_space(p, gamma.degree + src.degree)
    a = H.coordinates(wedge(gamma, src))
    b = H.coordinates(tgt)
    piv = next((i for i, x in enumerate(b) if x != 0), None)
    if piv is None:
        return None
    c = a[piv] / b[piv]
    if any(x != c * y for x, y in zip(a, b)):
        return None
    return format_scalar(c)


def _at(entry: ZooEntry, args: dict) -> AlmostComplexStructure:
    if "curve" in args:
        return evaluate_curve(entry.curve(args["curve"]), parse_scalar(str(args.get("t", "0"))))
    return entry.structure(args.get("structure"))


def evaluate_expectation(entry: ZooEntry, exp: Expectation):
    """The engine's value for one expectation record, in the same JSON-compatible shape."""
    p = entry.presentation
    a = exp.args
    q = exp.quantity
    if q == "betti":
        return betti_numbers(p)[a["k"]]
    if q == "integrable":
        return is_integrable(p, _at(entry, a))
    if q == "nijenhuis_nonzero":
        return tuple(a["pair"]) in nijenhuis(p, _at(entry, a))
    if q == "stage":
        r = stage_report(p, _at(entry, a), a["k"], currents=a.get("currents", False))
        return getattr(r, a["field"])
    if q == "subgroup_dim":
        types = [tuple(t) for t in a["types"]]
        return type_subgroup(p, _at(entry, a), types, real=a.get("real", False), degree=a["k"]).dim
    if q == "predicate":
        return getattr(form_predicates(p, _at(entry, a), entry.form(a["form"])), a["flag"])
    if q == "d":
        return format_form(p.d(entry.form(a["form"])))
    if q == "divided_power":
        return format_form(divided_power(entry.form(a["form"]), a["power"]))
    if q == "cup":
        m = cup_map(p, divided_power(entry.form(a["form"]), a.get("power", 1)), a["k"])
        return getattr(m, a["field"])
    if q == "cup_image":
        return _cup_image(entry, a)
    if q == "scan":
        row = semicontinuity_scan(p, entry.curve(a["curve"]), [parse_scalar(str(a["t"]))])[0]
        return getattr(row, a["field"])
    if q == "harmonic_dim":
        return len(harmonic_space(HermitianData(p, _at(entry, a)), a["k"]))
    if q == "structure_equation":
        J = _at(entry, a)
        return format_psi_form(complex_structure_equations(p, J)[a["a"] - 1], J.n)
    if q == "obstruction":
        L = named_direction(a["direction"], p.dim // 2)
        r = obstruction(p, _at(entry, a), entry.form(a["form"]), L, a.get("order", 1), a["mode"])
        return r.solvable
    if q == "twist_formula":
        n = p.dim // 2
        A = [[0] * n for _ in range(n)]
        B = [[0] * n for _ in range(n)]
        A[0][1], A[0][2] = parse_scalar(str(a["a12"])), parse_scalar(str(a["a13"]))
        B[0][1], B[0][2] = parse_scalar(str(a["b12"])), parse_scalar(str(a["b13"]))
        return validate_twist_formula(p, _at(entry, a), entry.form(a["form"]), A, B).equal
    if q == "structure_flag":
        return getattr(check_presentation(p), a["flag"])
    raise ValueError(f"unknown expectation quantity {q!r}")


@dataclass
class ExpectationResult:
    entry: str
    expectation: Expectation
    actual: Any = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.actual == self.expectation.expected

    def as_dict(self) -> dict:
        d = self.expectation.as_dict()
        d.update(entry=self.entry, actual=self.actual, passed=self.passed, error=self.error)
        return d


def verify_entry(entry: ZooEntry) -> list[ExpectationResult]:
    out = []
    for x in entry.expectations:
        try:
            out.append(ExpectationResult(entry.name, x, evaluate_expectation(entry, x)))
        except (ValueError, ArithmeticError, KeyError) as exc:
            out.append(ExpectationResult(entry.name, x, error=f"{type(exc).__name__}: {exc}"))
    return out


# --- the catalog ----------------------------------------------------------------------------------


def _x(quantity, expected, note="", **args):
    return {"quantity": quantity, "args": args, "expected": expected, "note": note}


def _stage(structure, k, fld, expected, note="", **extra):
    return _x("stage", expected, note, structure=structure, k=k, field=fld, **extra)


_CF3 = ["e1+i*e2", "e3+i*e4", "e5+i*e6"]
_CF3_SPLIT = ["e1+i*e4", "e2+i*e5", "e3+i*e6"]

_DATA: list[dict] = [
    {
        "name": "n1",
        "title": "six-dimensional nilpotent algebra (0^3,12,14,24)",
        "mode": "real",
        "presentation": "(0^3,12,14,24)",
        "validity": "nilpotent",
        "structures": {"J": {"coframe": _CF3}},
        "expectations": [
            _x("betti", 5, "second Betti number", k=2),
            _x("integrable", True, "coframe e1+ie2, e3+ie4, e5+ie6 is integrable", structure="J"),
            _x("subgroup_dim", 4, "(2,0)+(0,2) real subgroup", structure="J", k=2, types=[[2, 0], [0, 2]], real=True),
            _x("subgroup_dim", 3, "(1,1) real subgroup", structure="J", k=2, types=[[1, 1]], real=True),
            _stage("J", 2, "plus_minus_intersection", 2, "the two subgroups meet in dimension 2"),
            _stage("J", 2, "full", True, "subgroups span H^2"),
            _stage("J", 2, "pure", False, "sum is not direct"),
            _x("harmonic_dim", 5, "harmonic 2-forms for the default metric", structure="J", k=2),
        ],
    },
    {
        "name": "n2",
        "title": "six-dimensional nilpotent algebra (0^4,12,34)",
        "mode": "real",
        "presentation": "(0^4,12,34)",
        "validity": "nilpotent",
        "structures": {"J": {"coframe": _CF3}},
        "expectations": [
            _x("betti", 8, "second Betti number", k=2),
            _x("integrable", True, "coframe e1+ie2, e3+ie4, e5+ie6 is integrable", structure="J"),
            _stage("J", 2, "h_minus", 2, "(2,0)+(0,2) real subgroup"),
            _stage("J", 2, "h_plus", 2, "(1,1) real subgroup"),
            _stage("J", 2, "plus_minus_intersection", 0, "trivial intersection"),
            _stage("J", 2, "real_sum_dim", 4, "the subgroups span only 4 of 8 dimensions"),
            _stage("J", 2, "pure", True, "direct sum"),
            _stage("J", 2, "full", False, "not spanning"),
        ],
    },
    {
        "name": "kt4",
        "title": "four-dimensional nilpotent algebra (0^2,14,12)",
        "mode": "real",
        "presentation": "(0,0,14,12)",
        "validity": "nilpotent",
        "structures": {
            "J": {"action": ["-e2", "e1", "-e4", "e3"]},
            "Jprime": {"action": ["-e3", "-e4", "e1", "e2"]},
        },
        "expectations": [
            _x("betti", 2, "H^1 = <e1, e2>", k=1),
            _x("betti", 2, "H^2 = <e13, e24>", k=2),
            _x("integrable", False, "J is not integrable", structure="J"),
            _x("nijenhuis_nonzero", True, "N(theta_1, theta_3) is nonzero", structure="J", pair=[1, 3]),
            _stage("J", 2, "pure", True, "J is pure at stage 2"),
            _stage("J", 2, "full", True, "J is full at stage 2"),
            _stage("Jprime", 2, "h_minus", 0, "no anti-invariant classes for J'"),
        ],
    },
    {
        "name": "ft6",
        "title": "six-dimensional nilpotent algebra (0^4,12,13)",
        "mode": "real",
        "presentation": "(0^4,12,13)",
        "validity": "nilpotent",
        "structures": {
            "J": {"action": ["-e5", "-e3", "e2", "-e6", "e1", "e4"]},
            "Jprime": {"action": ["-e2", "e1", "-e4", "e3", "-e6", "e5"]},
        },
        "forms": {"omega": "e15+e23+e46"},
        "expectations": [
            _x("betti", 4, "H^1 = <e1, e2, e3, e4>", k=1),
            _stage("Jprime", 2, "pure", False, "J' is not pure at stage 2"),
            _stage("Jprime", 2, "full", False, "J' is not full at stage 2"),
            _x("predicate", True, "omega is J-compatible", structure="J", form="omega", flag="compatible"),
            _x("d", "-e134", "d omega", form="omega"),
            _x("predicate", True, "d(omega^2) = 0", structure="J", form="omega", flag="semi_kahler"),
            _x("predicate", False, "J is not integrable", structure="J", form="omega", flag="balanced"),
            _x("divided_power", "e1235-e1456+e2346", "omega^2/2", form="omega", power=2),
            _x("cup", False, "omega^2 kills [e1] since e12346 = d e3456", form="omega", power=2, k=1, field="injective"),
        ],
    },
    {
        "name": "iwasawa",
        "title": "complex Heisenberg algebra, d phi^3 = -phi^1 ^ phi^2",
        "mode": "complex",
        "presentation": "(0,0,-12)",
        "validity": "nilpotent",
        "forms": {"omega": "e12+e34+e56"},
        "expectations": [
            _x("betti", 4, "first Betti number", k=1),
            _x("betti", 4, "fifth Betti number", k=5),
            _x("structure_equation", "-phi[1,2]", "d phi^3", structure="J", a=3),
            _x("integrable", True, "holomorphically parallelizable", structure="J"),
            _stage("J", 1, "complex_pure", True, "complex pure at stage 1"),
            _stage("J", 1, "complex_full", True, "complex full at stage 1"),
            _x("predicate", True, "omega = (i/2) sum phi^a ^ conj(phi^a) is balanced", structure="J", form="omega", flag="balanced"),
            _x("predicate", False, "omega is not closed", structure="J", form="omega", flag="closed"),
            _x("cup", True, "omega^2: H^1 -> H^5", form="omega", power=2, k=1, field="iso"),
        ],
    },
    {
        "name": "etabeta5",
        "title": "ten-dimensional complex nilpotent algebra, d phi^5 = -phi^12 - phi^34",
        "mode": "complex",
        "presentation": "(0,0,0,0,-12-34)",
        "validity": "nilpotent",
        "forms": {"omega": "e[1,2]+e[3,4]+e[5,6]+e[7,8]+e[9,10]"},
        "curves": {"c": {"kind": "coframe", "structure": "J",
                         "changes": {"1": [{"t": 1, "tb": 0, "form": "e[1]-i*e[2]"}]}}},
        "expectations": [
            _x("betti", 8, "first Betti number", k=1),
            _x("betti", 8, "ninth Betti number", k=9),
            _x("betti", 26, "second Betti number", k=2),
            _x("integrable", True, "complex structure", structure="J"),
            _stage("J", 2, "h_minus", 10, "anti-invariant classes at t = 0"),
            _stage("J", 2, "h_plus", 16, "invariant classes at t = 0"),
            _x("cup", True, "omega^4: H^1 -> H^9", form="omega", power=4, k=1, field="iso"),
            _x("structure_equation", "-4/3*phi[1,2]-2/3*phi[2,1']-phi[3,4]", "d phi^5_t at t = 1/2",
               curve="c", t="1/2", a=5),
            _x("scan", 12, "h^- jumps up at t = 1/2", curve="c", t="1/2", field="h_minus"),
            _x("scan", False, "not pure at t = 1/2", curve="c", t="1/2", field="pure"),
        ],
    },
    {
        "name": "s3t3",
        "title": "su(2) + R^3, (23,-13,12,0^3)",
        "mode": "real",
        "presentation": "(23,-13,12,0^3)",
        "validity": "compact-factor",
        "structures": {"J": {"coframe": _CF3_SPLIT}},
        "curves": {"c": {"kind": "coframe", "structure": "J",
                         "changes": {"1": [{"t": 1, "tb": 0, "form": "e1-i*e4"}]}}},
        "expectations": [
            _x("betti", 3, "second Betti number", k=2),
            _stage("J", 2, "h_plus", 3, "invariant classes at t = 0"),
            _stage("J", 2, "h_minus", 3, "anti-invariant classes at t = 0"),
            _x("scan", 1, "h^+ drops at t = i/4", curve="c", t="i/4", field="h_plus"),
        ],
    },
    {
        "name": "solv6",
        "title": "completely solvable algebra (0,-12,34,0,15,46)",
        "mode": "real",
        "presentation": "(0,-12,34,0,15,46)",
        "validity": "completely-solvable",
        "structures": {"J": {"coframe": _CF3_SPLIT}},
        "forms": {
            "omega": "e14+e25+e36",
            "omega_t": [{"t": 0, "form": "e14+e25+e36"}, {"t": 1, "form": "e26"}],
            "omega_fifth": "e14+e25+e36+1/5*e26",
        },
        "curves": {"c": {"kind": "coframe", "structure": "J",
                         "changes": {"2": [{"t": 1, "tb": 0, "form": "i*e6"}]}}},
        "expectations": [
            _x("betti", 2, "first Betti number", k=1),
            _x("betti", 2, "fifth Betti number", k=5),
            _x("predicate", True, "omega is almost-Kahler", structure="J", form="omega", flag="almost_kahler"),
            _x("divided_power", "-e1245-(t)*e1246-e1346-e2356", "omega_t^2/2 = omega^2/2 - t e1246",
               form="omega_t", power=2),
            _x("cup", True, "omega_t^2: H^1 -> H^5 at t = 1/5", form="omega_fifth", power=2, k=1, field="iso"),
            _x("cup_image", "-1", "[e1] goes to -[e12356]", form="omega_fifth", power=2, source="e1", target="e12356"),
            _x("cup_image", "-1", "[e4] goes to -[e23456]", form="omega_fifth", power=2, source="e4", target="e23456"),
            _x("structure_flag", True, "solvable, not nilpotent", flag="solvable"),
        ],
    },
    {
        "name": "n6c1",
        "title": "solvable algebra (12,0,-36,24,56,0)",
        "mode": "real",
        "presentation": "(12,0,-36,24,56,0)",
        "validity": "completely-solvable",
        "structures": {"J": {"action": ["-e4", "-e5", "-e6", "e1", "e2", "e3"]}},
        "forms": {"alpha": "e14"},
        "expectations": [
            _x("twist_formula", True, "expansion agrees on the b13 direction", structure="J", form="alpha",
               a12=0, a13=0, b12=0, b13=1),
            _x("obstruction", True, "free beta_1 always solves the literal first-order equation",
               structure="J", form="alpha", direction="b13", mode="paper_literal", order=1),
            _x("obstruction", False, "no J-invariant correction closes eta_t at first order",
               structure="J", form="alpha", direction="b13", mode="projected", order=1),
        ],
    },
    {
        "name": "t4",
        "title": "abelian R^4",
        "mode": "real",
        "presentation": "(0^4)",
        "validity": "nilpotent",
        "structures": {"J": {"coframe": ["e1+i*e2", "e3+i*e4"]}},
        "forms": {"omega": "e12+e34"},
        "expectations": [
            _x("betti", 6, "binomial(4,2)", k=2),
            _stage("J", 2, "pure", True, "torus is pure"),
            _stage("J", 2, "full", True, "torus is full"),
            _x("predicate", True, "flat Kahler form", structure="J", form="omega", flag="almost_kahler"),
        ],
    },
    {
        "name": "t6",
        "title": "abelian R^6",
        "mode": "real",
        "presentation": "(0^6)",
        "validity": "nilpotent",
        "structures": {"J": {"coframe": _CF3}},
        "forms": {"omega": "e12+e34+e56"},
        "expectations": [
            _x("betti", 20, "binomial(6,3)", k=3),
            _stage("J", 2, "h_plus", 9, "all (1,1) classes"),
            _stage("J", 2, "h_minus", 6, "all (2,0)+(0,2) classes"),
            _x("cup", True, "hard Lefschetz on H^2", form="omega", power=1, k=2, field="iso"),
        ],
    },
]


@lru_cache(maxsize=None)
def _entries() -> tuple[ZooEntry, ...]:
    return tuple(entry_from_json(d) for d in _DATA)


def zoo_names() -> list[str]:
    return [d["name"] for d in _DATA]


def zoo_catalog() -> list[ZooEntry]:
    return list(_entries())


def zoo_lookup(name: str) -> ZooEntry:
    for x in _entries():
        if x.name == name:
            return x
    raise UnknownEntryError(name)
