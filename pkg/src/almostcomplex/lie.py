"""Lie algebras given by structure equations, and their Chevalley-Eilenberg complex.

A presentation lists ``d e^k`` for a coframe ``e^1, ..., e^N``.  Brackets of
the dual frame follow from ``e^k([theta_i, theta_j]) = -(d e^k)(theta_i, theta_j)``.

Text input uses Salamon's compact notation, for instance ``"(0^3, 12, 14, 24)"``.
In complex mode the entries are ``d phi^a`` for a coframe ``phi^a = e^{2a-1} + i e^{2a}``;
a trailing prime marks a conjugate, so ``12'`` is ``phi^1 ^ conj(phi^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .exterior import Form, basis, derivation, e, format_form, substitute
from .linalg import RowSpace
from .scalars import GaussQ, I, mpq, parse_scalar

__all__ = [
    "PresentationSyntaxError",
    "JacobiError",
    "Differential",
    "LieAlgebraPresentation",
    "StructureReport",
    "parse_presentation",
    "ce_differential",
    "check_presentation",
    "complex_coframe_images",
]

_ONE = mpq(1)
_HALF = mpq(1, 2)


class PresentationSyntaxError(ValueError):
    """Malformed structure equations; ``position`` is a 0-based offset into the text."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class JacobiError(ValueError):
    """``d^2 != 0`` on a coframe element; carries the element and ``d d e^k``."""

    def __init__(self, element: str, value: Form):
        self.element = element
        self.value = value
        super().__init__(f"d^2 {element} = {format_form(value)} != 0 (Jacobi identity fails)")


class Differential:
    """A graded derivation of degree +1 determined by its values on degree-1 generators.

    Works over any coefficient tower; per-degree matrices are built on demand
    and cached as lists of sparse columns indexed by lexicographic position.
    """

    def __init__(self, images: list[Form]):
        self.images = list(images)
        self.dim = len(self.images)
        for f in self.images:
            if f.dim != self.dim or (f and f.degree != 2):
                raise ValueError("differential images must be 2-forms in the same space")
        self._cols: dict[int, list[dict]] = {}

    def __call__(self, a: Form) -> Form:
        if a.dim != self.dim:
            raise ValueError(f"dimension mismatch: {a.dim} vs {self.dim}")
        if a.degree >= self.dim:
            return Form.zero(self.dim, self.dim)
        return derivation(a, self.images, 2)

    def columns(self, k: int) -> list[dict]:
        """Images of the degree-``k`` basis monomials as sparse vectors in degree ``k+1``."""
        cols = self._cols.get(k)
        if cols is None:
            if k < 0 or k >= self.dim:
                cols = [{} for _ in basis(self.dim, k)] if 0 <= k <= self.dim else []
            else:
                cols = [self(Form._raw(self.dim, k, {m: _ONE})).vector() for m in basis(self.dim, k)]
            self._cols[k] = cols
        return cols

    def is_zero(self) -> bool:
        return not any(self.images)


def _realify_images(cimages: list[Form], n: int) -> list[Form]:
    """Real differentials from complex ones on the standard coframe."""
    N = 2 * n
    subst = complex_coframe_images(n)
    out: list[Form] = []
    for a in range(n):
        dphi = substitute(cimages[a], subst)  # in the e-basis
        re_ = dphi.real_part()
        im_ = dphi.imag_part()
        out.append(re_)
        out.append(im_)
    for f in out:
        if f and f.dim != N:
            raise AssertionError("realification produced a form in the wrong space")
    return out


def complex_coframe_images(n: int) -> list[Form]:
    """psi^a = e^{2a-1} + i e^{2a} and psi^{n+a} = e^{2a-1} - i e^{2a} as e-basis 1-forms."""
    N = 2 * n
    out = []
    for sgn in (I, -I):
        for a in range(1, n + 1):
            out.append(Form(N, {(2 * a - 1,): _ONE, (2 * a,): sgn}))
    return out


class LieAlgebraPresentation:
    """Structure equations ``d e^1, ..., d e^N`` of a Lie algebra.

    Complex-mode presentations also keep the complex differentials of the
    standard coframe as ``complex_images`` (2-forms on ``psi^1..psi^{2n}``,
    where ``psi^{n+a}`` is the conjugate of ``psi^a``).
    """

    def __init__(self, images: list[Form], name: str = "", complex_images: list[Form] | None = None,
                 validate: bool = True):
        self.images = [f if f else Form.zero(len(images), 2) for f in images]
        self.dim = len(self.images)
        self.name = name
        self.complex_images = complex_images
        for f in self.images:
            if f.dim != self.dim:
                raise ValueError("every d e^k must be a 2-form on the same space")
            if f and f.degree != 2:
                raise ValueError("every d e^k must be a 2-form")
            if not f.is_real:
                raise ValueError("real presentation with non-real coefficients")
        self.d = Differential(self.images)
        if validate:
            bad = self.jacobi_failures()
            if bad:
                k, val = bad[0]
                raise JacobiError(f"e^{k}", val)

    @classmethod
    def from_complex(cls, cimages: list[Form], name: str = "", validate: bool = True):
        n = len(cimages)
        N = 2 * n
        for f in cimages:
            if f and (f.dim != N or f.degree != 2):
                raise ValueError("complex differentials must be 2-forms on 2n generators")
        cimages = [f if f else Form.zero(N, 2) for f in cimages]
        real = _realify_images(cimages, n)
        return cls(real, name=name, complex_images=cimages, validate=validate)

    @property
    def n(self) -> int:
        return self.dim // 2

    @property
    def is_complex_mode(self) -> bool:
        return self.complex_images is not None

    def jacobi_failures(self) -> list[tuple[int, Form]]:
        out = []
        for k, f in enumerate(self.images, start=1):
            dd = self.d(f)
            if dd:
                out.append((k, dd))
        return out

    def e(self, *indices: int) -> Form:
        return e(self.dim, *indices)

    def bracket(self, i: int, j: int) -> dict[int, object]:
        """``[theta_i, theta_j]`` as a sparse vector over frame indices (0-based)."""
        out = {}
        for k, f in enumerate(self.images):
            c = f.coeff(i + 1, j + 1)
            if c != 0:
                out[k] = -c
        return out

    @cached_property
    def structure_constants(self) -> list[list[dict]]:
        return [[self.bracket(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def ad_matrix(self, i: int) -> list[list]:
        """Matrix of ``ad theta_i`` in the frame (columns are images)."""
        N = self.dim
        m = [[mpq(0)] * N for _ in range(N)]
        for j in range(N):
            for k, c in self.structure_constants[i][j].items():
                m[k][j] = c
        return m

    def to_text(self) -> str:
        """Salamon-style text that :func:`parse_presentation` reads back."""
        parts = []
        for f in self.images:
            if not f:
                parts.append("0")
                continue
            s = ""
            for idx, c in f.terms():
                pair = "".join(map(str, idx)) if self.dim <= 9 else f"{idx[0]}^{idx[1]}"
                cs = _coef_text(c)
                if cs.startswith("-"):
                    s += "-" + cs[1:] + pair
                else:
                    s += ("+" if s else "") + cs + pair
            parts.append(s)
        return "(" + ", ".join(parts) + ")"

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"LieAlgebraPresentation({label}{self.to_text()})"


def _coef_text(c) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    q = mpq(c)
    txt = f"{q.numerator}" if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return txt + "*"


def ce_differential(p: LieAlgebraPresentation, a: Form) -> Form:
    return p.d(a)


# --- parser ----------------------------------------------------------------

_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
_SUPER_RE = re.compile(r"([⁰¹²³⁴⁵⁶⁷⁸⁹]+)")
_RAT = r"\d+(?:/\d+)?"
_PREFIX_RE = re.compile(
    rf"\s*(?:(?P<c>{_RAT})\s*\*?\s*)?d\s*(?:phi|φ|e)\s*\^?\s*\{{?\s*(?P<k>\d+)\s*\}}?\s*="
)
_COEF_RE = re.compile(rf"(?:(?P<rat>{_RAT})\s*(?P<ri>i)?\s*\*|(?P<i>i)\s*\*?)\s*")
_CARET_RE = re.compile(r"(?P<a>\d+)(?P<ca>'?)\s*\^\s*(?P<b>\d+)(?P<cb>'?)")
_COMPACT_RE = re.compile(r"(?P<a>\d)(?P<ca>'?)(?P<b>\d)(?P<cb>'?)")


def _normalize(text: str) -> str:
    # keep offsets stable: every replacement is one character for one character,
    # except superscript runs, which gain a caret
    text = text.replace("−", "-").replace("′", "'").replace(" ", " ")
    return _SUPER_RE.sub(lambda m: "^" + m.group(1).translate(_SUPERSCRIPTS), text)


def _split_entries(body: str, offset: int, text: str) -> list[tuple[str, int]]:
    entries = []
    start = 0
    for pos, ch in enumerate(body + ","):
        if ch == ",":
            entries.append((body[start:pos], offset + start))
            start = pos + 1
    for chunk, at in entries:
        if not chunk.strip():
            raise PresentationSyntaxError("empty entry", at, text)
    return entries


def parse_presentation(text: str, mode: str = "real", name: str = "",
                       validate: bool = True) -> LieAlgebraPresentation:
    """Read structure equations in Salamon notation.

    ``mode="real"`` gives ``d e^k``; ``mode="complex"`` gives ``d phi^a`` and
    additionally accepts ``i`` coefficients, primed (conjugate) indices and an
    optional ``c*d phi^k =`` prefix on an entry.
    """
    if mode not in ("real", "complex"):
        raise ValueError(f"mode must be 'real' or 'complex', not {mode!r}")
    src = _normalize(text)
    s = src.strip()
    lead = len(src) - len(src.lstrip())
    if not (s.startswith("(") and s.endswith(")")):
        raise PresentationSyntaxError("presentation must be enclosed in parentheses", lead, text)
    body = s[1:-1]
    raw = _split_entries(body, lead + 1, text)

    # expand 0^k first so the index range is known before terms are read
    entries: list[tuple[str | None, int]] = []
    for chunk, at in raw:
        m = re.fullmatch(r"\s*0\s*(?:\^\s*\{?\s*(\d+)\s*\}?)?\s*", chunk)
        if m:
            entries.extend([(None, at)] * (int(m.group(1)) if m.group(1) else 1))
        else:
            entries.append((chunk, at))
    count = len(entries)
    if count == 0:
        raise PresentationSyntaxError("no entries", lead, text)
    complex_mode = mode == "complex"
    N = 2 * count if complex_mode else count
    if complex_mode:
        compact_ok = count <= 9
    else:
        compact_ok = N <= 9

    images: list[Form] = []
    for k, (chunk, at) in enumerate(entries, start=1):
        if chunk is None:
            images.append(Form.zero(N, 2))
            continue
        images.append(_parse_entry(chunk, at, k, count, N, complex_mode, compact_ok, text))

    if complex_mode:
        return LieAlgebraPresentation.from_complex(images, name=name, validate=validate)
    return LieAlgebraPresentation(images, name=name, validate=validate)


def _parse_entry(chunk, at, k, count, N, complex_mode, compact_ok, text) -> Form:
    pos = 0
    scale = _ONE
    m = _PREFIX_RE.match(chunk)
    if m:
        if int(m.group("k")) != k:
            raise PresentationSyntaxError(
                f"entry {k} is labelled d^{m.group('k')}", at + m.start("k"), text)
        if m.group("c"):
            scale = _ONE / mpq(m.group("c"))
        pos = m.end()
    out = Form.zero(N, 2)
    first = True
    while True:
        while pos < len(chunk) and chunk[pos].isspace():
            pos += 1
        if pos >= len(chunk):
            break
        sign = _ONE
        if chunk[pos] in "+-":
            sign = -_ONE if chunk[pos] == "-" else _ONE
            pos += 1
            while pos < len(chunk) and chunk[pos].isspace():
                pos += 1
        elif not first:
            raise PresentationSyntaxError("expected '+' or '-' between terms", at + pos, text)
        coef = _ONE
        cm = _COEF_RE.match(chunk, pos)
        if cm:
            if cm.group("rat"):
                coef = mpq(cm.group("rat"))
                if cm.group("ri"):
                    coef = coef * I
            else:
                coef = I
            if not complex_mode and isinstance(coef, GaussQ):
                raise PresentationSyntaxError("imaginary coefficient in real mode", at + pos, text)
            pos = cm.end()
        pm = _CARET_RE.match(chunk, pos)
        if pm is None:
            pm = _COMPACT_RE.match(chunk, pos)
            if pm is not None and not compact_ok:
                raise PresentationSyntaxError(
                    "compact index pairs are ambiguous in this dimension; write a^b", at + pos, text)
        if pm is None:
            raise PresentationSyntaxError(f"expected an index pair, found {chunk[pos:pos + 6]!r}",
                                          at + pos, text)
        a, b = int(pm.group("a")), int(pm.group("b"))
        ca, cb = bool(pm.group("ca")), bool(pm.group("cb"))
        if (ca or cb) and not complex_mode:
            raise PresentationSyntaxError("conjugate marker in real mode", at + pos, text)
        for idx, where in ((a, pm.start("a")), (b, pm.start("b"))):
            if not 1 <= idx <= count:
                raise PresentationSyntaxError(f"index {idx} out of range 1..{count}", at + where, text)
        ia = a + count if ca else a
        ib = b + count if cb else b
        if ia == ib:
            raise PresentationSyntaxError(f"repeated index in pair {pm.group(0)}", at + pos, text)
        out = out + Form(N, {(ia, ib): sign * coef * scale})
        pos = pm.end()
        first = False
    if first:
        raise PresentationSyntaxError("empty entry", at, text)
    return out


# --- structural checks -------------------------------------------------------


@dataclass
class StructureReport:
    jacobi: bool
    nilpotent: bool
    solvable: bool
    unimodular: bool
    completely_solvable_heuristic: bool
    jacobi_failures: list[str] = field(default_factory=list)
    lower_central_dims: list[int] = field(default_factory=list)
    derived_dims: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "jacobi": self.jacobi,
            "nilpotent": self.nilpotent,
            "solvable": self.solvable,
            "unimodular": self.unimodular,
            "completely_solvable_heuristic": self.completely_solvable_heuristic,
            "jacobi_failures": list(self.jacobi_failures),
            "lower_central_dims": list(self.lower_central_dims),
            "derived_dims": list(self.derived_dims),
        }


def _bracket_vectors(p: LieAlgebraPresentation, u: dict, v: dict) -> dict:
    out: dict = {}
    sc = p.structure_constants
    for i, a in u.items():
        for j, b in v.items():
            for k, c in sc[i][j].items():
                val = out.get(k, 0) + a * b * c
                if val == 0:
                    out.pop(k, None)
                else:
                    out[k] = val
    return out


def _series(p: LieAlgebraPresentation, lower_central: bool) -> list[int]:
    N = p.dim
    current = RowSpace({i: _ONE} for i in range(N))
    full = current.rows()
    dims = [current.dim]
    while current.dim:
        left = full if lower_central else current.rows()
        nxt = RowSpace()
        for u in left:
            for v in current.rows():
                w = _bracket_vectors(p, u, v)
                if w:
                    nxt.add(w)
        if nxt.dim == current.dim:
            break
        current = nxt
        dims.append(current.dim)
    return dims


def _all_real_eigenvalues(matrix: list[list]) -> bool:
    import sympy

    m = sympy.Matrix([[sympy.Rational(int(x.numerator), int(x.denominator)) for x in row] for row in matrix])
    lam = sympy.Symbol("lam")
    poly = sympy.Poly(m.charpoly(lam).as_expr(), lam)
    return len(sympy.real_roots(poly)) == poly.degree()


def check_presentation(p: LieAlgebraPresentation) -> StructureReport:
    failures = [f"e^{k}" for k, _ in p.jacobi_failures()]
    jacobi = not failures
    if not jacobi:
        return StructureReport(False, False, False, False, False, failures)
    lcs = _series(p, True)
    der = _series(p, False)
    nilpotent = lcs[-1] == 0
    solvable = der[-1] == 0
    unimodular = all(
        sum((p.structure_constants[i][k].get(k, 0) for k in range(p.dim)), mpq(0)) == 0
        for i in range(p.dim)
    )
    if nilpotent:
        cs = True
    elif solvable:
        cs = all(_all_real_eigenvalues(p.ad_matrix(i)) for i in range(p.dim))
    else:
        cs = False
    return StructureReport(jacobi, nilpotent, solvable, unimodular, cs, failures, lcs, der)
