"""Exterior algebra of the dual of an N-dimensional space with exact coefficients.

A basis monomial ``e^{i_1...i_k}`` (``i_1 < ... < i_k``, 1-based) is stored as
the bitmask with bits ``i_1 - 1, ..., i_k - 1`` set.  Within a degree,
monomials are ordered lexicographically on their index tuples, which is the
order :func:`itertools.combinations` produces; that position is what the
linear-algebra layer uses as a pivot key.

Endomorphisms are square matrices ``A`` acting on the frame by
``A theta_j = sum_i A[i][j] theta_i``.  The induced action on coframe elements
is ``A* e^i = e^i o A = sum_j A[i][j] e^j``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Sequence

from .scalars import GaussQ, TSeries, conj, format_scalar, mpq, parse_scalar, scalar

__all__ = [
    "Form",
    "basis",
    "basis_index",
    "mask_of",
    "indices_of",
    "e",
    "one",
    "wedge",
    "wedge_all",
    "conjugate",
    "substitute",
    "pullback_endo",
    "derivation",
    "twist",
    "divided_power",
    "parse_form",
    "format_form",
]

_ZERO = mpq(0)
_ONE = mpq(1)


@lru_cache(maxsize=None)
def basis(n: int, k: int) -> tuple[int, ...]:
    """Masks of the degree-``k`` monomials in lexicographic order."""
    return tuple(sum(1 << (i - 1) for i in c) for c in combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def basis_index(n: int, k: int) -> dict[int, int]:
    return {m: j for j, m in enumerate(basis(n, k))}


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


@lru_cache(maxsize=None)
def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _wedge_sign(a: int, b: int) -> int:
    """Sign of e^a ^ e^b relative to e^{a|b}; 0 when the masks overlap."""
    if a & b:
        return 0
    inv = 0
    for j in indices_of(b):
        inv += bin(a >> j).count("1")
    return -1 if inv & 1 else 1


def _sort_sign(idx: Sequence[int]) -> tuple[int, int]:
    """(sign, mask) of the monomial e^{idx} written in increasing order."""
    if len(set(idx)) != len(idx):
        return 0, 0
    inv = sum(1 for x in range(len(idx)) for y in range(x + 1, len(idx)) if idx[x] > idx[y])
    return (-1 if inv & 1 else 1), mask_of(idx)


class Form:
    """Homogeneous element of the exterior algebra with exact coefficients.

    ``coeffs`` maps either bitmasks or tuples of 1-based indices to scalars;
    unsorted tuples are reordered with the appropriate sign.
    """

    __slots__ = ("dim", "degree", "_c")

    def __init__(self, dim: int, coeffs: Mapping | None = None, degree: int | None = None):
        self.dim = dim
        data: dict[int, object] = {}
        deg = degree
        for key, c in (coeffs or {}).items():
            if isinstance(key, int):
                sign, m = 1, key
                if m >> dim:
                    raise ValueError(f"monomial mask {key} exceeds dimension {dim}")
            else:
                key = tuple(key)
                if any(i < 1 or i > dim for i in key):
                    raise ValueError(f"index out of range in {key} for dimension {dim}")
                sign, m = _sort_sign(key)
                if sign == 0:
                    continue
            k = bin(m).count("1")
            if deg is None:
                deg = k
            elif deg != k:
                raise ValueError("a Form must be homogeneous")
            v = data.get(m, _ZERO) + sign * scalar(c)
            if v == 0:
                data.pop(m, None)
            else:
                data[m] = v
        self.degree = 0 if deg is None else deg
        if not 0 <= self.degree <= dim:
            raise ValueError(f"degree {self.degree} outside 0..{dim}")
        self._c = data

    @classmethod
    def _raw(cls, dim: int, degree: int, data: dict) -> "Form":
        f = object.__new__(cls)
        f.dim = dim
        f.degree = degree
        f._c = data
        return f

    @classmethod
    def zero(cls, dim: int, degree: int = 0) -> "Form":
        return cls._raw(dim, degree, {})

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: Mapping[int, object]) -> "Form":
        masks = basis(dim, degree)
        return cls._raw(dim, degree, {masks[j]: c for j, c in vec.items() if c != 0})

    # --- access ---------------------------------------------------------
    def items(self):
        """(mask, coefficient) pairs in lexicographic monomial order."""
        idx = basis_index(self.dim, self.degree)
        return sorted(self._c.items(), key=lambda kv: idx[kv[0]])

    def terms(self):
        """(index tuple, coefficient) pairs in lexicographic order."""
        return [(indices_of(m), c) for m, c in self.items()]

    def coeff(self, *indices: int):
        if len(indices) == 1 and not isinstance(indices[0], int):
            indices = tuple(indices[0])
        sign, m = _sort_sign(indices)
        return sign * self._c.get(m, _ZERO) if sign else _ZERO

    def mask_coeff(self, mask: int):
        return self._c.get(mask, _ZERO)

    def vector(self) -> dict[int, object]:
        idx = basis_index(self.dim, self.degree)
        return {idx[m]: c for m, c in self._c.items()}

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def is_real(self) -> bool:
        return all(conj(c) == c for c in self._c.values())

    # --- linear structure ----------------------------------------------
    def _check(self, other: "Form"):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        if not other._c:
            return self
        if not self._c:
            return other
        if other.degree != self.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        out = dict(self._c)
        for m, c in other._c.items():
            v = out.get(m, _ZERO) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return Form._raw(self.dim, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return Form._raw(self.dim, self.degree, {m: -c for m, c in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Form":
        c = scalar(c)
        if c == 0:
            return Form._raw(self.dim, self.degree, {})
        out = {}
        for m, x in self._c.items():
            v = x * c
            if v != 0:
                out[m] = v
        return Form._raw(self.dim, self.degree, out)

    def __mul__(self, other):
        if isinstance(other, Form):
            return NotImplemented
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.scale(_ONE / scalar(other))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._c
        if not isinstance(other, Form):
            return NotImplemented
        if other.dim != self.dim:
            return False
        if self._c and other._c and self.degree != other.degree:
            return False
        return self._c == other._c

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self._c.items())))

    def map_coeffs(self, fn) -> "Form":
        out = {}
        for m, c in self._c.items():
            v = fn(c)
            if v != 0:
                out[m] = v
        return Form._raw(self.dim, self.degree, out)

    def conjugate(self) -> "Form":
        return self.map_coeffs(conj)

    def real_part(self) -> "Form":
        return (self + self.conjugate()).scale(mpq(1, 2))

    def imag_part(self) -> "Form":
        return (self - self.conjugate()).scale(GaussQ(0, mpq(-1, 2)))

    def evaluate_parameter(self, t0) -> "Form":
        """Substitute a value for the series parameter in every coefficient."""
        return self.map_coeffs(lambda c: c.evaluate(t0) if isinstance(c, TSeries) else c)

    def __call__(self, *vectors: Sequence) -> object:
        """Evaluate on ``degree`` frame vectors (determinant convention)."""
        if len(vectors) != self.degree:
            raise ValueError(f"a {self.degree}-form takes {self.degree} vectors")
        total = _ZERO
        for m, c in self._c.items():
            idx = [i - 1 for i in indices_of(m)]
            total = total + c * _det([[v[i] for v in vectors] for i in idx])
        return total

    def __repr__(self):
        return f"Form({format_form(self)!r}, dim={self.dim}, degree={self.degree})"

    def __str__(self):
        return format_form(self)


def _det(rows):
    n = len(rows)
    if n == 0:
        return _ONE
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    m = [list(r) for r in rows]
    out = _ONE
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return _ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out = out * m[c][c]
        inv = _ONE / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return out


def e(dim: int, *indices: int) -> Form:
    """The monomial ``e^{indices}`` (signed if the indices are unsorted)."""
    return Form(dim, {tuple(indices): _ONE}, degree=len(indices))


def one(dim: int) -> Form:
    return Form._raw(dim, 0, {0: _ONE})


def wedge(a: Form, b: Form) -> Form:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    deg = a.degree + b.degree
    if deg > a.dim:
        return Form._raw(a.dim, min(deg, a.dim), {})
    out: dict[int, object] = {}
    for ma, ca in a._c.items():
        for mb, cb in b._c.items():
            if ma & mb:
                continue
            s = _wedge_sign(ma, mb)
            m = ma | mb
            v = out.get(m, _ZERO) + (ca * cb if s > 0 else -(ca * cb))
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
    return Form._raw(a.dim, deg, out)


def wedge_all(forms: Sequence[Form], dim: int | None = None) -> Form:
    if not forms:
        if dim is None:
            raise ValueError("empty wedge needs a dimension")
        return one(dim)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def conjugate(a: Form) -> Form:
    return a.conjugate()


def substitute(a: Form, images: Sequence[Form]) -> Form:
    """Replace each ``e^i`` by the 1-form ``images[i-1]`` and expand.

    The images may live in a space of a different dimension.
    """
    if len(images) != a.dim:
        raise ValueError(f"need {a.dim} images, got {len(images)}")
    target = images[0].dim if images else a.dim
    cache: dict[int, Form] = {0: one(target)}

    def image(m: int) -> Form:
        f = cache.get(m)
        if f is None:
            low = m & -m
            f = wedge(images[low.bit_length() - 1], image(m ^ low))
            cache[m] = f
        return f

    out = Form.zero(target, a.degree)
    for m, c in a._c.items():
        out = out + image(m).scale(c)
    if not out._c:
        return Form._raw(target, a.degree, {})
    return out


def _endo_images(A: Sequence[Sequence], n: int) -> list[Form]:
    if len(A) != n or any(len(r) != n for r in A):
        raise ValueError(f"endomorphism must be {n}x{n}")
    return [
        Form._raw(n, 1, {1 << j: scalar(x) for j, x in enumerate(row) if x != 0}) for row in A
    ]


def pullback_endo(phi: Form, A: Sequence[Sequence]) -> Form:
    """The form ``(X_1, ..., X_k) -> phi(A X_1, ..., A X_k)``."""
    return substitute(phi, _endo_images(A, phi.dim))


def derivation(a: Form, images: Sequence[Form], image_degree: int | None = None) -> Form:
    """Extend ``e^i -> images[i-1]`` (of degree r) as a graded derivation of degree r - 1.

    With 2-form images this is the anti-derivation rule of an exterior
    differential; with 1-form images it is the action of an endomorphism.
    """
    n = a.dim
    if len(images) != n:
        raise ValueError(f"need {n} images, got {len(images)}")
    r = image_degree if image_degree is not None else next((f.degree for f in images if f), 1)
    deg = a.degree + r - 1
    out = Form.zero(n, min(max(deg, 0), n))
    if deg > n:
        return out
    for m, c in a._c.items():
        idx = indices_of(m)
        for pos, i in enumerate(idx):
            img = images[i - 1]
            if not img:
                continue
            left = Form._raw(n, pos, {mask_of(idx[:pos]): _ONE})
            right = Form._raw(n, len(idx) - pos - 1, {mask_of(idx[pos + 1:]): _ONE})
            term = wedge(wedge(left, img), right)
            out = out + term.scale(-c if (pos * (r - 1)) & 1 else c)
    return out


def twist(alpha: Form, L: Sequence[Sequence]) -> Form:
    """The 2-form ``(X, Y) -> alpha(L X, Y) + alpha(X, L Y)``."""
    if alpha.degree != 2:
        raise ValueError("twist needs a 2-form")
    return derivation(alpha, _endo_images(L, alpha.dim), 1)


def divided_power(a: Form, k: int) -> Form:
    """``a^k / k!`` (so that the Kähler-type power of a symplectic form has unit coefficients)."""
    if k < 0:
        raise ValueError("negative power")
    out = one(a.dim)
    for _ in range(k):
        out = wedge(out, a)
    return out.scale(mpq(1, factorial(k)))


# --- text form -----------------------------------------------------------

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\([^()]*\)|\d+(?:/\d+)?\s*i?|i)\s*\*?\s*)?
        (?:e(?P<mono>\d+|\[\s*\d+(?:\s*,\s*\d+)*\s*\])|(?P<unit>1(?![\d/])))?
        \s*""",
    re.VERBOSE,
)


def parse_form(text: str, dim: int) -> Form:
    """Parse text such as ``"e13 - e46"``, ``"1/2*e125"``, ``"(1+i) e[1,10]"`` or ``"0"``.

    Compact monomials ``e13`` read each digit as an index and are only
    accepted when ``dim <= 9``; bracketed lists work in any dimension.
    """
    s = text.strip()
    if s in ("", "0"):
        return Form.zero(dim, 0)
    pos = 0
    out = None
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (m.group("mono") is None and m.group("unit") is None
                                        and m.group("coef") is None):
            raise ValueError(f"cannot parse form at position {pos}: {s[pos:]!r}")
        if out is not None and m.group("sign") is None:
            raise ValueError(f"missing sign at position {pos}: {s[pos:]!r}")
        coef = parse_scalar(m.group("coef")) if m.group("coef") else _ONE
        if m.group("sign") == "-":
            coef = -coef
        mono = m.group("mono")
        if mono is None:
            if m.group("unit") is None and m.group("coef") is None:
                raise ValueError(f"empty term at position {pos}")
            idx: tuple[int, ...] = ()
        elif mono.startswith("["):
            idx = tuple(int(x) for x in mono[1:-1].split(","))
        else:
            if dim > 9:
                raise ValueError(f"compact monomial e{mono} is ambiguous in dimension {dim}; use e[...]")
            idx = tuple(int(ch) for ch in mono)
        term = Form(dim, {idx: coef}, degree=len(idx))
        if out is None:
            out = term
        else:
            if term.degree != out.degree:
                raise ValueError(f"mixed degrees at position {pos}")
            out = out + term
        pos = m.end()
    return out


def _mono_name(idx: tuple[int, ...], dim: int) -> str:
    if not idx:
        return "1"
    if dim <= 9:
        return "e" + "".join(str(i) for i in idx)
    return "e[" + ",".join(str(i) for i in idx) + "]"


def format_term(c, name: str, first: bool) -> str:
    """One signed term of a linear combination, for use in text output."""
    if isinstance(c, TSeries) and set(c.terms) <= {(0, 0)}:
        c = c.constant()
    if isinstance(c, (GaussQ, TSeries)) and not (isinstance(c, GaussQ) and c.re == 0):
        sign = ""
        txt = format_scalar(c)
        if txt.startswith("-"):
            sign, txt = "-", format_scalar(-c)
        cs = f"({txt})"
        body = cs if name == "1" else f"{cs}*{name}"
        return sign + body if first or sign else "+" + body
    cs = format_scalar(c)
    neg = cs.startswith("-")
    mag = cs[1:] if neg else cs
    if name == "1":
        body = mag
    elif mag == "1":
        body = name
    else:
        body = f"{mag}*{name}"
    if neg:
        return "-" + body
    return body if first else "+" + body


def format_form(a: Form) -> str:
    if not a._c:
        return "0"
    parts = [format_term(c, _mono_name(idx, a.dim), n == 0) for n, (idx, c) in enumerate(a.terms())]
    return "".join(parts)
