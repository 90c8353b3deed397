"""Invariant almost-complex structures, bidegree decomposition and integrability.

A structure is a frame endomorphism ``J`` with ``J^2 = -id``.  Its (1,0)-forms are
the complex 1-forms with ``phi o J = i phi``.  Given a (1,0)-coframe
``phi^1..phi^n`` we work in the basis ``psi^a = phi^a``, ``psi^{n+a} = conj(phi^a)``
of complex 1-forms, where the bidegree of a monomial can be read off from its
indices.  Forms in that basis are ordinary :class:`~.exterior.Form` objects on
``2n`` generators.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Sequence

from .exterior import Form, basis, e, format_term, indices_of, pullback_endo, substitute
from .lie import Differential, LieAlgebraPresentation
from .linalg import RowSpace, identity, inverse, kernel, mat_equal, matmul, matscale
from .scalars import GaussQ, I, conj, is_real, mpq, scalar

__all__ = [
    "NotSpanningError",
    "AlmostComplexStructure",
    "acs_from_coframe",
    "acs_from_matrix",
    "acs_from_coframe_action",
    "type_project",
    "type_components",
    "bidegree",
    "nijenhuis",
    "is_integrable",
    "complex_structure_equations",
    "typed_complex",
    "TypedComplex",
    "format_psi_form",
]

_ONE = mpq(1)


class NotSpanningError(ValueError):
    """The proposed (1,0)-coframe and its conjugate do not form a basis."""


class AlmostComplexStructure:
    """Frame endomorphism ``J`` with ``J^2 = -id`` and a chosen (1,0)-coframe."""

    def __init__(self, J: Sequence[Sequence], coframe: Sequence[Form] | None = None):
        N = len(J)
        if N % 2 or any(len(r) != N for r in J):
            raise ValueError("J must be a square matrix of even size")
        self.J = [[scalar(x) for x in r] for r in J]
        self.dim = N
        if not all(is_real(x) for r in self.J for x in r):
            raise ValueError("J must have real entries")
        if not mat_equal(matmul(self.J, self.J), matscale(identity(N), -1)):
            raise ValueError("J^2 != -id")
        if coframe is None:
            coframe = _rref_coframe(self.J)
        else:
            coframe = list(coframe)
            for phi in coframe:
                if phi.dim != N or phi.degree != 1:
                    raise ValueError("coframe entries must be 1-forms")
                if pullback_endo(phi, self.J) != phi.scale(I):
                    raise ValueError("coframe entry is not of type (1,0)")
        self.coframe = coframe
        rows = [[phi.coeff(i) for i in range(1, N + 1)] for phi in coframe]
        rows += [[conj(x) for x in r] for r in rows]
        self.P = rows
        try:
            self.Pinv = inverse(rows)
        except ZeroDivisionError:
            raise NotSpanningError("coframe and its conjugate do not span the complexified dual")

    @property
    def n(self) -> int:
        return self.dim // 2

    @cached_property
    def _to_psi_images(self) -> list[Form]:
        N = self.dim
        return [Form._raw(N, 1, {1 << a: x for a, x in enumerate(row) if x != 0}) for row in self.Pinv]

    @cached_property
    def _from_psi_images(self) -> list[Form]:
        N = self.dim
        return [Form._raw(N, 1, {1 << i: x for i, x in enumerate(row) if x != 0}) for row in self.P]

    def to_psi(self, a: Form) -> Form:
        """Rewrite an e-basis form in the psi basis."""
        return substitute(a, self._to_psi_images)

    def from_psi(self, a: Form) -> Form:
        return substitute(a, self._from_psi_images)

    def psi(self, *indices: int) -> Form:
        """A psi-basis monomial; indices above ``n`` denote conjugates."""
        return e(self.dim, *indices)

    def phi(self, a: int) -> Form:
        return self.coframe[a - 1]

    def phibar(self, a: int) -> Form:
        return self.coframe[a - 1].conjugate()

    def conjugate_psi(self, a: Form) -> Form:
        """Complex conjugation expressed in the psi basis (swaps the two halves)."""
        n = self.n
        out = {}
        for m, c in a._c.items():
            lo = m & ((1 << n) - 1)
            hi = m >> n
            idx = [i + n for i in indices_of(lo)] + [i for i in indices_of(hi)]
            out[tuple(idx)] = conj(c)
        return Form(self.dim, out, degree=a.degree)

    def __eq__(self, other):
        return isinstance(other, AlmostComplexStructure) and mat_equal(self.J, other.J)

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"AlmostComplexStructure(dim={self.dim})"


def _rref_coframe(J) -> list[Form]:
    """RREF basis of ``{phi : phi J = i phi}``."""
    N = len(J)
    # unknowns phi_i; equation j: sum_i phi_i J[i][j] - i phi_j = 0
    cols = []
    for i in range(N):
        col = {}
        for j in range(N):
            v = J[i][j] - (I if i == j else 0)
            if v != 0:
                col[j] = v
        cols.append(col)
    ker = RowSpace(kernel(cols)).rows()
    if len(ker) != N // 2:
        raise ValueError("J has no (1,0)-eigenspace of half dimension")
    return [Form._raw(N, 1, {1 << i: c for i, c in v.items()}) for v in ker]


def acs_from_matrix(J: Sequence[Sequence]) -> AlmostComplexStructure:
    return AlmostComplexStructure(J)


def acs_from_coframe(p_or_dim, spec: Sequence[Form]) -> AlmostComplexStructure:
    """The structure for which the given complex 1-forms are of type (1,0)."""
    N = p_or_dim.dim if isinstance(p_or_dim, LieAlgebraPresentation) else int(p_or_dim)
    spec = list(spec)
    if len(spec) * 2 != N:
        raise NotSpanningError(f"need {N // 2} coframe entries, got {len(spec)}")
    for phi in spec:
        if phi.dim != N or (phi and phi.degree != 1):
            raise ValueError("coframe entries must be 1-forms on the presentation's space")
    rows = [[phi.coeff(i) for i in range(1, N + 1)] for phi in spec]
    rows += [[conj(x) for x in r] for r in rows]
    try:
        Pinv = inverse(rows)
    except ZeroDivisionError:
        raise NotSpanningError("coframe and its conjugate do not span the complexified dual")
    n = N // 2
    D = [[(I if a < n else -I) if a == b else mpq(0) for b in range(N)] for a in range(N)]
    J = matmul(Pinv, matmul(D, rows))
    return AlmostComplexStructure(J, spec)


def acs_from_coframe_action(images: Sequence[Form]) -> AlmostComplexStructure:
    """Structure given by ``e^i o J = images[i-1]`` (e.g. ``J e^1 := -e^2``)."""
    N = len(images)
    J = [[f.coeff(j) for j in range(1, N + 1)] for f in images]
    return AlmostComplexStructure(J)


# --- bidegrees ----------------------------------------------------------------


def bidegree(mask: int, n: int) -> tuple[int, int]:
    lo = bin(mask & ((1 << n) - 1)).count("1")
    return lo, bin(mask >> n).count("1")


@lru_cache(maxsize=None)
def type_masks(n: int, p: int, q: int) -> tuple[int, ...]:
    """psi-basis monomials of bidegree (p, q), lexicographic."""
    return tuple(m for m in basis(2 * n, p + q) if bidegree(m, n) == (p, q))


def type_components(a: Form, J: AlmostComplexStructure) -> dict[tuple[int, int], Form]:
    """Bidegree components of ``a`` (in the e basis), keyed by (p, q)."""
    psi = J.to_psi(a)
    parts: dict[tuple[int, int], dict] = {}
    for m, c in psi._c.items():
        parts.setdefault(bidegree(m, J.n), {})[m] = c
    return {pq: J.from_psi(Form._raw(a.dim, a.degree, d)) for pq, d in sorted(parts.items())}


def type_project(a: Form, p: int, q: int, J: AlmostComplexStructure) -> Form:
    if p + q != a.degree or p < 0 or q < 0:
        raise ValueError(f"bidegree ({p},{q}) does not match degree {a.degree}")
    return type_components(a, J).get((p, q), Form.zero(a.dim, a.degree))


# --- integrability --------------------------------------------------------------


def _bracket(p: LieAlgebraPresentation, u: Sequence, v: Sequence) -> list:
    N = p.dim
    out = [mpq(0)] * N
    sc = p.structure_constants
    for i in range(N):
        if u[i] == 0:
            continue
        for j in range(N):
            if v[j] == 0:
                continue
            for k, c in sc[i][j].items():
                out[k] = out[k] + u[i] * v[j] * c
    return out


def _apply(J, v):
    return [sum((J[i][j] * v[j] for j in range(len(v)) if v[j] != 0), mpq(0)) for i in range(len(J))]


def nijenhuis(p: LieAlgebraPresentation, J: AlmostComplexStructure) -> dict[tuple[int, int], list]:
    """Nonzero values ``Nij(theta_i, theta_j)`` for ``i < j`` (1-based keys)."""
    N = p.dim
    M = J.J
    out = {}
    for i in range(N):
        for j in range(i + 1, N):
            X = [mpq(1) if k == i else mpq(0) for k in range(N)]
            Y = [mpq(1) if k == j else mpq(0) for k in range(N)]
            JX, JY = _apply(M, X), _apply(M, Y)
            a = _bracket(p, JX, JY)
            b = _apply(M, _bracket(p, JX, Y))
            c = _apply(M, _bracket(p, X, JY))
            d = _bracket(p, X, Y)
            val = [a[k] - b[k] - c[k] - d[k] for k in range(N)]
            if any(x != 0 for x in val):
                out[(i + 1, j + 1)] = val
    return out


def is_integrable(p: LieAlgebraPresentation, J: AlmostComplexStructure, route: str = "both") -> bool:
    """Vanishing of the Nijenhuis tensor; ``route="both"`` also checks ``pi^{0,2} d phi^a = 0``."""
    via_tensor = not nijenhuis(p, J)
    if route == "nijenhuis":
        return via_tensor
    tc = typed_complex(p, J)
    n = J.n
    via_forms = all(
        not any(bidegree(m, n) == (0, 2) for m in tc.d.images[a]._c) for a in range(n)
    )
    if route == "forms":
        return via_forms
    if via_forms != via_tensor:
        raise AssertionError("Nijenhuis tensor and (0,2)-part of d disagree")
    return via_tensor


# --- psi-basis complex --------------------------------------------------------------


class TypedComplex:
    """The Chevalley-Eilenberg differential written in the psi basis of a structure."""

    def __init__(self, p: LieAlgebraPresentation, J: AlmostComplexStructure):
        if p.dim != J.dim:
            raise ValueError("structure and presentation have different dimensions")
        self.p = p
        self.J = J
        self.n = J.n
        images = [J.to_psi(p.d(J.from_psi(e(p.dim, a)))) for a in range(1, p.dim + 1)]
        self.d = Differential(images)


@lru_cache(maxsize=256)
def typed_complex(p: LieAlgebraPresentation, J: AlmostComplexStructure) -> TypedComplex:
    return TypedComplex(p, J)


def psi_monomial_name(idx: tuple[int, ...], n: int) -> str:
    if not idx:
        return "1"
    return "phi[" + ",".join(str(i) if i <= n else f"{i - n}'" for i in idx) + "]"


def format_psi_form(a: Form, n: int) -> str:
    if not a:
        return "0"
    return "".join(format_term(c, psi_monomial_name(idx, n), k == 0) for k, (idx, c) in enumerate(a.terms()))


def complex_structure_equations(p: LieAlgebraPresentation, J: AlmostComplexStructure) -> list[Form]:
    """``d phi^a`` for the structure's (1,0)-coframe, as psi-basis forms."""
    tc = typed_complex(p, J)
    return [tc.d.images[a] for a in range(J.n)]
