"""Invariant cohomology and homology, bidegree subgroups and cup products.

Cohomology is computed on the Chevalley-Eilenberg complex.  Invariant currents
are multivectors, stored as :class:`~.exterior.Form` objects whose indices
refer to the frame ``theta_1..theta_N``; their boundary is the transpose of
``d`` under the pairing in which ``e^I`` and ``theta_I`` are dual.

Canonical representatives: reduce a kernel basis modulo the image (kept in
RREF with lexicographic pivots) and row-reduce what is left.  Class
coordinates are then read off at the representatives' pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .complexstruct import AlmostComplexStructure, bidegree, typed_complex
from .exterior import Form, basis, basis_index, divided_power, format_form, pullback_endo, substitute, wedge
from .lie import LieAlgebraPresentation
from .linalg import (
    RowSpace,
    annihilator_witness,
    apply_functional,
    combine,
    dense_rank,
    kernel,
    min_norm_solution,
    transpose,
)
from .scalars import conj, im_part, is_real, mpq, re_part

__all__ = [
    "NotClosedError",
    "CohomologySpace",
    "cohomology_space",
    "current_homology_space",
    "betti_numbers",
    "class_coordinates",
    "is_exact",
    "TypeSubgroup",
    "type_subgroup",
    "current_type_subgroup",
    "StageReport",
    "PureFullReport",
    "purefull_report",
    "stage_report",
    "pairing_matrix",
    "CupMap",
    "cup_map",
    "hlc_check",
    "SolveResult",
    "solve_d_in_subspace",
    "invariant_subspace_basis",
]

_ONE = mpq(1)


class NotClosedError(ValueError):
    """Raised for a non-closed input; ``differential`` holds its image under ``d``."""

    def __init__(self, differential: Form):
        self.differential = differential
        super().__init__(f"form is not closed: d of it is {format_form(differential)}")


def _transpose_columns(cols: Sequence[dict], nrows: int) -> list[dict]:
    out: list[dict] = [{} for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, c in col.items():
            out[i][j] = c
    return out


def _apply_columns(cols: Sequence[dict], vec: dict) -> dict:
    return combine(cols, vec) if vec else {}


class CohomologySpace:
    """Degree-``k`` (co)homology of a finite complex with canonical representatives.

    ``cols_out`` are the columns of the map leaving degree ``k`` and
    ``cols_in`` those of the map arriving in degree ``k``.
    """

    def __init__(self, dim: int, degree: int, cols_out: Sequence[dict], cols_in: Sequence[dict],
                 kind: str = "forms", field: str = "real"):
        self.ambient_dim = dim
        self.degree = degree
        self.kind = kind
        self.field = field
        self._out = cols_out
        self._image = RowSpace(c for c in cols_in if c)
        reps = RowSpace()
        for z in kernel(cols_out):
            r = self._image.reduce(z)
            if r:
                reps.add(r)
        self._reps = reps
        self.pivots = reps.pivots
        self.rep_vectors = reps.rows()
        self.representatives = [Form.from_vector(dim, degree, v) for v in self.rep_vectors]

    @property
    def dim(self) -> int:
        return len(self.rep_vectors)

    def __len__(self):
        return self.dim

    def _vector(self, a: Form | dict) -> dict:
        if isinstance(a, Form):
            if a.dim != self.ambient_dim:
                raise ValueError("dimension mismatch")
            if a and a.degree != self.degree:
                raise ValueError(f"expected degree {self.degree}, got {a.degree}")
            return a.vector()
        return a

    def boundary(self, a: Form | dict) -> dict:
        return _apply_columns(self._out, self._vector(a))

    def check_closed(self, a: Form | dict) -> dict:
        v = self._vector(a)
        da = self.boundary(v)
        if da:
            raise NotClosedError(Form.from_vector(self.ambient_dim, self.degree - 1 if self.kind == "currents"
                                                  else self.degree + 1, da))
        return v

    def coordinate_vector(self, a: Form | dict, check: bool = True) -> dict:
        """Sparse coordinates keyed by representative index."""
        v = self.check_closed(a) if check else self._vector(a)
        r = self._image.reduce(v)
        out = {}
        for i, p in enumerate(self.pivots):
            c = r.get(p)
            if c:
                out[i] = c
        return out

    def coordinates(self, a: Form | dict, check: bool = True) -> list:
        cv = self.coordinate_vector(a, check)
        return [cv.get(i, mpq(0)) for i in range(self.dim)]

    def is_exact(self, a: Form | dict) -> bool:
        return not self.coordinate_vector(a)

    def from_coordinates(self, coords: Sequence | dict) -> Form:
        items = coords.items() if isinstance(coords, dict) else enumerate(coords)
        vec = combine(self.rep_vectors, {i: c for i, c in items if c != 0})
        return Form.from_vector(self.ambient_dim, self.degree, vec)

    def __repr__(self):
        return f"CohomologySpace(kind={self.kind}, degree={self.degree}, dim={self.dim})"


@lru_cache(maxsize=512)
def _cohomology(p: LieAlgebraPresentation, k: int) -> CohomologySpace:
    N = p.dim
    if not 0 <= k <= N:
        raise ValueError(f"degree {k} outside 0..{N}")
    cols_out = p.d.columns(k)
    cols_in = p.d.columns(k - 1) if k > 0 else []
    return CohomologySpace(N, k, cols_out, cols_in, "forms")


def cohomology_space(p: LieAlgebraPresentation, k: int, field: str = "real") -> CohomologySpace:
    """``H^k`` of the invariant complex.

    The differential is rational, so one set of rational representatives
    serves both fields; ``field`` only labels the space.
    """
    if field not in ("real", "complex"):
        raise ValueError("field must be 'real' or 'complex'")
    return _cohomology(p, k)


@lru_cache(maxsize=512)
def current_homology_space(p: LieAlgebraPresentation, k: int) -> CohomologySpace:
    """``H_k`` of invariant currents (multivectors with the transposed boundary)."""
    N = p.dim
    if not 0 <= k <= N:
        raise ValueError(f"degree {k} outside 0..{N}")
    nk = len(basis(N, k))
    cols_out = _transpose_columns(p.d.columns(k - 1), nk) if k > 0 else [{} for _ in range(nk)]
    cols_in = _transpose_columns(p.d.columns(k), len(basis(N, k + 1))) if k < N else []
    return CohomologySpace(N, k, cols_out, cols_in, "currents")


def betti_numbers(p: LieAlgebraPresentation) -> list[int]:
    return [cohomology_space(p, k).dim for k in range(p.dim + 1)]


def class_coordinates(space: CohomologySpace, a: Form) -> list:
    return space.coordinates(a)


def is_exact(space: CohomologySpace, a: Form) -> bool:
    return space.is_exact(a)


# --- bidegree subgroups ----------------------------------------------------------


def _normalize_types(S: Iterable, k: int) -> tuple[tuple[int, int], ...]:
    out = sorted({(int(p), int(q)) for p, q in S}, reverse=True)
    if not out:
        raise ValueError("empty type set")
    for p, q in out:
        if p < 0 or q < 0 or p + q != k:
            raise ValueError(f"type ({p},{q}) is inconsistent with degree {k}")
    return tuple(out)


def _label(S) -> str:
    return ",".join(f"({p},{q})" for p, q in S)


@dataclass
class TypeSubgroup:
    """Subspace of a (co)homology space spanned by classes with representatives of the given types."""

    types: tuple[tuple[int, int], ...]
    degree: int
    space: CohomologySpace
    real: bool
    basis: list[dict]
    """RREF coordinate vectors spanning the subgroup (rational when ``real``)."""

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def label(self) -> str:
        return _label(self.types)

    def contains(self, coords: dict) -> bool:
        return RowSpace(self.basis).contains(coords)

    def representatives(self) -> list[Form]:
        return [self.space.from_coordinates(v) for v in self.basis]


class _TypedData:
    """Per-degree data for bidegree computations in the psi basis (forms) or its dual (currents)."""

    def __init__(self, p: LieAlgebraPresentation, J: AlmostComplexStructure):
        self.p = p
        self.J = J
        self.tc = typed_complex(p, J)
        self._f2e: dict[int, list[dict]] = {}
        self._c2e: dict[int, list[dict]] = {}
        self._dcur: dict[int, list[dict]] = {}

    def form_to_ambient(self, k: int) -> list[dict]:
        cols = self._f2e.get(k)
        if cols is None:
            N = self.p.dim
            imgs = self.J._from_psi_images
            cols = [substitute(Form._raw(N, k, {m: _ONE}), imgs).vector() for m in basis(N, k)]
            self._f2e[k] = cols
        return cols

    def current_to_ambient(self, k: int) -> list[dict]:
        cols = self._c2e.get(k)
        if cols is None:
            N = self.p.dim
            Pinv = self.J.Pinv
            imgs = [Form._raw(N, 1, {1 << i: Pinv[i][b] for i in range(N) if Pinv[i][b] != 0})
                    for b in range(N)]
            cols = [substitute(Form._raw(N, k, {m: _ONE}), imgs).vector() for m in basis(N, k)]
            self._c2e[k] = cols
        return cols

    def form_boundary(self, k: int) -> list[dict]:
        return self.tc.d.columns(k)

    def current_boundary(self, k: int) -> list[dict]:
        cols = self._dcur.get(k)
        if cols is None:
            N = self.p.dim
            nk = len(basis(N, k))
            cols = _transpose_columns(self.tc.d.columns(k - 1), nk) if k > 0 else [{} for _ in range(nk)]
            self._dcur[k] = cols
        return cols


@lru_cache(maxsize=256)
def _typed_data(p: LieAlgebraPresentation, J: AlmostComplexStructure) -> _TypedData:
    return _TypedData(p, J)


def _subgroup(p, J, k, S, real, currents) -> TypeSubgroup:
    S = _normalize_types(S, k)
    if real and set(S) != {(q, p_) for p_, q in S}:
        raise ValueError(f"real subgroup needs a conjugation-stable type set, got {_label(S)}")
    td = _typed_data(p, J)
    N = p.dim
    n = J.n
    space = current_homology_space(p, k) if currents else cohomology_space(p, k)
    bnd = td.current_boundary(k) if currents else td.form_boundary(k)
    to_amb = td.current_to_ambient(k) if currents else td.form_to_ambient(k)
    wanted = set(S)
    sel = [j for j, m in enumerate(basis(N, k)) if bidegree(m, n) in wanted]
    span = RowSpace()
    if space.dim:
        for x in kernel([bnd[j] for j in sel]):
            amb = combine(to_amb, {sel[pos]: c for pos, c in x.items()})
            cv = space.coordinate_vector(amb, check=False)
            if cv:
                span.add(cv)
                if span.dim == space.dim:
                    break
    vecs = span.rows()
    if real:
        rs = RowSpace()
        for v in vecs:
            for part in (re_part, im_part):
                w = {i: part(c) for i, c in v.items()}
                w = {i: c for i, c in w.items() if c != 0}
                if w:
                    rs.add(w)
        if rs.dim != len(vecs):
            raise AssertionError("real and complex dimensions of a conjugation-stable subgroup differ")
        vecs = rs.rows()
    return TypeSubgroup(S, k, space, real, vecs)


def type_subgroup(p: LieAlgebraPresentation, J: AlmostComplexStructure, S: Iterable, real: bool = False,
                  degree: int | None = None) -> TypeSubgroup:
    """``H^S_J`` (or its real part) inside invariant cohomology."""
    S = list(S)
    k = degree if degree is not None else sum(S[0])
    return _subgroup(p, J, k, S, real, False)


def current_type_subgroup(p: LieAlgebraPresentation, J: AlmostComplexStructure, S: Iterable,
                          real: bool = False, degree: int | None = None) -> TypeSubgroup:
    """``H^J_S`` (or its real part) inside the homology of invariant currents."""
    S = list(S)
    k = degree if degree is not None else sum(S[0])
    return _subgroup(p, J, k, S, real, True)


# --- pure / full -----------------------------------------------------------------


@dataclass
class StageReport:
    """Pure/full verdicts at one stage, for forms or for currents."""

    degree: int
    kind: str
    betti: int
    pure: bool
    full: bool
    pairwise_pure: bool
    complex_pure: bool
    complex_full: bool
    real_dims: dict[str, int] = field(default_factory=dict)
    complex_dims: dict[str, int] = field(default_factory=dict)
    real_sum_dim: int = 0
    complex_sum_dim: int = 0
    h_plus: int | None = None
    h_minus: int | None = None
    plus_minus_intersection: int | None = None

    def as_dict(self) -> dict:
        out = {
            "degree": self.degree,
            "kind": self.kind,
            "betti": self.betti,
            "pure": self.pure,
            "full": self.full,
            "pairwise_pure": self.pairwise_pure,
            "complex_pure": self.complex_pure,
            "complex_full": self.complex_full,
            "real_dims": dict(self.real_dims),
            "complex_dims": dict(self.complex_dims),
            "real_sum_dim": self.real_sum_dim,
            "complex_sum_dim": self.complex_sum_dim,
        }
        if self.h_plus is not None:
            out["h_plus"] = self.h_plus
            out["h_minus"] = self.h_minus
            out["plus_minus_intersection"] = self.plus_minus_intersection
        return out


def _sum_dim(groups: Sequence[TypeSubgroup]) -> int:
    rs = RowSpace()
    for g in groups:
        for v in g.basis:
            rs.add(v)
    return rs.dim


def stage_report(p: LieAlgebraPresentation, J: AlmostComplexStructure, k: int,
                 currents: bool = False) -> StageReport:
    make = current_type_subgroup if currents else type_subgroup
    space = current_homology_space(p, k) if currents else cohomology_space(p, k)
    b = space.dim
    pairs = [((a, k - a), (k - a, a)) for a in range(k, (k - 1) // 2, -1) if k - a >= 0]
    pairs = [tuple(sorted(set(pr), reverse=True)) for pr in pairs]
    real_groups = [make(p, J, pr, real=True, degree=k) for pr in pairs]
    singles = [make(p, J, [(a, k - a)], degree=k) for a in range(k, -1, -1)]
    rsum = _sum_dim(real_groups)
    csum = _sum_dim(singles)
    pure = sum(g.dim for g in real_groups) == rsum
    pairwise = all(
        g.dim + h.dim == _sum_dim([g, h]) for g, h in combinations(real_groups, 2)
    )
    rep = StageReport(
        degree=k,
        kind="currents" if currents else "forms",
        betti=b,
        pure=pure,
        full=rsum == b,
        pairwise_pure=pairwise,
        complex_pure=sum(g.dim for g in singles) == csum,
        complex_full=csum == b,
        real_dims={g.label: g.dim for g in real_groups},
        complex_dims={g.label: g.dim for g in singles},
        real_sum_dim=rsum,
        complex_sum_dim=csum,
    )
    if k == 2:
        plus = next(g for g in real_groups if g.types == ((1, 1),))
        minus = next(g for g in real_groups if g.types == ((2, 0), (0, 2)))
        rep.h_plus = plus.dim
        rep.h_minus = minus.dim
        rep.plus_minus_intersection = plus.dim + minus.dim - _sum_dim([plus, minus])
    return rep


@dataclass
class PureFullReport:
    forms: dict[int, StageReport]
    currents: dict[int, StageReport]

    def as_dict(self) -> dict:
        return {
            "forms": [r.as_dict() for _, r in sorted(self.forms.items())],
            "currents": [r.as_dict() for _, r in sorted(self.currents.items())],
        }


def purefull_report(p: LieAlgebraPresentation, J: AlmostComplexStructure,
                    stages: Iterable[int] | None = None, currents: bool = True) -> PureFullReport:
    ks = list(stages) if stages is not None else list(range(1, p.dim))
    forms = {k: stage_report(p, J, k) for k in ks}
    cur = {k: stage_report(p, J, k, currents=True) for k in ks} if currents else {}
    return PureFullReport(forms, cur)


def pairing_matrix(p: LieAlgebraPresentation, k: int) -> list[list]:
    """``P[i][j] = <h^j, c_i>`` for canonical cohomology reps ``h^j`` and homology reps ``c_i``."""
    H = cohomology_space(p, k)
    C = current_homology_space(p, k)
    return [[apply_functional(h, c) for h in H.rep_vectors] for c in C.rep_vectors]


# --- cup products ------------------------------------------------------------------


@dataclass
class CupMap:
    source_degree: int
    target_degree: int
    matrix: list[list]
    rank: int
    injective: bool
    surjective: bool

    @property
    def iso(self) -> bool:
        return self.injective and self.surjective

    def as_dict(self) -> dict:
        return {
            "source_degree": self.source_degree,
            "target_degree": self.target_degree,
            "matrix": self.matrix,
            "rank": self.rank,
            "injective": self.injective,
            "surjective": self.surjective,
            "iso": self.iso,
        }


def cup_map(p: LieAlgebraPresentation, gamma: Form, k: int) -> CupMap:
    """Matrix of ``[a] -> [gamma ^ a]`` from ``H^k`` to ``H^{k + deg gamma}`` in canonical coordinates."""
    dg = p.d(gamma)
    if dg:
        raise NotClosedError(dg)
    src = cohomology_space(p, k)
    tgt_deg = k + gamma.degree
    if tgt_deg > p.dim:
        return CupMap(k, tgt_deg, [], 0, src.dim == 0, True)
    tgt = cohomology_space(p, tgt_deg)
    cols = [tgt.coordinates(wedge(gamma, h), check=False) for h in src.representatives]
    matrix = [[cols[j][i] for j in range(src.dim)] for i in range(tgt.dim)]
    r = dense_rank(matrix) if matrix and src.dim else 0
    return CupMap(k, tgt_deg, matrix, r, r == src.dim, r == tgt.dim)


def hlc_check(p: LieAlgebraPresentation, omega: Form) -> dict[int, CupMap]:
    """Cup maps ``omega^[k]: H^{n-k} -> H^{n+k}`` for ``k = 0..n``."""
    n = p.dim // 2
    return {k: cup_map(p, divided_power(omega, k), n - k) for k in range(n + 1)}


# --- solving d beta = target --------------------------------------------------------


@dataclass
class SolveResult:
    solvable: bool
    witness: Form | None
    certificate: Form | None
    """Functional on (k+1)-forms, as coefficients on the dual monomials."""

    def as_dict(self) -> dict:
        return {
            "solvable": self.solvable,
            "witness": format_form(self.witness) if self.witness is not None else None,
            "certificate": format_form(self.certificate) if self.certificate is not None else None,
        }


def invariant_subspace_basis(dim: int, k: int, J, sign: int = 1) -> list[Form]:
    """Basis of real k-forms with ``pullback_endo(a, J) = sign * a``."""
    monos = basis(dim, k)
    cols = []
    for m in monos:
        f = Form._raw(dim, k, {m: _ONE})
        g = pullback_endo(f, J.J if isinstance(J, AlmostComplexStructure) else J) - f.scale(sign)
        cols.append(g.vector())
    return [Form.from_vector(dim, k, v) for v in kernel(cols)]


def solve_d_in_subspace(p: LieAlgebraPresentation, target: Form, subspace="all",
                        J: AlmostComplexStructure | None = None, degree: int | None = None) -> SolveResult:
    """Find ``beta`` in a subspace of k-forms with ``d beta = target``, or a certificate.

    ``subspace`` is ``"all"``, ``"J-invariant"``, ``"J-anti-invariant"`` or an
    explicit list of spanning forms.  The witness is the least-norm solution in
    the coordinates of the spanning set; the certificate is a functional that
    kills ``d`` of the subspace but not the target.
    """
    N = p.dim
    k = degree if degree is not None else target.degree - 1
    if target and target.degree != k + 1:
        raise ValueError(f"target has degree {target.degree}, expected {k + 1}")
    if k < 0:
        raise ValueError("target must have positive degree")
    if isinstance(subspace, str):
        if subspace == "all":
            span = [Form._raw(N, k, {m: _ONE}) for m in basis(N, k)]
        elif subspace in ("J-invariant", "J-anti-invariant"):
            if J is None:
                raise ValueError(f"subspace {subspace!r} needs a structure")
            span = invariant_subspace_basis(N, k, J, 1 if subspace == "J-invariant" else -1)
        else:
            raise ValueError(f"unknown subspace {subspace!r}")
    else:
        span = list(subspace)
        for s in span:
            if s.dim != N or (s and s.degree != k):
                raise ValueError("subspace spanning forms must have degree k")
    if not target:
        return SolveResult(True, Form.zero(N, k), None)
    images = [p.d(s).vector() for s in span]
    tvec = target.vector()
    x = min_norm_solution(images, tvec)
    if x is not None:
        beta = Form.zero(N, k)
        for j, c in x.items():
            beta = beta + span[j].scale(c)
        if p.d(beta) != target:
            raise AssertionError("least-norm solution failed verification")
        return SolveResult(True, beta, None)
    f = annihilator_witness([v for v in images if v], tvec)
    return SolveResult(False, None, Form.from_vector(N, k + 1, f))
