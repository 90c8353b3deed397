"""Curves of almost-complex structures and the closedness obstruction along them.

Two kinds of curve are supported.  An :class:`EndomorphismCurve` moves ``J``
by conjugation, ``J_t = (id - tL) J (id - tL)^{-1}``; a :class:`CoframeCurve`
prescribes the (1,0)-coframe as polynomials in ``t`` and ``tb`` (the
conjugate parameter).  Series computations use :class:`~.scalars.TSeries`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cohomology import NotClosedError, SolveResult, solve_d_in_subspace, stage_report
from .complexstruct import AlmostComplexStructure, NotSpanningError, acs_from_coframe
from .exterior import Form, derivation, format_form, pullback_endo, substitute
from .lie import LieAlgebraPresentation
from .linalg import identity, inverse, mat_equal, matadd, matmul, matscale, transpose, zeros
from .scalars import DEFAULT_ORDER, GaussQ, TSeries, conj, format_scalar, is_real, mpq, scalar

__all__ = [
    "DegenerateCurveError",
    "EndomorphismCurve",
    "CoframeCurve",
    "evaluate_curve",
    "series_expand_curve",
    "closed_form_series",
    "ObstructionStep",
    "ObstructionReport",
    "obstruction",
    "block_direction",
    "named_direction",
    "TwistCheck",
    "transcribed_twist_differential",
    "validate_twist_formula",
    "ScanRow",
    "semicontinuity_scan",
    "change_basis",
]

_ONE = mpq(1)
_HALF = mpq(1, 2)


class DegenerateCurveError(ValueError):
    """The curve does not define an almost-complex structure at the requested parameter."""


def _anticommutes(L, J) -> bool:
    return mat_equal(matadd(matmul(L, J), matmul(J, L)), zeros(len(J)))


class EndomorphismCurve:
    """``J_t = (id - tL) J (id - tL)^{-1}``."""

    def __init__(self, J: AlmostComplexStructure, L: Sequence[Sequence], require_anticommuting: bool = True):
        N = J.dim
        if len(L) != N or any(len(r) != N for r in L):
            raise ValueError(f"L must be {N}x{N}")
        self.J = J
        self.L = [[scalar(x) for x in r] for r in L]
        if not all(is_real(x) for r in self.L for x in r):
            raise ValueError("L must be real")
        self.anticommuting = _anticommutes(self.L, J.J)
        if require_anticommuting and not self.anticommuting:
            raise ValueError("L must satisfy LJ + JL = 0")

    @property
    def dim(self) -> int:
        return self.J.dim

    def matrix_at(self, t) -> list[list]:
        t = scalar(t)
        if not is_real(t):
            raise DegenerateCurveError("a non-real parameter gives a complex endomorphism; use a real t")
        N = self.dim
        M = matadd(identity(N), self.L, -t)
        try:
            Minv = inverse(M)
        except ZeroDivisionError:
            raise DegenerateCurveError(f"id - tL is singular at t = {format_scalar(t)}")
        return matmul(M, matmul(self.J.J, Minv))

    def at(self, t) -> AlmostComplexStructure:
        if scalar(t) == 0:
            return self.J
        return AlmostComplexStructure(self.matrix_at(t))


class CoframeCurve:
    """A (1,0)-coframe depending polynomially on ``t`` and ``tb``.

    ``entries`` are 1-forms whose coefficients may be :class:`TSeries`
    (polynomials here; keep their total degree within the series order).
    """

    def __init__(self, dim: int, entries: Sequence[Form], order: int = DEFAULT_ORDER):
        self._dim = dim
        self.entries = list(entries)
        self.order = order
        if len(self.entries) * 2 != dim:
            raise ValueError(f"need {dim // 2} coframe entries")
        for f in self.entries:
            if f.dim != dim or (f and f.degree != 1):
                raise ValueError("coframe entries must be 1-forms")

    @classmethod
    def perturb(cls, base: Sequence[Form], changes: dict[int, Form], order: int = DEFAULT_ORDER) -> "CoframeCurve":
        """``phi^a_t = phi^a + changes[a]``; ``changes`` values carry the series coefficients."""
        dim = base[0].dim
        entries = []
        for a, phi in enumerate(base, start=1):
            lifted = phi.map_coeffs(lambda c: TSeries.const(c, order))
            if a in changes:
                lifted = lifted + changes[a]
            entries.append(lifted)
        return cls(dim, entries, order)

    @property
    def dim(self) -> int:
        return self._dim

    def coframe_at(self, t) -> list[Form]:
        t = scalar(t)
        return [f.evaluate_parameter(t) for f in self.entries]

    def at(self, t) -> AlmostComplexStructure:
        cf = self.coframe_at(t)
        try:
            return acs_from_coframe(self.dim, cf)
        except NotSpanningError as exc:
            raise DegenerateCurveError(f"coframe degenerates at t = {format_scalar(scalar(t))}: {exc}")


def evaluate_curve(curve, t) -> AlmostComplexStructure:
    J = curve.at(t)
    N = J.dim
    if not mat_equal(matmul(J.J, J.J), matscale(identity(N), -1)):
        raise AssertionError("evaluated structure fails J^2 = -id")
    return J


def _series_matrix(A, order):
    return [[x if isinstance(x, TSeries) else TSeries.const(x, order) for x in r] for r in A]


def closed_form_series(curve: EndomorphismCurve, order: int) -> list[list]:
    """``J + sum_{j=1}^{order} 2 t^j J L^j`` with :class:`TSeries` entries."""
    N = curve.dim
    t = TSeries.t(order)
    out = _series_matrix(curve.J.J, order)
    power = identity(N)
    for j in range(1, order + 1):
        power = matmul(power, curve.L)
        term = matmul(curve.J.J, power)
        tj = t ** j
        out = [[out[r][c] + tj * (2 * term[r][c]) for c in range(N)] for r in range(N)]
    return out


def series_expand_curve(curve: EndomorphismCurve, order: int = DEFAULT_ORDER, K: int = DEFAULT_ORDER) -> list[list]:
    """Truncated series of ``J_t``, cross-checked against the conjugation formula."""
    if order > K:
        raise ValueError(f"order {order} exceeds the configured truncation {K}")
    N = curve.dim
    t = TSeries.t(order)
    M = [[(TSeries.const(_ONE if r == c else 0, order) - t * curve.L[r][c]) for c in range(N)] for r in range(N)]
    direct = matmul(M, matmul(_series_matrix(curve.J.J, order), inverse(M)))
    closed = closed_form_series(curve, order)
    if curve.anticommuting and not mat_equal(direct, closed):
        raise AssertionError("series of J_t does not match J + sum 2 t^j J L^j")
    return direct


# --- obstruction ------------------------------------------------------------------


def _bilinear(a: Form) -> list[list]:
    N = a.dim
    M = zeros(N)
    for (i, j), c in a.terms():
        M[i - 1][j - 1] = c
        M[j - 1][i - 1] = -c
    return M


def _skew_form(B: list[list], N: int) -> Form:
    """The 2-form with value ``(B(X,Y) - B(Y,X))/2``."""
    data = {}
    for i in range(N):
        for j in range(i + 1, N):
            v = (B[i][j] - B[j][i]) * _HALF
            if v != 0:
                data[(i + 1, j + 1)] = v
    return Form(N, data, degree=2)


def _mat_pow(L, k):
    out = identity(len(L))
    for _ in range(k):
        out = matmul(out, L)
    return out


def _shifted(a: Form, L, p: int, q: int) -> Form:
    """Skew part of ``(X, Y) -> a(L^p X, L^q Y)``."""
    M = _bilinear(a)
    B = matmul(transpose(_mat_pow(L, p)), matmul(M, _mat_pow(L, q)))
    return _skew_form(B, a.dim)


def _literal_carry(alpha: Form, betas: list[Form], L, j: int) -> Form:
    """Everything inside ``d(...)`` at order ``j`` of the literal system except ``beta_j``."""
    N = alpha.dim
    out = _shifted(alpha, L, j, 0).scale(2) + _shifted(alpha, L, 0, j).scale(2)
    for k in range(1, j):
        out = out + _shifted(alpha, L, j - k, k).scale(4)
    for h in range(1, j):
        out = out + _shifted(betas[h - 1], L, j - h, 0).scale(2)
        for k in range(1, j - h):
            out = out + _shifted(alpha, L, j - h - k, k).scale(4)
        out = out + _shifted(alpha, L, 0, j - h).scale(2)
    return out if out else Form.zero(N, 2)


def _coefficient(a: Form, j: int) -> Form:
    """Coefficient of ``t^j`` of a form with series coefficients."""
    return a.map_coeffs(lambda c: c.coefficient(j, 0) if isinstance(c, TSeries) else (c if j == 0 else 0))


def _lift(a: Form, order: int) -> Form:
    return a.map_coeffs(lambda c: c if isinstance(c, TSeries) else TSeries.const(c, order))


def _projector(Jt_series, phi: Form) -> Form:
    """``(phi + J_t phi)/2`` with ``J_t`` acting as ``phi(J_t ., J_t .)``."""
    return (phi + pullback_endo(phi, Jt_series)).scale(_HALF)


@dataclass
class ObstructionStep:
    order: int
    mode: str
    solvable: bool
    target: Form
    """Right-hand side ``d beta_j`` (or ``d gamma_j``) had to match."""
    witness: Form | None = None
    certificate: Form | None = None

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "mode": self.mode,
            "solvable": self.solvable,
            "target": format_form(self.target),
            "witness": format_form(self.witness) if self.witness is not None else None,
            "certificate": format_form(self.certificate) if self.certificate is not None else None,
        }


@dataclass
class ObstructionReport:
    mode: str
    order: int
    steps: list[ObstructionStep]
    eta: list[Form] = field(default_factory=list)
    """Coefficients ``eta_0..eta_K`` of the reconstructed ``eta_t`` (empty if a step failed)."""
    closed_through: int | None = None
    """Largest ``j`` with ``d eta_t`` vanishing through ``t^j`` (None if not reconstructed)."""

    @property
    def solvable(self) -> bool:
        return all(s.solvable for s in self.steps) and len(self.steps) == self.order

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "order": self.order,
            "solvable": self.solvable,
            "steps": [s.as_dict() for s in self.steps],
            "eta": [format_form(f) for f in self.eta],
            "closed_through": self.closed_through,
        }


def obstruction(p: LieAlgebraPresentation, J: AlmostComplexStructure, alpha: Form, L: Sequence[Sequence],
                order: int = 1, mode: str = "projected", K: int | None = None) -> ObstructionReport:
    """Solve the order-by-order system for a closed ``J_t``-invariant ``eta_t`` near ``alpha``.

    ``mode="paper_literal"`` solves the literal equations with ``beta_j``
    ranging over all invariant 2-forms.  ``mode="projected"`` expands
    ``eta_t = (alpha_t + J_t alpha_t)/2`` honestly, which makes each order a
    ``d gamma = target`` problem over J-invariant 2-forms.
    """
    mode = mode.replace("-", "_")
    if mode not in ("paper_literal", "projected"):
        raise ValueError(f"unknown mode {mode!r}")
    K = DEFAULT_ORDER if K is None else K
    if order < 1:
        raise ValueError("order must be at least 1")
    if order > K:
        raise ValueError(f"order {order} exceeds the configured truncation {K}")
    N = p.dim
    if alpha.degree != 2 or alpha.dim != N:
        raise ValueError("alpha must be a 2-form on the presentation's space")
    if not alpha.is_real:
        raise ValueError("alpha must be real")
    da = p.d(alpha)
    if da:
        raise NotClosedError(da)
    if pullback_endo(alpha, J.J) != alpha:
        raise ValueError("alpha is not of type (1,1) for J")
    curve = EndomorphismCurve(J, L)
    Lm = curve.L
    Jt = closed_form_series(curve, K)

    steps: list[ObstructionStep] = []
    betas: list[Form] = []
    for j in range(1, order + 1):
        if mode == "paper_literal":
            carry = _literal_carry(alpha, betas, Lm, j)
            target = -p.d(carry)
            res = solve_d_in_subspace(p, target, "all", degree=2)
        else:
            alpha_t = _lift(alpha, K)
            t = TSeries.t(K)
            for h, b in enumerate(betas, start=1):
                alpha_t = alpha_t + _lift(b, K).scale(t ** h)
            carry = _coefficient(_projector(Jt, alpha_t), j)
            target = -p.d(carry) if carry else Form.zero(N, 3)
            res = solve_d_in_subspace(p, target, "J-invariant", J=J, degree=2)
        steps.append(ObstructionStep(j, mode, res.solvable, target, res.witness, res.certificate))
        if not res.solvable:
            return ObstructionReport(mode, order, steps)
        betas.append(res.witness if res.witness else Form.zero(N, 2))

    alpha_t = _lift(alpha, K)
    t = TSeries.t(K)
    for h, b in enumerate(betas, start=1):
        alpha_t = alpha_t + _lift(b, K).scale(t ** h)
    eta_t = _projector(Jt, alpha_t)
    d_eta = derivation(eta_t, p.images, 2)
    closed_through = -1
    for j in range(0, K + 1):
        if _coefficient(d_eta, j):
            break
        closed_through = j
    eta = [_coefficient(eta_t, j) for j in range(0, K + 1)]
    report = ObstructionReport(mode, order, steps, eta, closed_through)
    if mode == "projected" and closed_through < order:
        raise AssertionError("projected solution does not make d eta_t vanish to the solved order")
    return report


def block_direction(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    """``L = [[A, B], [B, -A]]`` from two n x n blocks."""
    n = len(A)
    L = zeros(2 * n)
    for i in range(n):
        for j in range(n):
            a, b = scalar(A[i][j]), scalar(B[i][j])
            L[i][j] = a
            L[i][n + j] = b
            L[n + i][j] = b
            L[n + i][n + j] = -a
    return L


def named_direction(name: str, n: int, value=1) -> list[list]:
    """``"a12"`` or ``"b13"`` style single-entry block directions (1-based block indices)."""
    name = name.strip().lower()
    if len(name) != 3 or name[0] not in "ab" or not name[1:].isdigit():
        raise ValueError(f"direction must look like 'a12' or 'b13', not {name!r}")
    i, j = int(name[1]) - 1, int(name[2]) - 1
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"direction index out of range in {name!r}")
    A = zeros(n)
    B = zeros(n)
    (A if name[0] == "a" else B)[i][j] = scalar(value)
    return block_direction(A, B)


# --- twist formula cross-check ----------------------------------------------------------


def transcribed_twist_differential(a12, a13, b12, b13) -> Form:
    """The ten-term expansion of ``d(alpha(L.,.) + alpha(.,L.))`` for alpha = e^14 on (12,0,-36,24,56,0), as transcribed."""
    a12, a13, b12, b13 = (scalar(x) for x in (a12, a13, b12, b13))
    return Form(6, {
        (1, 2, 3): b13, (1, 2, 5): a12, (1, 2, 6): -a13, (1, 3, 6): b13, (1, 5, 6): -a12,
        (2, 3, 4): a13, (2, 4, 5): -b12, (2, 4, 6): -b13, (3, 4, 6): a13, (4, 5, 6): b12,
    }, degree=3)


@dataclass
class TwistCheck:
    equal: bool
    engine: Form
    transcribed: Form

    @property
    def discrepancy(self) -> Form:
        return self.engine - self.transcribed


def validate_twist_formula(p: LieAlgebraPresentation, J: AlmostComplexStructure, alpha: Form,
                           A: Sequence[Sequence], B: Sequence[Sequence]) -> TwistCheck:
    """Compare ``d twist(alpha, L)`` for ``L = [[A, B], [B, -A]]`` with the transcribed expansion."""
    from .exterior import twist

    L = block_direction(A, B)
    engine = p.d(twist(alpha, L))
    reference = transcribed_twist_differential(A[0][1], A[0][2], B[0][1], B[0][2])
    return TwistCheck(engine == reference, engine, reference)


# --- semicontinuity scan --------------------------------------------------------------------


@dataclass
class ScanRow:
    t: object
    h_plus: int | None = None
    h_minus: int | None = None
    pure: bool | None = None
    full: bool | None = None
    intersection: int | None = None
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "t": format_scalar(scalar(self.t)),
            "h_plus": self.h_plus,
            "h_minus": self.h_minus,
            "pure": self.pure,
            "full": self.full,
            "intersection": self.intersection,
            "error": self.error,
        }


def semicontinuity_scan(p: LieAlgebraPresentation, curve, samples: Sequence) -> list[ScanRow]:
    rows = []
    for t in samples:
        try:
            J = evaluate_curve(curve, t)
        except (DegenerateCurveError, ValueError) as exc:
            rows.append(ScanRow(t, error=str(exc)))
            continue
        r = stage_report(p, J, 2)
        rows.append(ScanRow(t, r.h_plus, r.h_minus, r.pure, r.full, r.plus_minus_intersection))
    return rows


# --- change of coframe ------------------------------------------------------------------------


def change_basis(p: LieAlgebraPresentation, G: Sequence[Sequence]):
    """New coframe ``f^i = sum_j G[i][j] e^j``.

    Returns ``(p2, form_map, endo_map)``: the presentation in the new
    coframe and functions carrying forms and frame endomorphisms across.
    """
    N = p.dim
    G = [[scalar(x) for x in r] for r in G]
    Ginv = inverse(G)
    to_new = [Form._raw(N, 1, {1 << j: x for j, x in enumerate(row) if x != 0}) for row in Ginv]

    def form_map(a: Form) -> Form:
        return substitute(a, to_new)

    def endo_map(A):
        return matmul(G, matmul([[scalar(x) for x in r] for r in A], Ginv))

    images = []
    for i in range(N):
        df = Form.zero(N, 2)
        for j in range(N):
            if G[i][j] != 0:
                df = df + p.images[j].scale(G[i][j])
        images.append(form_map(df))
    return LieAlgebraPresentation(images, name=p.name), form_map, endo_map
