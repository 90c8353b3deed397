"""Invariant metrics, Hodge star, adjoints, harmonic forms and the taming/compatibility battery.

Inner products of forms come from the exact Gram matrices induced by the
metric; adjoints are literal matrix adjoints against those Gram matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from gmpy2 import is_square, isqrt

from .cohomology import NotClosedError, hlc_check
from .complexstruct import AlmostComplexStructure, is_integrable, type_components
from .exterior import Form, _wedge_sign, basis, divided_power, format_form, indices_of, pullback_endo
from .lie import LieAlgebraPresentation
from .linalg import (
    RowSpace,
    det,
    identity,
    inverse,
    is_positive_definite,
    kernel,
    mat_conj,
    mat_equal,
    matmul,
    transpose,
    zeros,
)
from .scalars import conj, is_real, mpq, scalar

__all__ = [
    "HermitianData",
    "hodge_star",
    "harmonic_space",
    "AdjointOperator",
    "adjoint_operator",
    "inner_product",
    "PredicateReport",
    "form_predicates",
    "bilinear_matrix",
    "PositivityVerdict",
    "positivity_on_complex_hyperplanes",
]

_ONE = mpq(1)


def bilinear_matrix(a: Form) -> list[list]:
    """``M[i][j] = a(theta_i, theta_j)`` for a 2-form."""
    if a.degree != 2 and a:
        raise ValueError("need a 2-form")
    N = a.dim
    M = zeros(N)
    for (i, j), c in a.terms():
        M[i - 1][j - 1] = c
        M[j - 1][i - 1] = -c
    return M


def _sqrt_q(x) -> mpq:
    x = mpq(x)
    if x <= 0:
        raise ValueError("metric determinant must be positive")
    num, den = x.numerator, x.denominator
    if not (is_square(num) and is_square(den)):
        raise ValueError("the metric's determinant is not a rational square, so the volume form is irrational")
    return mpq(isqrt(num), isqrt(den))


class HermitianData:
    """A J-Hermitian invariant metric and the induced inner products on forms.

    ``metric`` is a symmetric frame matrix ``g[i][j] = g(theta_i, theta_j)``.
    If omitted, ``omega`` (with ``g = omega(., J .)``) is used, and otherwise
    the default ``sum_a Re(phi^a (x) conj(phi^a))`` built from the structure's
    (1,0)-coframe.
    """

    def __init__(self, p: LieAlgebraPresentation, J: AlmostComplexStructure | None = None,
                 metric: Sequence[Sequence] | None = None, omega: Form | None = None):
        self.p = p
        self.J = J
        N = p.dim
        if metric is not None:
            g = [[scalar(x) for x in r] for r in metric]
        elif omega is not None:
            if J is None:
                raise ValueError("a metric from omega needs a structure")
            g = matmul(bilinear_matrix(omega), J.J)
        elif J is not None:
            g = zeros(N)
            for phi in J.coframe:
                v = [phi.coeff(i) for i in range(1, N + 1)]
                for i in range(N):
                    for j in range(N):
                        x = v[i] * conj(v[j])
                        g[i][j] = g[i][j] + (x + conj(x)) * mpq(1, 2)
        else:
            g = identity(N)
        if not mat_equal(g, transpose(g)) or not all(is_real(x) for r in g for x in r):
            raise ValueError("metric must be real symmetric")
        if not is_positive_definite(g):
            raise ValueError("metric is not positive definite")
        self.g = g
        self.ginv = inverse(g)
        self.sqrt_det = _sqrt_q(det(g))
        self._gram: dict[int, list[list]] = {}
        self._gram_inv: dict[int, list[list]] = {}

    @property
    def dim(self) -> int:
        return self.p.dim

    @cached_property
    def is_diagonal(self) -> bool:
        return all(self.ginv[i][j] == 0 for i in range(self.dim) for j in range(self.dim) if i != j)

    def gram(self, k: int) -> list[list]:
        """Inner products ``<e^I, e^J>`` on degree-k monomials (minors of ``g^{-1}``)."""
        G = self._gram.get(k)
        if G is None:
            monos = basis(self.dim, k)
            idx = [[i - 1 for i in indices_of(m)] for m in monos]
            gi = self.ginv
            if self.is_diagonal:
                G = zeros(len(monos))
                for a, I in enumerate(idx):
                    v = _ONE
                    for i in I:
                        v = v * gi[i][i]
                    G[a][a] = v
            else:
                G = [[det([[gi[i][j] for j in Jx] for i in I]) if k else _ONE for Jx in idx] for I in idx]
            self._gram[k] = G
        return G

    def gram_inverse(self, k: int) -> list[list]:
        Gi = self._gram_inv.get(k)
        if Gi is None:
            G = self.gram(k)
            if self.is_diagonal:
                Gi = zeros(len(G))
                for a in range(len(G)):
                    Gi[a][a] = _ONE / G[a][a]
            else:
                Gi = inverse(G)
            self._gram_inv[k] = Gi
        return Gi

    @cached_property
    def volume(self) -> Form:
        N = self.dim
        return Form._raw(N, N, {(1 << N) - 1: self.sqrt_det})


def _dense(a: Form) -> list:
    n = len(basis(a.dim, a.degree))
    v = [mpq(0)] * n
    for j, c in a.vector().items():
        v[j] = c
    return v


def _mv(M, v):
    return [sum((x * v[k] for k, x in enumerate(row) if x != 0 and v[k] != 0), mpq(0)) for row in M]


def inner_product(h: HermitianData, a: Form, b: Form):
    """Hermitian inner product, linear in ``a`` and conjugate-linear in ``b``."""
    if not a or not b:
        return mpq(0)
    if a.degree != b.degree:
        return mpq(0)
    G = h.gram(a.degree)
    va, vb = a.vector(), b.vector()
    total = mpq(0)
    for i, x in va.items():
        row = G[i]
        for j, y in vb.items():
            if row[j] != 0:
                total = total + x * row[j] * conj(y)
    return total


def hodge_star(h: HermitianData, a: Form) -> Form:
    """``*`` with ``a ^ *b = <a, b> vol`` for real forms (extended complex-linearly)."""
    N = h.dim
    k = a.degree
    G = h.gram(k)
    full = (1 << N) - 1
    out = {}
    v = a.vector()
    monos = basis(N, k)
    for I, mI in enumerate(monos):
        row = G[I]
        s = mpq(0)
        for j, c in v.items():
            if row[j] != 0:
                s = s + row[j] * c
        if s != 0:
            comp = full ^ mI
            out[comp] = s * h.sqrt_det * _wedge_sign(mI, comp)
    return Form._raw(N, N - k, out)


def harmonic_space(h: HermitianData, k: int) -> list[Form]:
    """RREF basis of ``ker d ∩ ker d*`` on invariant k-forms."""
    N = h.dim
    d_out = h.p.d.columns(k)
    n_k = len(basis(N, k))
    cols = [dict(c) for c in d_out]
    if k > 0:
        # d* x = 0  iff  D_{k-1}^T G_k x = 0; append those equations with shifted row keys
        d_in = h.p.d.columns(k - 1)
        G = h.gram(k)
        shift = len(basis(N, k + 1)) if k < N else 0
        for j in range(n_k):
            col = cols[j]
            for r, dc in enumerate(d_in):
                val = sum((c * G[i][j] for i, c in dc.items() if G[i][j] != 0), mpq(0))
                if val != 0:
                    col[shift + r] = val
    return [Form.from_vector(N, k, v) for v in RowSpace(kernel(cols)).rows()]


class AdjointOperator:
    """Adjoint of ``d``, ``del`` or ``delbar`` from degree ``k+1`` to degree ``k``.

    ``matrix`` acts on e-basis coefficient vectors.
    """

    def __init__(self, h: HermitianData, which: str, k: int):
        self.h = h
        self.which = which
        self.degree = k
        P = operator_matrix(h.p, h.J, which, k)  # rows: degree k+1, cols: degree k
        PH = transpose(mat_conj(P))
        self.forward = P
        self.matrix = matmul(h.gram_inverse(k), matmul(PH, h.gram(k + 1)))

    def __call__(self, b: Form) -> Form:
        if b and b.degree != self.degree + 1:
            raise ValueError(f"expected degree {self.degree + 1}")
        out = _mv(self.matrix, _dense(b) if b else [mpq(0)] * len(self.matrix[0]))
        return Form.from_vector(self.h.dim, self.degree, {i: c for i, c in enumerate(out) if c != 0})


def operator_matrix(p: LieAlgebraPresentation, J: AlmostComplexStructure | None, which: str, k: int) -> list[list]:
    """Dense matrix of ``d``, ``del`` or ``delbar`` from degree k to degree k+1."""
    N = p.dim
    rows = len(basis(N, k + 1))
    monos = basis(N, k)
    M = zeros(rows, len(monos))
    for j, m in enumerate(monos):
        f = Form._raw(N, k, {m: _ONE})
        if which == "d":
            img = p.d(f)
        elif which in ("del", "delbar"):
            if J is None:
                raise ValueError(f"{which} needs a structure")
            img = Form.zero(N, k + 1)
            for (a, b), part in type_components(f, J).items():
                want = (a + 1, b) if which == "del" else (a, b + 1)
                img = img + type_components(p.d(part), J).get(want, Form.zero(N, k + 1))
        else:
            raise ValueError(f"unknown operator {which!r}")
        for i, c in img.vector().items():
            M[i][j] = c
    return M


def adjoint_operator(h: HermitianData, which: str, k: int) -> AdjointOperator:
    """``P*`` on (k+1)-forms for ``P`` in ``{"d", "del", "delbar"}`` acting on k-forms."""
    if which not in ("d", "del", "delbar"):
        raise ValueError(f"unknown operator {which!r}")
    return AdjointOperator(h, which, k)


# --- predicates -----------------------------------------------------------------------


@dataclass
class PredicateReport:
    nondegenerate: bool
    taming: bool
    compatible: bool
    closed: bool
    almost_kahler: bool
    semi_kahler: bool
    balanced: bool
    integrable: bool
    hlc: bool | None
    d_omega: Form = None
    d_omega_power: Form = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "nondegenerate": self.nondegenerate,
            "taming": self.taming,
            "compatible": self.compatible,
            "closed": self.closed,
            "almost_kahler": self.almost_kahler,
            "semi_kahler": self.semi_kahler,
            "balanced": self.balanced,
            "integrable": self.integrable,
            "hlc": self.hlc,
            "d_omega": format_form(self.d_omega),
            "d_omega_power": format_form(self.d_omega_power),
        }


def _taming(omega: Form, J: AlmostComplexStructure) -> bool:
    g = matmul(bilinear_matrix(omega), J.J)
    sym = [[(g[i][j] + g[j][i]) * mpq(1, 2) for j in range(len(g))] for i in range(len(g))]
    return is_positive_definite(sym)


def form_predicates(p: LieAlgebraPresentation, J: AlmostComplexStructure, omega: Form) -> PredicateReport:
    if omega.degree != 2:
        raise ValueError("omega must be a 2-form")
    if not omega.is_real:
        raise ValueError("omega must be real")
    n = p.dim // 2
    nondeg = bool(divided_power(omega, n))
    taming = _taming(omega, J)
    compatible = taming and pullback_endo(omega, J.J) == omega
    d_omega = p.d(omega)
    d_pow = p.d(divided_power(omega, n - 1))
    closed = not d_omega
    integrable = is_integrable(p, J)
    hlc = None
    if closed:
        hlc = all(m.iso for m in hlc_check(p, omega).values())
    return PredicateReport(
        nondegenerate=nondeg,
        taming=taming,
        compatible=compatible,
        closed=closed,
        almost_kahler=compatible and closed,
        semi_kahler=compatible and not d_pow,
        balanced=compatible and not d_pow and integrable,
        integrable=integrable,
        hlc=hlc,
        d_omega=d_omega,
        d_omega_power=d_pow,
    )


@dataclass
class PositivityVerdict:
    status: str
    """``"exact-positive"``, ``"counterexample"`` or ``"no-counterexample"`` (the last is not a proof)."""
    trials: int
    degenerate: int = 0
    value: object = None
    vectors: list | None = None
    samples: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == "exact-positive"

    def as_dict(self) -> dict:
        from .scalars import format_scalar

        return {
            "status": self.status,
            "certified": self.certified,
            "trials": self.trials,
            "degenerate": self.degenerate,
            "value": format_scalar(self.value) if self.value is not None else None,
            "vectors": [[format_scalar(x) for x in v] for v in self.vectors] if self.vectors else None,
        }


def _random_rational(rng: random.Random):
    return mpq(rng.randint(-9, 9), rng.randint(1, 5))


def positivity_on_complex_hyperplanes(p: LieAlgebraPresentation, J: AlmostComplexStructure, Phi: Form,
                                      trials: int = 50, seed: int = 0, root: Form | None = None) -> PositivityVerdict:
    """Test ``Phi(X_1, J X_1, ..., X_{n-1}, J X_{n-1}) > 0`` on complex (n-1)-subspaces.

    When ``root`` is a real taming (1,1)-form and ``Phi`` is a positive
    multiple of ``root^{n-1}``, positivity holds exactly.  Otherwise random
    rational subspaces are sampled: a non-positive value is a genuine
    counterexample, while finding none proves nothing.
    """
    N = p.dim
    n = N // 2
    if Phi.degree != N - 2 and Phi:
        raise ValueError(f"Phi must have degree {N - 2}")
    if not Phi.is_real:
        raise ValueError("Phi must be real")
    if root is not None:
        power = divided_power(root, n - 1)
        ratio = _ratio(Phi, power)
        if (ratio is not None and ratio > 0 and root.is_real and _taming(root, J)
                and pullback_endo(root, J.J) == root):
            return PositivityVerdict("exact-positive", 0)
    rng = random.Random(seed)
    degenerate = 0
    samples = []
    for t in range(trials):
        vecs = []
        for _ in range(n - 1):
            X = [_random_rational(rng) for _ in range(N)]
            JX = [sum((J.J[i][j] * X[j] for j in range(N)), mpq(0)) for i in range(N)]
            vecs.extend([X, JX])
        val = Phi(*vecs)
        samples.append(val)
        if val == 0:
            degenerate += 1
            continue
        if val < 0:
            return PositivityVerdict("counterexample", t + 1, degenerate, val, vecs, samples)
    return PositivityVerdict("no-counterexample", trials, degenerate, None, None, samples)


def _ratio(a: Form, b: Form):
    """``c`` with ``a = c b``, or None."""
    if not b:
        return None
    m, c = next(iter(b.items()))
    r = a.mask_coeff(m) / c
    return r if a == b.scale(r) else None
