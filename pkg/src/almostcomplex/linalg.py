"""Exact linear algebra over the scalar towers.

Sparse vectors are ``dict[int, scalar]`` with no stored zeros; integer keys
double as the pivot order, so callers that index the exterior basis
lexicographically get lexicographic pivoting for free.  Dense matrices are
lists of row lists.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import conj, is_unit, mpq

_ONE = mpq(1)


class RowSpace:
    """Span of sparse vectors kept in reduced row echelon form.

    Each stored row has a 1 at its pivot (its smallest key) and a 0 at
    every other row's pivot.
    """

    def __init__(self, vectors: Iterable[dict] = ()):
        self._rows: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self):
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[dict]:
        return [self._rows[p] for p in sorted(self._rows)]

    def row(self, pivot: int) -> dict:
        return self._rows[pivot]

    def reduce(self, v: dict) -> dict:
        out = dict(v)
        rows = self._rows
        # rows are fully reduced, so clearing one pivot never creates another
        for p in [k for k in out if k in rows]:
            c = out.get(p)
            if not c:
                continue
            for k, x in rows[p].items():
                nv = out.get(k, 0) - c * x
                if nv == 0:
                    out.pop(k, None)
                else:
                    out[k] = nv
        return out

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def add(self, v: dict) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        c = r[p]
        if c != 1:
            inv = _ONE / c
            r = {k: x * inv for k, x in r.items()}
        for q, row in self._rows.items():
            f = row.get(p)
            if f:
                for k, x in r.items():
                    nv = row.get(k, 0) - f * x
                    if nv == 0:
                        row.pop(k, None)
                    else:
                        row[k] = nv
        self._rows[p] = r
        return True

    def coordinates(self, v: dict) -> dict | None:
        """Coefficients of ``v`` on ``rows()`` keyed by pivot, or None if outside."""
        if self.reduce(v):
            return None
        return {p: v[p] for p in self._rows if v.get(p)}


def _equations(columns: Sequence[dict]) -> dict[int, dict]:
    eqs: dict[int, dict] = {}
    for j, col in enumerate(columns):
        for i, c in col.items():
            eqs.setdefault(i, {})[j] = c
    return eqs


def kernel(columns: Sequence[dict]) -> list[dict]:
    """Canonical (RREF) basis of ``{x : sum_j x_j columns[j] = 0}``."""
    n = len(columns)
    rs = RowSpace(_equations(columns).values())
    pivots = set(rs.pivots)
    rows = rs.rows()
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        x = {f: _ONE}
        for row in rows:
            c = row.get(f)
            if c:
                x[min(row)] = -c
        basis.append(x)
    return basis


def rank(vectors: Iterable[dict]) -> int:
    return RowSpace(vectors).dim


def solve(columns: Sequence[dict], target: dict) -> dict | None:
    """A solution of ``sum_j x_j columns[j] = target`` (free variables 0), or None."""
    n = len(columns)
    eqs = _equations(columns)
    for i, c in target.items():
        eqs.setdefault(i, {})[n] = c
    rs = RowSpace(eqs.values())
    if n in rs.pivots:
        return None
    x = {}
    for p in rs.pivots:
        c = rs.row(p).get(n)
        if c:
            x[p] = c
    return x


def min_norm_solution(columns: Sequence[dict], target: dict) -> dict | None:
    """The solution orthogonal to the kernel (least coefficient norm), or None."""
    gram: dict[int, dict] = {}
    for col in columns:
        items = list(col.items())
        for i, a in items:
            gi = gram.setdefault(i, {})
            for k, b in items:
                v = gi.get(k, 0) + a * conj(b)
                if v == 0:
                    gi.pop(k, None)
                else:
                    gi[k] = v
    keys = sorted(set(gram) | set(target))
    index = {k: n for n, k in enumerate(keys)}
    gcols = [{index[i]: v for i, v in gram.get(k, {}).items()} for k in keys]
    y = solve(gcols, {index[i]: v for i, v in target.items()})
    if y is None:
        return None
    x = {}
    for j, col in enumerate(columns):
        s = 0
        for i, a in col.items():
            yi = y.get(index[i])
            if yi:
                s = s + conj(a) * yi
        if s != 0:
            x[j] = s
    return x


def annihilator_witness(vectors: Sequence[dict], target: dict) -> dict | None:
    """A functional f with f(v) = 0 for every v but f(target) != 0, or None."""
    rs = RowSpace(vectors)
    if rs.contains(target):
        return None
    keys = sorted(set(target).union(*[set(v) for v in vectors]) if vectors else set(target))
    index = {k: n for n, k in enumerate(keys)}
    # functionals f (indexed like keys) with sum_k f_k v_k = 0: kernel of V^T
    cols = [{} for _ in keys]
    for r, v in enumerate(vectors):
        for k, c in v.items():
            cols[index[k]][r] = c
    for f in kernel(cols):
        val = sum((c * target.get(keys[k], 0) for k, c in f.items()), 0)
        if val != 0:
            return {keys[k]: c for k, c in f.items()}
    raise AssertionError("target outside the span but no separating functional found")


def apply_functional(f: dict, v: dict):
    return sum((c * v[k] for k, c in f.items() if k in v), mpq(0))


def add_vectors(a: dict, b: dict, scale=_ONE) -> dict:
    out = dict(a)
    for k, x in b.items():
        nv = out.get(k, 0) + scale * x
        if nv == 0:
            out.pop(k, None)
        else:
            out[k] = nv
    return out


def scale_vector(v: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: x * c for k, x in v.items()}


def combine(vectors: Sequence[dict], coeffs: dict) -> dict:
    out: dict = {}
    for j, c in coeffs.items():
        out = add_vectors(out, vectors[j], c)
    return out


def intersection(a: Sequence[dict], b: Sequence[dict]) -> list[dict]:
    """RREF basis of span(a) ∩ span(b)."""
    a = RowSpace(a).rows()
    b = RowSpace(b).rows()
    cols = list(a) + [scale_vector(v, -1) for v in b]
    out = RowSpace()
    for x in kernel(cols):
        out.add(combine(a, {j: c for j, c in x.items() if j < len(a)}))
    return out.rows()


# --- dense helpers -----------------------------------------------------------

Matrix = list


def identity(n: int) -> Matrix:
    return [[_ONE if i == j else mpq(0) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[mpq(0)] * (n if m is None else m) for _ in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x != 0]
        out.append([sum((x * col[k] for k, x in nz), mpq(0)) for col in bt])
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum((x * v[k] for k, x in enumerate(row) if x != 0), mpq(0)) for row in a]


def matadd(a: Matrix, b: Matrix, scale=_ONE) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(a: Matrix, c) -> Matrix:
    return [[x * c for x in r] for r in a]


def mat_equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def mat_conj(a: Matrix) -> Matrix:
    return [[conj(x) for x in r] for r in a]


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; pivots must be units (works for truncated series)."""
    n = len(a)
    m = [list(r) + [(_ONE if i == j else mpq(0)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if is_unit(m[r][c])), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        inv = _ONE / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [r[n:] for r in m]


def det(a: Matrix):
    n = len(a)
    m = [list(r) for r in a]
    out = _ONE
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return mpq(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        piv = m[c][c]
        out = out * piv
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / piv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return out


def dense_rank(a: Matrix) -> int:
    return rank({j: x for j, x in enumerate(row) if x != 0} for row in a)


def leading_minors(a: Matrix) -> list:
    """Leading principal minors of ``a`` in increasing size."""
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion for a symmetric rational matrix."""
    return all(m > 0 for m in leading_minors(a))
