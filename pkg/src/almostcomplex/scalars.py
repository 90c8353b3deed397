"""Exact scalar towers: rationals, Gaussian rationals and truncated series.

Rationals are ``gmpy2.mpq``.  Gaussian rationals ``a + b i`` are
:class:`GaussQ`; arithmetic that produces a zero imaginary part collapses
back to ``mpq`` so that purely real computations stay on the fast path.
:class:`TSeries` is a truncated power series in a formal parameter ``t``
and its conjugate ``tb`` with Gaussian-rational coefficients; all terms of
total order above ``order`` are discarded.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral, Rational

from gmpy2 import mpq

__all__ = [
    "mpq",
    "qq",
    "GaussQ",
    "I",
    "TSeries",
    "DEFAULT_ORDER",
    "conj",
    "is_real",
    "is_unit",
    "re_part",
    "im_part",
    "scalar",
    "parse_scalar",
    "format_scalar",
]

DEFAULT_ORDER = 2

_MPQ = type(mpq(0))


def qq(x) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (Integral, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, GaussQ):
        if x.im != 0:
            raise ValueError(f"{x} is not rational")
        return x.re
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _mk(re_, im_):
    if im_ == 0:
        return re_
    g = object.__new__(GaussQ)
    g.re = re_
    g.im = im_
    return g


def _split(x):
    """(re, im) of a rational or Gaussian scalar, or None for other types."""
    if isinstance(x, _MPQ):
        return x, _ZERO
    if isinstance(x, GaussQ):
        return x.re, x.im
    if isinstance(x, (Integral, Fraction)):
        return mpq(x), _ZERO
    return None


_ZERO = mpq(0)
_ONE = mpq(1)


class GaussQ:
    """Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = qq(re)
        self.im = qq(im)

    def __add__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        return _mk(self.re + s[0], self.im + s[1])

    __radd__ = __add__

    def __sub__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        return _mk(self.re - s[0], self.im - s[1])

    def __rsub__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        return _mk(s[0] - self.re, s[1] - self.im)

    def __mul__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = s
        if d == 0:
            return _mk(a * c, b * c)
        return _mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        c, d = s
        if d == 0:
            return _mk(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return _mk((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        n = self.re * self.re + self.im * self.im
        c, d = s
        a, b = self.re, -self.im
        return _mk((c * a - d * b) / n, (c * b + d * a) / n)

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, Integral):
            return NotImplemented
        if n < 0:
            return (_ONE / self) ** (-n)
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return _mk(self.re, -self.im)

    def __eq__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        return self.re == s[0] and self.im == s[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussQ({format_scalar(self.re)}, {format_scalar(self.im)})"

    def __str__(self):
        return format_scalar(self)


I = GaussQ(0, 1)


class TSeries:
    """Truncated series in ``t`` and ``tb`` (the conjugate parameter).

    ``terms`` maps ``(a, b)`` to the coefficient of ``t**a * tb**b``; only
    total orders ``a + b <= order`` are kept.
    """

    __slots__ = ("order", "terms")

    def __init__(self, terms=None, order: int = DEFAULT_ORDER):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            if a + b <= order and c != 0:
                clean[(a, b)] = c if isinstance(c, (GaussQ, _MPQ)) else scalar(c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms, order):
        s = object.__new__(cls)
        s.order = order
        s.terms = terms
        return s

    @classmethod
    def t(cls, order: int = DEFAULT_ORDER) -> "TSeries":
        return cls({(1, 0): _ONE}, order)

    @classmethod
    def tb(cls, order: int = DEFAULT_ORDER) -> "TSeries":
        return cls({(0, 1): _ONE}, order)

    @classmethod
    def const(cls, c, order: int = DEFAULT_ORDER) -> "TSeries":
        return cls({(0, 0): c}, order)

    def _coerce(self, other):
        if isinstance(other, TSeries):
            return other
        s = _split(other)
        if s is None:
            return None
        c = _mk(*s)
        return TSeries._raw({(0, 0): c} if c != 0 else {}, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        k = min(self.order, o.order)
        out = {m: c for m, c in self.terms.items() if sum(m) <= k}
        for m, c in o.terms.items():
            if sum(m) > k:
                continue
            v = out.get(m, 0) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return TSeries._raw(out, k)

    __radd__ = __add__

    def __neg__(self):
        return TSeries._raw({m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            s = _split(other)
            if s is None:
                return NotImplemented
            c = _mk(*s)
            if c == 0:
                return TSeries._raw({}, self.order)
            return TSeries._raw({m: v * c for m, v in self.terms.items()}, self.order)
        k = min(self.order, other.order)
        out: dict = {}
        for (a, b), x in self.terms.items():
            if a + b > k:
                continue
            for (c, d), y in other.terms.items():
                if a + b + c + d > k:
                    continue
                m = (a + c, b + d)
                v = out.get(m, 0) + x * y
                if v == 0:
                    out.pop(m, None)
                else:
                    out[m] = v
        return TSeries._raw(out, k)

    __rmul__ = __mul__

    def constant(self):
        return self.terms.get((0, 0), _ZERO)

    def inverse(self) -> "TSeries":
        c0 = self.constant()
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = _ONE / c0
        r = TSeries._raw({m: -c * inv0 for m, c in self.terms.items() if m != (0, 0)}, self.order)
        out = TSeries.const(_ONE, self.order)
        power = TSeries.const(_ONE, self.order)
        for _ in range(self.order):
            power = power * r
            out = out + power
        return out * inv0

    def __truediv__(self, other):
        if isinstance(other, TSeries):
            return self * other.inverse()
        s = _split(other)
        if s is None:
            return NotImplemented
        return self * (_ONE / _mk(*s))

    def __rtruediv__(self, other):
        s = _split(other)
        if s is None:
            return NotImplemented
        return self.inverse() * _mk(*s)

    def __pow__(self, n: int):
        if not isinstance(n, Integral) or n < 0:
            return NotImplemented
        out = TSeries.const(_ONE, self.order)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "TSeries":
        return TSeries._raw({(b, a): conj(c) for (a, b), c in self.terms.items()}, self.order)

    def coefficient(self, a: int, b: int = 0):
        return self.terms.get((a, b), _ZERO)

    def truncate(self, order: int) -> "TSeries":
        return TSeries._raw({m: c for m, c in self.terms.items() if sum(m) <= order}, min(order, self.order))

    def evaluate(self, t0):
        """Substitute ``t = t0`` and ``tb = conj(t0)``."""
        t0 = scalar(t0)
        tb0 = conj(t0)
        total = _ZERO
        for (a, b), c in self.terms.items():
            total = total + c * _ipow(t0, a) * _ipow(tb0, b)
        return total

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        k = min(self.order, o.order)
        mine = {m: c for m, c in self.terms.items() if sum(m) <= k}
        theirs = {m: c for m, c in o.terms.items() if sum(m) <= k}
        return mine == theirs

    def __hash__(self):
        if set(self.terms) <= {(0, 0)}:
            return hash(self.constant())
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"TSeries({format_scalar(self)}, order={self.order})"

    def __str__(self):
        return format_scalar(self)


def _ipow(x, n):
    out = _ONE
    for _ in range(n):
        out = out * x
    return out


def scalar(x):
    """Normalize a Python number or string to the tower (mpq, GaussQ or TSeries)."""
    if isinstance(x, (_MPQ, GaussQ, TSeries)):
        if isinstance(x, GaussQ) and x.im == 0:
            return x.re
        return x
    if isinstance(x, (Integral, Fraction)):
        return mpq(x)
    if isinstance(x, complex):
        raise TypeError("floating-point complex values are not exact; use GaussQ")
    if isinstance(x, float):
        raise TypeError("floating-point values are not exact; use a rational")
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, Rational):
        return qq(x)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def conj(x):
    if isinstance(x, (GaussQ, TSeries)):
        return x.conjugate()
    return x


def is_real(x) -> bool:
    return conj(x) == x


def is_unit(x) -> bool:
    """True when ``x`` has a multiplicative inverse in its tower."""
    if isinstance(x, TSeries):
        return x.constant() != 0
    return x != 0


def re_part(x):
    if isinstance(x, GaussQ):
        return x.re
    if isinstance(x, TSeries):
        return (x + x.conjugate()) * mpq(1, 2)
    return x


def im_part(x):
    if isinstance(x, GaussQ):
        return x.im
    if isinstance(x, TSeries):
        return (x - x.conjugate()) * GaussQ(0, mpq(-1, 2))
    return _ZERO


_RAT = r"\d+(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"^\s*(?P<re>[+-]?\s*{_RAT})?\s*(?:(?P<isign>[+-])?\s*(?P<im>{_RAT})?\s*i)?\s*$"
)


_I_OVER_RE = re.compile(r"(?<![\d/])i/(\d+)")


def parse_scalar(text: str):
    """Parse ``"3"``, ``"-1/2"``, ``"i"``, ``"2/3i"``, ``"i/4"``, ``"1/2-3i"`` or ``"(1-i)"``."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    s = s.replace(" ", "")
    s = _I_OVER_RE.sub(r"1/\1i", s)
    if not s:
        raise ValueError("empty scalar")
    m = _GAUSS_RE.match(s)
    if not m or (m.group("re") is None and "i" not in s):
        raise ValueError(f"cannot parse scalar {text!r}")
    re_txt = m.group("re")
    re_v = mpq(re_txt) if re_txt is not None else _ZERO
    if "i" not in s:
        return re_v
    im_v = mpq(m.group("im")) if m.group("im") is not None else _ONE
    if m.group("isign") == "-":
        im_v = -im_v
    elif m.group("isign") is None and re_txt is not None:
        # "2i" parses its digits as the real group; "-2i" likewise
        im_v = re_v
        re_v = _ZERO
    return _mk(re_v, im_v)


def _fmt_q(x) -> str:
    x = qq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Exact text form: ``"p/q"``, ``"a+bi"`` or a series in ``t``/``tb``."""
    if isinstance(x, TSeries):
        if not x.terms:
            return "0"
        parts = []
        for (a, b) in sorted(x.terms, key=lambda m: (m[0] + m[1], -m[0])):
            c = x.terms[(a, b)]
            mono = "*".join(
                p for p in (
                    ("t" if a == 1 else f"t^{a}") if a else "",
                    ("tb" if b == 1 else f"tb^{b}") if b else "",
                ) if p
            )
            cs = format_scalar(c)
            if not mono:
                parts.append(f"({cs})" if isinstance(c, GaussQ) else cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"({cs})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out
    if isinstance(x, GaussQ):
        if x.im == 0:
            return _fmt_q(x.re)
        if x.im == 1:
            ims = "i"
        elif x.im == -1:
            ims = "-i"
        else:
            ims = f"{_fmt_q(x.im)}i"
        if x.re == 0:
            return ims
        return f"{_fmt_q(x.re)}{'' if ims.startswith('-') else '+'}{ims}"
    return _fmt_q(x)
