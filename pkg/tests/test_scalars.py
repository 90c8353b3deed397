import pytest
from hypothesis import given

from almostcomplex import DEFAULT_ORDER, GaussQ, I, TSeries, conj, format_scalar, mpq, parse_scalar, scalar
from conftest import gaussians, rationals


def test_gaussian_collapses_to_rational():
    z = GaussQ(mpq(1, 2), 0)
    assert type(z * 2) is type(mpq(1))
    assert I * I == -1


@pytest.mark.parametrize("text,value", [
    ("3", mpq(3)),
    ("-1/2", mpq(-1, 2)),
    ("i", I),
    ("-i", -I),
    ("2i", 2 * I),
    ("-2i", -2 * I),
    ("2/3i", mpq(2, 3) * I),
    ("i/4", I / 4),
    ("1/2-3i", mpq(1, 2) - 3 * I),
    ("(1-i)", 1 - I),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("1.5x")


def test_floats_are_refused():
    with pytest.raises(TypeError):
        scalar(0.5)


@given(gaussians)
def test_format_roundtrip(z):
    assert parse_scalar(format_scalar(z)) == z


@given(gaussians, gaussians)
def test_field_axioms(a, b):
    assert a * b == b * a
    assert conj(a * b) == conj(a) * conj(b)
    if b != 0:
        assert (a / b) * b == a


def test_series_inverse_truncates():
    t, tb = TSeries.t(), TSeries.tb()
    inv = 1 / (1 - t * tb)
    assert inv == 1 + t * tb
    assert DEFAULT_ORDER == 2
    assert (t ** 3) == 0


def test_series_evaluates_conjugate_parameter():
    t, tb = TSeries.t(), TSeries.tb()
    s = 1 + t + 2 * tb
    assert s.evaluate(I) == 1 + I - 2 * I


@given(rationals, rationals)
def test_series_product_coefficients(a, b):
    t = TSeries.t(3)
    s = (1 + a * t) * (1 + b * t)
    assert s.coefficient(1) == a + b
    assert s.coefficient(2) == a * b
