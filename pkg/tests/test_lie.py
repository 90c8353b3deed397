import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from almostcomplex import (I, JacobiError, PresentationSyntaxError, check_presentation, e,
                           parse_presentation, wedge, zoo_catalog)
from almostcomplex.exterior import basis, indices_of
from conftest import any_forms


def test_salamon_notation():
    p = parse_presentation("(0^3,12,14,24)")
    assert p.dim == 6
    assert p.d(e(6, 5)) == e(6, 1, 4)
    assert p.d(e(6, 1)) == 0


def test_equivalent_spellings():
    a = parse_presentation("(0,0,0,0,12,13)")
    b = parse_presentation("(0⁴, 12, 13)")
    c = parse_presentation("(0^4, 1^2, 1^3)")
    assert a.images == b.images == c.images


def test_signs_and_coefficients():
    p = parse_presentation("(0,−12,34,0,15,46)")
    assert p.d(e(6, 2)) == -e(6, 1, 2)
    q = parse_presentation("(0,0,0,0,1/2*12+3*34)")
    assert q.d(e(5, 5)) == e(5, 1, 2) / 2 + e(5, 3, 4) * 3


def test_complex_mode_realifies():
    p = parse_presentation("(0,0,-12)", "complex")
    # phi^3 = e5 + i e6 with d phi^3 = -(e1 + i e2)(e3 + i e4)
    assert p.d(e(6, 5)) == -e(6, 1, 3) + e(6, 2, 4)
    assert p.d(e(6, 6)) == -e(6, 1, 4) - e(6, 2, 3)


def test_complex_mode_conjugates_and_prefix():
    p = parse_presentation("(0,0,2*d phi^3 = i 12')", "complex")
    assert p.complex_images[2] == e(6, 1, 5).scale(I / 2)


def test_compact_pairs_need_small_index_range():
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("(0^9,12,0)")
    p = parse_presentation("(0^9,1^2,0)")
    assert p.d(e(11, 10)) == e(11, 1, 2)


def test_syntax_error_reports_position():
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation("(0,0,1x)")
    assert info.value.position >= 5


def test_index_out_of_range():
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("(0,0,45)")


def test_jacobi_failure_names_the_element():
    with pytest.raises(JacobiError) as info:
        parse_presentation("(0,0,14,23)")
    assert "e^3" in str(info.value)


def test_structure_flags():
    assert check_presentation(parse_presentation("(0^4,12,13)")).nilpotent
    r = check_presentation(parse_presentation("(0,-12,34,0,15,46)"))
    assert r.solvable and not r.nilpotent and r.unimodular and r.completely_solvable_heuristic
    s = check_presentation(parse_presentation("(23,-13,12,0^3)"))
    assert not s.solvable and s.unimodular
    nu = check_presentation(parse_presentation("(0,12)"))
    assert nu.solvable and not nu.unimodular


def test_to_text_roundtrip():
    for z in zoo_catalog():
        p = z.presentation
        assert parse_presentation(p.to_text()).images == p.images


@pytest.mark.parametrize("entry", zoo_catalog(), ids=lambda z: z.name)
def test_d_squared_vanishes_everywhere(entry):
    p = entry.presentation
    N = p.dim
    for k in range(N + 1):
        for m in basis(N, k):
            assert p.d(p.d(e(N, *indices_of(m)))) == 0


@settings(max_examples=25)
@given(st.sampled_from([z.name for z in zoo_catalog() if z.presentation.dim <= 6]), st.data())
def test_leibniz_rule(name, data):
    p = next(z for z in zoo_catalog() if z.name == name).presentation
    a = data.draw(any_forms(p.dim))
    b = data.draw(any_forms(p.dim))
    sign = -1 if a.degree % 2 else 1
    assert p.d(wedge(a, b)) == wedge(p.d(a), b) + wedge(a, p.d(b)).scale(sign)


@pytest.mark.parametrize("entry", zoo_catalog(), ids=lambda z: z.name)
def test_catalog_validity_matches_flags(entry):
    r = check_presentation(entry.presentation)
    assert r.jacobi
    if entry.validity == "nilpotent":
        assert r.nilpotent and r.unimodular
    elif entry.validity == "completely-solvable":
        assert r.solvable and r.completely_solvable_heuristic and r.unimodular
    else:
        assert r.unimodular
