import pytest

from almostcomplex import (NotClosedError, betti_numbers, cohomology_space, cup_map, current_homology_space,
                           divided_power, e, hlc_check, pairing_matrix, parse_form, parse_presentation,
                           solve_d_in_subspace, stage_report, type_subgroup, wedge, zoo_catalog, zoo_lookup)
from almostcomplex.linalg import dense_rank

PAIRS = [(z.name, s) for z in zoo_catalog() for s in z.structures]


def test_betti_of_small_algebras():
    assert betti_numbers(parse_presentation("(0,0,12)")) == [1, 2, 2, 1]
    assert betti_numbers(parse_presentation("(0^4)")) == [1, 4, 6, 4, 1]
    assert betti_numbers(zoo_lookup("n1").presentation) == [1, 3, 5, 6, 5, 3, 1]
    assert betti_numbers(zoo_lookup("n2").presentation) == [1, 4, 8, 10, 8, 4, 1]


def test_representatives_are_closed_and_independent():
    p = zoo_lookup("ft6").presentation
    for k in range(p.dim + 1):
        H = cohomology_space(p, k)
        for i, r in enumerate(H.representatives):
            assert p.d(r) == 0
            assert H.coordinates(r) == [1 if j == i else 0 for j in range(H.dim)]


def test_exact_forms_have_zero_class():
    p = zoo_lookup("ft6").presentation
    H = cohomology_space(p, 5)
    assert H.is_exact(p.d(e(6, 3, 4, 5, 6)))
    assert H.is_exact(e(6, 1, 2, 3, 4, 6))


def test_coordinates_reject_open_forms():
    p = zoo_lookup("n1").presentation
    with pytest.raises(NotClosedError) as info:
        cohomology_space(p, 1).coordinates(e(6, 5))
    assert info.value.differential == e(6, 1, 4)


def test_h1_of_kt4():
    p = zoo_lookup("kt4").presentation
    H = cohomology_space(p, 1)
    assert [str(r) for r in H.representatives] == ["e1", "e2"]
    H2 = cohomology_space(p, 2)
    assert not H2.is_exact(e(4, 1, 3)) and not H2.is_exact(e(4, 2, 4))


@pytest.mark.parametrize("entry", zoo_catalog(), ids=lambda z: z.name)
def test_poincare_duality(entry):
    b = betti_numbers(entry.presentation)
    assert b == b[::-1]


@pytest.mark.parametrize("entry", zoo_catalog(), ids=lambda z: z.name)
def test_pairing_is_nondegenerate(entry):
    p = entry.presentation
    for k in range(p.dim + 1):
        P = pairing_matrix(p, k)
        b = cohomology_space(p, k).dim
        assert len(P) == b == current_homology_space(p, k).dim
        if b:
            assert dense_rank(P) == b


@pytest.mark.parametrize("name,structure", PAIRS)
def test_full_implies_dual_pure(name, structure):
    z = zoo_lookup(name)
    p, J = z.presentation, z.structure(structure)
    N = p.dim
    for k in range(1, N):
        if stage_report(p, J, k).full:
            assert stage_report(p, J, N - k).pure


@pytest.mark.parametrize("name,structure", PAIRS)
def test_plus_minus_bounds(name, structure):
    z = zoo_lookup(name)
    r = stage_report(z.presentation, z.structure(structure), 2)
    if r.pure:
        assert r.h_plus + r.h_minus <= r.betti
    if r.full:
        assert r.h_plus + r.h_minus >= r.betti
    if r.pure and r.full:
        assert r.h_plus + r.h_minus == r.betti


def test_type_subgroups_of_n1():
    z = zoo_lookup("n1")
    p, J = z.presentation, z.structure("J")
    assert type_subgroup(p, J, [(2, 0), (0, 2)], real=True).dim == 4
    assert type_subgroup(p, J, [(1, 1)], real=True).dim == 3
    assert type_subgroup(p, J, [(1, 1)]).dim == 3
    r = stage_report(p, J, 2)
    assert (r.full, r.pure, r.plus_minus_intersection) == (True, False, 2)


def test_real_subgroup_requires_conjugation_stable_types():
    z = zoo_lookup("n1")
    with pytest.raises(ValueError):
        type_subgroup(z.presentation, z.structure("J"), [(2, 0)], real=True)


def test_iwasawa_stage_one_forms_and_currents():
    z = zoo_lookup("iwasawa")
    for currents in (False, True):
        r = stage_report(z.presentation, z.structure("J"), 1, currents=currents)
        assert r.complex_pure and r.complex_full


def test_cup_maps():
    z = zoo_lookup("iwasawa")
    assert cup_map(z.presentation, divided_power(z.form("omega"), 2), 1).iso
    ft = zoo_lookup("ft6")
    m = cup_map(ft.presentation, divided_power(ft.form("omega"), 2), 1)
    assert not m.injective
    H5 = cohomology_space(ft.presentation, 5)
    assert H5.is_exact(wedge(divided_power(ft.form("omega"), 2), e(6, 1)))


def test_cup_map_needs_closed_form():
    z = zoo_lookup("iwasawa")
    with pytest.raises(NotClosedError):
        cup_map(z.presentation, z.form("omega"), 1)


def test_hlc_on_torus():
    z = zoo_lookup("t6")
    assert all(m.iso for m in hlc_check(z.presentation, z.form("omega")).values())


def test_solve_d_returns_witness_or_certificate():
    p = zoo_lookup("n1").presentation
    r = solve_d_in_subspace(p, e(6, 1, 4))
    assert r.solvable and p.d(r.witness) == e(6, 1, 4)
    bad = solve_d_in_subspace(p, e(6, 1, 3))
    assert not bad.solvable
    f = bad.certificate
    assert f.mask_coeff(0b101) != 0
    for m in range(1 << 6):
        if bin(m).count("1") == 1:
            img = p.d(parse_form(f"e{m.bit_length()}", 6))
            assert sum((c * img.mask_coeff(mm) for mm, c in f.items()), 0) == 0
