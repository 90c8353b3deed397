import pytest
from hypothesis import given

from almostcomplex import (AlmostComplexStructure, I, NotSpanningError, acs_from_coframe, acs_from_coframe_action,
                           complex_structure_equations, e, format_psi_form, is_integrable, mpq, nijenhuis,
                           parse_form, parse_presentation, pullback_endo, type_components, type_project,
                           zoo_catalog, zoo_lookup)
from almostcomplex.linalg import identity, matmul, matscale
from conftest import forms

ALL_STRUCTURES = [(z.name, s) for z in zoo_catalog() for s in z.structures]


def _coframe(n, pairs):
    return [e(2 * n, a) + e(2 * n, b).scale(I) for a, b in pairs]


def test_coframe_defines_j():
    J = acs_from_coframe(4, _coframe(2, [(1, 2), (3, 4)]))
    assert matmul(J.J, J.J) == matscale(identity(4), -1)
    assert pullback_endo(J.phi(1), J.J) == J.phi(1).scale(I)
    # J^* e^1 = -e^2 for phi = e1 + i e2
    assert pullback_endo(e(4, 1), J.J) == -e(4, 2)


def test_coframe_action_matches_coframe():
    J = acs_from_coframe_action([-e(4, 2), e(4, 1), -e(4, 4), e(4, 3)])
    K = acs_from_coframe(4, _coframe(2, [(1, 2), (3, 4)]))
    assert J == K


def test_degenerate_coframe():
    with pytest.raises(NotSpanningError):
        acs_from_coframe(4, [e(4, 1) + e(4, 2).scale(I), e(4, 1) + e(4, 2).scale(I)])


def test_not_a_complex_structure():
    with pytest.raises(ValueError):
        AlmostComplexStructure([[0, 1], [1, 0]])


def test_type_decomposition_on_torus():
    J = zoo_lookup("t4").structure("J")
    a = e(4, 1, 2)
    parts = type_components(a, J)
    assert set(parts) == {(1, 1)}
    assert J.to_psi(a) == J.psi(1, 3).scale(I / 2)
    b = e(4, 1, 3)
    assert sum((type_project(b, p, 2 - p, J) for p in range(3)), b.zero(4, 2)) == b
    assert type_project(b, 2, 0, J).conjugate() == type_project(b, 0, 2, J)


@given(forms(6, 3, max_terms=6))
def test_type_components_sum_back(a):
    J = zoo_lookup("n1").structure("J")
    parts = type_components(a, J)
    total = sum(parts.values(), a.zero(6, 3))
    assert total == a
    for (p, q), f in parts.items():
        assert J.conjugate_psi(J.to_psi(f)) == J.to_psi(f.conjugate())


def test_iwasawa_structure_equations():
    z = zoo_lookup("iwasawa")
    eqs = complex_structure_equations(z.presentation, z.structure("J"))
    assert [format_psi_form(f, 3) for f in eqs] == ["0", "0", "-phi[1,2]"]


def test_n1_structure_equations():
    z = zoo_lookup("n1")
    eqs = [format_psi_form(f, 3) for f in complex_structure_equations(z.presentation, z.structure("J"))]
    assert eqs == ["0", "-1/2*phi[1,1']", "-1/2i*phi[1,2]+1/2i*phi[1,2']"]


def test_n2_structure_equations():
    z = zoo_lookup("n2")
    eqs = [format_psi_form(f, 3) for f in complex_structure_equations(z.presentation, z.structure("J"))]
    assert eqs == ["0", "0", "1/2i*phi[1,1']-1/2*phi[2,2']"]


def test_kt4_nijenhuis():
    z = zoo_lookup("kt4")
    N = nijenhuis(z.presentation, z.structure("J"))
    assert (1, 3) in N
    assert not is_integrable(z.presentation, z.structure("J"))


def test_etabeta5_curve_stays_integrable():
    from almostcomplex import evaluate_curve

    z = zoo_lookup("etabeta5")
    assert is_integrable(z.presentation, evaluate_curve(z.curve("c"), mpq(1, 2)))


@pytest.mark.parametrize("name,structure", ALL_STRUCTURES)
def test_integrability_routes_agree(name, structure):
    z = zoo_lookup(name)
    J = z.structure(structure)
    assert is_integrable(z.presentation, J, "nijenhuis") == is_integrable(z.presentation, J, "forms")


def test_abelian_structures_are_integrable():
    p = parse_presentation("(0^4)")
    J = acs_from_coframe(p, [parse_form("e1+i*e3", 4), parse_form("e2+i*e4", 4)])
    assert is_integrable(p, J)
