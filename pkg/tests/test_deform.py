import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from almostcomplex import (AlmostComplexStructure, CoframeCurve, DegenerateCurveError, EndomorphismCurve, I, TSeries,
                           betti_numbers, change_basis, complex_structure_equations, e, evaluate_curve, format_psi_form,
                           mpq, named_direction, obstruction, pullback_endo, semicontinuity_scan, series_expand_curve,
                           twist, validate_twist_formula, zoo_lookup)
from almostcomplex.linalg import identity, inverse, matadd, matmul, matscale, zeros
from conftest import rationals


def _n6():
    z = zoo_lookup("n6c1")
    return z.presentation, z.structure("J"), z.form("alpha")


def _eval_series(S, t):
    return [[x.evaluate(t) for x in r] for r in S]


def test_curves_start_at_base():
    z = zoo_lookup("etabeta5")
    assert evaluate_curve(z.curve("c"), 0) == z.structure("J")
    p, J, _ = _n6()
    assert evaluate_curve(EndomorphismCurve(J, named_direction("b13", 3)), 0) is J


def test_etabeta5_curve_equations():
    z = zoo_lookup("etabeta5")
    J = evaluate_curve(z.curve("c"), mpq(1, 2))
    eqs = complex_structure_equations(z.presentation, J)
    assert format_psi_form(eqs[4], 5) == "-4/3*phi[1,2]-2/3*phi[2,1']-phi[3,4]"
    assert all(not f for f in eqs[:4])


@pytest.mark.parametrize("t", [1, -1, I])
def test_etabeta5_curve_degenerates_on_unit_circle(t):
    with pytest.raises(DegenerateCurveError):
        evaluate_curve(zoo_lookup("etabeta5").curve("c"), t)


@settings(max_examples=20)
@given(rationals, rationals)
def test_coframe_curve_gives_structures(a, b):
    z = zoo_lookup("s3t3")
    t = a / 7 + I * b / 7
    J = evaluate_curve(z.curve("c"), t)
    assert matmul(J.J, J.J) == matscale(identity(6), -1)


def test_series_first_order():
    p, J, _ = _n6()
    L = named_direction("b13", 3)
    c = EndomorphismCurve(J, L)
    S = series_expand_curve(c, 1)
    assert [[x.coefficient(0) for x in r] for r in S] == J.J
    assert [[x.coefficient(1) for x in r] for r in S] == matscale(matmul(J.J, L), 2)


def test_series_of_zero_direction_is_constant():
    p, J, _ = _n6()
    S = series_expand_curve(EndomorphismCurve(J, zeros(6)), 2)
    assert all(x == TSeries.const(J.J[i][j]) for i, r in enumerate(S) for j, x in enumerate(r))


@pytest.mark.parametrize("t", [mpq(1, 100), mpq(-1, 7), mpq(2, 9)])
def test_series_agrees_with_exact_evaluation(t):
    p, J, _ = _n6()
    L = matadd(named_direction("b13", 3), named_direction("a12", 3))
    c = EndomorphismCurve(J, L)
    exact = evaluate_curve(c, t).J
    approx = _eval_series(series_expand_curve(c, 2), t)
    L3 = matmul(L, matmul(L, L))
    tail = matscale(matmul(J.J, matmul(L3, inverse(matadd(identity(6), L, -t)))), 2 * t ** 3)
    assert matadd(exact, approx, -1) == tail


def test_endomorphism_curve_rejects_bad_inputs():
    p, J, _ = _n6()
    with pytest.raises(ValueError):
        EndomorphismCurve(J, identity(6))
    c = EndomorphismCurve(J, named_direction("a12", 3))
    with pytest.raises(DegenerateCurveError):
        evaluate_curve(c, I)


def test_singular_direction_point():
    J = AlmostComplexStructure([[0, -1], [1, 0]])
    L = [[1, 0], [0, -1]]
    with pytest.raises(DegenerateCurveError):
        evaluate_curve(EndomorphismCurve(J, L), 1)


def test_obstruction_modes_disagree_on_b13():
    p, J, alpha = _n6()
    L = named_direction("b13", 3)
    lit = obstruction(p, J, alpha, L, 1, "paper_literal")
    assert lit.solvable
    w = lit.steps[0].witness
    assert w == twist(alpha, L).scale(-2)
    assert p.d(w) == lit.steps[0].target
    proj = obstruction(p, J, alpha, L, 1, "projected")
    assert not proj.solvable
    cert = proj.steps[0].certificate
    assert cert is not None
    assert sum((c * proj.steps[0].target.mask_coeff(m) for m, c in cert.items()), 0) != 0


def test_zero_direction_is_unobstructed():
    p, J, alpha = _n6()
    for mode in ("paper_literal", "projected"):
        r = obstruction(p, J, alpha, zeros(6), 2, mode)
        assert r.solvable
        assert all(not s.witness for s in r.steps)
    assert obstruction(p, J, alpha, zeros(6), 2, "projected").closed_through == 2


def test_projected_solution_is_closed_to_order():
    from almostcomplex import parse_form, parse_presentation

    _, J, _ = _n6()
    flat = parse_presentation("(0^6)")
    omega = parse_form("e14+e25+e36", 6)
    L = named_direction("a12", 3)
    r = obstruction(flat, J, omega, L, 2, "projected")
    assert r.solvable and r.closed_through == 2
    assert pullback_endo(r.eta[0], J.J) == r.eta[0]


def test_obstruction_preconditions():
    p, J, _ = _n6()
    from almostcomplex import NotClosedError

    with pytest.raises(NotClosedError):
        obstruction(p, J, e(6, 2, 5), named_direction("b13", 3))
    with pytest.raises(ValueError):
        obstruction(p, J, e(6, 1, 4), named_direction("b13", 3), order=3)
    with pytest.raises(ValueError):
        obstruction(p, J, e(6, 1, 2), named_direction("b13", 3))


def test_twist_expansion_on_b13_direction():
    p, J, alpha = _n6()
    Z = [[0] * 3 for _ in range(3)]
    B = [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
    c = validate_twist_formula(p, J, alpha, Z, B)
    assert c.equal
    assert c.engine == e(6, 1, 2, 3) + e(6, 1, 3, 6) - e(6, 2, 4, 6)
    assert validate_twist_formula(p, J, alpha, Z, Z).engine == 0


def test_obstruction_verdicts_do_not_depend_on_coframe():
    p, J, alpha = _n6()
    L = named_direction("b13", 3)
    rng = random.Random(5)
    G = None
    while G is None:
        cand = [[mpq(rng.randint(-2, 2)) for _ in range(6)] for _ in range(6)]
        try:
            inverse(cand)
            G = cand
        except ZeroDivisionError:
            pass
    p2, fmap, emap = change_basis(p, G)
    J2 = AlmostComplexStructure(emap(J.J))
    assert pullback_endo(fmap(alpha), J2.J) == fmap(pullback_endo(alpha, J.J))
    assert p2.d(fmap(alpha)) == fmap(p.d(alpha))
    assert betti_numbers(p2) == betti_numbers(p)
    for mode in ("paper_literal", "projected"):
        a = obstruction(p, J, alpha, L, 1, mode).solvable
        b = obstruction(p2, J2, fmap(alpha), emap(L), 1, mode).solvable
        assert a == b


def test_scans():
    z = zoo_lookup("etabeta5")
    rows = semicontinuity_scan(z.presentation, z.curve("c"), [0, mpq(1, 2), 1])
    assert (rows[0].h_minus, rows[0].h_plus) == (10, 16)
    assert rows[1].h_minus >= 12 and rows[1].pure is False
    assert rows[2].error
    s = zoo_lookup("s3t3")
    assert [r.h_plus for r in semicontinuity_scan(s.presentation, s.curve("c"), [0, I / 4])] == [3, 1]
    t = zoo_lookup("t4")
    const = EndomorphismCurve(t.structure("J"), zeros(4))
    rows = semicontinuity_scan(t.presentation, const, [0, mpq(1, 3), 5])
    assert len({(r.h_plus, r.h_minus, r.pure, r.full) for r in rows}) == 1


def test_perturbed_coframe_curve_keeps_order():
    z = zoo_lookup("solv6")
    c = z.curve("c")
    assert isinstance(c, CoframeCurve)
    cf = c.coframe_at(mpq(1, 5))
    assert cf[1] == z.structure("J").phi(2) + e(6, 6).scale(I / 5)
