import dataclasses
from fractions import Fraction

import numpy as np
import pytest

import magatom as mg
from magatom import frobenius as fb
from magatom.errors import NoQSSolutionError


# --- recurrence -----------------------------------------------------------


def test_c1_normalisation():
    p = mg.ModelParams(Z=1.0, gamma=4.0, m=0)
    c = mg.ttrr_coefficients(p, 4, 2)
    assert c[0] == 1
    assert c[1] == Fraction(-2)


def test_c2_vanishes_at_qs_point():
    # Z=1, s=0, gamma=4, W=4: c_2 = Z^2/((s+1)(2s+1)) - gamma/(4(s+1)) = 0 exactly
    p = mg.ModelParams(Z=1.0, gamma=4.0, m=0)
    c = mg.ttrr_coefficients(p, 4, 2)
    assert c[2] == 0


@pytest.mark.parametrize("s", [0, 1, 2])
def test_c1_c2_closed_forms(s):
    Z, gamma, W = 2, 3, 5
    p = mg.ModelParams(Z=Z, gamma=gamma, m=s)
    c = mg.ttrr_coefficients(p, W, 2)
    assert c[1] == Fraction(-2 * Z, 2 * s + 1)
    # independently from the j=0 relation: c_2 = A_0 c_1 + B_0 c_0
    a0 = Fraction(-2 * Z, 2 * (2 * s + 2))
    b0 = Fraction(gamma * (s + 1) - 2 * W, 2 * (2 * s + 2))
    assert c[2] == a0 * c[1] + b0


def test_zero_charge_decouples_odd_coefficients():
    p = mg.ModelParams(Z=0.0, gamma=2.0, m=0)
    c = mg.ttrr_coefficients(p, 3, 9)
    assert all(c[j] == 0 for j in range(1, 10, 2))


def test_zero_charge_oscillator_truncation():
    # Z=0, W = gamma(s+3)/2 terminates at degree 2 with c_2 = -gamma/(2(s+1))
    for s in (0, 1, 2):
        gamma = 2
        p = mg.ModelParams(Z=0.0, gamma=float(gamma), m=s)
        W = Fraction(gamma * (s + 3), 2)
        c = mg.ttrr_coefficients(p, W, 5)
        assert c[2] == Fraction(-gamma, 2 * (s + 1))
        assert c[3] == 0 and c[4] == 0 and c[5] == 0


def test_float_path_matches_exact_path():
    p = mg.ModelParams(Z=1.0, gamma=0.5, m=1)
    exact = mg.ttrr_coefficients(p, Fraction(7, 4), 6)
    approx = mg.ttrr_coefficients(p, 1.75, 6)
    assert np.allclose([float(x) for x in exact], approx, rtol=1e-13)


def test_recurrence_coeffs_invariants():
    p = mg.ModelParams(Z=1.5, gamma=2.0, m=1)
    rc = fb.recurrence_coeffs(p, 3.0, 8)
    for j in range(8):
        denom = (j + 2) * (j + 2 * (p.s + 1))
        assert denom > 0
        assert rc.A[j] == pytest.approx(-2 * p.Z / denom)
        assert rc.B[j] == pytest.approx((p.gamma * (j + p.s + 1) - 2 * 3.0) / denom)


def test_b_coefficient_truncated_form():
    # with W = gamma (n+s+1)/2 the B_j reduce to gamma (j-n)/denominator
    n, s = 4, 1
    gamma = Fraction(3, 7)
    W = gamma * (n + s + 1) / 2
    for j in range(6):
        denom = (j + 2) * (j + 2 * (s + 1))
        assert fb.recurrence_B(gamma, W, s, j) == gamma * (j - n) / denom


# --- termination polynomial ------------------------------------------------


def test_termination_n1_root():
    tp = mg.termination_polynomial(1, 0, 1)
    assert tp.degree == 1
    root = -tp.coeffs[0] / tp.coeffs[1]
    assert root == Fraction(4)


@pytest.mark.parametrize("s", [0, 1, 2, 3])
def test_termination_n2_matches_paper_c3(s):
    # c_3 = Z [gamma (4s+3) - 2 Z^2] / (3 (s+1)(2s+1)(2s+3))
    Z = Fraction(1)
    tp = mg.termination_polynomial(2, s, Z)
    denom = 3 * (s + 1) * (2 * s + 1) * (2 * s + 3)
    assert tp.coeffs[0] == -2 * Z**3 / denom
    assert tp.coeffs[1] == Z * (4 * s + 3) / denom
    root = -tp.coeffs[0] / tp.coeffs[1]
    assert root == Fraction(2, 4 * s + 3) * Z**2


def test_termination_n0_has_no_gamma_root():
    tp = mg.termination_polynomial(0, 0, 1)
    assert tp.degree == 0
    assert tp.coeffs == (Fraction(-2),)
    with pytest.raises(NoQSSolutionError):
        mg.qs_solutions(0, 0, 1.0)


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("s", range(4))
def test_degree_law(n, s):
    assert mg.termination_polynomial(n, s, 1).degree == (n + 1) // 2


def test_termination_rejects_bad_inputs():
    with pytest.raises(ValueError):
        mg.termination_polynomial(-1, 0, 1)
    with pytest.raises(ValueError):
        mg.termination_polynomial(1, 0, 0)


def test_n3_roots_annihilate_extended_recurrence():
    sols = mg.qs_solutions(3, 0, 1.0)
    assert len(sols) == 2
    for sol in sols:
        tail = fb.extend_recurrence(sol, extra=2)
        scale = max(abs(c) for c in sol.coeffs)
        assert all(abs(t) <= 1e-12 * scale for t in tail)


# --- QS solutions -----------------------------------------------------------


@pytest.mark.parametrize("s", range(5))
@pytest.mark.parametrize("Z", [Fraction(1, 2), Fraction(1), Fraction(2)])
def test_n1_closed_form_exact(s, Z):
    sols = mg.qs_solutions(1, s, float(Z))
    assert len(sols) == 1
    sol = sols[0]
    assert sol.gamma_exact == Fraction(4, 2 * s + 1) * Z**2
    assert sol.W_exact == Fraction(2 * (s + 2), 2 * s + 1) * Z**2
    assert sol.coeffs_exact == (Fraction(1), Fraction(-2 * Z, 2 * s + 1))
    assert sol.node_count == 1


@pytest.mark.parametrize("s", range(5))
@pytest.mark.parametrize("Z", [Fraction(1, 2), Fraction(1), Fraction(2)])
def test_n2_closed_form_exact(s, Z):
    sols = mg.qs_solutions(2, s, float(Z))
    assert len(sols) == 1
    sol = sols[0]
    assert sol.gamma_exact == Fraction(2, 4 * s + 3) * Z**2
    assert sol.W_exact == Fraction(s + 3, 4 * s + 3) * Z**2
    assert sol.coeffs_exact == (
        Fraction(1),
        Fraction(-2 * Z, 2 * s + 1),
        Fraction(2 * Z**2, (2 * s + 1) * (4 * s + 3)),
    )
    assert sol.node_count == 2


def test_n2_s1_paper_values():
    sol = mg.qs_solutions(2, 1, 1.0)[0]
    assert sol.gamma_exact == Fraction(2, 7)
    assert sol.W_exact == Fraction(4, 7)


def test_roots_sorted_descending_and_positive():
    for n in range(1, 9):
        sols = mg.qs_solutions(n, 0, 1.0)
        gammas = [s.gamma_root for s in sols]
        assert gammas == sorted(gammas, reverse=True)
        assert all(g > 0 for g in gammas)
        assert all(s.i == k + 1 for k, s in enumerate(sols))


def test_qs_energies_positive():
    for n in range(1, 9):
        for s in range(4):
            for sol in mg.qs_solutions(n, s, 1.0):
                assert sol.W > 0


def test_W_relation_exact():
    for n in (1, 2, 3, 4):
        for sol in mg.qs_solutions(n, 0, 1.0):
            assert sol.W == sol.gamma_root * (n + 0 + 1) / 2.0


def test_truncation_identity():
    for n in range(1, 9):
        for sol in mg.qs_solutions(n, 0, 1.0):
            tail = fb.extend_recurrence(sol, extra=2)
            scale = max(abs(c) for c in sol.coeffs)
            assert all(abs(t) <= 1e-12 * scale for t in tail)


def test_scaling_covariance_exact():
    for n in range(1, 7):
        base = mg.qs_solutions(n, 0, 1.0)
        scaled = mg.qs_solutions(n, 0, 2.0)
        for a, b in zip(base, scaled):
            assert b.gamma_root == 4.0 * a.gamma_root  # exact in IEEE: x4 is a shift
            assert b.W == 4.0 * a.W
            for j, (ca, cb) in enumerate(zip(a.coeffs, b.coeffs)):
                assert cb == ca * 2.0**j


def test_scaling_covariance_exact_rational():
    a = mg.qs_solutions(2, 1, 1.0)[0]
    b = mg.qs_solutions(2, 1, 2.0)[0]
    assert b.gamma_exact == 4 * a.gamma_exact
    assert all(cb == ca * Fraction(2) ** j for j, (ca, cb) in enumerate(zip(a.coeffs_exact, b.coeffs_exact)))


def test_excluded_root_diagnostics_present():
    for n in range(1, 11):
        sols = mg.qs_solutions(n, 0, 1.0)
        k = (n + 1) // 2
        assert len(sols) + sols.excluded_nonpositive + sols.excluded_nonreal == k
        # empirically all termination roots are real and positive for n <= 10
        assert sols.excluded_nonpositive == 0
        assert sols.excluded_nonreal == 0
        assert not sols.had_multiple_roots


# --- nodes ------------------------------------------------------------------


def _grid_scan_nodes(coeffs, r_max: float, points: int = 1_000_000) -> int:
    r = np.linspace(1e-9, r_max, points)
    vals = np.polynomial.polynomial.polyval(r, coeffs)
    signs = np.sign(vals)
    signs = signs[signs != 0]
    return int(np.sum(signs[1:] != signs[:-1]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_count_nodes_matches_grid_scan(n):
    for sol in mg.qs_solutions(n, 0, 1.0):
        r_max = 1.0 + max(abs(c) for c in sol.coeffs) / abs(sol.coeffs[-1]) * (n + 1)
        assert mg.count_nodes(sol) == _grid_scan_nodes(sol.coeffs, r_max)
        assert mg.count_nodes(sol) == sol.node_count


def test_known_node_counts():
    assert mg.qs_solutions(1, 0, 1.0)[0].node_count == 1
    assert mg.qs_solutions(2, 0, 1.0)[0].node_count == 2


# --- wavefunction and residual ----------------------------------------------


def test_wavefunction_normalisation_at_origin():
    sol = mg.qs_solutions(2, 0, 1.0)[0]
    assert mg.qs_wavefunction(sol, 0.0) == 1.0


def test_wavefunction_node_location_n1():
    sol = mg.qs_solutions(1, 0, 1.0)[0]
    assert abs(mg.qs_wavefunction(sol, 0.5)) < 1e-15


def test_wavefunction_value_n2():
    sol = mg.qs_solutions(2, 0, 1.0)[0]
    expected = (1 - 2 + 2 / 3) * np.exp(-(2 / 3) / 4)
    assert mg.qs_wavefunction(sol, 1.0) == pytest.approx(expected, rel=1e-14)


def test_wavefunction_vectorised():
    sol = mg.qs_solutions(1, 0, 1.0)[0]
    r = np.array([0.0, 0.5, 1.0])
    vals = mg.qs_wavefunction(sol, r)
    assert vals.shape == (3,)
    assert vals[0] == 1.0


def test_residuals_annihilate_qs_solutions():
    for n in range(1, 9):
        for s in range(4):
            for sol in mg.qs_solutions(n, s, 1.0):
                assert mg.residual_check(sol) <= 1e-10, (n, s, sol.i)


def test_residual_detects_perturbation():
    sol = mg.qs_solutions(1, 0, 1.0)[0]
    pert = dataclasses.replace(sol, gamma_root=sol.gamma_root * 1.01)
    assert mg.residual_check(pert) > 1e-3


def test_residual_rejects_nonpositive_samples():
    sol = mg.qs_solutions(1, 0, 1.0)[0]
    with pytest.raises(ValueError):
        mg.residual_check(sol, sample_points=(0.0, 1.0))


def test_highprec_root_refinement():
    import mpmath

    val = fb.gamma_root_highprec(3, 0, 1.0, 1, digits=40)
    tp = mg.termination_polynomial(3, 0, 1)
    with mpmath.workdps(50):
        resid = sum(mpmath.mpf(c.numerator) / c.denominator * val**k for k, c in enumerate(tp.coeffs))
        assert abs(resid) < mpmath.mpf(10) ** (-35)
