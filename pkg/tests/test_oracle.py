import math

import numpy as np
import pytest

import magatom as mg
from magatom.oracle import GridSpec, _fv_eigenvalues, default_r_max


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(n_points=50)
    with pytest.raises(ValueError):
        GridSpec(r_max=-1.0)


def test_default_r_max_decay_criteria():
    p = mg.ModelParams(Z=1.0, gamma=4.0, m=0)
    r = default_r_max(p, 3)
    assert math.exp(-p.gamma * r * r / 4) < 1e-12
    p0 = mg.ModelParams(Z=1.0, gamma=0.0, m=0)
    r0 = default_r_max(p0, 1)
    assert math.exp(-p0.Z * r0) < 1e-10
    with pytest.raises(ValueError):
        default_r_max(mg.ModelParams(Z=0.0, gamma=0.0, m=0), 1)


def test_hydrogenic_limit():
    res = mg.oracle_solve(mg.ModelParams(Z=1.0, gamma=0.0, m=0), levels=2)
    assert res[0] == pytest.approx(-2.0, abs=1e-6)
    assert res[1] == pytest.approx(-2.0 / 9.0, abs=1e-6)


def test_oscillator_limit():
    res = mg.oracle_solve(mg.ModelParams(Z=0.0, gamma=4.0, m=0), levels=2)
    assert res[0] == pytest.approx(2.0, abs=1e-6)
    assert res[1] == pytest.approx(6.0, abs=1e-6)


def test_oscillator_limit_s1():
    res = mg.oracle_solve(mg.ModelParams(Z=0.0, gamma=2.0, m=1), levels=1)
    assert res[0] == pytest.approx(2.0, abs=1e-6)


def test_table1_point():
    res = mg.oracle_solve(mg.ModelParams(Z=1.0, gamma=4.0, m=0), levels=2)
    assert res[0] == pytest.approx(-1.4595871, abs=1e-4)
    assert res[1] == pytest.approx(4.0, abs=1e-5)


@pytest.mark.parametrize("gamma", [2.0 / 3.0, 1.0, 4.0])
def test_agreement_with_converged_rrm(gamma):
    p = mg.ModelParams(Z=1.0, gamma=gamma, m=0)
    table = mg.converge_spectrum(p, mg.BasisKind.GAUSSIAN, 13, 14, 3)
    res = mg.oracle_solve(p, levels=3)
    for nu in range(3):
        assert res[nu] == pytest.approx(table.W[-1][nu], abs=1e-5)


@pytest.mark.parametrize("n", range(1, 7))
def test_qs_states_found_at_their_node_index(n):
    # the oracle spectrum contains each exact eigenvalue at level nu = node count
    for sol in mg.qs_solutions(n, 0, 1.0):
        res = mg.oracle_solve(
            mg.ModelParams(Z=1.0, gamma=sol.gamma_root, m=0),
            levels=sol.node_count + 1,
        )
        assert res[sol.node_count] == pytest.approx(sol.W, abs=1e-5)


def test_second_order_grid_convergence():
    # halving h cuts the raw eigenvalue error by ~4
    p = mg.ModelParams(Z=0.0, gamma=2.0, m=0)
    r_max = default_r_max(p, 1)
    errs = []
    for n in (1000, 2000, 4000):
        w = _fv_eigenvalues(p, r_max, n, 1)
        errs.append(abs(w[0] - 1.0))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


def test_richardson_warning_reports_raw_values():
    res = mg.oracle_solve(
        mg.ModelParams(Z=1.0, gamma=0.0, m=0), GridSpec(n_points=400), levels=1,
        richardson_tol=1e-12,
    )
    assert res.warnings
    assert "coarse" in res.warnings[0]


def test_result_is_sequence_like():
    res = mg.oracle_solve(mg.ModelParams(Z=0.0, gamma=2.0, m=0), levels=3)
    assert len(res) == 3
    assert list(res) == list(res.W)


def test_levels_validation():
    with pytest.raises(ValueError):
        mg.oracle_solve(mg.ModelParams(Z=1.0, gamma=1.0, m=0), levels=0)
