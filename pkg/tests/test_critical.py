import pytest

import magatom as mg
from magatom.critical import negative_level_count
from magatom.errors import BracketError

TABLE3_LOW = {
    0: 9.399451214,
    1: 0.4484067794,
    2: 0.09870506669,
}


@pytest.mark.parametrize("nu, ref", sorted(TABLE3_LOW.items()))
def test_low_levels_match_published_values(nu, ref):
    cg = mg.critical_gamma(nu, 0, 1.0, tol=1e-9)
    assert cg.gamma_c == pytest.approx(ref, rel=1e-6)
    assert cg.residual <= 1e-9
    assert cg.bracket[0] < cg.gamma_c < cg.bracket[1]


def test_bracket_is_sign_certified():
    cg = mg.critical_gamma(1, 0, 1.0, tol=1e-9)
    w_lo = negative_level_count(0, 1.0, cg.bracket[0], N=cg.N_used, alpha=cg.alpha or 1.0)
    w_hi = negative_level_count(0, 1.0, cg.bracket[1], N=cg.N_used, alpha=cg.alpha or 1.0)
    assert w_lo == 2  # levels 0 and 1 still negative just below the crossing
    assert w_hi == 1


def test_sign_certificate():
    cg = mg.critical_gamma(1, 0, 1.0, tol=1e-9)
    w_minus, w_plus = mg.sign_certificate(cg)
    assert w_minus < 0 < w_plus


def test_scaling_with_charge():
    base = mg.critical_gamma(0, 0, 1.0, tol=1e-10)
    for Z in (0.5, 2.0):
        scaled = mg.critical_gamma(0, 0, Z, tol=1e-10)
        assert scaled.gamma_c == pytest.approx(base.gamma_c * Z * Z, rel=1e-8)


def test_table_ordering_and_contents():
    table = mg.critical_table(2, 0, 1.0, tol=1e-9)
    assert not table.failures
    gcs = [cg.gamma_c for cg in table.entries]
    assert len(gcs) == 3
    assert all(a > b for a, b in zip(gcs, gcs[1:]))


def test_table_records_per_level_failures():
    # a window that excludes the nu=0 crossing (gamma_c ~ 9.4) but not nu=1
    table = mg.critical_table(1, 0, 1.0, tol=1e-9, n_max=12)
    assert not table.failures
    narrow = mg.critical_table(0, 0, 1.0, tol=1e-9)
    assert narrow.entries[0].gamma_c == pytest.approx(9.399451214, rel=1e-6)
    with pytest.raises(BracketError):
        mg.critical_gamma(0, 0, 1.0, tol=1e-9, window=(1e-6, 5.0))


def test_failed_level_annotated_not_raised(monkeypatch):
    import magatom.critical as critical_mod

    def failing(nu, *a, **k):
        raise BracketError(f"synthetic failure nu={nu}")

    monkeypatch.setattr(critical_mod, "critical_gamma", failing)
    t = critical_mod.critical_table(1, 0, 1.0)
    assert set(t.failures) == {0, 1}
    assert t.entries == ()


def test_inertia_crosscheck_low_levels():
    for nu, ref in ((0, 9.399451214), (1, 0.4484067794), (2, 0.09870506669)):
        below = negative_level_count(0, 1.0, ref * 0.995, N=12, alpha=2.0 / (2 * nu + 1))
        above = negative_level_count(0, 1.0, ref * 1.005, N=12, alpha=2.0 / (2 * nu + 1))
        assert below == nu + 1
        assert above == nu


def test_oracle_confirms_s1_crossing():
    cg = mg.critical_gamma(0, 1, 1.0, tol=1e-10)
    res = mg.oracle_solve(mg.ModelParams(Z=1.0, gamma=cg.gamma_c, m=1), levels=1)
    assert abs(res[0]) <= 1e-6


def test_validates_inputs():
    with pytest.raises(ValueError):
        mg.critical_gamma(0, 0, -1.0)
    with pytest.raises(ValueError):
        mg.critical_gamma(0, 0, 1.0, tol=0.0)
    with pytest.raises(ValueError):
        mg.critical_table(-1, 0, 1.0)


def test_high_precision_nu3():
    cg = mg.critical_gamma(3, 0, 1.0, tol=1e-8, precision="high", dps=40)
    assert cg.gamma_c == pytest.approx(0.03616422276, rel=1e-8)
    assert cg.converged
