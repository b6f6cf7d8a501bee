import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from dirac_antidot.params import DimensionlessConfig, QuantumNumbers, derived_lambdas
from dirac_antidot.spectrum import (
    EnergySolution,
    Regime,
    fock_darwin_level,
    landau_level,
    nonrel_energy,
    rel_energy,
    rel_rhs,
    spectrum_table,
)

from conftest import sweep_states

FIG1 = DimensionlessConfig.reduced(alpha=8.0, b=10.0, w=1.0)


@pytest.mark.parametrize("n,m,expected", [(0, 0, 0.5), (0, -2, 0.5), (1, 3, 4.5)])
def test_landau_level(n, m, expected):
    assert landau_level(QuantumNumbers(n, m)) == expected


def test_nonrel_degenerate_negative_m():
    assert nonrel_energy(DimensionlessConfig.reduced(), QuantumNumbers(0, -5)) == 0.5


def test_nonrel_figure_parameters():
    assert nonrel_energy(FIG1, QuantumNumbers(0, 0)) == pytest.approx(0.5 + 0.5 * math.sqrt(164) + 4, rel=1e-15)
    assert nonrel_energy(FIG1, QuantumNumbers(0, 0)) == pytest.approx(10.903124, abs=5e-7)
    assert nonrel_energy(FIG1, QuantumNumbers(0, -8)) == 5.5


def test_rel_closed_form(natural):
    sol = rel_energy(natural, QuantumNumbers(0, 0))
    assert sol.chi == pytest.approx(math.sqrt(2), abs=1e-12)
    assert sol.regime is Regime.RELATIVISTIC
    assert sol.residual <= 1e-12


def test_rel_second_closed_form(natural):
    assert rel_energy(natural, QuantumNumbers(0, 1)).chi == pytest.approx(2.0, abs=1e-12)


# reference values computed independently: fixed-point iteration
# chi <- sqrt(2 + sqrt(50 (chi + 1))) (200 iterations) and scipy brentq
CHI_ANTIDOT = 4.269969010933291


def test_rel_antidot_reference():
    cfg = DimensionlessConfig.reduced(alpha=0.0, b=10.0, w=1.0)
    chi = rel_energy(cfg, QuantumNumbers(0, 0)).chi
    assert chi == pytest.approx(4.2700, abs=5e-5)
    assert chi == pytest.approx(CHI_ANTIDOT, rel=1e-13)
    fixed = 2.0
    for _ in range(200):
        fixed = math.sqrt(2.0 + math.sqrt(50.0 * (fixed + 1.0)))
    assert chi == pytest.approx(fixed, abs=1e-8)


def test_rel_nonrel_limit_figure_parameters():
    cfg = DimensionlessConfig.reduced(alpha=8.0, b=10.0, w=1e-6)
    sol = rel_energy(cfg, QuantumNumbers(0, 0))
    assert (sol.chi - 1.0) / cfg.w == pytest.approx(10.903124, rel=1e-4)


def test_eta_definition():
    cfg = DimensionlessConfig.reduced(alpha=1.5, b=3.0, w=0.3)
    sol = rel_energy(cfg, QuantumNumbers(2, -1))
    assert sol.eta == pytest.approx((sol.chi**2 - 1) / (2 * cfg.w), rel=1e-14)
    assert sol.epsilon_over_homega == pytest.approx((sol.chi - 1) / cfg.w, rel=1e-12)


@pytest.mark.parametrize("w", [1e-6, 1e-3, 1.0, 50.0])
def test_rel_against_brentq(w):
    for cfg, qn in sweep_states(w):
        if qn.m % 3:
            continue
        chi = rel_energy(cfg, qn).chi

        def defect(c):
            return c * c - 1 - rel_rhs(cfg, qn, c)

        ref = brentq(defect, 1.0, 1.0 + 10 * (1 + w) * (2 * qn.n + 30), xtol=1e-15, rtol=1e-15)
        assert chi == pytest.approx(ref, rel=1e-13)


def test_quantization_defect_at_root():
    for cfg, qn in sweep_states(1.0):
        chi = rel_energy(cfg, qn).chi
        lams = derived_lambdas(cfg, qn, chi)
        defect = math.sqrt(lams.lambda1) * (2 * qn.n + 1 + lams.gamma / 2) - lams.lambda2
        assert abs(defect) <= 1e-10


def test_landau_reduction():
    cfg = DimensionlessConfig.reduced(alpha=0.0, b=0.0, w=1.0)
    for n in range(11):
        for m in range(-10, 11):
            qn = QuantumNumbers(n, m)
            assert abs(nonrel_energy(cfg, qn) - landau_level(qn)) <= 1e-14


@pytest.mark.parametrize("alpha", [0.0, 0.3, 8.0, -2.5])
def test_degeneracy_without_antidot(alpha):
    cfg = DimensionlessConfig.reduced(alpha=alpha, b=0.0, w=1.0)
    for n in range(4):
        for m in range(-30, 1):
            if m + alpha <= 0:
                assert abs(nonrel_energy(cfg, QuantumNumbers(n, m)) - (n + 0.5)) <= 1e-14


@given(alpha=st.floats(-20, 20), b=st.floats(0.1, 30), w=st.floats(1e-4, 10), n=st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_antidot_lifts_degeneracy(alpha, b, w, n):
    cfg = DimensionlessConfig.reduced(alpha=alpha, b=b, w=w)
    nonrel = [nonrel_energy(cfg, QuantumNumbers(n, m)) for m in range(-25, 6)]
    eta = [rel_energy(cfg, QuantumNumbers(n, m)).eta for m in range(-25, 6)]
    assert all(b_ > a_ for a_, b_ in zip(nonrel, nonrel[1:]))
    assert all(b_ > a_ for a_, b_ in zip(eta, eta[1:]))


def test_nonrel_limit_sweep():
    for cfg, qn in sweep_states(1e-6, m_max=10):
        eta = rel_energy(cfg, qn).eta
        assert eta == pytest.approx(nonrel_energy(cfg, qn), rel=1e-4)


def test_fock_darwin_limit():
    cfg = DimensionlessConfig.reduced(alpha=0.0, b=0.0, w=1.0, omega_c=0.0)
    assert cfg.omega0 == 0.5
    for n in range(5):
        for m in range(-6, 7):
            qn = QuantumNumbers(n, m)
            assert nonrel_energy(cfg, qn) == fock_darwin_level(qn)


@given(
    alpha=st.floats(-50, 50),
    b=st.floats(0, 50),
    w=st.floats(1e-8, 1e3),
    n=st.integers(0, 50),
    m=st.integers(-100, 100),
)
@settings(max_examples=200, deadline=None)
def test_rel_root_properties(alpha, b, w, n, m):
    cfg = DimensionlessConfig.reduced(alpha=alpha, b=b, w=w)
    sol = rel_energy(cfg, QuantumNumbers(n, m))
    assert sol.chi > 1.0
    assert sol.residual <= 1e-12


def test_table_landau_degenerate():
    rows = spectrum_table(DimensionlessConfig.reduced(), [0], range(-2, 1), "landau")
    assert [r.solution.epsilon_over_homega for r in rows] == [0.5, 0.5, 0.5]
    assert all(r.error is None for r in rows)


def test_table_nonrel_increasing():
    rows = spectrum_table(FIG1, [0], range(-20, 6), Regime.NONRELATIVISTIC)
    values = [r.solution.eta for r in rows]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_table_relativistic_closed_forms(natural):
    rows = spectrum_table(natural, [0], [0, 1], "relativistic")
    assert rows[0].solution.chi == pytest.approx(math.sqrt(2), abs=1e-12)
    assert rows[1].solution.chi == pytest.approx(2.0, abs=1e-12)


def test_table_ordering_and_threads():
    cfg = DimensionlessConfig.reduced(alpha=0.5, b=3.0, w=0.7)
    serial = spectrum_table(cfg, range(3), range(-4, 5), "relativistic")
    threaded = spectrum_table(cfg, range(3), range(-4, 5), "relativistic", workers=4)
    assert [(r.qn.n, r.qn.m) for r in serial] == [(n, m) for n in range(3) for m in range(-4, 5)]
    assert serial == threaded


def test_table_tags_errors(monkeypatch):
    from dirac_antidot import spectrum

    def broken(cfg, qn, tol=1e-12, max_iter=200):
        if qn.m == 1:
            raise spectrum.ConvergenceError("forced")
        return EnergySolution(2.0, 1.0, 1.5, Regime.RELATIVISTIC)

    monkeypatch.setattr(spectrum, "rel_energy", broken)
    rows = spectrum_table(DimensionlessConfig.reduced(), [0], [0, 1, 2], "relativistic")
    assert [r.error is None for r in rows] == [True, False, True]
    assert "forced" in rows[1].error
