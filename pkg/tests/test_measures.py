import io
import math

import numpy as np
import pytest

from rmmcopula import (
    ValidationError,
    clayton,
    efgm,
    flip_second,
    independence,
    lower_bound,
    power,
    quadratic,
    rmm,
    rmm_iter,
    rmm_limit,
    sample2,
    upper_bound,
    zero,
)
from rmmcopula import measures
from rmmcopula.measures import (
    QuadrantClass,
    TableConfig,
    estimate_measures,
    is_nqd,
    is_pqd,
    kendall_tau,
    quadrant_class,
    spearman_rho,
    table_run,
    tail_coefficients,
    write_table_csv,
)

BUILTINS = [independence(), upper_bound(), lower_bound(), efgm(0.7), efgm(-0.4), clayton(-0.7), clayton(2.0)]


def test_rho_closed_forms():
    assert abs(spearman_rho(independence()).value) <= 1e-5
    assert spearman_rho(upper_bound()).value == pytest.approx(1.0, abs=1e-5)
    assert spearman_rho(lower_bound()).value == pytest.approx(-1.0, abs=1e-5)
    # EFGM: rho = theta / 3
    for theta in (-1.0, 0.3, 1.0):
        assert spearman_rho(efgm(theta)).value == pytest.approx(theta / 3.0, abs=1e-6)


def test_tau_closed_forms():
    # EFGM: tau = 2 theta / 9; Clayton: tau = theta / (theta + 2)
    for theta in (-1.0, 0.6):
        assert kendall_tau(efgm(theta)).value == pytest.approx(2.0 * theta / 9.0, abs=1e-4)
    for theta in (-0.7, 3.0):
        assert kendall_tau(clayton(theta)).value == pytest.approx(theta / (theta + 2.0), abs=1e-3)
    assert kendall_tau(upper_bound()).value == pytest.approx(1.0, abs=1e-3)


def test_clayton_rho_and_its_reflection():
    rho = spearman_rho(clayton(-0.7)).value
    assert rho == pytest.approx(-0.6844, abs=5e-5)
    assert spearman_rho(flip_second(clayton(-0.7))).value == pytest.approx(0.6844, abs=5e-5)


def test_rho_of_first_iterate(Pi):
    rep = spearman_rho(rmm_iter(flip_second(Pi), power(0.5), power(0.5), 1))
    assert rep.value == pytest.approx(-0.2952, abs=0.005)
    assert rep.converged and rep.method == "quadrature"


def test_tau_examples(M, W):
    assert kendall_tau(flip_second(M)).value == pytest.approx(-1.0, abs=0.01)
    f = g = power(0.5)
    assert kendall_tau(rmm_iter(flip_second(M), f, g, 1)).value == pytest.approx(-0.3333, abs=0.01)
    assert kendall_tau(rmm_iter(flip_second(W), f, g, 1)).value == pytest.approx(0.0, abs=0.01)


@pytest.mark.parametrize("C", BUILTINS, ids=lambda c: c.label)
def test_reflection_antisymmetry(C):
    rho, rho_f = spearman_rho(C), spearman_rho(flip_second(C))
    assert rho_f.value == pytest.approx(-rho.value, abs=2e-5)
    tau, tau_f = kendall_tau(C), kendall_tau(flip_second(C))
    assert tau_f.value == pytest.approx(-tau.value, abs=8e-4)
    for rep in (rho, rho_f, tau, tau_f):
        slack = 1e-5 + rep.error_estimate
        assert -1.0 - slack <= rep.value <= 1.0 + slack


def test_tail_coefficients(M, Pi, W):
    lo, hi = tail_coefficients(M)
    assert lo.value == pytest.approx(1.0) and hi.value == pytest.approx(1.0)
    lo, hi = tail_coefficients(Pi)
    assert lo.value == pytest.approx(0.0, abs=1e-4) and hi.value == pytest.approx(0.0, abs=1e-4)
    lo, hi = tail_coefficients(rmm_limit(flip_second(M), zero(), zero()))
    assert lo.value == pytest.approx(0.0, abs=1e-4) and hi.value == pytest.approx(0.0, abs=1e-4)
    # Clayton lower tail 2^(-1/theta)
    lo, _ = tail_coefficients(clayton(2.0))
    assert lo.value == pytest.approx(2 ** -0.5, abs=1e-6)
    with pytest.raises(ValueError):
        tail_coefficients(Pi, t_sequence=(0.1,))


def test_quadrant_class(M, Pi):
    assert quadrant_class(M) is QuadrantClass.PQD
    assert quadrant_class(Pi) is QuadrantClass.PQD
    assert quadrant_class(rmm(flip_second(Pi), quadratic(1), quadratic(1))) is QuadrantClass.NQD
    # a reflected input that is PQD gives no guarantee
    assert quadrant_class(rmm(M, power(0.5), power(0.5))) is QuadrantClass.NEITHER
    assert is_nqd(Pi) and is_pqd(Pi)
    with pytest.raises(ValueError):
        quadrant_class(Pi, grid_n=2)


def _cell(cells, **kw):
    (match,) = [c for c in cells if all(getattr(c, k) == v for k, v in kw.items())]
    return match


def test_table_examples():
    cells = table_run(TableConfig(bases=("pi",), a_values=(0.9,), b_values=(0.9,), n_values=(4,), kind="rho"))
    assert _cell(cells, n=4).value == pytest.approx(-0.8646, abs=0.01)
    cells = table_run(TableConfig(bases=("w",), a_values=(0.1,), b_values=(0.1,), n_values=(0,), kind="rho"))
    assert cells[0].value == pytest.approx(1.0, abs=1e-4)
    cells = table_run(TableConfig(bases=("k",), a_values=(0.9,), b_values=(0.1,), n_values=(2,), kind="tau"))
    assert cells[0].value == pytest.approx(-0.0902, abs=0.01)


def test_table_limit_column_and_stabilisation():
    cells = table_run(TableConfig(a_values=(0.9,), b_values=(0.9,), n_values=(3, 4, math.inf), kind="rho", workers=3))
    for base in measures.TABLE_BASES:
        n3, n4, lim = (_cell(cells, base=base, n=n).value for n in (3, 4, math.inf))
        assert abs(n3 - n4) <= 1e-3
        assert abs(n4 - lim) <= 1e-3
    # configuration order is kept regardless of worker count
    assert [(c.base, c.n) for c in cells] == [(b, n) for b in measures.TABLE_BASES for n in (3, 4, math.inf)]


def test_table_records_cell_errors(monkeypatch):
    real = measures._cell_copula

    def flaky(base, a, b, n):
        if n == 1:
            raise RuntimeError("boom")
        return real(base, a, b, n)

    monkeypatch.setattr(measures, "_cell_copula", flaky)
    cells = table_run(TableConfig(bases=("pi",), a_values=(0.5,), b_values=(0.5,), n_values=(0, 1, 2)))
    assert [c.ok for c in cells] == [True, False, True]
    assert "boom" in cells[1].message and math.isnan(cells[1].value)


def test_table_config_validation():
    with pytest.raises(ValidationError):
        TableConfig(kind="gini")
    with pytest.raises(ValidationError):
        TableConfig(bases=("gumbel",))
    with pytest.raises(ValidationError):
        TableConfig(a_values=(1.0,))
    with pytest.raises(ValidationError):
        TableConfig(n_values=(1.5,))


def test_table_csv_format():
    cells = table_run(TableConfig(bases=("pi",), a_values=(0.5,), b_values=(0.5,), n_values=(1, math.inf)))
    buf = io.StringIO()
    write_table_csv(cells, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "base,a,b,n,kind,value,error"
    assert lines[1].startswith("pi,0.5,0.5,1,rho,-0.2952,")
    assert lines[2].split(",")[3] == "inf"


@pytest.mark.parametrize(
    "C",
    [independence(), efgm(-1.0), rmm(flip_second(independence()), power(0.5), power(0.5))],
    ids=["pi", "efgm(-1)", "rmm"],
)
def test_monte_carlo_agreement(C):
    batch = sample2(C, 100_000, seed=11)
    rho_mc, tau_mc = estimate_measures(batch)
    assert abs(rho_mc.value - spearman_rho(C).value) <= 3 * rho_mc.error_estimate + 1e-3
    assert abs(tau_mc.value - kendall_tau(C).value) <= 3 * tau_mc.error_estimate + 1e-3


def test_monte_carlo_table_value():
    batch = sample2(rmm(flip_second(independence()), power(0.5), power(0.5)), 100_000, seed=5)
    rho, _ = estimate_measures(batch)
    assert rho.value == pytest.approx(-0.2952, abs=0.02)


def test_estimate_measures_comonotone_and_errors(M):
    _, tau = estimate_measures(sample2(M, 100_000, seed=3))
    assert tau.value == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValidationError):
        estimate_measures(np.random.default_rng(0).random((50, 2)))
    with pytest.raises(ValidationError):
        estimate_measures(np.column_stack([np.full(200, 0.5), np.linspace(0, 1, 200)]))
