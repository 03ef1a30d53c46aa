import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import DomainError, ZeroTableError
from zetalab.specfun import riemann_siegel_theta
from zetalab.zeros import (ZeroTable, littlewood_balance, load_zero_table, n_main_term,
                           save_zero_table, scan_zeros, zero_counts_report, zero_table_io)
from zetalab.zeta import hardy_z_values


@pytest.fixture(scope="module")
def zeros_100():
    return scan_zeros(100.0)


def test_main_term_examples():
    assert abs(n_main_term(2 * math.pi * math.e)) < 1e-12
    assert abs(n_main_term(100.0) - float(mp.mpf(100) / (2 * mp.pi) * (mp.log(100 / (2 * mp.pi)) - 1))) < 1e-12
    assert abs(n_main_term(100.0) - 28.127) < 1e-3


@given(st.floats(2 * math.pi * math.e + 1e-6, 1e4), st.floats(1e-3, 100.0))
def test_main_term_increasing(T, dT):
    assert n_main_term(T + dT) > n_main_term(T)


def test_scan_examples(zeros_100):
    assert abs(zeros_100.gammas[0] - 14.134725141734693) < 1e-6
    assert len(zeros_100) == 29
    assert np.all(zeros_100.multiplicity == 1)
    assert np.all(zeros_100.refined_to <= 1e-9)


def test_scan_against_fine_grid_oracle():
    t = np.arange(10.0, 100.0, 0.01)
    z = hardy_z_values(t)
    assert int(np.sum(np.sign(z[1:]) != np.sign(z[:-1]))) == 29


def test_scan_against_mpmath_zeros(zeros_100):
    ref = np.array([float(mp.zetazero(n).imag) for n in range(1, 30)])
    assert np.max(np.abs(zeros_100.gammas - ref)) < 1e-8


def test_scan_stable_under_step_halving(zeros_100):
    fine = scan_zeros(100.0, 0.025)
    assert len(fine) == 29
    assert np.max(np.abs(fine.gammas - zeros_100.gammas)) < 1e-6


def test_scan_workers_same_result(zeros_100):
    assert np.array_equal(scan_zeros(100.0, workers=2).gammas, zeros_100.gammas)


@pytest.mark.parametrize("t_max, step", [(-5.0, 0.05), (14.0, 0.05), (100.0, 0.3), (100.0, 0.0)])
def test_scan_preconditions(t_max, step):
    with pytest.raises(DomainError):
        scan_zeros(t_max, step)


def test_gram_points_separate_zeros(zeros_100):
    # Gram's law holds for every Gram interval below 100
    def gram(n):
        lo, hi = 10.0, 200.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if riemann_siegel_theta(mid) < n * math.pi else (lo, mid)
        return lo

    g = [gram(n) for n in range(-1, 28)]
    counts = np.histogram(zeros_100.gammas, bins=g)[0]
    assert np.all(counts == 1)


def test_table_invariants():
    with pytest.raises(ZeroTableError):
        ZeroTable(np.array([3.0, 2.0]), 10.0)
    with pytest.raises(ZeroTableError):
        ZeroTable(np.array([3.0, 20.0]), 10.0)
    with pytest.raises(DomainError):
        ZeroTable(np.array([1.0]), 0.0)


def test_io_round_trip(tmp_path, zeros_1000):
    tab = zeros_1000.up_to(zeros_1000.gammas[99])
    assert len(tab) == 100
    path = tmp_path / "z.txt"
    zero_table_io(path, "save", tab)
    back = zero_table_io(path, "load")
    assert np.max(np.abs(back.gammas - tab.gammas)) < 1e-12 * tab.gammas.max()
    assert back.source == "ingested"


def test_io_single_line(tmp_path):
    path = tmp_path / "one.txt"
    path.write_text("14.134725141\n")
    assert len(load_zero_table(path)) == 1


def test_io_out_of_order_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# header\n14.1\n25.0\n21.0\n")
    with pytest.raises(ZeroTableError) as info:
        load_zero_table(path)
    assert info.value.line == 4


def test_io_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("14.1\nabc\n")
    with pytest.raises(ZeroTableError) as info:
        load_zero_table(path)
    assert info.value.line == 2


def test_io_bad_mode(tmp_path):
    with pytest.raises(DomainError):
        zero_table_io(tmp_path / "x", "append")


def test_save_format_has_enough_decimals(tmp_path, zeros_100):
    path = tmp_path / "z.txt"
    save_zero_table(zeros_100, path)
    rows = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    assert all(len(r.split(".")[1]) >= 9 for r in rows)


def test_counts_report_examples(zeros_100, zeros_1000):
    r = zero_counts_report(zeros_100, 100.0)
    assert r.count == 29 and abs(r.defect) < 2 * math.log(100)
    assert zero_counts_report(zeros_100, 14.0).count == 0
    r = zero_counts_report(zeros_1000, 1000.0)
    assert r.simple_count == r.count
    with pytest.raises(DomainError):
        zero_counts_report(zeros_100, 101.0)


def test_count_defect_bound_up_to_2000():
    tab = scan_zeros(2000.0)
    for T in np.arange(15.0, 2000.0, 5.0):
        assert abs(tab.count(T) - n_main_term(T)) <= 3 + 2 * math.log(T)


def test_mean_gap(zeros_1000):
    assert np.all(np.diff(zeros_1000.gammas) > 0)
    for T in (500.0, 900.0):
        gaps = np.diff(zeros_1000.window(T, T + 100))
        expected = 2 * math.pi / math.log(T / (2 * math.pi))
        assert abs(gaps.mean() / expected - 1) < 0.25


def test_littlewood_zero_free_rectangle(zeros_100):
    r = littlewood_balance(1.5, 2.0, 30.0, zeros_100)
    assert r.dist_sum == 0.0 and abs(r.residual) < 1e-3


def test_littlewood_balance_example(zeros_100):
    r = littlewood_balance(0.25, 2.0, 50.0, zeros_100)
    assert zeros_100.count(50.0) == 10
    assert abs(r.residual) < 1e-2


def test_littlewood_shift(zeros_100):
    a = littlewood_balance(0.4, 2.0, 50.0, zeros_100)
    b = littlewood_balance(0.3, 2.0, 50.0, zeros_100)
    assert abs(b.dist_sum - a.dist_sum - 2 * math.pi * 0.1 * 10) < 1e-12


def test_littlewood_converges_under_refinement(zeros_100):
    res = [abs(littlewood_balance(0.25, 2.0, 40.0, zeros_100, samples_per_unit=n).residual)
           for n in (5, 10, 20)]
    assert res[2] < res[1] < res[0]
    assert res[2] < 1e-2


def test_littlewood_rejects_contour_on_zero(zeros_100):
    with pytest.raises(DomainError):
        littlewood_balance(0.5, 2.0, 50.0, zeros_100)
    with pytest.raises(DomainError):
        littlewood_balance(0.25, 2.0, float(zeros_100.gammas[3]), zeros_100)
