import math
import os

import pytest

import stochlab

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "..", "tests", "fixtures")


def test_bessel_density_matches_the_d3_closed_form():
    x, t, y = 0.7, 1.0, 1.3
    heat = lambda a, b: math.exp(-((a - b) ** 2) / (2 * t)) / math.sqrt(2 * math.pi * t)
    expected = (y / x) * (heat(x, y) - heat(-x, y))
    assert stochlab.bessel_density(3.0, x, t, y) == pytest.approx(expected, rel=1e-12)


def test_cardy_symmetric_point_and_domain():
    assert stochlab.cardy_probability(5 / 3, 0.5, 1.0) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        stochlab.cardy_probability(2.5, 0.5, 1.0)


def test_kernel_forms_agree():
    xi = [-1.0, 0.3, 1.0]
    a = stochlab.kernel_K1(xi, 0.5, 0.2, 0.5, -0.4)
    b = stochlab.kernel_K2(xi, 0.5, 0.2, 0.5, -0.4)
    assert abs(a - b) < 1e-8
    assert stochlab.sine_kernel(0.0, 0.0) == pytest.approx(1.0)


def test_extremes_second_moment():
    assert stochlab.moment_h1(2.0) == pytest.approx(math.pi**2 / 6, abs=1e-10)
    assert 0.0 < stochlab.max_cdf_h1(1.0) < 1.0


def test_charpoly_small_case():
    # N = 1: E (a - l)(b - l) = ab + sigma^2
    assert stochlab.mgue_det([0.3, -1.2], 1, 0.7) == pytest.approx(0.3 * -1.2 + 0.7, abs=1e-14)


def test_loop_erase_and_fomin():
    assert stochlab.loop_erase([0, 1, 0, 2]) == [0, 2]
    r = stochlab.fomin(os.path.join(FIXTURES, "grid3.txt"))
    assert abs(r["det"] - r["brute"]) <= r["tail_bound"] <= 1e-8


def test_run_returns_the_record_and_exit_codes():
    code, rec = stochlab.run("fomin", "--net", os.path.join(FIXTURES, "path3.txt"), "--seed", "3")
    assert code == 0 and rec["pass"] and rec["config"]["seed"] == 3
    code, _ = stochlab.run("fomin", "--no-such-flag")
    assert code == 2
    code, rec = stochlab.run("relax-curve", "--u", "1,2")
    assert code == 1 and not rec["pass"]
