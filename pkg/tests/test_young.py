import math

import numpy as np
import pytest

from bol.errors import DomainError
from bol.young import (E_MINUS_2, SECTION5_R, critical_theta,
                       make_power_weight, make_power_young,
                       make_section5_weight, make_section5_young,
                       make_table_young, parse_weight_spec, parse_young_spec,
                       section5_params, validate_young)


def test_power_roundtrip_and_log_inverse():
    rng = np.random.default_rng(1)
    phi = make_power_young(1.3)
    t = rng.uniform(1e-6, 1e6, 200)
    assert np.allclose(phi.inv(phi.eval(t)), t, rtol=1e-12)
    lx = rng.uniform(-600, 600, 50)
    assert np.allclose(phi.inv_log(lx), lx / 1.3)


def test_power_rejects_sublinear_exponent():
    for p in (1.0, 0.5, -2.0):
        with pytest.raises(DomainError):
            make_power_young(p)


def test_validate_power_passes_everything():
    phi = make_power_young(1.4)
    rep = validate_young(phi, np.geomspace(1e-3, 1e3, 64))
    assert rep.all_pass


def test_validate_rejects_linear_growth():
    from bol.young import YoungFunction

    ident = YoungFunction("custom", {}, eval=lambda t: np.asarray(t),
                          inv=lambda s: np.asarray(s))
    rep = validate_young(ident, np.geomspace(1e-3, 1e3, 64))
    assert not rep.superlinear_at_inf and not rep.sublinear_at_zero


def test_section5_parameter_domain():
    with pytest.raises(DomainError):
        make_section5_young(E_MINUS_2)
    with pytest.raises(DomainError):
        make_section5_young(0.0)
    par = section5_params(0.1)
    assert par.r == SECTION5_R


def test_section5_inverse_continuous_at_branch_points():
    phi = make_section5_young(0.1)
    r = SECTION5_R
    for x in (1.0 / r, r):
        below = float(phi.inv(x * (1 - 1e-9)))
        above = float(phi.inv(x * (1 + 1e-9)))
        assert above == pytest.approx(below, rel=1e-6)


def test_section5_log_inverse_matches_linear_domain():
    phi = make_section5_young(0.1)
    for x in (1e-8, 0.5, 3.0, 1e5, 1e8):
        assert float(phi.inv_log(math.log(x))) == pytest.approx(
            math.log(float(phi.inv(x))), rel=1e-10
        )


def test_section5_forward_inverts_the_inverse():
    phi = make_section5_young(0.05)
    for t in (0.3, 2.0, 40.0, 1e7):
        assert float(phi.inv(phi.eval(t))) == pytest.approx(t, rel=1e-9)


def test_section5_monotone_and_convex_for_large_arguments():
    phi = make_section5_young(0.1)
    rep = validate_young(phi, np.geomspace(1.0, 1e6, 48))
    assert rep.monotone and rep.midpoint_convex


def test_power_weight_exponents():
    psi = make_power_weight(0.6)
    ok_lo, ok_hi, s_lo, s_hi = psi.check_exponents()
    assert ok_lo and ok_hi
    assert float(psi.eval(2.0)) == pytest.approx(2.0 ** -0.6)


def test_paired_weight_collapses_to_power():
    phi = make_power_young(1.3)
    psi = make_section5_weight(phi)
    theta = 2.0 / 1.3 - 1.0
    t = np.geomspace(1e-3, 1e3, 17)
    assert np.allclose(psi.eval(t), t ** (-theta), rtol=1e-10)
    assert psi.zero_exponent == pytest.approx(theta)


def test_table_young_roundtrip(tmp_path):
    ts = np.geomspace(0.01, 100, 25)
    path = tmp_path / "phi.csv"
    path.write_text("".join(f"{t},{t ** 1.5}\n" for t in ts))
    phi = make_table_young(str(path))
    assert float(phi.eval(3.0)) == pytest.approx(3.0 ** 1.5, rel=1e-10)
    assert float(phi.inv(8.0)) == pytest.approx(4.0, rel=1e-10)


def test_table_young_rejects_nonmonotone(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,1\n2,0.5\n")
    with pytest.raises(DomainError):
        make_table_young(str(path))


def test_spec_grammar():
    assert parse_young_spec("power:p=1.3").params["p"] == 1.3
    assert parse_young_spec("section5:alpha=0.1").kind == "section5"
    assert parse_weight_spec("powerweight:theta=0.5385").params["theta"] == 0.5385
    assert parse_weight_spec("section5:alpha=0.1").kind == "section5weight"
    for bad in ("power", "power:q=2", "gauss:p=2", "power:p"):
        with pytest.raises(DomainError):
            parse_young_spec(bad)


def test_critical_theta_values():
    assert critical_theta(1.3, 2) == pytest.approx(2 / 1.3 - 1)
    assert critical_theta(1.0, 3) == pytest.approx(1.0)
