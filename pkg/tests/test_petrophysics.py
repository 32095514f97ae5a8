import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vspredict import petrophysics as pp

REL = 1e-9


def close(a, b, rel=REL):
    return a == pytest.approx(b, rel=rel, abs=0 if b else 1e-15)


@pytest.mark.parametrize("dt, vp", [(304.8, 1.0), (100.0, 3.048), (50.0, 6.096)])
def test_vp_from_dt(dt, vp):
    assert close(pp.vp_from_dt(dt), vp)


def test_vp_from_dt_rejects_nonpositive():
    with pytest.raises(ValueError):
        pp.vp_from_dt(0.0)


def test_castagna_examples():
    assert close(pp.castagna_vs(3.048), 1.59519968)
    with pytest.warns(pp.NonPhysicalWarning):
        assert abs(pp.castagna_vs(0.85588 / 0.80416)) < 1e-15
    with pytest.warns(pp.NonPhysicalWarning):
        assert close(pp.castagna_vs(0.0), -0.85588)


def test_moduli_examples():
    m = pp.moduli_from_velocities(2.0, 1.0, 1.0)
    assert close(m.nu, 1 / 3)
    assert close(m.E, 1.34e10 * 8 / 3)
    assert close(pp.moduli_from_velocities(2.0, 1.0, 1.0).G, 1.34e10)
    assert close(m.C * m.K, 1.0, rel=1e-12)


def test_moduli_errors():
    with pytest.raises(ZeroDivisionError):
        pp.moduli_from_velocities(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        pp.moduli_from_velocities(1.1, 1.0, 1.0)


def test_velocities_from_moduli_examples():
    fluid = pp.ElasticModuli(E=0, K=1.34e10, G=0.0, C=1 / 1.34e10, nu=0.5, M=1.34e10, lam=1.34e10)
    assert pp.velocities_from_moduli(fluid, 1.0).vs == 0.0
    assert close(pp.velocities_from_moduli(fluid, 1.0).vp, 1.0)


@pytest.mark.parametrize("nu, ratio", [(0.0, math.sqrt(2)), (1 / 3, 2.0)])
def test_vp_vs_ratio(nu, ratio):
    assert close(pp.vp_vs_ratio_from_poisson(nu), ratio)


def test_vp_vs_ratio_pole():
    with pytest.raises(ValueError):
        pp.vp_vs_ratio_from_poisson(0.5)


def test_gamma_ray_index():
    assert pp.gamma_ray_index(20, 20, 120) == 0.0
    assert pp.gamma_ray_index(120, 20, 120) == 1.0
    assert close(pp.gamma_ray_index(70, 20, 120), 0.5)
    assert pp.gamma_ray_index(200, 20, 120) == 1.0
    assert pp.vsh_linear(0.3) == 0.3
    with pytest.raises(ValueError):
        pp.gamma_ray_index(70, 120, 20)


def test_wyllie():
    assert pp.wyllie_porosity(55.5, 55.5, 189) == 0.0
    assert close(pp.wyllie_porosity(189, 55.5, 189), 1.0)
    assert close(pp.wyllie_porosity(122.25, 55.5, 189), 0.5)


def test_density_porosity():
    assert pp.density_porosity(2.65, 2.65, 1.0) == 0.0
    assert close(pp.density_porosity(1.0, 2.65, 1.0), 1.0)
    assert close(pp.density_porosity(1.825, 2.65, 1.0), 0.5)


def test_neutron_response():
    assert close(pp.neutron_response(0.23, 1.0, 0.0, 1.0, 0.6, 0.4, 0.0), 0.23)
    assert close(pp.neutron_response(0.0, 0.5, 0.0, 1.0, 0.6, 0.4, 0.07), 0.07)
    assert close(pp.neutron_response(0.2, 0.5, 0.1, 1.0, 0.6, 0.4, 0.0), 0.20)
    with pytest.raises(ValueError):
        pp.neutron_response(0.7, 0.5, 0.5, 1.0, 0.6, 0.4, 0.0)


def test_gr_response():
    assert close(pp.gr_response([(2.4, 1.0, 75.0)], 2.4), 75.0)
    assert pp.gr_response([], 2.5) == 0.0
    assert close(pp.gr_response([(2, 0.5, 10), (3, 0.5, 20)], 2.5), 16.0)


def test_pe_index():
    assert close(pp.pe_index([(1, 3, 2)]), 81.0)
    assert close(pp.pe_index([(1, 3, 2), (1, 3, 2)]), 81.0)
    assert close(pp.pe_index([(1, 1, 1), (1, 2, 1)]), 8.5)
    with pytest.raises(ZeroDivisionError):
        pp.pe_index([(0, 3, 1)])


def test_unit_helpers_invert():
    assert close(pp.kms_to_ftus(pp.ftus_to_kms(0.25)), 0.25)
    assert close(pp.ftus_to_kms(1.0), 0.3048)


valid_velocities = st.tuples(
    st.floats(0.05, 0.3), st.floats(0.0, 0.8), st.floats(1.5, 3.0)
).map(lambda t: (t[0], t[0] * t[1] * math.sqrt(3) / 2, t[2]))


@settings(max_examples=300)
@given(valid_velocities)
def test_moduli_round_trip(args):
    vp, vs, rho = args
    m = pp.moduli_from_velocities(vp, vs, rho)
    back = pp.velocities_from_moduli(m, rho)
    assert back.vp == pytest.approx(vp, rel=REL)
    assert back.vs == pytest.approx(vs, rel=REL, abs=1e-12)
    assert m.C * m.K == pytest.approx(1.0, rel=1e-12)
    assert 0.0 <= m.nu <= 0.5
    assert back.vp > back.vs
    if vs > 1e-6 * vp:
        assert m.nu < 0.5
    # beyond vp/vs = 10, 0.5 - nu cancels too many digits for a 1e-9 comparison
    if vs >= 0.1 * vp:
        assert pp.vp_vs_ratio_from_poisson(m.nu) == pytest.approx(vp / vs, rel=REL)


@settings(max_examples=100)
@given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=20))
def test_monotonicity(steps):
    v = 1.1 + np.cumsum(np.asarray(steps) + 1e-6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", pp.NonPhysicalWarning)
        assert np.all(np.diff(pp.castagna_vs(v)) > 0)
    dt = 50 + 20 * v
    assert np.all(np.diff(pp.wyllie_porosity(dt, 40.0, 300.0)) > 0)
    rho = 1.0 + 0.2 * v
    assert np.all(np.diff(pp.density_porosity(rho, 2.65, 1.0)) < 0)


@settings(max_examples=100)
@given(st.floats(0, 1), st.floats(0, 1))
def test_porosity_bounds(u, w):
    assert 0.0 <= pp.wyllie_porosity(55.5 + u * (189 - 55.5), 55.5, 189) <= 1.0 + 1e-15
    assert -1e-15 <= pp.density_porosity(1.0 + w * 1.65, 2.65, 1.0) <= 1.0
