"""Wave-energy harvesting chain and transmit-power budget."""

import pytest
from hypothesis import given, strategies as st

from marisim.energy import (
    WecParams,
    available_tx_power,
    harvested_power,
    wave_power_per_meter,
)
from marisim.sea_surface import sea_state

W = WecParams()

# frozen: flux = rho g^2 a^2 T / (64 pi) per meter of crest, and the chain
# multiplies eta_pto * eta_conv * gamma_cwr * W onto it
FLUX_A1_T10 = 4906.050716986905
HARVEST_A1_T10 = 362.0665429136336
HARVEST_STATE4 = 286.40029273441723   # a = 1.875/2, T = 9
HARVEST_STATE2 = 5.702548050889731    # a = 0.3/2, T = 7


def test_wave_power_reference_point():
    assert wave_power_per_meter(1.0, 10.0, W) == pytest.approx(FLUX_A1_T10,
                                                               rel=1e-12)
    assert harvested_power(1.0, 10.0, W) == pytest.approx(HARVEST_A1_T10,
                                                          rel=1e-12)


def test_harvested_power_for_builtin_states():
    for level, expected in ((4, HARVEST_STATE4), (2, HARVEST_STATE2)):
        row = sea_state(level)
        got = harvested_power(row.height_mean / 2.0, row.period_mean, W)
        assert got == pytest.approx(expected, rel=1e-12)


@given(st.floats(0.0, 10.0), st.floats(0.5, 25.0))
def test_flux_scales_with_amplitude_squared_and_period(a, T):
    base = wave_power_per_meter(1.0, 1.0, W)
    assert wave_power_per_meter(a, T, W) == pytest.approx(base * a * a * T,
                                                          rel=1e-12)


def test_harvest_is_linear_in_each_chain_factor():
    import dataclasses
    base = harvested_power(0.8, 9.0, W)
    for field in ("eta_pto", "eta_conv", "gamma_cwr", "W"):
        halved = dataclasses.replace(W, **{field: getattr(W, field) / 2.0})
        assert harvested_power(0.8, 9.0, halved) == pytest.approx(base / 2.0,
                                                                  rel=1e-12)


def test_wave_power_input_validation():
    with pytest.raises(ValueError):
        wave_power_per_meter(-0.1, 10.0, W)
    with pytest.raises(ValueError):
        wave_power_per_meter(1.0, 0.0, W)


def test_available_power_clamps():
    assert available_tx_power(0.0, W) == 0.0
    assert available_tx_power(W.P_0 / 2.0, W) == 0.0             # below idle draw
    assert available_tx_power(W.P_0 + 7.0, W) == pytest.approx(7.0)
    assert available_tx_power(1e6, W) == W.P_max                 # budget cap


@given(st.floats(0.0, 500.0), st.floats(0.0, 500.0))
def test_available_power_is_monotone_and_bounded(p1, p2):
    lo, hi = sorted((p1, p2))
    assert 0.0 <= available_tx_power(lo, W) <= available_tx_power(hi, W) <= W.P_max


def test_params_validation():
    with pytest.raises(ValueError):
        WecParams(eta_pto=0.0)
    with pytest.raises(ValueError):
        WecParams(eta_conv=1.5)
    with pytest.raises(ValueError):
        WecParams(W=-2.0)
    with pytest.raises(ValueError):
        WecParams(P_0=-1.0)
    with pytest.raises(ValueError):
        WecParams(P_max=0.0)
