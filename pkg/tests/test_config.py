"""Scenario configuration: defaults, INI loading, sweep overrides."""

import dataclasses
import math

import pytest

from marisim.channel import db2pow
from marisim.config import (
    ConfigError,
    GeometryConfig,
    RadioConfig,
    ScenarioConfig,
    apply_sweep_value,
    load_config,
)


def test_defaults_are_self_consistent():
    cfg = ScenarioConfig()
    assert cfg.sea_state == 4
    assert cfg.geometry.buoy_distance_m == 200.0
    assert cfg.geometry.deploy_radius_m == 200.0
    assert cfg.radio.m_antennas == 8
    assert cfg.radio.n_elements == 360
    assert cfg.radio.sigma2_w == pytest.approx(db2pow(cfg.radio.sigma2_dbw))
    assert cfg.b_effective == 360            # one sub-frame per element
    assert cfg.t_baseline == 4               # rounded mean IoT count


def test_receiver_buoy_sits_downwind_of_the_turbine():
    cfg = GeometryConfig()
    rx = cfg.rx_position
    assert math.dist(cfg.turbine_position, rx) == pytest.approx(200.0)
    # wave source on the -x axis: downwind means +x
    assert rx[0] > cfg.turbine_position[0]
    assert rx[1] == pytest.approx(cfg.turbine_position[1])


def test_scenario_validation():
    with pytest.raises(ConfigError):
        ScenarioConfig(sea_state=1)          # no wave period defined
    with pytest.raises(ConfigError):
        ScenarioConfig(sea_state=4, interval_duration_s=0.0)
    with pytest.raises(ConfigError):
        ScenarioConfig(seed=-1)
    with pytest.raises(ConfigError):
        GeometryConfig(ris_height_m=60.0)    # outside the tower range
    with pytest.raises(ConfigError):
        GeometryConfig(mean_iot_count=0.0)
    with pytest.raises(ConfigError):
        RadioConfig(beta_hz=0.0)
    with pytest.raises(ConfigError):
        RadioConfig(m_antennas=0)


FULL_INI = """\
[scenario]
sea_state = 6
seed = 17
interval_duration_s = 0.2

[geometry]
turbine_x_m = 10
turbine_y_m = -5
ris_height_m = 40
buoy_distance_m = 150
deploy_radius_m = 180
mean_iot_count = 3
rx_mast_m = 7.5
iot_mast_m = 2.5

[radio]
m_antennas = 4
n_elements = 64
beta_hz = 2e6
sigma2_dbw = -120
f_c_hz = 3.5e9
g_r_db = 3

[energy]
eta_pto = 0.4
p_max_w = 50

[estimation]
b_subframes = 80
t_pilot_len = 5
noiseless = yes

[optimizer]
sdp_tol = 1e-5
sdp_max_iter = 400
randomization_draws = 25
"""


def test_load_config_full_roundtrip(tmp_path):
    path = tmp_path / "scenario.ini"
    path.write_text(FULL_INI)
    cfg = load_config(path)
    assert cfg.sea_state == 6
    assert cfg.seed == 17
    assert cfg.interval_duration_s == 0.2
    assert cfg.geometry.turbine_position == (10.0, -5.0)
    assert cfg.geometry.ris_height_m == 40.0
    assert cfg.geometry.rx_mast_m == 7.5
    assert cfg.radio.m_antennas == 4
    assert cfg.radio.n_elements == 64
    assert cfg.radio.sigma2_dbw == -120.0
    assert cfg.radio.pathloss.f_c == 3.5e9
    assert cfg.radio.pathloss.G_r == 3.0
    assert cfg.energy.eta_pto == 0.4
    assert cfg.energy.P_max == 50.0
    assert cfg.estimation.b_subframes == 80
    assert cfg.estimation.t_pilot_len == 5
    assert cfg.estimation.noiseless is True
    assert cfg.optimizer.sdp_max_iter == 400
    assert cfg.b_effective == 80 and cfg.t_baseline == 5


def test_load_config_rejections(tmp_path):
    cases = {
        "unknown_section.ini": "[weather]\nwind = 5\n",
        "unknown_key.ini": "[radio]\nbandwidth = 1\n",
        "both_power_forms.ini": "[energy]\np_max_w = 50\np_max_dbw = 17\n",
        "both_noise_forms.ini": "[radio]\nsigma2_w = 1e-13\nsigma2_dbw = -130\n",
        "bad_int.ini": "[radio]\nn_elements = 12.5\n",
        "bad_bool.ini": "[estimation]\nnoiseless = maybe\n",
        "bad_state.ini": "[scenario]\nsea_state = 1\n",
        "bad_height.ini": "[geometry]\nris_height_m = 10\n",
    }
    for name, text in cases.items():
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")


def test_sigma2_watt_form(tmp_path):
    path = tmp_path / "watts.ini"
    path.write_text("[radio]\nsigma2_w = 1e-13\n")
    cfg = load_config(path)
    assert cfg.radio.sigma2_w == pytest.approx(1e-13, rel=1e-12)


def test_apply_sweep_value_covers_all_variables():
    cfg = ScenarioConfig()
    assert apply_sweep_value(cfg, "hr0", 12.0).geometry.rx_mast_m == 12.0
    assert apply_sweep_value(cfg, "n", 64).radio.n_elements == 64
    assert apply_sweep_value(cfg, "pmax", 40.0).energy.P_max == 40.0
    assert apply_sweep_value(cfg, "sea", 6).sea_state == 6
    # overrides leave the original untouched
    assert cfg.radio.n_elements == 360
    with pytest.raises(ConfigError):
        apply_sweep_value(cfg, "n", 64.5)
    with pytest.raises(ConfigError):
        apply_sweep_value(cfg, "frequency", 1.0)


def test_configs_are_immutable():
    cfg = ScenarioConfig()
    with pytest.raises(dataclasses.FrozenInstanceError):
        cfg.sea_state = 5
