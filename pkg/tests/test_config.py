import math
from dataclasses import replace

import pytest

from b5gcell import ConfigError, default_bundle, dumps_config, lambertian_order, load_config, write_config


def test_defaults_load_without_file():
    bundle = load_config(None, use_env=False)
    assert bundle.scenario.m_t == 64
    assert bundle.scenario.n_arrays == 4
    assert bundle.constants.rho == 160.0
    assert bundle.lifi.half_angle == pytest.approx(math.pi / 3)


def test_write_then_load_round_trips(tmp_path, bundle):
    path = tmp_path / "cell.cfg"
    write_config(bundle, str(path))
    again = load_config(str(path), use_env=False)
    assert again == bundle


def test_dumps_is_what_write_writes(tmp_path, bundle):
    path = tmp_path / "cell.cfg"
    write_config(bundle, str(path))
    assert path.read_text() == dumps_config(bundle)


def test_file_overrides_defaults(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("# comment\n[scenario]\nm_t = 256\nn_ue = 8\n")
    bundle = load_config(str(path), use_env=False)
    assert bundle.scenario.m_t == 256
    assert bundle.scenario.n_ue == 8
    # untouched keys keep defaults
    assert bundle.scenario.m_r == 64


def test_env_overrides_beat_file(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[scenario]\nm_t = 256\n")
    bundle = load_config(str(path), environ={"B5GCELL_SCENARIO__M_T": "128"})
    assert bundle.scenario.m_t == 128


def test_env_override_other_sections():
    bundle = load_config(None, environ={"B5GCELL_DEVICES__RHO": "320"})
    assert bundle.constants.rho == 320.0


def test_malformed_env_name_rejected():
    with pytest.raises(ConfigError, match="SECTION__KEY"):
        load_config(None, environ={"B5GCELL_M_T": "128"})


def test_unknown_section_named_in_error(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[scnario]\nm_t = 1\n")
    with pytest.raises(ConfigError, match=r"unknown section \[scnario\]"):
        load_config(str(path), use_env=False)


def test_unknown_key_named_in_error(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[scenario]\nm_tt = 1\n")
    with pytest.raises(ConfigError, match="m_tt"):
        load_config(str(path), use_env=False)


def test_duplicate_key_rejected(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[scenario]\nm_t = 1\nm_t = 2\n")
    with pytest.raises(ConfigError, match="duplicate"):
        load_config(str(path), use_env=False)


def test_bad_value_names_section_and_key(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[scenario]\nm_t = sixty-four\n")
    with pytest.raises(ConfigError, match="scenario.m_t"):
        load_config(str(path), use_env=False)


def test_validation_names_key_and_rule():
    with pytest.raises(ConfigError, match="scenario.m_t"):
        load_config(None, environ={"B5GCELL_SCENARIO__M_T": "0"})


def test_pilot_longer_than_coherence_block_rejected():
    with pytest.raises(ConfigError, match="pilot_len"):
        load_config(None, environ={"B5GCELL_SCENARIO__PILOT_LEN": "200"})


def test_angle_degree_alternative(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[lifi]\nhalf_angle_deg = 45\n")
    bundle = load_config(str(path), use_env=False)
    assert bundle.lifi.half_angle == pytest.approx(math.pi / 4, rel=1e-12)


def test_angle_given_both_ways_rejected(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[lifi]\nhalf_angle = 0.7\nhalf_angle_deg = 45\n")
    with pytest.raises(ConfigError, match="not both"):
        load_config(str(path), use_env=False)


def test_noise_dbm_alternative(tmp_path):
    path = tmp_path / "cell.cfg"
    path.write_text("[scenario]\nnoise_variance_dbm = -97\n")
    bundle = load_config(str(path), use_env=False)
    assert bundle.scenario.noise_variance == pytest.approx(10 ** (-97 / 10) / 1000,
                                                           rel=1e-12)


def test_vector_keys_round_trip(tmp_path, bundle):
    swapped = replace(bundle, layout=replace(bundle.layout,
                                             building_distances_m=(50.0, 120.0, 310.0, 390.0)))
    path = tmp_path / "cell.cfg"
    write_config(swapped, str(path))
    again = load_config(str(path), use_env=False)
    assert again.layout.building_distances_m == (50.0, 120.0, 310.0, 390.0)


# lambertian order: half-power semi-angle to emission exponent

def test_lambertian_order_60_deg_is_one():
    assert lambertian_order(math.pi / 3) == pytest.approx(1.0, rel=1e-9)


def test_lambertian_order_45_deg():
    assert lambertian_order(math.pi / 4) == pytest.approx(2.0000000000000004, rel=1e-9)


def test_lambertian_order_30_deg():
    # frozen from an out-of-band evaluation of -1/log2(cos(pi/6))
    assert lambertian_order(math.pi / 6) == pytest.approx(4.818841679306421, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, math.pi / 2, -0.1, 2.0])
def test_lambertian_order_domain(bad):
    with pytest.raises(ValueError):
        lambertian_order(bad)


def test_default_bundle_is_validated(bundle):
    # a default bundle survives its own validation; mutations get caught
    with pytest.raises(ConfigError):
        load_config(None, environ={"B5GCELL_SCENARIO__GAMMA": "0"})
