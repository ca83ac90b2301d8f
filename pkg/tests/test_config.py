import logging
import os
from unittest import mock

import pytest

from quantum.cvkit.config import (
    get_env, bool_env, CVKitConfig, Tolerances, get_config, set_config, get_tolerances,
)


@pytest.fixture
def cfg_params():
    return {
        'threads': 4,
        'restarts': 3,
        'max_sector': 500,
        'gkp_truncation': 6,
        'fiber_attenuation': 0.25,
        'log_level': 'debug',
    }


def test_get_env():
    with pytest.raises(KeyError):
        get_env('TESTKEY')
    with pytest.raises(KeyError):
        with mock.patch.dict(os.environ, {'TESTKEY': 'testkey'}):
            get_env('TESTKEY')
    with mock.patch.dict(os.environ, {'CVKIT_TESTKEY': 'testkey'}):
        r = get_env('TESTKEY')
        assert r == 'testkey'
    assert get_env('TESTKEY', '3', clean=int) == 3


def test_bool_env():
    for v in ('y', 'Y', 'yes', 'YES', 't', 'T', 'true', 'TRUE', '1'):
        assert bool_env(v)
    for v in ('n', 'N', 'no', 'NO', 'f', 'F', 'false', 'FALSE', '0'):
        assert not bool_env(v)
    with pytest.raises(ValueError):
        bool_env('other')


def test_config_initialization(cfg_params):
    cfg = CVKitConfig(**cfg_params)
    assert cfg.threads == 4
    assert cfg.restarts == 3
    assert cfg.max_sector == 500
    assert cfg.gkp_truncation == 6
    assert cfg.fiber_attenuation == 0.25
    assert cfg.log_level == logging.DEBUG
    assert isinstance(cfg.tolerances, Tolerances)


def test_config_defaults():
    cfg = CVKitConfig()
    assert cfg.restarts == int(CVKitConfig.DEFAULTS['restarts'])
    assert cfg.gkp_truncation == 5
    assert cfg.log_level == logging.WARNING
    # 0.2 dB/km over the 0.1 km delay line of a 500 ns switch
    assert cfg.switch_loss == pytest.approx(0.02)


def test_config_from_env():
    env = {'CVKIT_THREADS': '3', 'CVKIT_TOL_UNITARITY': '1e-6', 'CVKIT_LOG_LEVEL': 'INFO'}
    with mock.patch.dict(os.environ, env):
        cfg = CVKitConfig()
    assert cfg.threads == 3
    assert cfg.tolerances.unitarity == 1e-6
    assert cfg.log_level == logging.INFO


def test_config_rejects_bad_env():
    with mock.patch.dict(os.environ, {'CVKIT_THREADS': '0'}):
        with pytest.raises(ValueError):
            CVKitConfig()
    with mock.patch.dict(os.environ, {'CVKIT_LOG_LEVEL': 'chatty'}):
        with pytest.raises(ValueError):
            CVKitConfig()


def test_tolerances_replace():
    tol = Tolerances()
    assert tol.unitarity == 1e-9
    assert tol.residue == 0.1
    updated = tol.replace(unitarity=1e-5, fairness=None)
    assert updated.unitarity == 1e-5
    assert updated.fairness == tol.fairness
    assert tol.unitarity == 1e-9
    with pytest.raises(ValueError):
        tol.replace(nonsense=1.0)
    assert 'alternation' in Tolerances.names()


def test_get_config(mocker):
    mocker.patch('quantum.cvkit.config._config', None)
    cfg = get_config()
    assert isinstance(cfg, CVKitConfig)
    assert get_config() is cfg


def test_set_config():
    cfg = CVKitConfig(tolerances=Tolerances(clamp=0.5))
    set_config(cfg)
    assert get_config() is cfg
    assert get_tolerances().clamp == 0.5
