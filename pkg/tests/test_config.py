import os
import logging
import pytest
from afakit.config import get_config, get_keys, write
from afakit.ancillary import set_logging


def test_default_config():
    config = get_config()
    assert sorted(config.keys()) == ['analysis', 'combinators', 'output']
    assert config['combinators'] == {'max_states': 1000000, 'amplify_method': 'symmetric'}
    assert config['analysis']['exact_step_budget'] == 2000
    assert config['analysis']['angle_max_denominator'] == 100
    assert config['analysis']['angle_tolerance'] == 1e-9
    assert config['output']['logfile'] is None


def test_overrides():
    config = get_config(max_states='500', amplify_method='tensor', logfile='afa.log')
    assert config['combinators'] == {'max_states': 500, 'amplify_method': 'tensor'}
    assert config['output']['logfile'] == os.path.abspath('afa.log')
    with pytest.raises(ValueError, match='not allowed'):
        get_config(rounds='2')
    with pytest.raises(ValueError, match='positive integer'):
        get_config(max_states='0')
    with pytest.raises(ValueError, match='amplify_method'):
        get_config(amplify_method='cubic')
    with pytest.raises(AssertionError):
        get_config(spectrum_tolerance='-1')


def test_config_file(tmp_path):
    target = str(tmp_path / 'config.ini')
    with open(target, 'w') as f:
        f.write('[COMBINATORS]\nmax_states = 42\n\n[ANALYSIS]\nangle_tolerance = 1e-6\n')
    config = get_config(target)
    assert config['combinators'] == {'max_states': 42, 'amplify_method': 'tensor'}
    assert config['analysis']['angle_tolerance'] == 1e-6
    assert config['analysis']['exact_step_budget'] == 2000
    with pytest.raises(FileNotFoundError):
        get_config(str(tmp_path / 'missing.ini'))
    with pytest.raises(TypeError):
        get_config(42)
    with open(target, 'a') as f:
        f.write('[OUTPUT]\ncolor = red\n')
    with pytest.raises(ValueError, match='color'):
        get_config(target)


def test_get_keys():
    assert get_keys('combinators') == ['max_states', 'amplify_method']
    with pytest.raises(RuntimeError, match='unknown section'):
        get_keys('processing')


def test_write(tmp_path):
    target = str(tmp_path / 'config.ini')
    write(get_config(), target, max_states=77)
    assert get_config(target)['combinators']['max_states'] == 77
    assert get_config(target)['output']['logfile'] is None
    with pytest.raises(RuntimeError):
        write(get_config(), target)
    with pytest.raises(KeyError):
        write(get_config(), target, overwrite=True, rounds=3)


def test_set_logging(tmp_path):
    logfile = str(tmp_path / 'logs' / 'afa.log')
    config = get_config(logfile=logfile)
    logger = set_logging(config, debug=True)
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 1
    logger.info('hello')
    logger.handlers[0].flush()
    with open(logfile) as f:
        text = f.read()
    assert 'CONFIGURATION' in text
    assert 'amplify_method' in text
    assert '[ INFO] hello' in text
    logger = set_logging(get_config())
    assert logger.level == logging.INFO
    assert isinstance(logger.handlers[0], logging.StreamHandler)
    assert not isinstance(logger.handlers[0], logging.FileHandler)
