"""Test parsing, validation and serialization of run configurations."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortiline.config import load_config, parse_config, read_pairs, serialize_config
from vortiline.errors import ConfigError
from vortiline.fields import Grid

MINIMAL = '''\
# two vortices
model = sqg
grid.n = 32
time.t_end = 1.5
ic.name = two_gaussian
output.dir = runs/sqg32   # relative to the working directory
'''


def test_minimal_config():
    config = parse_config(MINIMAL)
    assert config.model == 'sqg'
    assert config.grid == Grid((32, 32))
    assert config.t_end == 1.5
    assert config.snapshot_interval == 1.5
    assert config.output_dir == 'runs/sqg32'
    assert config.stepper.adaptive and config.stepper.dt is None
    assert config.ic_params == {}
    assert config.segment.orientation == 'max_at_end'
    assert config.bounds.c0 is None
    assert config.text == MINIMAL


def test_grid_size_broadcasts_to_the_model_dimension():
    text = MINIMAL.replace('model = sqg', 'model = euler3d').replace('two_gaussian', 'taylor_green')
    config = parse_config(text.replace('grid.n = 32', 'grid.n = 16'))
    assert config.grid.n == (16, 16, 16)


def test_ic_params_and_lists():
    config = parse_config(MINIMAL + 'ic.width = 0.4\nsegment.seed = 3.0, 3.5\nbounds.T = 2.0, 2.5\n')
    assert config.ic_params == {'width': 0.4}
    assert config.segment.seed == (3.0, 3.5)
    assert config.bounds.T == (2.0, 2.5)


def test_every_error_is_reported():
    text = 'model = sqg\ngrid.n = 32\ntime.t_end = soon\nic.name = two_gaussian\ncolour = blue\n'
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    errors = info.value.errors
    assert any(e.startswith('time.t_end:') for e in errors)
    assert "unknown key 'colour'" in errors
    assert "missing required key 'output.dir'" in errors
    assert len(errors) == 3


def test_syntax_errors():
    pairs, errors = read_pairs('model = sqg\nmodel = euler3d\njust words\n')
    assert pairs == {'model': 'sqg'}
    assert errors == ["line 2: duplicate key 'model'", "line 3: expected \"key = value\", got 'just words'"]


def test_unknown_ic_parameter():
    with pytest.raises(ConfigError, match="unknown key 'ic.radius'"):
        parse_config(MINIMAL + 'ic.radius = 0.2\n')
    with pytest.raises(ConfigError, match='unknown sqg initial condition'):
        parse_config(MINIMAL.replace('two_gaussian', 'taylor_green'))


def test_grid_must_match_model():
    with pytest.raises(ConfigError, match='needs a 2D grid'):
        parse_config(MINIMAL.replace('grid.n = 32', 'grid.n = 16, 16, 16'))
    with pytest.raises(ConfigError, match='powers of two'):
        parse_config(MINIMAL.replace('grid.n = 32', 'grid.n = 48'))
    with pytest.raises(ConfigError, match='segment.seed has 3 coordinates'):
        parse_config(MINIMAL + 'segment.seed = 1.0, 2.0, 3.0\n')


def test_value_checks():
    with pytest.raises(ConfigError, match='expected a boolean'):
        parse_config(MINIMAL + 'time.adaptive = maybe\n')
    with pytest.raises(ConfigError, match='fixed-step run needs dt'):
        parse_config(MINIMAL + 'time.adaptive = no\n')
    with pytest.raises(ConfigError, match='must be positive'):
        parse_config(MINIMAL.replace('1.5', '-1.0'))
    with pytest.raises(ConfigError, match='finite'):
        parse_config(MINIMAL + 'hyper.nu = nan\n')
    with pytest.raises(ConfigError, match='segment.orientation'):
        parse_config(MINIMAL + 'segment.orientation = sideways\n')
    with pytest.raises(ConfigError, match='appendix.grid.n needs 3 values'):
        parse_config(MINIMAL + 'appendix.grid.n = 64, 64\n')


def test_load_config(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text(MINIMAL)
    assert load_config(path) == parse_config(MINIMAL)


def test_serialized_config_parses_back():
    config = parse_config(MINIMAL + 'ic.width = 0.4\ntime.dt = 0.01\ntime.adaptive = false\n'
                                    'bounds.c0 = 0.5\nappendix.counterexample = yes\n')
    text = serialize_config(config)
    assert parse_config(text) == config
    keys = [line.split(' = ')[0] for line in text.splitlines()]
    assert keys == sorted(keys)
    assert 'time.dt = 0.01' in text.splitlines()


@settings(max_examples=50, deadline=None)
@given(t_end=st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False),
       nu=st.floats(min_value=0.0, max_value=1.0),
       seed=st.integers(min_value=0, max_value=2 ** 32),
       length=st.floats(min_value=0.1, max_value=100.0))
def test_serialization_round_trip(t_end, nu, seed, length):
    config = parse_config(MINIMAL.replace('1.5', repr(t_end))
                          + f'hyper.nu = {nu!r}\nseed = {seed}\nsegment.target_length = {length!r}\n')
    assert parse_config(serialize_config(config)) == config
