import os
import random
import logging
import platform
from fractions import Fraction
import pytest
from afakit.core import Afa
from afakit.gallery import eq_afa


@pytest.fixture(autouse=True)
def tmp_home(monkeypatch, tmp_path):
    home = tmp_path / 'tmp_home'
    home.mkdir()
    var = 'USERPROFILE' if platform.system() == 'Windows' else 'HOME'
    monkeypatch.setenv(var, str(home))
    assert os.path.expanduser('~') == str(home)
    yield home


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logger = logging.getLogger('afakit')
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(logging.NOTSET)


def _affine_column(rng, size, max_den, stochastic):
    if stochastic:
        weights = [rng.randint(0, max_den) for _ in range(size)]
        if sum(weights) == 0:
            weights[rng.randrange(size)] = 1
        return [Fraction(w, sum(weights)) for w in weights]
    column = []
    for _ in range(size - 1):
        q = rng.randint(1, max_den)
        column.append(Fraction(rng.randint(-q, q), q))
    column.append(1 - sum(column))
    return column


def make_random_afa(rng, states=None, alphabet='ab', max_den=8, stochastic=False):
    """
    A random automaton with small-denominator entries.
    The columns are drawn independently; the last entry of each makes it sum up to 1.
    """
    k = rng.randint(2, 3) if states is None else states
    transitions = {}
    for x in alphabet:
        columns = [_affine_column(rng, k, max_den, stochastic) for _ in range(k)]
        transitions[x] = [[columns[j][i] for j in range(k)] for i in range(k)]
    accepting = [i for i in range(k) if rng.random() < 0.5]
    return Afa(alphabet=list(alphabet),
               initial=_affine_column(rng, k, max_den, stochastic),
               transitions=transitions,
               accepting=accepting,
               kind='stochastic' if stochastic else 'affine')


@pytest.fixture
def random_afa():
    """
    Factory for random automata: `random_afa(seed, **kwargs)`.
    """
    def factory(seed, **kwargs):
        return make_random_afa(random.Random(seed), **kwargs)
    return factory


@pytest.fixture
def corpus(random_afa):
    """
    200 random automata with 2 or 3 states over {a, b}.
    """
    return [random_afa(seed) for seed in range(200)]


@pytest.fixture
def eq():
    return eq_afa()


@pytest.fixture
def eq_file(eq, tmp_path):
    from afakit.document import write
    path = str(tmp_path / 'eq.json')
    write(eq, path)
    return path


@pytest.fixture
def values_of():
    """
    Exact values of all words up to a length: `values_of(afa, max_len) -> {word: value}`.
    """
    from afakit.core import enumerate_runs, weigh

    def compute(afa, max_len):
        return {word: weigh(afa.accepting, state) for word, state in enumerate_runs(afa, max_len)}
    return compute
