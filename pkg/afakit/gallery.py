"""
Ready-made automata for tests, documentation and analysis.
"""
import logging
from afakit.core import Afa, AffineMatrix, AffineVector, to_rational
from afakit.combinators import constant, amplify_rounds, amplified_state_count, intersect_aut

log = logging.getLogger('afakit')


def constant_pfa(alpha, alphabet=('a', 'b')):
    """
    A 2-state probabilistic automaton with value α on every word.
    Identical to :func:`afakit.combinators.constant`.
    """
    return constant(alpha, alphabet)


def eq_afa(alphabet=('a', 'b'), pair=None, gain=1):
    """
    A 3-state affine counter comparing the occurrences of two symbols.

    After reading w the state is (1, g d, -g d) with d = |w|_x - |w|_y for the
    counted pair (x, y) and gain g. Only state 0 accepts, so the value is
    1 / (1 + 2 g |d|): exactly 1 if both symbols occur equally often and at most
    1 / (1 + 2g) otherwise. Symbols outside the pair leave the state unchanged.

    Parameters
    ----------
    alphabet: list[str]
        the input symbols
    pair: tuple[str, str] or None
        the two counted symbols; default: the first two symbols of the alphabet
    gain: int or fractions.Fraction or str
        the counter step g > 0

    Returns
    -------
    Afa

    Examples
    --------
    >>> from afakit.core import accept_value
    >>> str(accept_value(eq_afa(), 'aab'))
    '1/3'
    """
    alphabet = tuple(alphabet)
    if pair is None:
        if len(alphabet) < 2:
            raise ValueError('the alphabet needs at least two symbols')
        pair = alphabet[:2]
    up, down = pair
    if up == down or up not in alphabet or down not in alphabet:
        raise ValueError(f'invalid counted pair {pair} for alphabet {list(alphabet)}')
    g = to_rational(gain)
    if g <= 0:
        raise ValueError('gain must be positive')
    transitions = {}
    for x in alphabet:
        if x == up:
            transitions[x] = AffineMatrix([[1, 0, 0], [g, 1, 0], [-g, 0, 1]])
        elif x == down:
            transitions[x] = AffineMatrix([[1, 0, 0], [-g, 1, 0], [g, 0, 1]])
        else:
            transitions[x] = AffineMatrix.identity(3)
    return Afa(alphabet=alphabet,
               initial=AffineVector.basis(3),
               transitions=transitions,
               accepting=[0],
               kind='affine')


def eq3_afa(gain=2, rounds=0, method='symmetric', max_states=1000000):
    """
    An automaton for the words over {a, b, c} with equally many a's, b's and c's.

    Two counters, a versus b and a versus c, are intersected. Members have value 1.
    With the default gain 2 each counter rejects with value at most 1/5, so
    non-members have value at most 1/5. With gain 1 the counters have error 1/3 and
    need two amplification rounds to reach 1/4 (`rounds=2`); the intersection then
    has 220² = 48400 states with the symmetric method and 3^18 with the tensor method.

    Parameters
    ----------
    gain: int or fractions.Fraction or str
        the counter gain, see :func:`eq_afa`
    rounds: int
        amplification rounds applied to each counter before intersecting
    method: str
        the amplification method, see :func:`afakit.combinators.amplify`
    max_states: int
        the largest acceptable number of output states

    Returns
    -------
    Afa

    Raises
    ------
    RuntimeError
        if the intersection would exceed `max_states`
    """
    alphabet = ('a', 'b', 'c')
    size = amplified_state_count(3, rounds, method) ** 2
    if size > max_states:
        raise RuntimeError(f'the intersection would have {size} states, '
                           f'exceeding the limit of {max_states}')
    ab = amplify_rounds(eq_afa(alphabet, pair=('a', 'b'), gain=gain),
                        rounds, method=method, max_states=max_states)
    ac = amplify_rounds(eq_afa(alphabet, pair=('a', 'c'), gain=gain),
                        rounds, method=method, max_states=max_states)
    log.debug(f'intersecting two counters of {ab.state_count} states')
    return intersect_aut(ab, ac)


def dfa_embed(alphabet, states, delta, start, accepting):
    """
    Embed a complete deterministic finite automaton as a stochastic automaton
    with 0/1 matrices. The value of every word is 1 if the DFA accepts it and 0
    otherwise, so the language is recognized at any cutpoint in [0, 1).

    Parameters
    ----------
    alphabet: list[str]
        the input symbols
    states: list
        the DFA state names; their order defines the state indices
    delta: dict
        the transition function as mapping `(state, symbol) -> state`
    start:
        the start state
    accepting: list
        the accepting states

    Returns
    -------
    Afa

    Raises
    ------
    ValueError
        if the transition function is incomplete or refers to unknown states
    """
    states = list(states)
    index = {s: i for i, s in enumerate(states)}
    unknown = [s for s in [start] + list(accepting) + list(delta.values()) if s not in index]
    if len(unknown) > 0:
        raise ValueError(f'unknown DFA states: {unknown}')
    missing = [(s, x) for s in states for x in alphabet if (s, x) not in delta]
    if len(missing) > 0:
        raise ValueError(f'incomplete transition function, missing: {missing}')
    k = len(states)
    transitions = {}
    for x in alphabet:
        rows = [[0] * k for _ in range(k)]
        for s in states:
            rows[index[delta[(s, x)]]][index[s]] = 1
        transitions[x] = AffineMatrix(rows)
    return Afa(alphabet=alphabet,
               initial=AffineVector.basis(k, index[start]),
               transitions=transitions,
               accepting=sorted(set(index[s] for s in accepting)),
               kind='stochastic')


def dfa_parity(alphabet=('a', 'b'), symbol=None):
    """
    The words with an even number of occurrences of `symbol` (default: the first symbol).
    """
    symbol = alphabet[0] if symbol is None else symbol
    delta = {}
    for x in alphabet:
        flip = x == symbol
        delta[('even', x)] = 'odd' if flip else 'even'
        delta[('odd', x)] = 'even' if flip else 'odd'
    return dfa_embed(alphabet=alphabet, states=['even', 'odd'], delta=delta,
                     start='even', accepting=['even'])

