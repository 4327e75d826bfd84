"""
Closure constructions on affine automata.

Every combinator maps automata to a new automaton whose accepting value
is an exact function of the input values, e.g. the product, an affine mix
or the complement. Inputs are never modified.
"""
import logging
import itertools
from math import comb, factorial
from collections import Counter
from fractions import Fraction
from afakit.core import (Afa, AffineMatrix, to_rational, proj_complement,
                         proj_tensor, proj_union_disjoint, mat_tensor, vec_tensor)
from afakit.ancillary import format_rational

log = logging.getLogger('afakit')

AMPLIFY_METHODS = ('tensor', 'symmetric')

# (accept at least, reject at most) when both inputs have error at most 1/4
THRESHOLDS = {'union': (Fraction(3, 8), Fraction(1, 4)),
              'intersect': (Fraction(9, 16), Fraction(1, 4))}


class MixWeights(object):
    """
    Non-negative weights α and β with α + β = 1.

    Parameters
    ----------
    alpha: int or fractions.Fraction or str
    beta: int or fractions.Fraction or str or None
        defaults to 1 - α
    """

    def __init__(self, alpha, beta=None):
        self.alpha = to_rational(alpha)
        self.beta = 1 - self.alpha if beta is None else to_rational(beta)
        if self.alpha < 0 or self.beta < 0:
            raise ValueError('mix weights must not be negative')
        if self.alpha + self.beta != 1:
            raise ValueError(f'mix weights must sum up to 1, got '
                             f'{format_rational(self.alpha)} + {format_rational(self.beta)}')

    def __repr__(self):
        return f'MixWeights({format_rational(self.alpha)}, {format_rational(self.beta)})'


def _kind(*automata):
    return 'stochastic' if all(x.kind == 'stochastic' for x in automata) else 'affine'


def _check_alphabets(a, b):
    if set(a.alphabet) != set(b.alphabet):
        raise ValueError(f'alphabet mismatch: {list(a.alphabet)} and {list(b.alphabet)}')


def _unit_interval(value, name):
    value = to_rational(value)
    if not 0 <= value <= 1:
        raise ValueError(f'{name} must be in [0, 1], got {format_rational(value)}')
    return value


def constant(alpha, alphabet=('a', 'b')):
    """
    A 2-state probabilistic automaton with value α on every word.

    Parameters
    ----------
    alpha: int or fractions.Fraction or str
        the constant value in [0, 1]
    alphabet: list[str]
        the input symbols

    Returns
    -------
    Afa
    """
    alpha = _unit_interval(alpha, 'constant value')
    identity = AffineMatrix.identity(2)
    return Afa(alphabet=alphabet,
               initial=[alpha, 1 - alpha],
               transitions={x: identity for x in alphabet},
               accepting=[0],
               kind='stochastic')


def tensor_product(a, b):
    """
    The tensor product automaton with value f_a(w) * f_b(w).

    Parameters
    ----------
    a: Afa
    b: Afa

    Returns
    -------
    Afa
        an automaton with k_a * k_b states

    Raises
    ------
    ValueError
        if the alphabets differ
    """
    _check_alphabets(a, b)
    log.debug(f'tensor product of {a.state_count} and {b.state_count} states')
    transitions = {x: mat_tensor(a.matrix(x), b.matrix(x)) for x in a.alphabet}
    return Afa(alphabet=a.alphabet,
               initial=vec_tensor(a.initial, b.initial),
               transitions=transitions,
               accepting=proj_tensor(a.accepting, b.accepting),
               kind=_kind(a, b))


def scale(a, alpha):
    """
    Scale the value function by a constant: f(w) -> α f(w).

    Parameters
    ----------
    a: Afa
    alpha: int or fractions.Fraction or str
        the factor in [0, 1]

    Returns
    -------
    Afa
    """
    alpha = _unit_interval(alpha, 'scale factor')
    return tensor_product(constant(alpha, a.alphabet), a)


def convex_sum(a, b, weights):
    """
    The affine mix α f_a + β f_b, built from two parallel copies of A ⊗ B.

    Parameters
    ----------
    a: Afa
    b: Afa
    weights: MixWeights or int or fractions.Fraction or str
        the weights or only α, in which case β = 1 - α

    Returns
    -------
    Afa
        an automaton with 2 k_a k_b states
    """
    _check_alphabets(a, b)
    if not isinstance(weights, MixWeights):
        weights = MixWeights(weights)
    n = a.state_count * b.state_count
    kb = b.state_count
    log.debug(f'convex sum {weights} of {a.state_count} and {kb} states')

    transitions = {}
    for x in a.alphabet:
        block = mat_tensor(a.matrix(x), b.matrix(x))
        rows = [list(row) + [0] * n for row in block.rows]
        rows += [[0] * n + list(row) for row in block.rows]
        transitions[x] = AffineMatrix(rows)

    start = vec_tensor(a.initial, b.initial)
    initial = [weights.alpha * v for v in start] + [weights.beta * v for v in start]

    # the first copy evaluates f_a (P_a ⊗ I), the second copy f_b (I ⊗ P_b)
    accepting = [i * kb + j for i in a.accepting for j in range(kb)]
    accepting += [n + i * kb + j for i in range(a.state_count) for j in b.accepting]

    return Afa(alphabet=a.alphabet,
               initial=initial,
               transitions=transitions,
               accepting=accepting,
               kind=_kind(a, b))


def complement(a):
    """
    Swap accepting and non-accepting states: f(w) -> 1 - f(w).
    """
    return Afa(alphabet=a.alphabet,
               initial=a.initial,
               transitions=dict(a.transitions),
               accepting=proj_complement(a.accepting),
               kind=a.kind)


def amplify_value(x):
    """
    The majority-vote polynomial x²(3 - 2x).
    Fixed points are 0, 1/2 and 1; values below 1/2 are pushed towards 0,
    values above towards 1.
    """
    x = to_rational(x)
    return x * x * (3 - 2 * x)


def amplify(a, method='tensor'):
    """
    Majority vote of three parallel copies: f(w) -> f(w)²(3 - 2f(w)).

    Parameters
    ----------
    a: Afa
    method: str
        - 'tensor': the triple tensor A ⊗ A ⊗ A with k³ states, accepting
          wherever at least two of the three copies accept.
        - 'symmetric': the same vote restricted to the symmetric part of the
          triple tensor. States are the multisets of three states, which gives
          C(k+2, 3) states and identical values.

    Returns
    -------
    Afa
    """
    if method == 'tensor':
        return _amplify_tensor(a)
    elif method == 'symmetric':
        return _amplify_symmetric(a)
    raise ValueError(f"amplify method must be one of {AMPLIFY_METHODS}, got '{method}'")


def _amplify_tensor(a):
    log.debug(f'triple tensor amplification of {a.state_count} states')
    transitions = {}
    for x in a.alphabet:
        m = a.matrix(x)
        transitions[x] = mat_tensor(mat_tensor(m, m), m)
    initial = vec_tensor(vec_tensor(a.initial, a.initial), a.initial)

    e = a.accepting
    n = proj_complement(e)
    accepting = proj_tensor(proj_tensor(e, e), e)
    for p in [proj_tensor(proj_tensor(n, e), e),
              proj_tensor(proj_tensor(e, n), e),
              proj_tensor(proj_tensor(e, e), n)]:
        accepting = proj_union_disjoint(accepting, p)

    return Afa(alphabet=a.alphabet,
               initial=initial,
               transitions=transitions,
               accepting=accepting,
               kind=a.kind)


def _multiplicity(multiset):
    """
    Number of distinct orderings of a multiset.
    """
    out = factorial(len(multiset))
    for count in Counter(multiset).values():
        out //= factorial(count)
    return out


def _amplify_symmetric(a):
    k = a.state_count
    states = list(itertools.combinations_with_replacement(range(k), 3))
    log.debug(f'symmetric amplification of {k} states: {len(states)} states')
    orderings = [sorted(set(itertools.permutations(t))) for t in states]

    v = a.initial
    initial = [_multiplicity(s) * v[s[0]] * v[s[1]] * v[s[2]] for s in states]

    transitions = {}
    for x in a.alphabet:
        m = a.matrix(x).rows
        rows = []
        for perms in orderings:
            row = []
            for s in states:
                row.append(sum((m[t[0]][s[0]] * m[t[1]][s[1]] * m[t[2]][s[2]] for t in perms),
                               Fraction(0)))
            rows.append(row)
        transitions[x] = AffineMatrix(rows)

    accepting = [i for i, s in enumerate(states)
                 if sum(1 for j in s if j in a.accepting) >= 2]

    return Afa(alphabet=a.alphabet,
               initial=initial,
               transitions=transitions,
               accepting=accepting,
               kind=a.kind)


def amplified_state_count(states, rounds, method='tensor'):
    """
    The number of states after a number of amplification rounds.

    Parameters
    ----------
    states: int
        the number of states of the input automaton
    rounds: int
    method: str
        see :func:`amplify`

    Returns
    -------
    int
    """
    if method not in AMPLIFY_METHODS:
        raise ValueError(f"amplify method must be one of {AMPLIFY_METHODS}, got '{method}'")
    for _ in range(rounds):
        states = states ** 3 if method == 'tensor' else comb(states + 2, 3)
    return states


def amplify_rounds(a, rounds, method='tensor', max_states=1000000):
    """
    Apply :func:`amplify` repeatedly.

    Parameters
    ----------
    a: Afa
    rounds: int
        the number of rounds, at least 0
    method: str
        see :func:`amplify`
    max_states: int
        the largest acceptable number of output states

    Returns
    -------
    Afa

    Raises
    ------
    RuntimeError
        if the output would exceed `max_states`; checked before anything is built
    """
    if not isinstance(rounds, int) or rounds < 0:
        raise ValueError(f'rounds must be a non-negative integer, got {rounds}')
    # check the growing size round by round, the final number can be astronomical
    states = a.state_count
    for i in range(rounds):
        states = amplified_state_count(states, 1, method)
        if states > max_states:
            raise RuntimeError(f'{rounds} amplification rounds ({method}) of {a.state_count} states '
                               f'exceed the limit of {max_states} states at round {i + 1}')
    for i in range(rounds):
        a = amplify(a, method=method)
        log.debug(f'amplification round {i + 1}: {a.state_count} states')
    return a


def rounds_for_error(error, target=Fraction(1, 4)):
    """
    The number of amplification rounds needed to bring an error down to a target.

    Parameters
    ----------
    error: int or fractions.Fraction or str
        the error bound ε in [0, 1/2)
    target: int or fractions.Fraction or str
        the desired error bound, positive

    Returns
    -------
    int
        the smallest number of iterations of x²(3 - 2x) that maps ε to at most `target`

    Examples
    --------
    >>> rounds_for_error('1/3')
    2
    """
    error = to_rational(error)
    target = to_rational(target)
    if not 0 <= error < Fraction(1, 2):
        raise ValueError(f'error must be in [0, 1/2), got {format_rational(error)}')
    if target <= 0:
        raise ValueError('target error must be positive')
    rounds = 0
    while error > target:
        error = amplify_value(error)
        rounds += 1
    return rounds


def shift_cutpoint(a, lambda1, lambda2):
    """
    Move the cutpoint of an automaton from λ1 to λ2.
    The output value g satisfies f(w) > λ1 ⇔ g(w) > λ2 and f(w) = λ1 ⇔ g(w) = λ2.

    - λ1 ≠ 1, λ2 ≥ λ1: convex sum with constant 1 and α = (1 - λ2) / (1 - λ1)
    - λ2 < λ1: the same construction applied to the complements (1 - λ1 to 1 - λ2);
      the resulting value function is (λ2 / λ1) f.
    - λ1 = 1: scaling by λ2

    Parameters
    ----------
    a: Afa
    lambda1: int or fractions.Fraction or str
        the current cutpoint in [0, 1]
    lambda2: int or fractions.Fraction or str
        the new cutpoint in [0, 1]

    Returns
    -------
    Afa

    Raises
    ------
    ValueError
        if a cutpoint lies outside [0, 1] or if λ2 ∈ {0, 1} differs from λ1.
        In the latter case the construction degenerates to a constant function
        and cannot preserve both equivalences.
    """
    lambda1 = _unit_interval(lambda1, 'cutpoint')
    lambda2 = _unit_interval(lambda2, 'cutpoint')
    if lambda2 != lambda1 and lambda2 in (0, 1):
        raise ValueError(f'cannot shift cutpoint {format_rational(lambda1)} to {format_rational(lambda2)}')
    log.debug(f'shifting cutpoint {format_rational(lambda1)} to {format_rational(lambda2)}')
    if lambda1 == 1:
        return scale(a, lambda2)
    if lambda2 >= lambda1:
        alpha = (1 - lambda2) / (1 - lambda1)
        return convex_sum(a, constant(1, a.alphabet), MixWeights(alpha))
    return complement(shift_cutpoint(complement(a), 1 - lambda1, 1 - lambda2))


def union_aut(a, b):
    """
    The union automaton with value (f_a + f_b) / 2.
    If both inputs decide their languages with error at most 1/4, the output
    accepts the union with value at least 3/8 and rejects with at most 1/4
    (see :data:`THRESHOLDS`).
    """
    return convex_sum(a, b, MixWeights(Fraction(1, 2)))


def intersect_aut(a, b):
    """
    The intersection automaton with value f_a f_b.
    If both inputs decide their languages with error at most 1/4, the output
    accepts the intersection with value at least 9/16 and rejects with at most 1/4
    (see :data:`THRESHOLDS`).
    """
    return tensor_product(a, b)


def boolean_with_amplify(a, b, operation, error, rounds=None, method='tensor', max_states=1000000):
    """
    Union or intersection of two bounded-error automata, amplifying the inputs first
    if their declared error exceeds 1/4.

    Parameters
    ----------
    a: Afa
    b: Afa
    operation: str
        'union' or 'intersect'
    error: int or fractions.Fraction or str
        the error bound of both inputs
    rounds: int or None
        the number of amplification rounds; by default the smallest number
        reaching 1/4 as computed by :func:`rounds_for_error`
    method: str
        the amplification method, see :func:`amplify`
    max_states: int
        passed to :func:`amplify_rounds`

    Returns
    -------
    Afa
    """
    if operation not in THRESHOLDS:
        raise ValueError(f"operation must be one of {list(THRESHOLDS)}, got '{operation}'")
    error = to_rational(error)
    if error > Fraction(1, 4):
        if rounds is None:
            rounds = rounds_for_error(error)
        log.info(f'amplifying inputs with error {format_rational(error)} for {rounds} rounds')
        a = amplify_rounds(a, rounds, method=method, max_states=max_states)
        b = amplify_rounds(b, rounds, method=method, max_states=max_states)
    if operation == 'union':
        return union_aut(a, b)
    return intersect_aut(a, b)


def extend_alphabet(a, symbols):
    """
    Add symbols to the alphabet which leave the state unchanged.

    Parameters
    ----------
    a: Afa
    symbols: list[str]
        new symbols not yet in the alphabet

    Returns
    -------
    Afa
    """
    present = [x for x in symbols if x in a.alphabet]
    if len(present) > 0:
        raise ValueError(f'symbols already in the alphabet: {present}')
    transitions = dict(a.transitions)
    identity = AffineMatrix.identity(a.state_count)
    for x in symbols:
        transitions[x] = identity
    return Afa(alphabet=list(a.alphabet) + list(symbols),
               initial=a.initial,
               transitions=transitions,
               accepting=a.accepting,
               kind=a.kind)


def restrict_alphabet(a, symbols):
    """
    Keep only a subset of the alphabet, e.g. a single symbol for unary analysis.
    """
    missing = [x for x in symbols if x not in a.alphabet]
    if len(missing) > 0:
        raise ValueError(f'symbols not in the alphabet: {missing}')
    if len(symbols) == 0:
        raise ValueError('the restricted alphabet must not be empty')
    return Afa(alphabet=symbols,
               initial=a.initial,
               transitions={x: a.matrix(x) for x in symbols},
               accepting=a.accepting,
               kind=a.kind)
