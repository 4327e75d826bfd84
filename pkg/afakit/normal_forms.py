"""
Equivalent forms of affine automata: a deterministic initial state and
transition matrices that keep every state entry within [-1, 1].
"""
import math
import logging
from fractions import Fraction
from afakit.core import Afa, AffineVector, AffineMatrix, apply, weigh, to_rational
from afakit.combinators import tensor_product, shift_cutpoint
from afakit.ancillary import format_rational

log = logging.getLogger('afakit')


def canonical_initial(a, cutpoint=Fraction(1, 2)):
    """
    Prepend a fresh start state so that the initial vector becomes (1, 0, ..., 0).

    The first symbol moves the start state to A_x v_0; afterwards the original
    matrices take over and the start state keeps weight 0. Hence the value of
    every non-empty word is unchanged.
    The empty word ends in the start state and gets value 1 or 0: the start state
    is accepting if and only if f_a(ε) > cutpoint. Its value is thus preserved
    whenever f_a(ε) is 0 or 1, and its membership in the cutpoint language always.

    Parameters
    ----------
    a: Afa
    cutpoint: int or fractions.Fraction or str
        the cutpoint deciding whether the empty word is accepted

    Returns
    -------
    Afa
        an automaton with k + 1 states
    """
    k = a.state_count
    cutpoint = to_rational(cutpoint)
    log.debug(f'canonical initial form of {k} states')
    accepting = [i + 1 for i in a.accepting]
    if weigh(a.accepting, a.initial) > cutpoint:
        accepting.insert(0, 0)
    transitions = {}
    for x in a.alphabet:
        m = a.matrix(x)
        first = apply(m, a.initial)
        rows = [[0] * (k + 1)]
        rows += [[first[i]] + list(m[i]) for i in range(k)]
        transitions[x] = AffineMatrix(rows)
    return Afa(alphabet=a.alphabet,
               initial=AffineVector.basis(k + 1),
               transitions=transitions,
               accepting=accepting,
               kind=a.kind)


def max_entry(a):
    """
    The largest absolute value of all transition matrix entries.
    The initial vector is not considered.

    Parameters
    ----------
    a: Afa

    Returns
    -------
    fractions.Fraction
    """
    out = Fraction(0)
    for matrix in a.transitions.values():
        for _, _, x in matrix.entries():
            out = max(out, abs(x))
    return out


def bounded_form(a):
    """
    Rescale an automaton with initial state (1, 0, ..., 0) such that every entry
    of every reachable state lies in [-1, 1], preserving the cutpoint language at 1/2.

    With c = max(2, ⌈C⌉), C the largest matrix entry, the k original states are
    scaled by 1/(kc) in each step and two extra states collect the lost weight
    in equal parts. One of them is accepting. For words of length n the value is

        (|P A_w v_0| + ((kc)^n - 1) / 2) / (|A_w v_0| + (kc)^n - 1)

    which is above, equal to or below 1/2 exactly when f_a(w) is.

    Parameters
    ----------
    a: Afa
        the automaton, required to have the initial state (1, 0, ..., 0)

    Returns
    -------
    Afa
        an automaton with k + 2 states

    Raises
    ------
    ValueError
        if the initial state is not (1, 0, ..., 0)

    See Also
    --------
    canonical_initial
    normalize_pipeline
    """
    k = a.state_count
    if a.initial != AffineVector.basis(k):
        raise ValueError('bounded form requires the initial state (1, 0, ..., 0); '
                         'apply canonical_initial first')
    c = max(2, math.ceil(max_entry(a)))
    kc = k * c
    fill = Fraction(kc - 1, 2 * kc)
    log.debug(f'bounded form of {k} states with scale factor {kc}')
    transitions = {}
    for x in a.alphabet:
        m = a.matrix(x)
        rows = [[m[i][j] / kc for j in range(k)] + [0, 0] for i in range(k)]
        rows.append([fill] * k + [1, 0])
        rows.append([fill] * k + [0, 1])
        transitions[x] = AffineMatrix(rows)
    return Afa(alphabet=a.alphabet,
               initial=AffineVector.basis(k + 2),
               transitions=transitions,
               accepting=list(a.accepting) + [k],
               kind=a.kind)


def normalize_pipeline(a, cutpoint):
    """
    Shift the cutpoint to 1/2, make the initial state canonical and bound the entries.

    Parameters
    ----------
    a: Afa
    cutpoint: int or fractions.Fraction or str
        the cutpoint λ in [0, 1] of the input language

    Returns
    -------
    Afa
        an automaton recognizing the same cutpoint language at 1/2
    """
    cutpoint = to_rational(cutpoint)
    log.debug(f'normalizing cutpoint {format_rational(cutpoint)} to 1/2')
    shifted = shift_cutpoint(a, cutpoint, Fraction(1, 2))
    return bounded_form(canonical_initial(shifted, cutpoint=Fraction(1, 2)))


def bounded_matrices(a):
    """
    An automaton with the same value function and all matrix entries in [-1, 1].

    The input is run in parallel with a C-state automaton whose matrices have all
    entries 1/C and whose states are all accepting, with C = max(1, ⌈max_entry(a)⌉).
    In contrast to :func:`bounded_form`, the state entries themselves are not bounded.

    Parameters
    ----------
    a: Afa

    Returns
    -------
    Afa
    """
    c = max(1, math.ceil(max_entry(a)))
    uniform = AffineMatrix([[Fraction(1, c)] * c for _ in range(c)])
    spread = Afa(alphabet=a.alphabet,
                 initial=AffineVector.basis(c),
                 transitions={x: uniform for x in a.alphabet},
                 accepting=range(c),
                 kind='stochastic')
    return tensor_product(a, spread)
