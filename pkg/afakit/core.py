"""
Exact data model of affine finite automata.

Matrices act on column vectors from the left. Entry (i, j) of a transition
matrix is the weight flowing from state j into state i, so every column of
an affine matrix sums up to 1. State indices are 0-based.
"""
import re
import logging
from fractions import Fraction
from types import MappingProxyType
from afakit.ancillary import format_rational

log = logging.getLogger('afakit')

Rational = Fraction

KINDS = ('affine', 'stochastic')

_INTEGER = re.compile(r'^[+-]?[0-9]+$')
_RATIO = re.compile(r'^([+-]?[0-9]+)/([0-9]+)$')
_DECIMAL = re.compile(r'^[+-]?([0-9]+\.[0-9]*|\.[0-9]+)$')


class ValidationError(RuntimeError):
    """
    Raised if an automaton violates its invariants.

    Parameters
    ----------
    violations: list[str]
        the violation descriptions as returned by :func:`validate`
    """

    def __init__(self, violations):
        self.violations = list(violations)
        msg = 'invalid automaton:\n - ' + '\n - '.join(self.violations)
        super(ValidationError, self).__init__(msg)


def to_rational(value):
    """
    Convert a value to an exact rational number.

    Parameters
    ----------
    value: int or fractions.Fraction or str
        the value to convert. Strings are accepted in three notations:
        an optionally signed integer (`-3`), a ratio (`2/7`) or a finite
        decimal (`0.25`), the latter being converted exactly.

    Returns
    -------
    fractions.Fraction
        the value in reduced form

    Raises
    ------
    TypeError
        if the value is of an unsupported type. Floats are refused since
        they cannot be expected to carry the intended exact value.
    ValueError
        if a string does not follow one of the notations above
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError('booleans are not rational numbers')
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if _INTEGER.match(s) or _DECIMAL.match(s):
            return Fraction(s)
        match = _RATIO.match(s)
        if match is not None:
            if int(match.group(2)) == 0:
                raise ValueError(f"zero denominator in number string '{value}'")
            return Fraction(int(match.group(1)), int(match.group(2)))
        raise ValueError(f"not a rational number string: '{value}'")
    raise TypeError(f'cannot convert {type(value).__name__} to a rational number')


class AffineVector(object):
    """
    A state vector of exact rationals.
    The vector is affine if its entries sum up to 1; this is not enforced
    on construction so that invalid automata can still be inspected with
    :func:`validate`.

    Parameters
    ----------
    entries: list[int or fractions.Fraction or str]
        the vector entries, at least one
    """

    def __init__(self, entries):
        self.entries = tuple(to_rational(x) for x in entries)
        if len(self.entries) == 0:
            raise ValueError('a vector needs at least one entry')

    @classmethod
    def basis(cls, size, index=0):
        """
        The deterministic state `e_index` of a `size`-state automaton.
        """
        if not 0 <= index < size:
            raise ValueError(f'basis index {index} out of range for size {size}')
        return cls([1 if i == index else 0 for i in range(size)])

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, item):
        return self.entries[item]

    def __eq__(self, other):
        return isinstance(other, AffineVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return 'AffineVector({})'.format(', '.join(format_rational(x) for x in self.entries))

    def total(self):
        return sum(self.entries, Fraction(0))

    def is_affine(self):
        return self.total() == 1


class AffineMatrix(object):
    """
    A square transition matrix of exact rationals, stored row-major.
    Entry `rows[i][j]` is the weight flowing from state j into state i.

    Parameters
    ----------
    rows: list[list[int or fractions.Fraction or str]]
        the k rows of the k x k matrix
    """

    def __init__(self, rows):
        self.rows = tuple(tuple(to_rational(x) for x in row) for row in rows)
        size = len(self.rows)
        if size == 0:
            raise ValueError('a matrix needs at least one row')
        for i, row in enumerate(self.rows):
            if len(row) != size:
                raise ValueError(f'matrix is not square: row {i} has {len(row)} entries, expected {size}')
        # nonzero entries per row; the transition matrices of composed automata are mostly zero
        self._nonzero = tuple(tuple((j, x) for j, x in enumerate(row) if x != 0)
                              for row in self.rows)

    @classmethod
    def identity(cls, size):
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @property
    def size(self):
        return len(self.rows)

    def __getitem__(self, item):
        return self.rows[item]

    def __eq__(self, other):
        return isinstance(other, AffineMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        rows = ['[' + ', '.join(format_rational(x) for x in row) + ']' for row in self.rows]
        return 'AffineMatrix([{}])'.format(', '.join(rows))

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def column_sums(self):
        return [sum(self.column(j), Fraction(0)) for j in range(self.size)]

    def is_affine(self):
        return all(x == 1 for x in self.column_sums())

    def entries(self):
        """
        Iterate over all matrix entries as tuples `(i, j, value)`.
        """
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                yield i, j, x


class Projection(object):
    """
    The diagonal 0/1 projection onto a set of accepting states.

    Parameters
    ----------
    size: int
        the number of states k
    accepting: list[int]
        the 0-based accepting state indices, each smaller than `size`
    """

    def __init__(self, size, accepting):
        if not isinstance(size, int) or size < 1:
            raise ValueError(f'projection size must be a positive integer, got {size}')
        accepting = [int(i) for i in accepting]
        if len(set(accepting)) != len(accepting):
            raise ValueError(f'duplicate accepting indices: {accepting}')
        outside = [i for i in accepting if not 0 <= i < size]
        if len(outside) > 0:
            raise ValueError(f'accepting indices {outside} out of range for {size} states')
        self.size = size
        self.indices = tuple(sorted(accepting))

    def __contains__(self, item):
        return item in self.indices

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __eq__(self, other):
        return isinstance(other, Projection) and \
            (self.size, self.indices) == (other.size, other.indices)

    def __hash__(self):
        return hash((self.size, self.indices))

    def __repr__(self):
        return f'Projection(size={self.size}, accepting={list(self.indices)})'

    def mass(self, vector):
        """
        The L1 norm of the projected vector, |Pv|.
        """
        return sum((abs(vector[i]) for i in self.indices), Fraction(0))


class CutpointSpec(object):
    """
    A cutpoint with optional isolation radius and error bound.

    Parameters
    ----------
    cutpoint: int or fractions.Fraction or str
        the cutpoint λ in [0, 1]
    isolation: int or fractions.Fraction or str or None
        the isolation radius δ > 0 with λ-δ >= 0 and λ+δ <= 1
    error_bound: int or fractions.Fraction or str or None
        the error bound ε in [0, 1/2)
    """

    def __init__(self, cutpoint, isolation=None, error_bound=None):
        self.cutpoint = to_rational(cutpoint)
        if not 0 <= self.cutpoint <= 1:
            raise ValueError(f'cutpoint must be in [0, 1], got {format_rational(self.cutpoint)}')
        self.isolation = None if isolation is None else to_rational(isolation)
        if self.isolation is not None:
            if self.isolation <= 0:
                raise ValueError('isolation must be positive')
            if self.cutpoint - self.isolation < 0 or self.cutpoint + self.isolation > 1:
                raise ValueError('isolation interval must stay inside [0, 1]')
        self.error_bound = None if error_bound is None else to_rational(error_bound)
        if self.error_bound is not None and not 0 <= self.error_bound < Fraction(1, 2):
            raise ValueError('error bound must be in [0, 1/2)')

    def __repr__(self):
        return f'CutpointSpec(cutpoint={format_rational(self.cutpoint)})'

    def accepts(self, value):
        return value > self.cutpoint

    def is_isolated(self, value):
        """
        Does `value` keep the isolation distance from the cutpoint?
        Always True if no isolation radius is defined.
        """
        if self.isolation is None:
            return True
        return value >= self.cutpoint + self.isolation or value <= self.cutpoint - self.isolation


class Afa(object):
    """
    An affine finite automaton (AfA); a probabilistic automaton is the
    special case `kind='stochastic'`.

    Parameters
    ----------
    alphabet: list[str]
        the ordered input symbols
    initial: AffineVector or list
        the initial state v_0
    transitions: dict[str, AffineMatrix or list]
        one k x k matrix per symbol
    accepting: Projection or list[int]
        the accepting states
    kind: str
        either 'affine' or 'stochastic'
    check: bool
        run :func:`validate` and raise :class:`ValidationError` on violations?
    """

    def __init__(self, alphabet, initial, transitions, accepting, kind='affine', check=True):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got '{kind}'")
        self.alphabet = tuple(alphabet)
        if not isinstance(initial, AffineVector):
            initial = AffineVector(initial)
        self.initial = initial
        matrices = {}
        for symbol, matrix in transitions.items():
            if not isinstance(matrix, AffineMatrix):
                matrix = AffineMatrix(matrix)
            matrices[symbol] = matrix
        self.transitions = MappingProxyType(matrices)
        if not isinstance(accepting, Projection):
            accepting = Projection(len(initial), accepting)
        self.accepting = accepting
        self.kind = kind
        if check:
            violations = validate(self)
            if len(violations) > 0:
                raise ValidationError(violations)

    def __eq__(self, other):
        if not isinstance(other, Afa):
            return False
        return (self.alphabet, self.initial, dict(self.transitions), self.accepting, self.kind) == \
            (other.alphabet, other.initial, dict(other.transitions), other.accepting, other.kind)

    __hash__ = None

    def __repr__(self):
        return f'Afa(kind={self.kind}, alphabet={list(self.alphabet)}, states={self.state_count})'

    @property
    def state_count(self):
        return len(self.initial)

    def matrix(self, symbol):
        try:
            return self.transitions[symbol]
        except KeyError:
            raise KeyError(f"unknown symbol '{symbol}'; alphabet: {list(self.alphabet)}")

    def is_stochastic(self):
        entries = list(self.initial)
        for matrix in self.transitions.values():
            entries.extend(x for _, _, x in matrix.entries())
        return all(0 <= x <= 1 for x in entries)


def validate(afa):
    """
    Check all invariants of an automaton.
    Validation never aborts; every violation is collected.

    Parameters
    ----------
    afa: Afa
        the automaton, possibly constructed with `check=False`

    Returns
    -------
    list[str]
        the violation descriptions; empty if the automaton is valid
    """
    out = []
    k = afa.state_count
    if len(set(afa.alphabet)) != len(afa.alphabet):
        out.append(f'alphabet contains duplicate symbols: {list(afa.alphabet)}')
    for symbol in afa.alphabet:
        if symbol not in afa.transitions:
            out.append(f"no transition matrix for symbol '{symbol}'")
    for symbol in afa.transitions:
        if symbol not in afa.alphabet:
            out.append(f"transition matrix for symbol '{symbol}' outside the alphabet")
    total = afa.initial.total()
    if total != 1:
        out.append(f'initial sums to {format_rational(total)}')
    for symbol, matrix in afa.transitions.items():
        if matrix.size != k:
            out.append(f"matrix '{symbol}' is {matrix.size}x{matrix.size}, expected {k}x{k}")
            continue
        for j, s in enumerate(matrix.column_sums()):
            if s != 1:
                out.append(f"matrix '{symbol}' column {j} sums to {format_rational(s)}")
    if afa.accepting.size != k:
        out.append(f'accepting projection has size {afa.accepting.size}, expected {k}')
    if afa.kind == 'stochastic':
        for i, x in enumerate(afa.initial):
            if not 0 <= x <= 1:
                out.append(f'initial entry {i} is {format_rational(x)}, outside [0,1]')
        for symbol, matrix in afa.transitions.items():
            for i, j, x in matrix.entries():
                if not 0 <= x <= 1:
                    out.append(f"matrix '{symbol}' entry ({i},{j}) is {format_rational(x)}, outside [0,1]")
    return out


def apply(matrix, vector):
    """
    Exact matrix-vector product M v.

    Parameters
    ----------
    matrix: AffineMatrix
    vector: AffineVector

    Returns
    -------
    AffineVector
    """
    if matrix.size != len(vector):
        raise ValueError(f'dimension mismatch: matrix is {matrix.size}x{matrix.size}, '
                         f'vector has length {len(vector)}')
    v = vector.entries
    return AffineVector([sum((x * v[j] for j, x in row), Fraction(0))
                         for row in matrix._nonzero])


def run(afa, word):
    """
    The final state M_w v_0 after reading `word` from left to right.
    The word matrix M_w is never materialized.

    Parameters
    ----------
    afa: Afa
    word: str or list[str]

    Returns
    -------
    AffineVector
    """
    state = afa.initial
    for symbol in word:
        state = apply(afa.matrix(symbol), state)
    return state


def l1_norm(vector):
    """
    Sum of the absolute entry values. At least 1 for every affine vector.
    """
    return sum((abs(x) for x in vector), Fraction(0))


def weigh(projection, vector):
    """
    The weighting |Pv| / |v| of a state vector.

    Parameters
    ----------
    projection: Projection
    vector: AffineVector

    Returns
    -------
    fractions.Fraction
    """
    return projection.mass(vector) / l1_norm(vector)


def accept_value(afa, word):
    """
    The accepting value f_A(w) = |P M_w v_0| / |M_w v_0| in [0, 1].
    For stochastic automata this equals the accepting probability.

    Parameters
    ----------
    afa: Afa
    word: str or list[str]

    Returns
    -------
    fractions.Fraction
    """
    return weigh(afa.accepting, run(afa, word))


def member(afa, word, cutpoint):
    """
    Is `word` in the cutpoint language of `afa`?
    A value exactly at the cutpoint is rejected.

    Parameters
    ----------
    afa: Afa
    word: str or list[str]
    cutpoint: CutpointSpec or int or fractions.Fraction or str

    Returns
    -------
    bool
    """
    if not isinstance(cutpoint, CutpointSpec):
        cutpoint = CutpointSpec(cutpoint)
    return cutpoint.accepts(accept_value(afa, word))


def enumerate_runs(afa, max_len):
    """
    Enumerate all words up to a maximum length together with their final states.
    Prefix states are shared so every word costs a single matrix application.
    Words are yielded in lexicographic (depth-first) order with respect
    to the alphabet order, starting with the empty word.

    Parameters
    ----------
    afa: Afa
    max_len: int

    Returns
    -------
    collections.abc.Iterator[tuple[str, AffineVector]]
    """
    stack = [('', afa.initial)]
    while len(stack) > 0:
        word, state = stack.pop()
        yield word, state
        if len(word) < max_len:
            for symbol in reversed(afa.alphabet):
                stack.append((word + symbol, apply(afa.matrix(symbol), state)))


def proj_complement(p):
    """
    The projection I - P onto the complement of the accepting set.
    """
    return Projection(p.size, [i for i in range(p.size) if i not in p])


def proj_tensor(pa, pb):
    """
    The projection P_a ⊗ P_b onto the Cartesian product of both accepting sets.
    Pair (i, j) maps to the row-major index i * k_b + j.
    """
    return Projection(pa.size * pb.size, [i * pb.size + j for i in pa for j in pb])


def proj_union_disjoint(pa, pb):
    """
    The projection P_a + P_b onto the union of two disjoint accepting sets.
    For any vector v, |(P_a + P_b) v| = |P_a v| + |P_b v|.
    """
    if pa.size != pb.size:
        raise ValueError(f'projection sizes differ: {pa.size} and {pb.size}')
    common = set(pa.indices) & set(pb.indices)
    if len(common) > 0:
        raise ValueError(f'accepting sets are not disjoint: {sorted(common)}')
    return Projection(pa.size, list(pa.indices) + list(pb.indices))


def mat_tensor(a, b):
    """
    The Kronecker product A ⊗ B in row-major block order.
    The product of affine matrices is affine.

    Parameters
    ----------
    a: AffineMatrix
    b: AffineMatrix

    Returns
    -------
    AffineMatrix
    """
    ka, kb = a.size, b.size
    rows = []
    for i in range(ka):
        for r in range(kb):
            rows.append([a[i][j] * b[r][s] for j in range(ka) for s in range(kb)])
    return AffineMatrix(rows)


def vec_tensor(v, u):
    """
    The Kronecker product v ⊗ u; |v ⊗ u| = |v| |u|.
    """
    return AffineVector([x * y for x in v for y in u])
