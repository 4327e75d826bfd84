"""
Numerical diagnostics for unary languages and automata: densities,
equidistribution modulo 1, value sequences F(n) = f(aⁿ) and the spectra
of transition matrices. Floating point arithmetic is used throughout,
except for the exact mode of the scans.
"""
import io
import csv
import math
import logging
import numpy as np
from scipy import linalg
from afakit.core import AffineMatrix, apply, run, weigh, enumerate_runs, to_rational
from afakit.ancillary import format_rational

log = logging.getLogger('afakit')


class IntervalBox(object):
    """
    A box [a_1, b_1) x ... x [a_d, b_d) inside the unit cube [0, 1)^d.

    Parameters
    ----------
    lower: list[float]
        the lower bounds a_j >= 0
    upper: list[float]
        the upper bounds b_j <= 1 with a_j < b_j
    """

    def __init__(self, lower, upper):
        self.lower = np.atleast_1d(np.asarray(lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ValueError('lower and upper bounds must be flat lists of equal length')
        if np.any(self.lower < 0) or np.any(self.upper > 1) or np.any(self.lower >= self.upper):
            raise ValueError(f'invalid box bounds: {self.lower.tolist()} / {self.upper.tolist()}; '
                             f'required: 0 <= a < b <= 1')

    def __repr__(self):
        bounds = ' x '.join(f'[{a:g}, {b:g})' for a, b in zip(self.lower, self.upper))
        return f'IntervalBox({bounds})'

    @property
    def dimension(self):
        return len(self.lower)

    @property
    def volume(self):
        return float(np.prod(self.upper - self.lower))

    def contains(self, points):
        """
        Which of the points, each given by its fractional parts, lie inside the box?

        Parameters
        ----------
        points: numpy.ndarray
            array of shape (n, d)

        Returns
        -------
        numpy.ndarray
            boolean array of shape (n,)
        """
        return np.all((points >= self.lower) & (points < self.upper), axis=1)


class ProgressionSpec(object):
    """
    The arithmetic progression h, h + Q, ..., h + (count - 1) Q.

    Parameters
    ----------
    h: int
        the offset, at least 0
    q: int
        the step Q, at least 1
    count: int
        the number of elements, at least 1
    """

    def __init__(self, h=0, q=1, count=1):
        for name, value, minimum in [('h', h, 0), ('q', q, 1), ('count', count, 1)]:
            if not isinstance(value, (int, np.integer)) or value < minimum:
                raise ValueError(f'{name} must be an integer >= {minimum}, got {value}')
        self.h = int(h)
        self.q = int(q)
        self.count = int(count)

    def __repr__(self):
        return f'ProgressionSpec(h={self.h}, q={self.q}, count={self.count})'

    def indices(self):
        return self.h + self.q * np.arange(self.count)


class UnaryScan(object):
    """
    The values F(n) of a unary automaton at a list of word lengths.

    Parameters
    ----------
    indices: numpy.ndarray
        the word lengths n
    values: numpy.ndarray
        F(n) as floats
    exact: list[fractions.Fraction] or None
        F(n) as exact rationals, if computed
    afa: afakit.core.Afa
        the scanned automaton
    """

    def __init__(self, indices, values, exact, afa):
        self.indices = np.asarray(indices, dtype=int)
        self.values = np.asarray(values, dtype=float)
        self.exact = None if exact is None else list(exact)
        self.afa = afa
        if self.indices.shape != self.values.shape:
            raise ValueError('indices and values differ in length')
        if self.exact is not None and len(self.exact) != len(self.indices):
            raise ValueError('indices and exact values differ in length')

    def __len__(self):
        return len(self.indices)

    def __repr__(self):
        mode = 'exact' if self.exact is not None else 'float'
        return f'UnaryScan({len(self)} values, {mode})'

    def lines(self):
        """
        The scan as human-readable text lines `n F [p/q]`.

        Returns
        -------
        list[str]
        """
        out = []
        for i, (n, value) in enumerate(zip(self.indices, self.values)):
            line = f'{n} {value:.12g}'
            if self.exact is not None:
                line += f' {format_rational(self.exact[i])}'
            out.append(line)
        return out

    def to_csv(self, target=None):
        """
        Write the scan as CSV with columns `n, F_float, F_exact_num, F_exact_den`.
        The exact columns stay empty for float scans.

        Parameters
        ----------
        target: str or None
            the name of the file to write; if None the CSV text is returned

        Returns
        -------
        str or None
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['n', 'F_float', 'F_exact_num', 'F_exact_den'])
        for i, (n, value) in enumerate(zip(self.indices, self.values)):
            if self.exact is not None:
                num, den = self.exact[i].numerator, self.exact[i].denominator
            else:
                num, den = '', ''
            writer.writerow([int(n), repr(float(value)), num, den])
        if target is None:
            return buffer.getvalue()
        with open(target, 'w') as f:
            f.write(buffer.getvalue())


def prime_language(bound):
    """
    Membership table of the prime numbers up to a bound (sieve of Eratosthenes).

    Parameters
    ----------
    bound: int
        the largest number to decide

    Returns
    -------
    numpy.ndarray
        boolean array of length `bound + 1`, True at prime indices
    """
    if bound < 0:
        raise ValueError('bound must not be negative')
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return sieve


def poly_language(coeffs, bound):
    """
    Membership table of the values q(0), q(1), ... of an integer polynomial.

    Parameters
    ----------
    coeffs: list[int]
        the non-negative coefficients in increasing degree order, i.e. `[1, 0, 0, 2]`
        stands for q(n) = 1 + 2n³; the degree must be at least 3
    bound: int
        the largest number to decide

    Returns
    -------
    numpy.ndarray
        boolean array of length `bound + 1`
    """
    coeffs = [int(c) for c in coeffs]
    while len(coeffs) > 0 and coeffs[-1] == 0:
        coeffs.pop()
    if any(c < 0 for c in coeffs):
        raise ValueError(f'coefficients must not be negative: {coeffs}')
    if len(coeffs) < 4:
        raise ValueError(f'the polynomial degree must be at least 3, got coefficients {coeffs}')
    if bound < 0:
        raise ValueError('bound must not be negative')
    table = np.zeros(bound + 1, dtype=bool)
    n = 0
    while True:
        value = sum(c * n ** i for i, c in enumerate(coeffs))
        if value > bound:
            break
        table[value] = True
        n += 1
    return table


def lower_density(membership, N, start=0):
    """
    Finite proxy of the lower density liminf |{k <= n : k ∈ L}| / (n + 1).

    Parameters
    ----------
    membership: collections.abc.Callable or numpy.ndarray
        a predicate on non-negative integers or a boolean table of length > N
    N: int
        the largest n
    start: int
        the smallest n considered for the minimum

    Returns
    -------
    tuple[float, float]
        the minimum of the running ratio over start <= n <= N and the ratio at N
    """
    if N < 0 or not 0 <= start <= N:
        raise ValueError(f'invalid range: start={start}, N={N}')
    if callable(membership):
        table = np.fromiter((bool(membership(n)) for n in range(N + 1)), dtype=bool, count=N + 1)
    else:
        table = np.asarray(membership, dtype=bool)
        if len(table) < N + 1:
            raise ValueError(f'membership table of length {len(table)} does not reach N={N}')
        table = table[:N + 1]
    ratios = np.cumsum(table) / np.arange(1, N + 2)
    return float(ratios[start:].min()), float(ratios[N])


def weyl_sequence(alphas, n):
    """
    The points x_i = i * (α_1, ..., α_d) for i = 1, ..., n.

    Returns
    -------
    numpy.ndarray
        array of shape (n, d)
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    return np.arange(1, n + 1)[:, np.newaxis] * alphas[np.newaxis, :]


def rational_rotation(p, q, n):
    """
    The points x_i = i p / q mod 1 for i = 1, ..., n, computed without rounding drift.

    Returns
    -------
    numpy.ndarray
        array of shape (n, 1)
    """
    if q < 1:
        raise ValueError('q must be positive')
    i = np.arange(1, n + 1, dtype=np.int64)
    return (((i * p) % q) / q)[:, np.newaxis]


def _as_points(seq):
    points = np.asarray(seq, dtype=float)
    if points.ndim == 1:
        points = points[:, np.newaxis]
    if points.ndim != 2:
        raise ValueError('the sequence must be a list of numbers or of vectors')
    return points


def box_count(seq, box, n):
    """
    The number C(I, n) of the first n points whose fractional parts lie in a box.

    Parameters
    ----------
    seq: numpy.ndarray
        the points; shape (m,) or (m, d)
    box: IntervalBox
        the box I of dimension d
    n: int
        the number of leading points to count, 0 <= n <= m

    Returns
    -------
    int
    """
    points = _as_points(seq)
    if not 0 <= n <= len(points):
        raise ValueError(f'n={n} out of range for a sequence of length {len(points)}')
    if points.shape[1] != box.dimension:
        raise ValueError(f'point dimension {points.shape[1]} does not match box dimension {box.dimension}')
    fractional = np.mod(points[:n], 1.0)
    # tiny negative inputs round up to 1.0
    fractional[fractional >= 1.0] = 0.0
    return int(np.count_nonzero(box.contains(fractional)))


def equidistribution_test(seq, box, n):
    """
    Compare the share of points in a box with the box volume.

    Returns
    -------
    dict
        keys `empirical` (C(I, n) / n), `target` (the volume of I) and
        `deviation` (the absolute difference)
    """
    if n < 1:
        raise ValueError('at least one point is needed')
    empirical = box_count(seq, box, n) / n
    target = box.volume
    return {'empirical': empirical, 'target': target, 'deviation': abs(empirical - target)}


def _unary_matrix(afa):
    if len(afa.alphabet) != 1:
        raise ValueError(f'a unary alphabet is required, got {list(afa.alphabet)}')
    return afa.matrix(afa.alphabet[0])


def _scan(afa, indices, exact, step_budget):
    matrix = _unary_matrix(afa)
    indices = np.asarray(indices, dtype=int)
    last = int(indices.max()) if len(indices) > 0 else 0
    wanted = set(indices.tolist())
    found = {}
    if exact:
        if step_budget is not None and last > step_budget:
            raise ValueError(f'exact scan up to n={last} exceeds the step budget of {step_budget}')
        state = afa.initial
        for n in range(last + 1):
            if n in wanted:
                found[n] = weigh(afa.accepting, state)
            if n < last:
                state = apply(matrix, state)
        exact_values = [found[n] for n in indices.tolist()]
        values = [float(x) for x in exact_values]
        return UnaryScan(indices, values, exact_values, afa)

    m = to_numpy(matrix)
    state = to_numpy(afa.initial)
    mask = np.zeros(afa.state_count, dtype=bool)
    mask[list(afa.accepting)] = True
    for n in range(last + 1):
        if n in wanted:
            found[n] = np.abs(state[mask]).sum() / np.abs(state).sum()
        if n < last:
            state = m @ state
            # the value is invariant under positive scaling of the state
            state /= np.abs(state).sum()
    values = [found[n] for n in indices.tolist()]
    return UnaryScan(indices, values, None, afa)


def unary_scan(afa, max_n, exact=False, step_budget=None):
    """
    The values F(n) = f(aⁿ) for n = 0, ..., max_n of a unary automaton.

    Parameters
    ----------
    afa: afakit.core.Afa
        an automaton with a single-symbol alphabet
    max_n: int
        the largest word length
    exact: bool
        compute exact rationals? Otherwise floats are used and the state is
        renormalized to L1 norm 1 in every step.
    step_budget: int or None
        the largest `max_n` accepted in exact mode

    Returns
    -------
    UnaryScan

    Raises
    ------
    ValueError
        if the alphabet is not unary or the step budget is exceeded
    """
    if max_n < 0:
        raise ValueError('max_n must not be negative')
    log.debug(f'scanning F(n) for n <= {max_n} ({"exact" if exact else "float"})')
    return _scan(afa, np.arange(max_n + 1), exact, step_budget)


def progression_scan(afa, spec, exact=False, step_budget=None):
    """
    The values F(h + iQ) for i = 0, ..., count - 1 of a unary automaton.

    Parameters
    ----------
    afa: afakit.core.Afa
        an automaton with a single-symbol alphabet
    spec: ProgressionSpec
        the progression
    exact: bool
        see :func:`unary_scan`
    step_budget: int or None
        see :func:`unary_scan`

    Returns
    -------
    UnaryScan
    """
    log.debug(f'scanning F(n) along {spec}')
    return _scan(afa, spec.indices(), exact, step_budget)


def to_numpy(item):
    """
    Convert an exact matrix or vector to a float array.

    Parameters
    ----------
    item: afakit.core.AffineMatrix or afakit.core.AffineVector or numpy.ndarray

    Returns
    -------
    numpy.ndarray
    """
    if isinstance(item, AffineMatrix):
        return np.array([[float(x) for x in row] for row in item.rows], dtype=float)
    if isinstance(item, np.ndarray):
        return item.astype(float)
    return np.array([float(x) for x in item], dtype=float)


def spectrum(matrix):
    """
    The eigenvalues λ = |λ| e^{2πiθ} of a transition matrix.

    Parameters
    ----------
    matrix: afakit.core.AffineMatrix or numpy.ndarray
        a square matrix, converted to floats

    Returns
    -------
    list[dict]
        one dict per eigenvalue with keys `value` (complex), `modulus` and `angle`
        θ ∈ [0, 1), sorted by decreasing modulus and increasing angle

    Raises
    ------
    RuntimeError
        if the eigen-solver fails or returns non-finite values
    """
    m = to_numpy(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f'a square matrix is required, got shape {m.shape}')
    try:
        values = linalg.eigvals(m)
    except linalg.LinAlgError as e:
        raise RuntimeError(f'eigenvalue computation failed: {e}')
    if not np.all(np.isfinite(values)):
        raise RuntimeError('eigenvalue computation returned non-finite values')
    moduli = np.abs(values)
    angles = np.mod(np.angle(values) / (2 * np.pi), 1.0)
    angles[angles >= 1.0] = 0.0
    order = np.lexsort((angles, -moduli))
    return [{'value': complex(values[i]), 'modulus': float(moduli[i]), 'angle': float(angles[i])}
            for i in order]


def has_unit_eigenvalue(eigenvalues, tolerance=1e-9):
    """
    Does a spectrum as returned by :func:`spectrum` contain 1 within a tolerance?
    """
    return any(abs(x['value'] - 1) <= tolerance for x in eigenvalues)


def _approximations(theta, max_denominator):
    """
    Convergents and semiconvergents p/q of θ in increasing order of q.
    """
    hm2, km2, hm1, km1 = 0, 1, 1, 0
    x = theta
    for _ in range(64):
        a = math.floor(x)
        if a == 0:
            yield hm2, km2
        for j in range(1, a + 1):
            p, q = hm2 + j * hm1, km2 + j * km1
            if q > max_denominator:
                return
            yield p, q
        hm2, km2, hm1, km1 = hm1, km1, a * hm1 + hm2, a * km1 + km2
        remainder = x - a
        if remainder < 1e-15:
            return
        x = 1.0 / remainder


def rational_angle_detect(theta, max_denominator=100, tol=1e-9):
    """
    Find the fraction p/q with the smallest denominator within a tolerance of an angle.

    Parameters
    ----------
    theta: float
        the angle θ ∈ [0, 1)
    max_denominator: int
        the largest denominator q to consider
    tol: float
        the largest accepted distance |θ - p/q|

    Returns
    -------
    tuple[int, int] or None
        the fraction as (p, q) or None if θ is not rational up to the limits
    """
    if not 0 <= theta < 1:
        raise ValueError(f'theta must be in [0, 1), got {theta}')
    if max_denominator < 1:
        raise ValueError('max_denominator must be at least 1')
    for p, q in _approximations(float(theta), max_denominator):
        if abs(theta - p / q) <= tol:
            return p, q
    return None


def isolation_gap(afa, cutpoint, words=None, max_len=None):
    """
    Measure how well the values of a word sample are isolated from a cutpoint.

    Parameters
    ----------
    afa: afakit.core.Afa
    cutpoint: int or fractions.Fraction or str
        the cutpoint λ
    words: list[str] or None
        the word sample
    max_len: int or None
        alternatively to `words`, sample all words up to this length;
        prefix states are shared between words

    Returns
    -------
    dict
        keys `min_accepted` and `max_rejected` (fractions.Fraction or None if the
        respective part of the sample is empty), `gap` (their difference; None for a
        one-sided sample), `accepted` and `rejected` (the counts) and `one_sided`

    Raises
    ------
    ValueError
        if the sample is empty or not exactly one of `words` and `max_len` is defined
    """
    if (words is None) == (max_len is None):
        raise ValueError("exactly one of 'words' and 'max_len' must be defined")
    cutpoint = to_rational(cutpoint)
    if words is not None:
        words = list(words)
        if len(words) == 0:
            raise ValueError('the word list is empty')
        values = (weigh(afa.accepting, run(afa, word)) for word in words)
    else:
        values = (weigh(afa.accepting, state) for _, state in enumerate_runs(afa, max_len))
    accepted = []
    rejected = []
    for value in values:
        (accepted if value > cutpoint else rejected).append(value)
    min_accepted = min(accepted) if len(accepted) > 0 else None
    max_rejected = max(rejected) if len(rejected) > 0 else None
    one_sided = min_accepted is None or max_rejected is None
    return {'min_accepted': min_accepted,
            'max_rejected': max_rejected,
            'gap': None if one_sided else min_accepted - max_rejected,
            'accepted': len(accepted),
            'rejected': len(rejected),
            'one_sided': one_sided}

