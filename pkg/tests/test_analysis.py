import math
import random
from fractions import Fraction
import numpy as np
import pytest
from afakit.core import Afa, AffineMatrix
from afakit.combinators import constant, restrict_alphabet
from afakit.gallery import eq_afa
from afakit import analysis
from afakit.analysis import IntervalBox, ProgressionSpec


def test_prime_language():
    table = analysis.prime_language(30)
    assert np.flatnonzero(table).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert analysis.prime_language(1).sum() == 0


def test_prime_density():
    minimum, ratio = analysis.lower_density(analysis.prime_language(100000), 100000)
    assert ratio == pytest.approx(9592 / 100001)
    assert minimum <= ratio
    ratios = [analysis.lower_density(analysis.prime_language(10 ** e), 10 ** e)[1] for e in [3, 4, 5]]
    assert ratios[0] > ratios[1] > ratios[2]


def test_lower_density_callable():
    minimum, ratio = analysis.lower_density(lambda n: n % 2 == 0, 9)
    assert ratio == pytest.approx(0.5)
    assert minimum == pytest.approx(0.5)
    minimum, _ = analysis.lower_density(lambda n: n % 2 == 0, 9, start=1)
    assert minimum == pytest.approx(0.5)
    with pytest.raises(ValueError):
        analysis.lower_density(np.ones(5, dtype=bool), 10)
    with pytest.raises(ValueError):
        analysis.lower_density(lambda n: True, 5, start=6)


def test_poly_language():
    cubes = analysis.poly_language([0, 0, 0, 1], 1000)
    assert np.flatnonzero(cubes).tolist() == [n ** 3 for n in range(11)]
    shifted = analysis.poly_language([1, 0, 0, 2], 60)
    assert np.flatnonzero(shifted).tolist() == [1, 3, 17, 55]
    _, ratio = analysis.lower_density(cubes, 1000)
    assert ratio == pytest.approx(11 / 1001)
    for coeffs in [[0, 0, 1], [0, 0, 1, 0], [1, -1, 0, 1]]:
        with pytest.raises(ValueError):
            analysis.poly_language(coeffs, 10)


def test_interval_box():
    box = IntervalBox([0, 0.25], [0.5, 0.75])
    assert box.dimension == 2
    assert box.volume == pytest.approx(0.25)
    points = np.array([[0, 0.25], [0.5, 0.5], [0.49, 0.74]])
    assert box.contains(points).tolist() == [True, False, True]
    for lower, upper in [([0.5], [0.5]), ([-0.1], [0.5]), ([0], [1.5]), ([0, 0], [1])]:
        with pytest.raises(ValueError):
            IntervalBox(lower, upper)


def test_box_count_half_open():
    seq = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25]
    box = IntervalBox(0.25, 0.75)
    assert analysis.box_count(seq, box, 6) == 3
    assert analysis.box_count(seq, box, 2) == 1
    assert analysis.box_count(seq, box, 0) == 0
    with pytest.raises(ValueError):
        analysis.box_count(seq, box, 7)
    with pytest.raises(ValueError):
        analysis.box_count(seq, IntervalBox([0, 0], [1, 1]), 3)


def test_box_count_monotone_additive():
    seq = analysis.weyl_sequence(math.sqrt(5), 2000)
    box = IntervalBox(0.1, 0.4)
    counts = [analysis.box_count(seq, box, n) for n in range(0, 2001, 50)]
    assert counts == sorted(counts)
    for n in [0, 1, 17, 500, 2000]:
        left = analysis.box_count(seq, IntervalBox(0, 0.3), n)
        right = analysis.box_count(seq, IntervalBox(0.3, 0.7), n)
        assert left + right == analysis.box_count(seq, IntervalBox(0, 0.7), n)


def test_box_count_negative_rounding():
    assert analysis.box_count([-1e-20, 0.5], IntervalBox(0, 1), 2) == 2
    assert analysis.box_count([-1e-20], IntervalBox(0, 0.5), 1) == 1
    assert analysis.box_count([-0.25], IntervalBox(0.5, 1), 1) == 1


def test_lower_density_finite_language():
    members = [0, 3, 4, 10, 25]
    table = np.zeros(1001, dtype=bool)
    table[members] = True
    for N in [25, 100, 1000]:
        minimum, ratio = analysis.lower_density(table, N)
        assert ratio <= len(members) / (N + 1)
        assert minimum <= ratio
    assert analysis.lower_density(table, 1000)[1] == pytest.approx(5 / 1001)


def test_weyl_equidistribution():
    seq = analysis.weyl_sequence(math.sqrt(2), 100000)
    result = analysis.equidistribution_test(seq, IntervalBox(0.2, 0.5), 100000)
    assert result['target'] == pytest.approx(0.3)
    assert result['deviation'] <= 0.01
    seq = analysis.weyl_sequence([math.sqrt(2), math.sqrt(3)], 100000)
    result = analysis.equidistribution_test(seq, IntervalBox([0.1, 0.5], [0.6, 0.9]), 100000)
    assert result['deviation'] <= 0.02


def test_rational_rotation_not_equidistributed():
    seq = analysis.rational_rotation(1, 4, 1000)
    assert np.unique(seq).tolist() == [0, 0.25, 0.5, 0.75]
    result = analysis.equidistribution_test(seq, IntervalBox(0, 0.125), 1000)
    assert result['empirical'] == pytest.approx(0.25)
    assert result['deviation'] >= 0.1


def test_progression_spec():
    assert ProgressionSpec(h=2, q=3, count=4).indices().tolist() == [2, 5, 8, 11]
    for kwargs in [{'h': -1}, {'q': 0}, {'count': 0}, {'q': 1.5}]:
        with pytest.raises(ValueError):
            ProgressionSpec(**kwargs)


def unary_eq():
    return restrict_alphabet(eq_afa(), ['a'])


def test_unary_scan_eq():
    scan = analysis.unary_scan(unary_eq(), 30, exact=True)
    assert len(scan) == 31
    assert scan.exact == [Fraction(1, 1 + 2 * n) for n in range(31)]
    assert scan.values == pytest.approx([1 / (1 + 2 * n) for n in range(31)])
    floats = analysis.unary_scan(unary_eq(), 30)
    assert floats.exact is None
    assert floats.values == pytest.approx(scan.values, abs=1e-12)
    assert scan.lines()[2] == '2 0.2 1/5'
    assert floats.lines()[0] == '0 1'


def test_scan_exact_matches_float(random_afa):
    for seed in range(20):
        afa = random_afa(seed, alphabet='a')
        exact = analysis.unary_scan(afa, 200, exact=True)
        floats = analysis.unary_scan(afa, 200)
        assert np.max(np.abs(floats.values - exact.values)) <= 1e-9


def test_scan_errors(eq):
    with pytest.raises(ValueError, match='unary'):
        analysis.unary_scan(eq, 5)
    with pytest.raises(ValueError, match='budget'):
        analysis.unary_scan(unary_eq(), 50, exact=True, step_budget=10)
    assert len(analysis.unary_scan(unary_eq(), 50, step_budget=10)) == 51
    with pytest.raises(ValueError):
        analysis.unary_scan(unary_eq(), -1)


def test_progression_scan():
    scan = analysis.progression_scan(unary_eq(), ProgressionSpec(h=2, q=3, count=3), exact=True)
    assert scan.indices.tolist() == [2, 5, 8]
    assert scan.exact == [Fraction(1, 5), Fraction(1, 11), Fraction(1, 17)]
    floats = analysis.progression_scan(unary_eq(), ProgressionSpec(h=2, q=3, count=3))
    assert floats.values == pytest.approx([1 / 5, 1 / 11, 1 / 17])


def test_scan_csv(tmp_path):
    scan = analysis.progression_scan(unary_eq(), ProgressionSpec(h=1, q=2, count=2), exact=True)
    text = scan.to_csv()
    assert text.splitlines() == ['n,F_float,F_exact_num,F_exact_den',
                                 f'1,{1 / 3!r},1,3',
                                 '3,0.14285714285714285,1,7']
    target = str(tmp_path / 'scan.csv')
    assert scan.to_csv(target) is None
    with open(target) as f:
        assert f.read() == text
    floats = analysis.unary_scan(unary_eq(), 1)
    assert floats.to_csv().splitlines()[1] == '0,1.0,,'


def test_spectrum_swap():
    result = analysis.spectrum(AffineMatrix([[0, 1], [1, 0]]))
    assert [x['modulus'] for x in result] == pytest.approx([1, 1])
    assert [x['angle'] for x in result] == pytest.approx([0, 0.5])
    assert analysis.has_unit_eigenvalue(result)
    assert not analysis.has_unit_eigenvalue(analysis.spectrum(np.array([[0.5, 0], [0, -2.0]])))
    with pytest.raises(ValueError, match='square'):
        analysis.spectrum(np.ones((2, 3)))


def test_spectrum_contains_one(random_afa):
    for seed in range(100):
        afa = random_afa(seed, states=4)
        result = analysis.spectrum(afa.matrix('a'))
        assert len(result) == 4
        assert analysis.has_unit_eigenvalue(result, tolerance=1e-9)
        moduli = [x['modulus'] for x in result]
        assert moduli == sorted(moduli, reverse=True)


def test_spectrum_rotation():
    # quarter turn, eigenvalues ±i
    rotation = np.array([[0, -1], [1, 0]], dtype=float)
    result = analysis.spectrum(rotation)
    angles = sorted(analysis.rational_angle_detect(x['angle']) for x in result)
    assert angles == [(1, 4), (3, 4)]


def test_rational_angle_detect():
    assert analysis.rational_angle_detect(0.5) == (1, 2)
    assert analysis.rational_angle_detect(0.0) == (0, 1)
    assert analysis.rational_angle_detect(1 / 3 + 1e-12) == (1, 3)
    assert analysis.rational_angle_detect(math.sqrt(2) - 1) is None
    assert analysis.rational_angle_detect(math.sqrt(2) - 1, max_denominator=100, tol=1e-3) == (12, 29)
    assert analysis.rational_angle_detect(37 / 97) == (37, 97)
    assert analysis.rational_angle_detect(37 / 97, max_denominator=50) is None
    for theta in [-0.1, 1.0]:
        with pytest.raises(ValueError):
            analysis.rational_angle_detect(theta)


def test_rational_angle_random():
    rng = random.Random(17)
    for _ in range(200):
        q = rng.randint(1, 100)
        p = rng.randrange(q)
        found = analysis.rational_angle_detect(p / q)
        assert found is not None
        assert Fraction(*found) == Fraction(p, q)


def test_isolation_gap_eq(eq):
    report = analysis.isolation_gap(eq, '1/2', max_len=8)
    assert report['min_accepted'] == 1
    assert report['max_rejected'] == Fraction(1, 3)
    assert report['gap'] == Fraction(2, 3)
    assert report['accepted'] == 1 + 2 + 6 + 20 + 70
    assert report['accepted'] + report['rejected'] == 2 ** 9 - 1
    assert not report['one_sided']
    sample = analysis.isolation_gap(eq, '1/2', words=['ab', 'aab', 'aaab'])
    assert (sample['accepted'], sample['rejected']) == (1, 2)
    assert sample['max_rejected'] == Fraction(1, 3)


def test_isolation_gap_one_sided():
    report = analysis.isolation_gap(constant('1/2'), '1/2', max_len=3)
    assert report['one_sided']
    assert report['min_accepted'] is None
    assert report['max_rejected'] == Fraction(1, 2)
    assert report['gap'] is None
    assert report['rejected'] == 15
    with pytest.raises(ValueError):
        analysis.isolation_gap(constant('1/2'), '1/2')
    with pytest.raises(ValueError):
        analysis.isolation_gap(constant('1/2'), '1/2', words=[])


def test_to_numpy():
    afa = Afa(alphabet=['a'], initial=['1/2', '1/2'], transitions={'a': [['1/4', 0], ['3/4', 1]]},
              accepting=[0])
    assert analysis.to_numpy(afa.matrix('a')).tolist() == [[0.25, 0], [0.75, 1]]
    assert analysis.to_numpy(afa.initial).tolist() == [0.5, 0.5]
