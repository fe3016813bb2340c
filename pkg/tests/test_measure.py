import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from madic import AlphaParam, Prefix
from madic.measure import (BranchingSpec, NotUniform, TreeMeasure, block_lift, build_greedy, build_random,
                           build_uniform, is_uniform, mass_of, sample_path, validate)

from conftest import small_measures


def greedy_oracle(m, p, q, x0, depth, dps=80):
    """Greedy trace computed in high-precision floating point, ties by tolerance."""
    with mpmath.workdps(dps):
        w = mpmath.root(mpmath.mpf(m) ** p, q)
        fl = int(mpmath.floor(w + mpmath.mpf(10) ** -(dps // 2)))
        cl = fl if abs(w - fl) < mpmath.mpf(10) ** -(dps // 2) else fl + 1
        x0 = mpmath.mpf(x0.numerator) / x0.denominator
        f = x0
        s_seq, fs = [], [f]
        tol = mpmath.mpf(10) ** -(dps // 2)
        for _ in range(depth):
            lhs, rhs = f * w / fl, mpmath.mpf(cl) / fl * x0
            s = cl if lhs - rhs > tol else fl
            s_seq.append(s)
            f = f * w / s
            fs.append(f)
        return s_seq, fs


def test_build_uniform_examples():
    mu = build_uniform(2, BranchingSpec(1, (2, 2)), 2)
    assert mu.level(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(mu.mass(k) == Fraction(1, 4) for k in mu.level(2))

    mu = build_uniform(3, BranchingSpec(1, (2, 3)), 2)
    assert mu.level(2) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert all(mu.mass(k) == Fraction(1, 6) for k in mu.level(2))

    mu = build_uniform(2, BranchingSpec(Fraction(3, 5), (1,)), 1)
    assert dict(mu.masses) == {(): Fraction(3, 5), (0,): Fraction(3, 5)}
    for mu in (build_uniform(3, BranchingSpec(1, (2, 3)), 2), build_uniform(4, BranchingSpec(2, (3, 1, 4)), 3)):
        assert validate(mu) == []


def test_build_uniform_errors():
    with pytest.raises(ValueError):
        build_uniform(2, BranchingSpec(1, (3,)), 1)
    with pytest.raises(ValueError):
        build_uniform(2, BranchingSpec(1, (2,)), 2)
    with pytest.raises(ValueError):
        BranchingSpec(0, (1,))


def test_greedy_sqrt2_trace(sqrt2):
    res = build_greedy(sqrt2, 1, 6)
    assert res.spec.s_seq == (1, 1, 2, 1, 2, 1)
    expected = [1, sqrt2.w, 2, sqrt2.w, 2, sqrt2.w, 2]
    assert [e.f for e in res.profile.entries] == expected
    assert not res.degenerate


def test_greedy_tie_takes_floor(sqrt2):
    # f_1 * w / floor = 2 = ceil/floor * x0 exactly: the rule's "<=" branch applies
    res = build_greedy(sqrt2, 1, 2)
    assert res.spec.s_seq[1] == sqrt2.floor_w


def test_greedy_m3_trace(a356):
    res = build_greedy(a356, 1, 11)
    assert res.spec.s_seq == (2, 3, 2, 3, 2, 3, 2, 3, 2, 3, 3)
    assert res.profile[6].f == Fraction(9, 8)
    # f_9 = w**9 / (2**5 * 3**4) = 3**(15/2) / 2592
    assert res.profile[9].f == a356.w_power(9, Fraction(1, 2592))
    oracle_s, oracle_f = greedy_oracle(3, 5, 6, Fraction(1), 11)
    assert list(res.spec.s_seq) == oracle_s
    for e, ref in zip(res.profile.entries, oracle_f):
        assert abs(float(e.f) - float(ref)) < 1e-12
    assert res.profile[9].f.approx(7) == "1.461418"


@pytest.mark.parametrize("m,p,q", [(2, 1, 2), (3, 5, 6), (5, 1, 3), (10, 1, 2), (7, 2, 3), (2, 2, 3), (11, 1, 3)])
@pytest.mark.parametrize("x0", [Fraction(1), Fraction(3, 7)])
def test_greedy_matches_oracle(m, p, q, x0):
    res = build_greedy(AlphaParam(m, p, q), x0, 40)
    s_seq, _ = greedy_oracle(m, p, q, x0, 40)
    assert list(res.spec.s_seq) == s_seq


def test_greedy_degenerate():
    a = AlphaParam(4, 1, 2)
    res = build_greedy(a, 1, 9)
    assert res.degenerate
    assert set(res.spec.s_seq) == {2}
    assert all(e.f == 1 for e in res.profile.entries)


@pytest.mark.parametrize("m,p,q", [(2, 1, 2), (3, 5, 6), (6, 5, 6), (9, 1, 2), (8, 1, 3)])
def test_greedy_containment_and_first_step(m, p, q):
    a = AlphaParam(m, p, q)
    x0 = Fraction(3, 7)
    res = build_greedy(a, x0, 300)
    hi = Fraction(a.ceil_w, a.floor_w) * x0
    assert all(x0 <= e.f <= hi for e in res.profile.entries)
    assert res.profile[0].f == x0
    assert res.spec.s_seq[0] == a.floor_w
    assert set(res.spec.s_seq) <= {a.floor_w, a.ceil_w}


def test_greedy_upper_attained(sqrt2):
    res = build_greedy(sqrt2, 1, 10)
    assert max(e.f for e in res.profile.entries) == 2


def test_random_depth0():
    mu = build_random(2, 0, 123, x0=Fraction(5, 3))
    assert dict(mu.masses) == {(): Fraction(5, 3)}


def test_random_determinism():
    args = (3, 5, 42)
    assert build_random(*args, 1, 3) == build_random(*args, 1, 3)
    assert build_random(*args, 1, 3) != build_random(3, 5, 43, 1, 3)


def test_random_valid_and_telescoped():
    mu = build_random(3, 5, 42, 1, 3)
    assert validate(mu) == []
    for n in range(mu.depth + 1):
        assert sum(mu.mass(k) for k in mu.level(n)) == mu.root_mass


def test_random_bad_bounds():
    for lo, hi in [(0, 2), (2, 1), (1, 4)]:
        with pytest.raises(ValueError):
            build_random(3, 2, 0, lo, hi)
    with pytest.raises(ValueError):
        build_random(3, 2, 0, mass_split_law="nope")


def test_validate_detects_problems():
    bad = TreeMeasure(2, 1, {(): 1, (0,): Fraction(1, 2), (1,): Fraction(1, 3)})
    v = validate(bad)
    assert [x.kind for x in v] == ["consistency"] and v[0].prefix == ()
    orphan = TreeMeasure(2, 2, {(): 1, (0,): 1, (0, 0): 1, (1, 1): Fraction(1, 2)})
    assert "orphan" in {x.kind for x in validate(orphan)}
    assert [x.kind for x in validate(TreeMeasure(2, 0, {}))] == ["empty"]
    neg = TreeMeasure(2, 1, {(): 0, (0,): 0})
    assert {x.kind for x in validate(neg)} == {"positivity"}


def test_mass_of():
    mu = build_uniform(2, BranchingSpec(1, (2, 2, 2)), 3)
    assert mass_of(mu, "01") == Fraction(1, 4)
    assert mass_of(mu, Prefix(2, ())) == 1
    skinny = build_uniform(3, BranchingSpec(1, (2, 1)), 2)
    assert mass_of(skinny, "2") == 0 and mass_of(skinny, "01") == 0
    with pytest.raises(ValueError):
        mass_of(mu, "0101")


def test_is_uniform_examples():
    mu = build_uniform(3, BranchingSpec(1, (2, 3)), 2)
    spec = is_uniform(mu.to_explicit())
    assert spec == BranchingSpec(1, (2, 3))
    lopsided = TreeMeasure(2, 1, {(): 1, (0,): Fraction(3, 4), (1,): Fraction(1, 4)})
    res = is_uniform(lopsided)
    assert isinstance(res, NotUniform) and not res
    assert [str(p) for p in res.witness] == ["0", "1"]
    assert is_uniform(TreeMeasure(2, 0, {(): Fraction(2, 3)})) == BranchingSpec(Fraction(2, 3), ())


def test_is_uniform_branching_witness():
    mu = TreeMeasure(2, 2, {(): 1, (0,): Fraction(1, 2), (1,): Fraction(1, 2),
                            (0, 0): Fraction(1, 4), (0, 1): Fraction(1, 4), (1, 0): Fraction(1, 2)})
    res = is_uniform(mu)
    assert not res and res.level == 1 and res.reason == "unequal branching"
    assert [str(p) for p in res.witness] == ["0", "1"]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.lists(st.integers(1, 5), min_size=0, max_size=5),
       st.fractions(min_value=Fraction(1, 50), max_value=Fraction(100), max_denominator=50))
def test_uniform_roundtrip_property(m, s, x0):
    s = [min(v, m) for v in s]
    spec = BranchingSpec(x0, s)
    mu = build_uniform(m, spec, len(s))
    assert validate(mu) == []
    assert is_uniform(mu.to_explicit()) == spec


def test_block_lift_identity_and_regrouping():
    mu = build_random(3, 4, 9)
    assert block_lift(mu, 1) == mu
    full = build_uniform(2, BranchingSpec(1, (2, 2, 2, 2)), 4)
    lifted = block_lift(full, 2)
    assert lifted.m == 4 and lifted.depth == 2
    assert sorted(lifted.level(1)) == [(0,), (1,), (2,), (3,)]
    assert all(lifted.mass(k) == Fraction(1, 4) for k in lifted.level(1))
    assert lifted.to_explicit() == build_uniform(4, BranchingSpec(1, (4, 4)), 2).to_explicit()


def test_block_lift_greedy(sqrt2):
    mu = build_greedy(sqrt2, 1, 6).measure
    lifted = block_lift(mu, 2)
    assert validate(lifted) == []
    for k in range(4):
        orig = sorted(mu.mass(key) for key in mu.level(2 * k))
        new = sorted(lifted.mass(key) for key in lifted.level(k))
        assert orig == new


def test_block_lift_truncates_and_rejects():
    mu = build_random(2, 5, 1)
    assert block_lift(mu, 2).depth == 2
    with pytest.raises(ValueError):
        block_lift(mu, 0)


def test_sample_path_forced_and_deterministic():
    single = build_uniform(3, BranchingSpec(1, (1, 1, 1)), 3)
    assert all(sample_path(single, seed).digits == (0, 0, 0) for seed in range(5))
    mu = build_random(3, 6, 5)
    assert sample_path(mu, 77) == sample_path(mu, 77)
    for seed in range(20):
        assert mu.mass(sample_path(mu, seed).digits) > 0


def test_sample_path_first_digit_frequency():
    mu = build_uniform(2, BranchingSpec(1, (2,) * 20), 20)
    ones = sum(sample_path(mu, seed).digits[0] for seed in range(10_000))
    # binomial(10^4, 1/2): sd = 50, so [4500, 5500] is a 10-sigma band
    assert 4500 <= ones <= 5500


def test_sample_path_follows_masses():
    mu = TreeMeasure(2, 1, {(): 1, (0,): Fraction(9, 10), (1,): Fraction(1, 10)})
    zeros = sum(sample_path(mu, s).digits == (0,) for s in range(4000))
    assert abs(zeros / 4000 - 0.9) < 5 * math.sqrt(0.09 / 4000)


def test_telescoping_on_small_measures():
    for mu in small_measures():
        for n in range(mu.depth + 1):
            assert sum(mu.mass(k) for k in mu.level(n)) == mu.root_mass
