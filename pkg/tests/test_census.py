from __future__ import annotations

from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from endodyn.arith import multiplicative_order, tau, truncated_valuation, unit_decomposition_mod_2k
from endodyn.census import (
    CanonicalInvariant,
    automorphism_cycle_multiset,
    brute_force_census,
    crt_combine,
    crt_split_invariant,
    formula_count,
    nilpotent_behavior,
    prime_power_count,
    stretch_invariant,
    two_power_factor,
)
from endodyn.verify import permutation_cycles, prime_powers


@pytest.mark.parametrize(
    "p, k, expected",
    [(3, 2, (6, 2, 4)), (2, 3, (6, 3, 3))],
)
def test_prime_power_count_examples(p, k, expected):
    c = prime_power_count(p, k)
    assert (c.total, c.trees, c.cycle_unions) == expected


def test_prime_power_count_small_two_powers_and_errors():
    assert prime_power_count(2, 2).total == 4
    with pytest.raises(ValueError):
        prime_power_count(4, 1)
    with pytest.raises(ValueError):
        prime_power_count(3, 0)


def test_two_power_factor_pins():
    assert [two_power_factor(k) for k in range(3)] == [1, 2, 4]
    assert [two_power_factor(k) for k in range(3, 7)] == [6, 9, 12, 15]


@pytest.mark.parametrize(
    "n, expected",
    [(8, (6, 3, 3, 0)), (12, (12, 2, 4, 6)), (9, (6, 2, 4, 0))],
)
def test_formula_examples(n, expected):
    assert formula_count(n).key() == expected
    assert brute_force_census(n).brute_force.key() == expected


def test_formula_rejects_zero():
    with pytest.raises(ValueError):
        formula_count(0)


def test_trivial_group_overlap():
    c = formula_count(1)
    assert (c.total, c.trees, c.cycle_unions, c.mixed, c.overlap) == (1, 1, 1, 0, True)
    report = brute_force_census(1)
    assert report.agrees and len(report.classes) == 1


def test_census_of_eight():
    report = brute_force_census(8)
    reps = {c.rep: c for c in report.classes}
    assert sorted(reps) == [0, 1, 2, 3, 4, 5]
    assert all(reps[a].is_tree for a in (0, 2, 4))
    assert all(reps[a].is_cycle_union for a in (1, 3, 5))
    assert reps[3].size == 2  # 7 joins the class of 3


def test_census_of_seven():
    report = brute_force_census(7)
    assert report.brute_force.key() == (5, 1, 4, 0)
    autos = [c for c in report.classes if c.is_cycle_union]
    assert sorted(multiplicative_order(c.rep, 7) for c in autos) == [1, 2, 3, 6]


@pytest.mark.parametrize(
    "p, l, k, expected",
    [(3, 1, 2, (3, 3)), (2, 2, 3, (4, 2)), (5, 2, 2, (25,)), (2, 4, 4, (16,))],
)
def test_nilpotent_behavior_examples(p, l, k, expected):
    assert nilpotent_behavior(p, l, k) == expected


def test_nilpotent_behavior_rejects_bad_level():
    with pytest.raises(ValueError):
        nilpotent_behavior(3, 0, 2)
    with pytest.raises(ValueError):
        nilpotent_behavior(3, 3, 2)


def test_automorphism_cycles_examples():
    assert automorphism_cycle_multiset(7, 1, 2) == ((1, 1), (3, 2))
    assert automorphism_cycle_multiset(2, 3, 5) == ((1, 4), (2, 2))
    for p, k in [(2, 5), (3, 3), (11, 1)]:
        assert automorphism_cycle_multiset(p, k, 1) == ((1, p**k),)
    with pytest.raises(ValueError):
        automorphism_cycle_multiset(3, 2, 6)


def test_nilpotent_behavior_matches_simulation_for_all_units_up_to_2048():
    for p, k in prime_powers(2048):
        n = p**k
        for a in range(p, n, p):
            l = truncated_valuation(a, p, k)
            assert stretch_invariant(n, a).identity_behavior == nilpotent_behavior(p, l, k), (p, k, a)


def test_automorphism_cycles_match_simulation_up_to_2048():
    for p, k in prime_powers(2048):
        n = p**k
        x = np.arange(n)
        for a in range(1, n):
            if a % p:
                assert permutation_cycles(a * x % n) == automorphism_cycle_multiset(p, k, a), (p, k, a)


@given(st.lists(st.integers(0, 30), min_size=1, max_size=40))
def test_permutation_cycles_matches_walk(seed_list):
    perm = np.random.default_rng(sum(seed_list) + len(seed_list)).permutation(len(seed_list))
    seen, lengths = set(), {}
    for x in range(len(perm)):
        if x in seen:
            continue
        y, n = x, 0
        while y not in seen:
            seen.add(y)
            y = int(perm[y])
            n += 1
        lengths[n] = lengths.get(n, 0) + 1
    assert permutation_cycles(perm) == tuple(sorted(lengths.items()))


@pytest.mark.parametrize("p, k", [(3, 1), (3, 2), (5, 2), (7, 2), (11, 1), (13, 2), (3, 4)])
def test_odd_prime_automorphism_classes_follow_order(p, k):
    """Units a fall into k * tau(p - 1) classes, one per (divisor of p - 1, level)."""
    n = p**k
    classes = {}
    for a in range(1, n):
        if a % p == 0:
            continue
        order = multiplicative_order(a, n)
        s = gcd(order, p - 1)  # order = s * p^j with s | p - 1
        classes.setdefault(stretch_invariant(n, a), set()).add((s, order // s))
    assert len(classes) == k * tau(p - 1)
    assert all(len(keys) == 1 for keys in classes.values())
    assert len(set().union(*classes.values())) == len(classes)


@pytest.mark.parametrize("k", range(3, 9))
def test_two_power_collisions_only_at_minus_one_levels(k):
    n = 2**k
    by_key: dict[tuple[int, int], CanonicalInvariant] = {}
    for a in range(1, n, 2):
        key = unit_decomposition_mod_2k(a, k)
        inv = stretch_invariant(n, a)
        assert by_key.setdefault(key, inv) == inv
    keys = sorted(by_key)
    for i, x in enumerate(keys):
        for y in keys[i + 1:]:
            same = by_key[x] == by_key[y]
            expected = {x, y} == {(1, k - 3), (1, k - 2)}
            assert same == expected, (x, y)


def test_crt_examples():
    a = CanonicalInvariant((4,), ((1, 1),))
    b = CanonicalInvariant((), ((1, 1), (2, 1)))
    assert crt_combine([a, b]) == CanonicalInvariant((4,), ((1, 1), (2, 1)))
    trivial = CanonicalInvariant((), ((1, 1),))
    assert crt_combine([a, trivial]) == a
    parts = crt_split_invariant(12, 7)
    assert parts == [stretch_invariant(4, 3), stretch_invariant(3, 1)]
    assert crt_combine(parts) == stretch_invariant(12, 7)
    with pytest.raises(ValueError):
        crt_combine([a, a])


@given(st.integers(1, 400), st.data())
def test_crt_split_then_combine_is_direct(n, data):
    a = data.draw(st.integers(0, n - 1))
    assert crt_combine(crt_split_invariant(n, a)) == stretch_invariant(n, a)


def test_crt_combination_is_injective_on_coprime_pairs():
    for n1 in range(2, 101):
        for n2 in range(2, 200 // n1 + 1):
            if gcd(n1, n2) != 1:
                continue
            combined = {}
            for a1 in range(n1):
                for a2 in range(n2):
                    pair = (stretch_invariant(n1, a1), stretch_invariant(n2, a2))
                    inv = crt_combine(pair)
                    assert combined.setdefault(inv, pair) == pair, (n1, n2, a1, a2)


@given(st.integers(1, 160))
def test_formula_equals_brute_force(n):
    report = brute_force_census(n)
    assert report.agrees, report.as_dict()
    assert report.formula.total == len(report.classes)
    assert sum(c.size for c in report.classes) == n


def test_formula_is_multiplicative_over_coprime_parts():
    for n1 in range(1, 60):
        for n2 in range(1, 60):
            if gcd(n1, n2) == 1 and (n1 % 2 or n2 % 2):
                assert formula_count(n1 * n2).total == formula_count(n1).total * formula_count(n2).total
