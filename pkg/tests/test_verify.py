from __future__ import annotations

import random
from math import prod

from endodyn.groups import AbelianGroup, count_endomorphisms
from endodyn.verify import (
    NON_FDG_GRAPHS,
    PoolConfig,
    abelian_pool,
    completeness_suite,
    floyd_periodic_points,
    invariant_factor_types,
    random_divisor_chain,
    random_pool,
    realization_suite,
    rigidity_rejection_suite,
    run_theorem_pool,
    sample_members,
    tensor_suite,
    two_adic_order_suite,
)
from oracles import periodic_by_powers


def test_invariant_factor_types_are_divisor_chains():
    types = invariant_factor_types(48)
    assert len(types) == len(set(types))
    for t in types:
        assert all(t[i + 1] % t[i] == 0 for i in range(len(t) - 1))
    # 16 has five abelian types; (2,2,2,2) needs rank 4
    assert sorted(t for t in types if prod(t) == 16) == [(2, 2, 4), (2, 8), (4, 4), (16,)]


def test_abelian_pool_is_exhaustive():
    members = list(abelian_pool(12))
    expected = sum(count_endomorphisms(AbelianGroup(t)) for t in invariant_factor_types(12))
    assert len(members) == expected


def test_random_pool_is_seeded():
    a = [(F.group.orders, F.endo.matrix.tolist()) for _, F in random_pool(20, seed=5)]
    b = [(F.group.orders, F.endo.matrix.tolist()) for _, F in random_pool(20, seed=5)]
    assert a == b and len(a) == 20
    assert all(49 <= F.order <= 10**4 for _, F in random_pool(20, seed=5))


def test_floyd_oracle():
    for succ in NON_FDG_GRAPHS.values():
        assert floyd_periodic_points(succ) == periodic_by_powers(succ)


def test_theorem_pool_small():
    tally = run_theorem_pool(PoolConfig(abelian_max_order=16, cyclic_max_n=20, random_count=10).members())
    assert tally.checked > 0
    assert all(s.ok for s in tally.suites.values())


def test_rejection_suite():
    result = rigidity_rejection_suite()
    assert result.ok and result.checked >= 5


def test_random_divisor_chain_shape():
    rng = random.Random(1)
    for _ in range(200):
        chain = random_divisor_chain(rng)
        assert len(chain) <= 5
        assert not chain or chain[0] <= 16
        assert all(chain[i] % chain[i + 1] == 0 for i in range(len(chain) - 1))


def test_small_suites_pass():
    assert realization_suite(50, seed=3).ok
    assert completeness_suite(20).ok
    assert two_adic_order_suite(6).ok
    members = PoolConfig(abelian_max_order=12, cyclic_max_n=12).members()
    total = sum(1 for _ in PoolConfig(abelian_max_order=12, cyclic_max_n=12).members())
    result = tensor_suite(sample_members(members, total, 40, seed=2))
    assert result.ok and result.checked == 40


def test_suite_failures_keep_reproducers():
    from endodyn.verify import SuiteResult

    r = SuiteResult("x")
    for i in range(8):
        r.fail({"i": i})
    assert r.violations == 8 and len(r.failures) == 5 and not r.ok
    assert r.as_dict()["reproducers"][0] == {"i": 0}
