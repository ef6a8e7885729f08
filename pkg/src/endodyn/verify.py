"""Verification suites over pools of FDGs.

Each suite returns a :class:`SuiteResult` carrying the number of cases
checked and a few reproducers for any failure.  The CLI ``verify`` command
and the acceptance tests both drive these functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Iterable, Iterator

import numpy as np

from .arith import is_prime, multiplicative_order, truncated_valuation, unit_decomposition_mod_2k
from .census import automorphism_cycle_multiset, brute_force_census, nilpotent_behavior
from .dynamics import Fdg, fds_product, fitting_check, nil_restriction, per_part, per_restriction
from .groups import (
    AbelianGroup,
    builtin_table_group,
    count_endomorphisms,
    enumerate_endomorphisms,
    enumerate_table_endomorphisms,
    make_cyclic,
    MatrixEndomorphism,
)
from .realization import realize, validate_divisor_chain
from .serialize import fdg_to_dict
from .state_graph import (
    StateSpace,
    ahu_canonical_form,
    canonical_invariant,
    is_isomorphic,
    kernel_index_check,
    rigid_procreation_check,
)

MAX_REPRODUCERS = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    violations: int = 0
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def fail(self, reproducer: dict) -> None:
        self.violations += 1
        if len(self.failures) < MAX_REPRODUCERS:
            self.failures.append(reproducer)

    def as_dict(self) -> dict:
        out = {"name": self.name, "checked": self.checked, "violations": self.violations, "ok": self.ok}
        if self.failures:
            out["reproducers"] = self.failures
        if self.note:
            out["note"] = self.note
        return out


def _reproducer(F: Fdg, **extra) -> dict:
    try:
        spec = fdg_to_dict(F)
    except ValueError:
        spec = {"carrier": repr(F.group)}
    return {"spec": spec, **extra}


# ---- pools -----------------------------------------------------------------


def invariant_factor_types(max_order: int, max_rank: int = 3) -> list[tuple[int, ...]]:
    """Abelian groups as divisor chains d_1 | d_2 | ... with every d_i > 1, plus the trivial group."""
    found = [(1,)]

    def extend(prefix: tuple[int, ...], size: int) -> None:
        if prefix:
            found.append(prefix)
        if len(prefix) == max_rank:
            return
        last = prefix[-1] if prefix else 1
        start = last if prefix else 2
        for d in range(start, max_order // size + 1):
            if d % last == 0:
                extend(prefix + (d,), size * d)

    extend((), 1)
    return found


def abelian_pool(max_order: int, max_rank: int = 3) -> Iterator[tuple[str, Fdg]]:
    for orders in invariant_factor_types(max_order, max_rank):
        group = AbelianGroup(orders)
        total = count_endomorphisms(group)
        for phi in enumerate_endomorphisms(group, total):
            yield "abelian", Fdg(group, phi)


def cyclic_pool(max_n: int) -> Iterator[tuple[str, Fdg]]:
    for n in range(1, max_n + 1):
        group = make_cyclic(n)
        for a in range(n):
            yield "cyclic", Fdg(group, MatrixEndomorphism(group, [[a]]))


def table_pool(names: Iterable[str] = ("S3", "D4", "Q8")) -> Iterator[tuple[str, Fdg]]:
    for name in names:
        group = builtin_table_group(name)
        for phi in enumerate_table_endomorphisms(group):
            yield f"table:{name}", Fdg(group, phi)


def random_abelian_group(rng: random.Random, min_order: int, max_order: int) -> AbelianGroup:
    while True:
        rank = rng.randint(1, 3)
        top = max(2, int(round(max_order ** (1 / rank))))
        orders = [rng.randint(2, top) for _ in range(rank)]
        if min_order <= prod(orders) <= max_order:
            return AbelianGroup(orders)


def random_pool(count: int, seed: int, min_order: int = 49, max_order: int = 10**4) -> Iterator[tuple[str, Fdg]]:
    rng = random.Random(seed)
    for _ in range(count):
        group = random_abelian_group(rng, min_order, max_order)
        (phi,) = enumerate_endomorphisms(group, 1, seed=rng.getrandbits(64))
        yield "random", Fdg(group, phi)


@dataclass
class PoolConfig:
    abelian_max_order: int = 48
    abelian_max_rank: int = 3
    cyclic_max_n: int = 64
    tables: tuple[str, ...] = ("S3", "D4", "Q8")
    random_count: int = 0
    random_max_order: int = 10**4
    seed: int = 0

    def members(self) -> Iterator[tuple[str, Fdg]]:
        yield from abelian_pool(self.abelian_max_order, self.abelian_max_rank)
        yield from cyclic_pool(self.cyclic_max_n)
        yield from table_pool(self.tables)
        yield from random_pool(self.random_count, self.seed, max_order=self.random_max_order)


# ---- per-FDG theorem checks ------------------------------------------------


def floyd_periodic_points(succ: np.ndarray) -> set[int]:
    """Periodic points found one element at a time with tortoise-and-hare."""
    periodic = set()
    for x in range(len(succ)):
        slow, fast = int(succ[x]), int(succ[succ[x]])
        while slow != fast:
            slow, fast = int(succ[slow]), int(succ[succ[fast]])
        # slow is on x's cycle; x is periodic iff it is on that cycle too
        y = slow
        while True:
            if y == x:
                periodic.add(x)
                break
            y = int(succ[y])
            if y == slow:
                break
    return periodic


def theorem_checks(F: Fdg, oracle_limit: int = 64) -> dict[str, bool]:
    """Fitting decomposition, rigid procreation and kernel-index law for one FDG."""
    S = StateSpace(F.succ)
    results = {
        "fitting": fitting_check(F).passed,
        "rigidity": rigid_procreation_check(S).ok,
        "kernel_index": kernel_index_check(F, S).passed,
    }
    if F.order <= oracle_limit:
        results["periodic_oracle"] = per_part(F) == floyd_periodic_points(F.succ)
    return results


@dataclass
class PoolTally:
    checked: int = 0
    by_kind: dict[str, int] = field(default_factory=dict)
    suites: dict[str, SuiteResult] = field(default_factory=dict)

    def suite(self, name: str) -> SuiteResult:
        return self.suites.setdefault(name, SuiteResult(name))


def run_theorem_pool(members: Iterable[tuple[str, Fdg]], oracle_limit: int = 64) -> PoolTally:
    tally = PoolTally()
    for name in ("fitting", "rigidity", "kernel_index", "periodic_oracle"):
        tally.suite(name)
    for kind, F in members:
        tally.checked += 1
        tally.by_kind[kind] = tally.by_kind.get(kind, 0) + 1
        for check, ok in theorem_checks(F, oracle_limit).items():
            suite = tally.suite(check)
            suite.checked += 1
            if not ok:
                suite.fail(_reproducer(F, kind=kind))
    return tally


# ---- hand-built graphs that are not FDG state spaces -----------------------

NON_FDG_GRAPHS: dict[str, list[int]] = {
    "star of three leaves and a two-chain on one loop": [0, 0, 0, 0, 0, 4],
    "two loops with different leaf counts": [0, 1, 0, 0],
    "loop with a leaf and a length-two tail": [0, 0, 1, 0],
    "two-cycle with a tail on one side": [1, 0, 0],
    "three-cycle beside a loop with a leaf": [1, 2, 0, 3, 3],
    "equal first numbers, different second numbers": [0, 0, 1, 1, 2, 2],
}


def rigidity_rejection_suite() -> SuiteResult:
    result = SuiteResult("rigidity_rejects_non_fdg")
    for name, succ in NON_FDG_GRAPHS.items():
        result.checked += 1
        S = StateSpace(succ)
        if rigid_procreation_check(S).ok or rigid_procreation_check(S, "naive").ok:
            result.fail({"graph": name, "succ": succ})
    return result


# ---- realization -----------------------------------------------------------


def random_divisor_chain(rng: random.Random, max_len: int = 5, max_first: int = 16) -> tuple[int, ...]:
    length = rng.randint(0, max_len)
    if length == 0:
        return ()
    chain = [rng.randint(1, max_first)]
    while len(chain) < length:
        last = chain[-1]
        chain.append(rng.choice([d for d in range(1, last + 1) if last % d == 0]))
    return tuple(chain)


def realization_suite(count: int, seed: int) -> SuiteResult:
    result = SuiteResult("realization_round_trip")
    rng = random.Random(seed)
    for _ in range(count):
        chain = random_divisor_chain(rng)
        expected = validate_divisor_chain(chain)
        F = realize(chain)
        S = StateSpace(F.succ)
        inv = canonical_invariant(F, S)
        result.checked += 1
        ok = (
            inv.identity_behavior == expected
            and inv.cycles == ((1, 1),)
            and rigid_procreation_check(S).ok
            and kernel_index_check(F, S).passed
        )
        if not ok:
            result.fail({"chain": list(chain), "behavior": list(inv.identity_behavior), "cycles": inv.cycles})
    return result


# ---- invariant completeness and tensor decomposition ------------------------


def completeness_suite(max_n: int) -> SuiteResult:
    """Invariant equality vs canonical-form equality over all stretch maps with n <= max_n."""
    result = SuiteResult("invariant_completeness", note="tested hypothesis: invariant is complete")
    by_invariant: dict = {}
    by_form: dict = {}
    for n in range(1, max_n + 1):
        group = make_cyclic(n)
        for a in range(n):
            F = Fdg(group, MatrixEndomorphism(group, [[a]]))
            S = StateSpace(F.succ)
            inv = canonical_invariant(F, S)
            form = ahu_canonical_form(S)
            by_invariant.setdefault(inv, set()).add(form)
            by_form.setdefault(form, set()).add(inv)
            result.checked += 1
    for inv, forms in by_invariant.items():
        if len(forms) > 1:
            result.fail({"invariant": inv.as_dict(), "distinct_forms": len(forms)})
    for form, invs in by_form.items():
        if len(invs) > 1:
            result.fail({"invariants": sorted(i.as_dict()["behavior"] for i in invs)})
    return result


def tensor_decomposition_ok(F: Fdg) -> bool:
    product = fds_product(nil_restriction(F), per_restriction(F))
    return is_isomorphic(StateSpace(F.succ), StateSpace(product.succ))


def sample_members(members: Iterable[tuple[str, Fdg]], total: int, count: int, seed: int) -> Iterator[tuple[str, Fdg]]:
    chosen = set(random.Random(seed).sample(range(total), min(count, total)))
    for i, member in enumerate(members):
        if i in chosen:
            yield member


def tensor_suite(members: Iterable[tuple[str, Fdg]]) -> SuiteResult:
    result = SuiteResult("tensor_decomposition")
    for kind, F in members:
        result.checked += 1
        if not tensor_decomposition_ok(F):
            result.fail(_reproducer(F, kind=kind))
    return result


# ---- number-theoretic formulas ----------------------------------------------


def two_adic_order_suite(max_k: int = 10) -> SuiteResult:
    """ord(a mod 2^m) == 2^max(eps, m-2-l) for odd a < 2^k, 2 <= m <= k."""
    result = SuiteResult("two_adic_order_formula")
    for k in range(2, max_k + 1):
        for a in range(1, 2**k, 2):
            if k >= 3:
                eps, l = unit_decomposition_mod_2k(a, k)
            else:
                eps, l = (0 if a % 4 == 1 else 1), 0
            for m in range(2, k + 1):
                result.checked += 1
                if multiplicative_order(a, 2**m) != 2 ** max(eps, m - 2 - l):
                    result.fail({"a": a, "k": k, "m": m, "eps": eps, "l": l})
    return result


def prime_powers(limit: int) -> list[tuple[int, int]]:
    out = []
    for p in range(2, limit + 1):
        if is_prime(p):
            k, q = 1, p
            while q <= limit:
                out.append((p, k))
                k += 1
                q *= p
    return out


def nilpotent_behavior_suite(limit: int = 2048) -> SuiteResult:
    """Closed-form nilpotent behaviors vs simulation for every a with p | a on Z/p^k."""
    result = SuiteResult("nilpotent_behavior")
    for p, k in prime_powers(limit):
        n = p**k
        group = make_cyclic(n)
        for a in range(0, n, p):
            l = truncated_valuation(a, p, k)
            simulated = canonical_invariant(Fdg(group, MatrixEndomorphism(group, [[a]])))
            result.checked += 1
            if simulated.identity_behavior != nilpotent_behavior(p, l, k):
                result.fail({"p": p, "k": k, "a": a})
    return result


def permutation_cycles(perm: np.ndarray) -> tuple[tuple[int, int], ...]:
    """Cycle type of a permutation by pointer doubling on orbit minima."""
    label = np.arange(len(perm))
    jump = perm.copy()
    for _ in range(max(1, int(len(perm)).bit_length())):
        label = np.minimum(label, label[jump])
        jump = jump[jump]
    sizes = np.bincount(label)
    mult = np.bincount(sizes[sizes > 0])
    lengths = np.flatnonzero(mult)
    return tuple(zip(lengths.tolist(), mult[lengths].tolist()))


def automorphism_cycles_suite(limit: int = 2048) -> SuiteResult:
    result = SuiteResult("automorphism_cycles")
    for p, k in prime_powers(limit):
        n = p**k
        x = np.arange(n)
        for a in range(1, n):
            if a % p == 0:
                continue
            result.checked += 1
            if permutation_cycles(a * x % n) != automorphism_cycle_multiset(p, k, a):
                result.fail({"p": p, "k": k, "a": a})
    return result


def census_suite(ns: Iterable[int], jobs: int = 1) -> SuiteResult:
    result = SuiteResult("census_agreement")
    for n in ns:
        report = brute_force_census(n, jobs=jobs)
        result.checked += 1
        if not report.agrees:
            result.fail({"n": n, "formula": report.formula.as_dict(), "bruteForce": report.brute_force.as_dict()})
    return result


# ---- CLI driver --------------------------------------------------------------


def run_all(
    seed: int,
    budget: int,
    jobs: int = 1,
    progress: Callable[[str], None] | None = None,
    pool: PoolConfig | None = None,
    census_max_n: int = 128,
    completeness_max_n: int = 40,
    formula_limit: int = 256,
) -> list[SuiteResult]:
    """Exhaustive small-order suites, plus seeded random suites when budget > 0."""
    say = progress or (lambda _msg: None)
    pool = pool or PoolConfig(seed=seed)
    say("theorem checks on exhaustive pool")
    tally = run_theorem_pool(pool.members())
    results = list(tally.suites.values())
    say("hand-built non-FDG graphs")
    results.append(rigidity_rejection_suite())
    results.append(two_adic_order_suite(10))
    results.append(nilpotent_behavior_suite(formula_limit))
    results.append(automorphism_cycles_suite(formula_limit))
    say("census agreement")
    results.append(census_suite(range(1, census_max_n + 1), jobs=jobs))
    results.append(completeness_suite(completeness_max_n))
    if budget > 0:
        say("random pool")
        rtally = run_theorem_pool(random_pool(budget, seed))
        for res in rtally.suites.values():
            if res.checked:
                res.name = "random_" + res.name
                results.append(res)
        results.append(realization_suite(budget, seed))
        results.append(tensor_suite(sample_members(pool.members(), tally.checked, budget, seed)))
    return results
