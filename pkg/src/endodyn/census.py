"""Isomorphism types of state spaces of stretch maps x -> a*x on Z/nZ.

Closed-form counts come from the prime-power cases combined over the prime
factorization; :func:`brute_force_census` recomputes them by canonizing
every stretch map and is the ground truth whenever the two disagree.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd

from .arith import euler_phi, factorize, is_prime, multiplicative_order, tau
from .dynamics import Fdg
from .groups import MatrixEndomorphism, make_cyclic, stretch
from .state_graph import CanonicalInvariant, canonical_invariant, combine_cycles, trim


@dataclass(frozen=True)
class CensusCounts:
    total: int
    trees: int
    cycle_unions: int
    mixed: int
    # the trivial group's single class is both a tree and a cycle union
    overlap: bool = False

    def key(self) -> tuple[int, int, int, int]:
        return (self.total, self.trees, self.cycle_unions, self.mixed)

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "trees": self.trees,
            "cycle_unions": self.cycle_unions,
            "mixed": self.mixed,
        }


def _counts(total: int, trees: int, cycle_unions: int) -> CensusCounts:
    overlap = trees + cycle_unions > total
    return CensusCounts(total, trees, cycle_unions, max(0, total - trees - cycle_unions), overlap)


def prime_power_count(p: int, k: int) -> CensusCounts:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if p != 2:
        t = tau(p - 1)
        return CensusCounts(k * (t + 1), k, k * t, 0)
    if k <= 2:
        return CensusCounts(2 * k, k, k, 0)
    return CensusCounts(3 * k - 3, k, 2 * k - 3, 0)


def two_power_factor(k: int) -> int:
    """Total-count factor for the 2-part 2**k: max(2**(k*[k<=2]), 3k-3)."""
    delta = 1 if k <= 2 else 0
    return max(2 ** (k * delta), 3 * k - 3)


def formula_count(n: int) -> CensusCounts:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    odd = [(p, e) for p, e in factorize(n) if p != 2]
    k = (n & -n).bit_length() - 1
    total = two_power_factor(k)
    trees = max(1, k)
    cycle_unions = max(1, k, 2 * k - 3)
    for p, e in odd:
        total *= e * (tau(p - 1) + 1)
        trees *= e
        cycle_unions *= e * tau(p - 1)
    return _counts(total, trees, cycle_unions)


def nilpotent_behavior(p: int, l: int, k: int) -> tuple[int, ...]:
    """Identity procreation behavior of x -> p**l * x on Z/p**k."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got l={l}, k={k}")
    q, r = divmod(k, l)
    return trim((p**l,) * q + ((p**r,) if r else ()))


def automorphism_cycle_multiset(p: int, k: int, a: int) -> tuple[tuple[int, int], ...]:
    """Cycle multiset of x -> a*x on Z/p**k for a unit a.

    The elements of additive order p**m all lie on cycles whose length is
    the multiplicative order of a modulo p**m.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if a % p == 0:
        raise ValueError(f"{a} is not a unit modulo {p}**{k}")
    counts: dict[int, int] = {}
    for m in range(k + 1):
        mod = p**m
        length = multiplicative_order(a, mod)
        points = euler_phi(mod)
        counts[length] = counts.get(length, 0) + points // length
    return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class CensusClass:
    rep: int
    invariant: CanonicalInvariant
    size: int

    @property
    def is_tree(self) -> bool:
        return self.invariant.cycles == ((1, 1),)

    @property
    def is_cycle_union(self) -> bool:
        return self.invariant.identity_behavior == ()

    def as_dict(self) -> dict:
        return {"rep": self.rep, **self.invariant.as_dict(), "size": self.size}


@dataclass
class CensusReport:
    n: int
    formula: CensusCounts
    brute_force: CensusCounts | None = None
    classes: list[CensusClass] = field(default_factory=list)

    @property
    def agrees(self) -> bool | None:
        if self.brute_force is None:
            return None
        return self.formula.key() == self.brute_force.key()

    def as_dict(self) -> dict:
        out = {"n": self.n, "formula": self.formula.as_dict(), "overlap": self.formula.overlap}
        if self.brute_force is not None:
            out["bruteForce"] = self.brute_force.as_dict()
            out["agree"] = self.agrees
            out["classes"] = [c.as_dict() for c in self.classes]
        return out


def stretch_invariant(n: int, a: int) -> CanonicalInvariant:
    return canonical_invariant(Fdg(make_cyclic(n), stretch(n, a)))


def _invariants(n: int, values: range) -> list[tuple[int, CanonicalInvariant]]:
    group = make_cyclic(n)
    return [(a, canonical_invariant(Fdg(group, MatrixEndomorphism(group, [[a]])))) for a in values]


def brute_force_census(n: int, jobs: int = 1) -> CensusReport:
    """Canonize every stretch map on Z/nZ and group the results into classes."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if jobs > 1 and n >= 256:
        bounds = [n * i // jobs for i in range(jobs + 1)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = pool.map(_invariants, [n] * jobs, [range(lo, hi) for lo, hi in zip(bounds, bounds[1:])])
            pairs = [pair for part in parts for pair in part]
    else:
        pairs = _invariants(n, range(n))
    classes: dict[CanonicalInvariant, list[int]] = {}
    for a, inv in pairs:
        entry = classes.setdefault(inv, [a, 0])
        entry[0] = min(entry[0], a)
        entry[1] += 1
    found = sorted((CensusClass(rep, inv, size) for inv, (rep, size) in classes.items()), key=lambda c: c.rep)
    trees = sum(c.is_tree for c in found)
    cycle_unions = sum(c.is_cycle_union for c in found)
    return CensusReport(n, formula_count(n), _counts(len(found), trees, cycle_unions), found)


def crt_split_invariant(n: int, a: int) -> list[CanonicalInvariant]:
    """Invariants of the prime-power components of x -> a*x on Z/nZ."""
    return [stretch_invariant(p**e, a % p**e) for p, e in factorize(n)]


def crt_combine(invariants) -> CanonicalInvariant:
    """Invariant of a product of FDGs of pairwise coprime orders."""
    invariants = list(invariants)
    orders = [inv.group_order for inv in invariants]
    for i in range(len(orders)):
        for j in range(i + 1, len(orders)):
            if gcd(orders[i], orders[j]) != 1:
                raise ValueError(f"component orders {orders[i]} and {orders[j]} are not coprime")
    behavior: list[int] = []
    cycles: tuple[tuple[int, int], ...] = ((1, 1),)
    for inv in invariants:
        b = inv.identity_behavior
        width = max(len(behavior), len(b))
        behavior = [
            (behavior[i] if i < len(behavior) else 1) * (b[i] if i < len(b) else 1) for i in range(width)
        ]
        cycles = combine_cycles(cycles, inv.cycles)
    return CanonicalInvariant(trim(behavior), cycles)
