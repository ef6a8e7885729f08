"""Finite group carriers and validated endomorphisms.

Every carrier numbers its elements ``0 .. order-1`` and exposes vectorized
``mul``/``inv`` on those indices, so the dynamics layer never needs to know
how elements are represented.  Abelian groups are products of cyclic groups
``Z/m_1 x ... x Z/m_r`` (not forced into invariant-factor normal form);
nonabelian groups come from Cayley tables.
"""

from __future__ import annotations

import itertools
import random
from functools import cached_property
from math import gcd, prod
from typing import Iterator, Sequence

import numpy as np


class GroupError(ValueError):
    """Invalid group or endomorphism data."""


class WellDefinednessViolation(GroupError):
    """Matrix entry (i, j) (1-based) with a_ij * m_j not divisible by m_i."""

    def __init__(self, i: int, j: int, detail: str = ""):
        self.i, self.j = i, j
        super().__init__(f"WellDefinednessViolation({i},{j}){': ' + detail if detail else ''}")


class HomomorphismViolation(GroupError):
    """Element pair (x, y) with f(xy) != f(x)f(y)."""

    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"HomomorphismViolation({x},{y}): f(x*y) != f(x)*f(y)")


class FiniteGroup:
    """Base class for carriers whose elements are the indices 0..order-1."""

    order: int
    identity: int = 0

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def label(self, i: int) -> str:
        return str(i)

    @cached_property
    def is_abelian(self) -> bool:
        idx = np.arange(self.order)
        a, b = np.meshgrid(idx, idx, indexing="ij")
        return bool(np.array_equal(self.mul(a, b), self.mul(b, a)))


class AbelianGroup(FiniteGroup):
    """Direct product of cyclic groups with the given orders.

    Elements are residue tuples; the index of a tuple is its mixed-radix
    value with the last coordinate varying fastest, so for a cyclic group
    the index is the residue itself.
    """

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(m) for m in orders) or (1,)
        if any(m < 1 for m in orders):
            raise GroupError(f"cyclic orders must be positive, got {orders}")
        self.orders = orders
        self.rank = len(orders)
        self.order = prod(orders)
        self.identity = 0
        weights = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            weights[i] = weights[i + 1] * orders[i + 1]
        self._weights = np.array(weights, dtype=np.int64)
        self._moduli = np.array(orders, dtype=np.int64)

    def __repr__(self) -> str:
        return f"AbelianGroup({self.orders})"

    def __eq__(self, other) -> bool:
        return isinstance(other, AbelianGroup) and other.orders == self.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    @cached_property
    def elements(self) -> np.ndarray:
        """(order, rank) array of residue tuples in index order."""
        coords = np.unravel_index(np.arange(self.order), self.orders)
        return np.stack(coords, axis=1).astype(np.int64)

    @property
    def is_abelian(self) -> bool:
        return True

    def encode(self, residues) -> np.ndarray:
        return np.mod(residues, self._moduli) @ self._weights

    def index(self, x: Sequence[int]) -> int:
        x = tuple(x)
        if len(x) != self.rank:
            raise GroupError(f"element {x} does not have {self.rank} coordinates")
        return int(self.encode(np.array(x, dtype=np.int64)))

    def element(self, i: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.elements[i])

    def mul(self, a, b):
        return self.encode(self.elements[a] + self.elements[b])

    def inv(self, a):
        return self.encode(-self.elements[a])

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((xi + yi) % m for xi, yi, m in zip(x, y, self.orders))

    def label(self, i: int) -> str:
        x = self.element(i)
        return str(x[0]) if self.rank == 1 else "(" + ",".join(map(str, x)) + ")"


def make_cyclic(n: int) -> AbelianGroup:
    if n < 1:
        raise GroupError(f"cyclic group order must be positive, got {n}")
    return AbelianGroup((n,))


class TableGroup(FiniteGroup):
    """Group given by a Cayley table of element indices.

    Construction checks the Latin-square property, the identity, and
    associativity over all triples.
    """

    def __init__(self, table, names: Sequence[str] | None = None):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise GroupError("Cayley table entries out of range")
        idx = np.arange(n)
        for r in range(n):
            if len(np.unique(table[r])) != n:
                raise GroupError(f"row {r} of the Cayley table is not a permutation")
            if len(np.unique(table[:, r])) != n:
                raise GroupError(f"column {r} of the Cayley table is not a permutation")
        ids = [e for e in range(n) if np.array_equal(table[e], idx) and np.array_equal(table[:, e], idx)]
        if not ids:
            raise GroupError("Cayley table has no identity element")
        # (ab)c == a(bc) for every triple
        lhs = table[table[:, :, None], idx[None, None, :]]
        rhs = table[idx[:, None, None], table[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, c = (int(v) for v in bad[0])
            raise GroupError(f"Cayley table is not associative at ({a},{b},{c})")
        self.table = table
        self.order = n
        self.identity = ids[0]
        self.inverses = np.array([int(np.flatnonzero(table[a] == self.identity)[0]) for a in range(n)])
        self.names = list(names) if names is not None else None

    def __repr__(self) -> str:
        return f"TableGroup(order={self.order})"

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inverses[a]

    def label(self, i: int) -> str:
        return self.names[i] if self.names else str(i)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = int(self.table[y, x])
            k += 1
        return k

    def center(self) -> list[int]:
        t = self.table
        return [z for z in range(self.order) if np.array_equal(t[z], t[:, z])]


def _closure_table(gens, mul, identity, key=None) -> tuple[list, np.ndarray]:
    """Enumerate the group generated by ``gens`` under ``mul``; identity first."""
    elems = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        elems.extend(nxt)
        frontier = nxt
    elems = [identity] + sorted(elems[1:], key=key)
    pos = {x: i for i, x in enumerate(elems)}
    table = np.array([[pos[mul(x, y)] for y in elems] for x in elems], dtype=np.int64)
    return elems, table


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def _quat_mul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def _quat_name(q) -> str:
    for coef, unit in zip(q, ("1", "i", "j", "k")):
        if coef:
            return ("-" if coef < 0 else "") + unit
    raise AssertionError(q)


def builtin_table_group(name: str) -> TableGroup:
    """One of the small nonabelian groups ``S3``, ``D4`` or ``Q8``."""
    if name == "S3":
        elems, table = _closure_table([(1, 0, 2), (1, 2, 0)], _compose, (0, 1, 2))
        names = ["".join(map(str, p)) for p in elems]
    elif name == "D4":
        # symmetries of a square acting on its corners 0..3
        elems, table = _closure_table([(1, 2, 3, 0), (0, 3, 2, 1)], _compose, (0, 1, 2, 3))
        names = ["".join(map(str, p)) for p in elems]
    elif name == "Q8":
        gens = [(0, 1, 0, 0), (0, 0, 1, 0)]
        elems, table = _closure_table(gens, _quat_mul, (1, 0, 0, 0), key=lambda q: (_quat_name(q)[-1], _quat_name(q)[0] == "-"))
        names = [_quat_name(q) for q in elems]
    else:
        raise GroupError(f"unknown builtin group {name!r}; expected S3, D4 or Q8")
    return TableGroup(table, names)


class Subgroup(FiniteGroup):
    """Subset of a parent group that is closed under its operation.

    Closure is the caller's responsibility; the dynamics layer verifies it
    before building restrictions.
    """

    def __init__(self, parent: FiniteGroup, members):
        members = np.unique(np.asarray(list(members), dtype=np.int64))
        self.parent = parent
        self.members = members
        self.order = len(members)
        self._local = np.full(parent.order, -1, dtype=np.int64)
        self._local[members] = np.arange(self.order)
        self.identity = int(self._local[parent.identity])
        if self.identity < 0:
            raise GroupError("subgroup must contain the identity")

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"

    def local(self, parent_indices):
        out = self._local[parent_indices]
        if np.any(out < 0):
            raise GroupError("element lies outside the subgroup")
        return out

    def mul(self, a, b):
        return self.local(self.parent.mul(self.members[a], self.members[b]))

    def inv(self, a):
        return self.local(self.parent.inv(self.members[a]))

    def label(self, i: int) -> str:
        return self.parent.label(int(self.members[i]))


class DirectProduct(FiniteGroup):
    """Direct product of two carriers; index ``i * |right| + j``."""

    def __init__(self, left: FiniteGroup, right: FiniteGroup):
        self.left, self.right = left, right
        self.order = left.order * right.order
        self.identity = left.identity * right.order + right.identity

    def __repr__(self) -> str:
        return f"DirectProduct({self.left!r}, {self.right!r})"

    def split(self, a):
        return np.divmod(a, self.right.order)

    def mul(self, a, b):
        a1, a2 = self.split(a)
        b1, b2 = self.split(b)
        return self.left.mul(a1, b1) * self.right.order + self.right.mul(a2, b2)

    def inv(self, a):
        a1, a2 = self.split(a)
        return self.left.inv(a1) * self.right.order + self.right.inv(a2)

    def label(self, i: int) -> str:
        a1, a2 = divmod(i, self.right.order)
        return f"({self.left.label(a1)},{self.right.label(a2)})"


def product_table_group(g1: TableGroup, g2: TableGroup) -> TableGroup:
    n2 = g2.order
    t = g1.table[:, None, :, None] * n2 + g2.table[None, :, None, :]
    table = t.reshape(g1.order * n2, g1.order * n2)
    names = [f"({g1.label(a)},{g2.label(b)})" for a in range(g1.order) for b in range(n2)]
    return TableGroup(table, names)


class Endomorphism:
    """An endomorphism given by its action on element indices."""

    group: FiniteGroup

    @property
    def images(self) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, i: int) -> int:
        return int(self.images[i])


class MatrixEndomorphism(Endomorphism):
    """Endomorphism of an AbelianGroup given by an integer matrix.

    Column j holds the image of the j-th canonical generator, so
    ``y_i = sum_j a_ij x_j mod m_i``.  The entry a_ij must satisfy
    ``a_ij * m_j == 0 (mod m_i)`` for the map to be well defined.
    """

    def __init__(self, group: AbelianGroup, matrix):
        rows = [list(map(int, row)) for row in matrix]
        r = group.rank
        if len(rows) != r or any(len(row) != r for row in rows):
            raise GroupError(f"matrix must be {r}x{r} for {group!r}")
        m = group.orders
        for i in range(r):
            for j in range(r):
                if rows[i][j] * m[j] % m[i]:
                    raise WellDefinednessViolation(
                        i + 1, j + 1, f"{rows[i][j]}*{m[j]} is not 0 mod {m[i]}"
                    )
        self.group = group
        self.matrix = np.array([[rows[i][j] % m[i] for j in range(r)] for i in range(r)], dtype=np.int64)

    def __repr__(self) -> str:
        return f"MatrixEndomorphism({self.group.orders}, {self.matrix.tolist()})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixEndomorphism)
            and other.group == self.group
            and np.array_equal(other.matrix, self.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.group, self.matrix.tobytes()))

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        x = tuple(x)
        if len(x) != self.group.rank:
            raise GroupError(f"element {x} does not match rank {self.group.rank}")
        y = self.matrix @ np.array(x, dtype=np.int64)
        return tuple(int(v) for v in np.mod(y, self.group._moduli))

    @cached_property
    def images(self) -> np.ndarray:
        return self.group.encode(self.group.elements @ self.matrix.T)

    def compose(self, other: "MatrixEndomorphism") -> "MatrixEndomorphism":
        """Matrix of ``self o other`` (apply other first)."""
        if other.group != self.group:
            raise GroupError("cannot compose endomorphisms of different groups")
        return MatrixEndomorphism(self.group, (self.matrix @ other.matrix).tolist())


def stretch(n: int, a: int) -> MatrixEndomorphism:
    """The map x -> a*x on Z/nZ."""
    return MatrixEndomorphism(make_cyclic(n), [[a % n]])


def make_matrix_endomorphism(group: AbelianGroup, entries) -> MatrixEndomorphism:
    return MatrixEndomorphism(group, entries)


def apply(phi: MatrixEndomorphism, x: Sequence[int]) -> tuple[int, ...]:
    return phi.apply(x)


def homomorphism_violation(group: FiniteGroup, images: np.ndarray) -> tuple[int, int] | None:
    """First pair (x, y) with f(xy) != f(x)f(y), or None."""
    idx = np.arange(group.order)
    a, b = np.meshgrid(idx, idx, indexing="ij")
    bad = np.argwhere(images[group.mul(a, b)] != group.mul(images[a], images[b]))
    if len(bad):
        return int(bad[0][0]), int(bad[0][1])
    return None


class TableEndomorphism(Endomorphism):
    """Endomorphism of a TableGroup given by its image array, checked on all pairs."""

    def __init__(self, group: TableGroup, images):
        images = np.asarray(images, dtype=np.int64)
        if images.shape != (group.order,):
            raise GroupError(f"image array must have length {group.order}")
        if images.min() < 0 or images.max() >= group.order:
            raise GroupError("image indices out of range")
        bad = homomorphism_violation(group, images)
        if bad is not None:
            raise HomomorphismViolation(*bad)
        self.group = group
        self._images = images

    def __repr__(self) -> str:
        return f"TableEndomorphism({self._images.tolist()})"

    @property
    def images(self) -> np.ndarray:
        return self._images


def make_table_endomorphism(group: TableGroup, images) -> TableEndomorphism:
    return TableEndomorphism(group, images)


class InducedEndomorphism(Endomorphism):
    """Map on a derived carrier (restriction or product) inherited from validated parts.

    Not re-validated: it is a homomorphism whenever its sources are.
    """

    def __init__(self, group: FiniteGroup, images):
        self.group = group
        self._images = np.asarray(images, dtype=np.int64)

    @property
    def images(self) -> np.ndarray:
        return self._images


def _entry_steps(orders: Sequence[int]) -> list[tuple[int, int]]:
    """(step, count) per matrix entry: valid a_ij are the multiples of m_i/gcd(m_i, m_j)."""
    steps = []
    for mi in orders:
        for mj in orders:
            g = gcd(mi, mj)
            steps.append((mi // g, g))
    return steps


def count_endomorphisms(group: AbelianGroup) -> int:
    return prod(count for _, count in _entry_steps(group.orders))


def enumerate_endomorphisms(group: AbelianGroup, budget: int, seed: int = 0) -> Iterator[MatrixEndomorphism]:
    """All endomorphisms if there are at most ``budget``, else ``budget`` distinct random ones."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    steps = _entry_steps(group.orders)
    r = group.rank
    total = prod(count for _, count in steps)

    def build(choice):
        flat = [t * step for t, (step, _) in zip(choice, steps)]
        return MatrixEndomorphism(group, [flat[i * r:(i + 1) * r] for i in range(r)])

    if total <= budget:
        for choice in itertools.product(*(range(count) for _, count in steps)):
            yield build(choice)
        return
    rng = random.Random(seed)
    for code in rng.sample(range(total), budget):
        choice = []
        for _, count in reversed(steps):
            code, t = divmod(code, count)
            choice.append(t)
        yield build(choice[::-1])


def _generating_set(group: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {group.identity}
    for x in range(group.order):
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = int(group.mul(y, g))
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
    return gens


def enumerate_table_endomorphisms(group: TableGroup) -> Iterator[TableEndomorphism]:
    """Every endomorphism of a small table group, found by assigning generator images."""
    gens = _generating_set(group)
    # words: express each element as (parent element, generator) reached by BFS
    parent: dict[int, tuple[int, int]] = {}
    order = [group.identity]
    seen = {group.identity}
    for y in order:
        for k, g in enumerate(gens):
            z = int(group.mul(y, g))
            if z not in seen:
                seen.add(z)
                parent[z] = (y, k)
                order.append(z)
    for targets in itertools.product(range(group.order), repeat=len(gens)):
        images = np.zeros(group.order, dtype=np.int64)
        images[group.identity] = group.identity
        for z in order[1:]:
            y, k = parent[z]
            images[z] = group.mul(images[y], targets[k])
        if homomorphism_violation(group, images) is None:
            yield TableEndomorphism(group, images)
