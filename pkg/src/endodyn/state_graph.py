"""State spaces of finite dynamical systems as functional graphs.

The state space has an edge ``x -> f(x)``; the dual graph reverses every
edge, so the children of a vertex in the dual are its preimages.  Cycles in
the dual are allowed to be traversed repeatedly, which gives periodic
vertices infinitely many successor generations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np

from .arith import INFINITY
from .dynamics import Fdg, _kernel_masks

INFINITE = INFINITY
_INF = np.iinfo(np.int64).max


class StateSpace:
    """Functional graph given by a successor array, with dual-graph queries."""

    def __init__(self, succ, labels: Sequence[str] | None = None):
        succ = np.asarray(succ, dtype=np.int64)
        if succ.ndim != 1:
            raise ValueError("successor array must be one-dimensional")
        n = len(succ)
        if n and (succ.min() < 0 or succ.max() >= n):
            raise ValueError("successor indices out of range")
        if labels is not None and len(labels) != n:
            raise ValueError("need one label per vertex")
        self.succ = succ
        self.labels = list(labels) if labels is not None else None

    @property
    def size(self) -> int:
        return len(self.succ)

    def __repr__(self) -> str:
        return f"StateSpace(size={self.size})"

    @cached_property
    def _dual(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.succ, kind="stable")
        starts = np.searchsorted(self.succ[order], np.arange(self.size + 1))
        return order, starts

    def children(self, v: int) -> np.ndarray:
        """Preimages of v, i.e. its children in the dual graph."""
        order, starts = self._dual
        return order[starts[v]:starts[v + 1]]

    @cached_property
    def in_degree(self) -> np.ndarray:
        return np.bincount(self.succ, minlength=self.size)

    @cached_property
    def periodic(self) -> np.ndarray:
        """Boolean mask of vertices lying on cycles (the stable image)."""
        cur = np.ones(self.size, dtype=bool)
        while True:
            nxt = np.zeros(self.size, dtype=bool)
            nxt[self.succ[cur]] = True
            if np.array_equal(nxt, cur):
                return cur
            cur = nxt

    @cached_property
    def heights(self) -> np.ndarray:
        h = np.where(self.periodic, 0, -1)
        level = 0
        while (h < 0).any():
            fresh = (h < 0) & (h[self.succ] == level)
            h[fresh] = level + 1
            level += 1
        return h

    @cached_property
    def _generations(self) -> np.ndarray:
        """Longest dual path length from each vertex; ``_INF`` on cycles."""
        h = self.heights
        gen = np.where(self.periodic, _INF, 0)
        for level in range(int(h.max(initial=0)), 1, -1):
            layer = np.flatnonzero(h == level)
            np.maximum.at(gen, self.succ[layer], gen[layer] + 1)
        return gen

    @cached_property
    def max_finite_generation(self) -> int:
        finite = self._generations[~self.periodic]
        return int(finite.max(initial=0))

    def generations(self, v: int):
        g = int(self._generations[v])
        return INFINITE if g == _INF else g

    def procreation_numbers(self, k: int) -> np.ndarray:
        """k-th procreation number of every vertex at once."""
        eligible = self._generations >= k - 1
        return np.bincount(self.succ[eligible], minlength=self.size)

    def tensor(self, other: "StateSpace") -> "StateSpace":
        """Graph tensor product; vertex (i, j) has index ``i * other.size + j``."""
        succ = (self.succ[:, None] * other.size + other.succ[None, :]).ravel()
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = [f"({a},{b})" for a in self.labels for b in other.labels]
        return StateSpace(succ, labels)


def build_state_space(F: Fdg) -> StateSpace:
    labels = [F.group.label(i) for i in range(F.order)]
    return StateSpace(F.succ, labels)


def tensor_product(S1: StateSpace, S2: StateSpace) -> StateSpace:
    return S1.tensor(S2)


def generations(S: StateSpace, v: int):
    """Number of successor generations of v in the dual graph (INFINITE on cycles)."""
    return S.generations(v)


def procreation_behavior(S: StateSpace, v: int, n: int) -> tuple[int, ...]:
    """First n procreation numbers of v; v must have at least n generations."""
    if n < 0:
        raise ValueError("length must be non-negative")
    if S.generations(v) < n:
        raise ValueError(f"vertex {v} has only {S.generations(v)} successor generations, need {n}")
    gen = S._generations
    kids = gen[S.children(v)]
    return tuple(int((kids >= k - 1).sum()) for k in range(1, n + 1))


def trim(seq: Sequence[int]) -> tuple[int, ...]:
    seq = list(seq)
    while seq and seq[-1] == 1:
        seq.pop()
    return tuple(seq)


def root_behavior(S: StateSpace, v: int) -> tuple[int, ...]:
    """Trimmed procreation behavior of a periodic vertex.

    Beyond the deepest finite generation only the periodic child counts, so
    ``max_finite_generation + 2`` terms determine the whole sequence.
    """
    if not S.periodic[v]:
        raise ValueError(f"vertex {v} is not periodic")
    return trim(procreation_behavior(S, v, S.max_finite_generation + 2))


@dataclass(frozen=True)
class RigidityResult:
    ok: bool
    witness: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _rigid_naive(S: StateSpace) -> RigidityResult:
    n_vertices = S.size
    caps = [n_vertices if S.periodic[v] else int(S._generations[v]) for v in range(n_vertices)]
    behaviors = [procreation_behavior(S, v, caps[v]) for v in range(n_vertices)]
    for v in range(n_vertices):
        for w in range(v + 1, n_vertices):
            for n in range(1, min(caps[v], caps[w]) + 1):
                if behaviors[v][:n] != behaviors[w][:n]:
                    return RigidityResult(False, (v, w, n))
    return RigidityResult(True)


def _rigid_bucketed(S: StateSpace) -> RigidityResult:
    # rigid iff for every k the k-th number is constant over {v : gen(v) >= k};
    # past max_finite_generation + 1 only periodic vertices qualify and they
    # all have exactly one periodic child, so larger k add nothing
    gen = S._generations
    last = min(S.size, S.max_finite_generation + 2)
    for k in range(1, last + 1):
        eligible = np.flatnonzero(gen >= k)
        if len(eligible) < 2:
            continue
        values = S.procreation_numbers(k)[eligible]
        bad = np.flatnonzero(values != values[0])
        if len(bad):
            return RigidityResult(False, (int(eligible[0]), int(eligible[bad[0]]), k))
    return RigidityResult(True)


def rigid_procreation_check(S: StateSpace, method: str = "bucketed") -> RigidityResult:
    """Whether all vertices agree on their procreation behaviors of every common length.

    ``method="naive"`` compares every pair of vertices directly;
    ``"bucketed"`` compares each procreation number across the vertices
    that have enough generations.  Both give the same verdict; witnesses
    ``(v, w, n)`` may differ.
    """
    if method == "naive":
        return _rigid_naive(S)
    if method == "bucketed":
        return _rigid_bucketed(S)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class KernelIndexReport:
    behavior: tuple[int, ...]
    kernel_sizes: tuple[int, ...]
    products_ok: bool
    indices_ok: bool
    divisibility_ok: bool

    @property
    def passed(self) -> bool:
        return self.products_ok and self.indices_ok and self.divisibility_ok

    def as_dict(self) -> dict:
        return {
            "behavior": list(self.behavior),
            "kernel_sizes": list(self.kernel_sizes),
            "products_ok": self.products_ok,
            "indices_ok": self.indices_ok,
            "divisibility_ok": self.divisibility_ok,
            "passed": self.passed,
        }


def kernel_index_check(F: Fdg, S: StateSpace | None = None) -> KernelIndexReport:
    """Compare the identity's procreation numbers with the iterated kernel sizes."""
    S = S if S is not None else build_state_space(F)
    sizes = [int(m.sum()) for m in _kernel_masks(F)]
    stab = len(sizes) - 1
    length = max(stab + 1, S.max_finite_generation + 2)
    a = procreation_behavior(S, F.identity, length)
    sizes_ext = sizes + [sizes[-1]] * (length - stab)
    products_ok = True
    indices_ok = True
    running = 1
    for k in range(1, length + 1):
        running *= a[k - 1]
        if running != sizes_ext[k]:
            products_ok = False
        if sizes_ext[k] != a[k - 1] * sizes_ext[k - 1]:
            indices_ok = False
    divisibility_ok = all(a[n] % a[m] == 0 for n in range(length) for m in range(n, length))
    return KernelIndexReport(trim(a), tuple(sizes), products_ok, indices_ok, divisibility_ok)


def cycle_multiset(S: StateSpace) -> tuple[tuple[int, int], ...]:
    """Sorted ``(cycle length, number of cycles)`` pairs."""
    seen = ~S.periodic.copy()
    succ = S.succ
    counts: dict[int, int] = {}
    for v in np.flatnonzero(S.periodic).tolist():
        if seen[v]:
            continue
        length = 0
        w = v
        while not seen[w]:
            seen[w] = True
            w = int(succ[w])
            length += 1
        counts[length] = counts.get(length, 0) + 1
    return tuple(sorted(counts.items()))


@dataclass(frozen=True, order=True)
class CanonicalInvariant:
    """Identity procreation behavior plus cycle multiset of an FDG state space."""

    identity_behavior: tuple[int, ...]
    cycles: tuple[tuple[int, int], ...]

    @property
    def nil_order(self) -> int:
        out = 1
        for a in self.identity_behavior:
            out *= a
        return out

    @property
    def per_order(self) -> int:
        return sum(length * mult for length, mult in self.cycles)

    @property
    def group_order(self) -> int:
        return self.nil_order * self.per_order

    def as_dict(self) -> dict:
        return {"behavior": list(self.identity_behavior), "cycles": [list(c) for c in self.cycles]}


def invariant_of(S: StateSpace, root: int) -> CanonicalInvariant:
    return CanonicalInvariant(root_behavior(S, root), cycle_multiset(S))


def canonical_invariant(F: Fdg, S: StateSpace | None = None) -> CanonicalInvariant:
    S = S if S is not None else StateSpace(F.succ)
    return invariant_of(S, F.identity)


def combine_cycles(c1, c2) -> tuple[tuple[int, int], ...]:
    """Cycle multiset of a product: lengths l1, l2 give gcd(l1, l2) cycles of length lcm."""
    counts: dict[int, int] = {}
    for l1, m1 in c1:
        for l2, m2 in c2:
            g = gcd(l1, l2)
            lcm = l1 * l2 // g
            counts[lcm] = counts.get(lcm, 0) + g * m1 * m2
    return tuple(sorted(counts.items()))


def _encode(parts) -> bytes:
    body = b"".join(parts)
    return len(body).to_bytes(4, "big") + body


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    s = list(seq) * 2
    n = len(seq)
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % n if n else 0


def ahu_canonical_form(S: StateSpace) -> bytes:
    """Canonical byte string; equal exactly for isomorphic functional graphs.

    Trees of transient vertices are encoded bottom-up from sorted child
    codes; each cycle becomes the least rotation of its root codes; the
    graph is the sorted multiset of cycle codes.
    """
    succ, h, periodic = S.succ, S.heights, S.periodic
    pending: list[list[bytes]] = [[] for _ in range(S.size)]
    codes: list[bytes | None] = [None] * S.size
    for level in range(int(h.max(initial=0)), 0, -1):
        for v in np.flatnonzero(h == level).tolist():
            code = _encode(sorted(pending[v]))
            codes[v] = code
            pending[int(succ[v])].append(code)
    roots = np.flatnonzero(periodic).tolist()
    for v in roots:
        codes[v] = _encode(sorted(pending[v]))

    seen = np.zeros(S.size, dtype=bool)
    cycles = []
    for v in roots:
        if seen[v]:
            continue
        ring = []
        w = v
        while not seen[w]:
            seen[w] = True
            ring.append(codes[w])
            w = int(succ[w])
        rank = {c: i for i, c in enumerate(sorted(set(ring)))}
        start = least_rotation([rank[c] for c in ring])
        cycles.append(_encode(ring[start:] + ring[:start]))
    return _encode(sorted(cycles))


def is_isomorphic(S1: StateSpace, S2: StateSpace) -> bool:
    if S1.size != S2.size:
        return False
    return ahu_canonical_form(S1) == ahu_canonical_form(S2)


def to_dot(S: StateSpace, labels: bool = False) -> str:
    """DOT text: one ``x -> y;`` line per vertex in ascending order."""
    lines = ["digraph state_space {"]
    if labels:
        if S.labels is None:
            raise ValueError("state space carries no labels")
        for v, name in enumerate(S.labels):
            escaped = name.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  {v} [label="{escaped}"];')
    lines.extend(f"  {x} -> {y};" for x, y in enumerate(S.succ.tolist()))
    lines.append("}")
    return "\n".join(lines) + "\n"
