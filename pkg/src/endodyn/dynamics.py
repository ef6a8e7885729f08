"""Endomorphisms of finite groups viewed as finite dynamical systems.

A :class:`Fdg` pairs a carrier with one of its endomorphisms.  The nilpotent
part is the union of the iterated kernels, the periodic part the limit of the
image chain; :func:`fitting_check` confirms that the two split the group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import (
    AbelianGroup,
    DirectProduct,
    Endomorphism,
    FiniteGroup,
    GroupError,
    InducedEndomorphism,
    MatrixEndomorphism,
    Subgroup,
    TableEndomorphism,
    TableGroup,
    product_table_group,
)


@dataclass(frozen=True, eq=False)
class Fdg:
    """A finite group together with an endomorphism of it."""

    group: FiniteGroup
    endo: Endomorphism

    def __post_init__(self):
        if self.endo.group is not self.group and self.endo.group != self.group:
            raise GroupError("endomorphism belongs to a different group")

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def identity(self) -> int:
        return self.group.identity

    @cached_property
    def succ(self) -> np.ndarray:
        """Image index of every element."""
        return self.endo.images

    def __repr__(self) -> str:
        return f"Fdg({self.group!r}, {self.endo!r})"


def is_abelian_carrier(group: FiniteGroup) -> bool:
    if isinstance(group, AbelianGroup):
        return True
    if isinstance(group, Subgroup):
        return is_abelian_carrier(group.parent) or group.is_abelian
    if isinstance(group, DirectProduct):
        return is_abelian_carrier(group.left) and is_abelian_carrier(group.right)
    return group.is_abelian


def is_subgroup(group: FiniteGroup, mask: np.ndarray) -> bool:
    """Whether the elements flagged in ``mask`` form a subgroup.

    Builds the span of the subset greedily and fails as soon as the span
    leaves the subset.
    """
    if not mask[group.identity]:
        return False
    target = int(mask.sum())
    span = np.zeros(group.order, dtype=bool)
    span[group.identity] = True
    abelian = is_abelian_carrier(group)
    gens: list[int] = []
    for h in np.flatnonzero(mask):
        if span[h]:
            continue
        gens.append(int(h))
        if abelian:
            # span + <h> by doubling: T_{i+1} = T_i u (T_i + 2^i h)
            step = int(h)
            size = int(span.sum())
            while True:
                moved = group.mul(np.flatnonzero(span), step)
                if not mask[moved].all():
                    return False
                span[moved] = True
                grown = int(span.sum())
                if grown == size:
                    break
                size = grown
                step = int(group.mul(step, step))
        else:
            frontier = np.flatnonzero(span)
            while len(frontier):
                moved = np.concatenate([group.mul(frontier, g) for g in gens])
                if not mask[moved].all():
                    return False
                fresh = np.unique(moved[~span[moved]])
                span[fresh] = True
                frontier = fresh
        if span.sum() == target:
            break
    return int(span.sum()) == target


def _kernel_masks(F: Fdg) -> list[np.ndarray]:
    mask = np.zeros(F.order, dtype=bool)
    mask[F.identity] = True
    masks = [mask]
    while True:
        nxt = masks[-1][F.succ]
        if np.array_equal(nxt, masks[-1]):
            return masks
        masks.append(nxt)


def _image_masks(F: Fdg) -> list[np.ndarray]:
    masks = [np.ones(F.order, dtype=bool)]
    while True:
        nxt = np.zeros(F.order, dtype=bool)
        nxt[F.succ[masks[-1]]] = True
        if np.array_equal(nxt, masks[-1]):
            return masks
        masks.append(nxt)


def _as_set(mask: np.ndarray) -> frozenset[int]:
    return frozenset(np.flatnonzero(mask).tolist())


def kernel_chain(F: Fdg, check_closed: bool = True) -> list[frozenset[int]]:
    """Iterated kernels ker^(0) = {1}, ker^(1), ... up to the first repeat."""
    masks = _kernel_masks(F)
    if check_closed:
        for m, mask in enumerate(masks):
            if not is_subgroup(F.group, mask):
                raise AssertionError(f"kernel {m} is not a subgroup")
    return [_as_set(m) for m in masks]


def image_chain(F: Fdg) -> list[frozenset[int]]:
    """Images of the iterates, from the whole group down to the periodic part."""
    return [_as_set(m) for m in _image_masks(F)]


def nil_part(F: Fdg) -> frozenset[int]:
    return _as_set(_kernel_masks(F)[-1])


def per_part(F: Fdg) -> frozenset[int]:
    return _as_set(_image_masks(F)[-1])


@dataclass
class FittingReport:
    nil_order: int
    per_order: int
    stabilization_index_kernel: int
    stabilization_index_image: int
    product_ok: bool
    intersection_trivial: bool
    per_restriction_bijective: bool
    nil_restriction_nilpotent: bool
    parts_are_subgroups: bool = True
    # None when the carrier is abelian and normality is automatic
    nil_normal: bool | None = None

    @property
    def passed(self) -> bool:
        return (
            self.product_ok
            and self.intersection_trivial
            and self.per_restriction_bijective
            and self.nil_restriction_nilpotent
            and self.parts_are_subgroups
            and self.nil_normal is not False
        )

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["passed"] = self.passed
        return d


def fitting_check(F: Fdg, check_normal: bool | None = None) -> FittingReport:
    """Check that nil(phi) and per(phi) split the group as a semidirect product."""
    kmasks = _kernel_masks(F)
    imasks = _image_masks(F)
    nil, per = kmasks[-1], imasks[-1]
    nil_idx, per_idx = np.flatnonzero(nil), np.flatnonzero(per)
    succ = F.succ

    moved = succ[per_idx]
    bijective = bool(per[moved].all()) and len(np.unique(moved)) == len(per_idx)

    y = nil_idx.copy()
    for _ in range(len(nil_idx)):
        if (y == F.identity).all():
            break
        y = succ[y]
    nilpotent = bool((y == F.identity).all())

    both = nil & per
    report = FittingReport(
        nil_order=len(nil_idx),
        per_order=len(per_idx),
        stabilization_index_kernel=len(kmasks) - 1,
        stabilization_index_image=len(imasks) - 1,
        product_ok=len(nil_idx) * len(per_idx) == F.order,
        intersection_trivial=int(both.sum()) == 1 and bool(both[F.identity]),
        per_restriction_bijective=bijective,
        nil_restriction_nilpotent=nilpotent,
        parts_are_subgroups=is_subgroup(F.group, nil) and is_subgroup(F.group, per),
    )
    if check_normal is None:
        check_normal = not is_abelian_carrier(F.group)
    if check_normal:
        report.nil_normal = is_normal(F.group, nil)
    return report


def is_normal(group: FiniteGroup, mask: np.ndarray) -> bool:
    members = np.flatnonzero(mask)
    for g in range(group.order):
        conj = group.mul(group.mul(g, members), group.inv(g))
        if not mask[conj].all():
            return False
    return True


def height(F: Fdg, x: int) -> int:
    """Steps until x reaches a periodic point (0 for periodic x)."""
    per = _image_masks(F)[-1]
    h = 0
    while not per[x]:
        x = int(F.succ[x])
        h += 1
    return h


def period(F: Fdg, x: int) -> int | None:
    """Least n >= 1 with phi^n(x) == x, or None for transient x."""
    per = _image_masks(F)[-1]
    if not per[x]:
        return None
    n, y = 1, int(F.succ[x])
    while y != x:
        y = int(F.succ[y])
        n += 1
    return n


def iterate_map(succ: np.ndarray, n: int) -> np.ndarray:
    """The n-th iterate of an index map, by repeated squaring."""
    result = np.arange(len(succ))
    power = succ
    while n:
        if n & 1:
            result = power[result]
        power = power[power]
        n >>= 1
    return result


def per_n_order(F: Fdg, n: int) -> int:
    """Number of periodic points whose period divides n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    per_idx = np.flatnonzero(_image_masks(F)[-1])
    return int((iterate_map(F.succ, n)[per_idx] == per_idx).sum())


def restrict(F: Fdg, members) -> Fdg:
    """The FDG obtained by restricting to an invariant subgroup."""
    mask = np.zeros(F.order, dtype=bool)
    mask[np.asarray(list(members), dtype=np.int64)] = True
    if not mask[F.succ[mask]].all():
        raise GroupError("subset is not invariant under the endomorphism")
    if not is_subgroup(F.group, mask):
        raise GroupError("subset is not a subgroup")
    sub = Subgroup(F.group, np.flatnonzero(mask))
    return Fdg(sub, InducedEndomorphism(sub, sub.local(F.succ[sub.members])))


def nil_restriction(F: Fdg) -> Fdg:
    return restrict(F, np.flatnonzero(_kernel_masks(F)[-1]))


def per_restriction(F: Fdg) -> Fdg:
    return restrict(F, np.flatnonzero(_image_masks(F)[-1]))


def fds_product(F1: Fdg, F2: Fdg) -> Fdg:
    """Direct product of two FDGs with the componentwise map.

    Abelian carriers give an abelian carrier with a block-diagonal matrix;
    table carriers give the product Cayley table.  Mixing an abelian
    carrier with a table carrier is rejected.  Derived carriers (subgroups,
    earlier products) combine into a :class:`DirectProduct`.
    """
    g1, g2 = F1.group, F2.group
    if isinstance(g1, AbelianGroup) and isinstance(g2, AbelianGroup):
        if not (isinstance(F1.endo, MatrixEndomorphism) and isinstance(F2.endo, MatrixEndomorphism)):
            raise GroupError("abelian product needs matrix endomorphisms")
        r1, r2 = g1.rank, g2.rank
        block = np.zeros((r1 + r2, r1 + r2), dtype=np.int64)
        block[:r1, :r1] = F1.endo.matrix
        block[r1:, r1:] = F2.endo.matrix
        group = AbelianGroup(g1.orders + g2.orders)
        return Fdg(group, MatrixEndomorphism(group, block.tolist()))
    if isinstance(g1, TableGroup) and isinstance(g2, TableGroup):
        group = product_table_group(g1, g2)
        images = (F1.succ[:, None] * g2.order + F2.succ[None, :]).ravel()
        return Fdg(group, TableEndomorphism(group, images))
    if isinstance(g1, (AbelianGroup, TableGroup)) and isinstance(g2, (AbelianGroup, TableGroup)):
        raise GroupError("cannot form the product of an abelian carrier and a table carrier")
    group = DirectProduct(g1, g2)
    images = (F1.succ[:, None] * g2.order + F2.succ[None, :]).ravel()
    return Fdg(group, InducedEndomorphism(group, images))
