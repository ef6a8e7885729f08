"""Build a nilpotent abelian FDG with a prescribed identity procreation behavior."""

from __future__ import annotations

from typing import Sequence

from .dynamics import Fdg
from .groups import AbelianGroup, GroupError, MatrixEndomorphism


class DivisibilityViolation(GroupError):
    """Adjacent entries (i, i+1) (1-based) with a_{i+1} not dividing a_i."""

    def __init__(self, i: int, chain: Sequence[int]):
        self.i = i
        super().__init__(
            f"DivisibilityViolation({i}): {chain[i]} does not divide {chain[i - 1]}"
        )


def validate_divisor_chain(seq: Sequence[int]) -> tuple[int, ...]:
    """Check that each entry divides its predecessor; drop trailing ones."""
    seq = [int(a) for a in seq]
    for a in seq:
        if a < 1:
            raise GroupError(f"chain entries must be positive, got {a}")
    for i in range(1, len(seq)):
        if seq[i - 1] % seq[i]:
            raise DivisibilityViolation(i, seq)
    while seq and seq[-1] == 1:
        seq.pop()
    return tuple(seq)


def realize(chain: Sequence[int]) -> Fdg:
    """FDG on Z/a_1 x ... x Z/a_n whose k-th kernel is spanned by the first k generators.

    Generator 1 goes to 0 and generator i+1 to (a_i / a_{i+1}) times
    generator i, so the identity's procreation behavior is the chain itself.
    """
    chain = validate_divisor_chain(chain)
    n = len(chain)
    group = AbelianGroup(chain)
    if n == 0:
        return Fdg(group, MatrixEndomorphism(group, [[0]]))
    matrix = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        matrix[i][i + 1] = chain[i] // chain[i + 1]
    return Fdg(group, MatrixEndomorphism(group, matrix))
