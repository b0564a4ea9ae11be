"""
Enumeration of set partitions as restricted-growth codes.

A code assigns item k a block label a_k with a_0 = 0 and
a_k <= 1 + max(a_0..a_{k-1}), so every unlabeled partition has exactly
one code. Codes are produced in lexicographic order.
"""

from collections.abc import Iterator
from functools import lru_cache


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Number of partitions of n items into exactly k nonempty blocks."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


class PartitionEnumerator:
    """
    Iterates the restricted-growth codes of n items.

    With ``r`` set, only partitions into exactly ``r`` blocks are produced;
    otherwise every partition of the n items.
    """

    def __init__(self, n: int, r: int | None = None):
        if n < 1:
            raise ValueError(f"Need at least one item, got {n}")
        if r is not None and not 1 <= r <= n:
            raise ValueError(f"Block count must be in 1..{n}, got {r}")
        self.n = n
        self.r = r

    def __len__(self) -> int:
        if self.r is not None:
            return stirling2(self.n, self.r)
        return sum(stirling2(self.n, k) for k in range(1, self.n + 1))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        code = [0] * self.n
        yield from self._extend(code, 1, 0)

    def _extend(self, code: list[int], position: int, top: int) -> Iterator[tuple[int, ...]]:
        if position == self.n:
            if self.r is None or top + 1 == self.r:
                yield tuple(code)
            return

        highest = top + 1
        if self.r is not None:
            highest = min(highest, self.r - 1)
            # Leave enough positions to open the remaining blocks
            if self.r - 1 - top > self.n - position:
                return
        for label in range(highest + 1):
            code[position] = label
            yield from self._extend(code, position + 1, max(top, label))
