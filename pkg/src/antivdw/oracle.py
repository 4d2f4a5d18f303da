"""Brute-force ground truth for small instances.

brute_force_aw walks every set partition of the positions once (restricted
growth strings, one representative per color-permutation class, Bell(n)
leaves) and returns 1 + the largest block count among partitions whose
coloring has no rainbow k-AP.  Rainbow-ness never depends on color names,
so the quotient loses nothing.

By default a prefix that already contains a rainbow k-AP is abandoned
early; every completion would contain it too, so the maximum is unchanged.
Passing prune=False walks all Bell(n) leaves and re-checks each full
coloring with the core full scan, which is the version to audit by eye.
"""

from __future__ import annotations

from typing import Iterator

from .core import Coloring, Structure, has_rainbow_kap, kaps_by_max_slot
from .errors import AwError, LimitExceededError

DEFAULT_AW_LIMIT = 14
DEFAULT_SZ_LIMIT = 30


def iter_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted-growth strings of length n (canonical set partitions)."""
    assign = [1] * n

    def rec(i: int, max_used: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(assign)
            return
        for c in range(1, max_used + 2):
            assign[i] = c
            yield from rec(i + 1, max(max_used, c))

    yield from rec(0, 0)


def count_partitions(n: int) -> int:
    """Number of set partitions of n labeled items (the Bell number)."""
    return sum(1 for _ in iter_partitions(n))


def brute_force_aw(
    s: Structure, k: int, limit: int = DEFAULT_AW_LIMIT, prune: bool = True
) -> int:
    """aw(s,k) by exhaustive partition enumeration; LimitExceeded above `limit`."""
    n = s.n
    if n > limit:
        raise LimitExceededError(f"brute force capped at n={limit}, got {n}")
    if k < 2:
        raise AwError("progression length must be >= 2")
    if n < k:
        return n + 1
    if k == 2:
        return 2

    by_max = kaps_by_max_slot(s.kind, n, k)
    best = 0

    if prune:
        assign = [0] * n

        def rec(i: int, max_used: int) -> None:
            nonlocal best
            if i == n:
                best = max(best, max_used)
                return
            for c in range(1, max_used + 2):
                assign[i] = c
                rainbow = False
                for slots in by_max[i]:
                    seen = 0
                    for q in slots:
                        bit = 1 << assign[q]
                        if seen & bit:
                            break
                        seen |= bit
                    else:
                        rainbow = True
                        break
                if not rainbow:
                    rec(i + 1, max(max_used, c))

        rec(0, 0)
    else:
        for assign_t in iter_partitions(n):
            coloring = Coloring(s, assign_t)
            if not has_rainbow_kap(coloring, k):
                best = max(best, coloring.r)

    return best + 1


def brute_force_sz(n: int, k: int, limit: int = DEFAULT_SZ_LIMIT) -> int:
    """Largest k-AP-free subset of [n] by subset enumeration."""
    if n > limit:
        raise LimitExceededError(f"subset enumeration capped at n={limit}, got {n}")
    if n < 1:
        raise AwError("n must be positive")
    if k < 2:
        raise AwError("progression length must be >= 2")
    if k > n:
        return n

    member = bytearray(n + 1)
    best = 0

    def closes_ap(x: int) -> bool:
        d = 1
        while x - (k - 1) * d >= 1:
            j = 1
            while j < k and member[x - j * d]:
                j += 1
            if j == k:
                return True
            d += 1
        return False

    def rec(pos: int, size: int) -> None:
        nonlocal best
        if pos > n:
            best = max(best, size)
            return
        if not closes_ap(pos):
            member[pos] = 1
            rec(pos + 1, size + 1)
            member[pos] = 0
        rec(pos + 1, size)

    rec(1, 0)
    return best
