"""Ambient sets, arithmetic progressions, colorings, and rainbow checks.

Everything else in the package trusts this module as ground truth: the
solver, the oracle, and every construction re-verify their outputs with the
full-scan checks defined here.

Positions are 1..n for an interval and residues 0..n-1 for a cyclic group.
Color ids are 1-based small integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .errors import AwError, NonDistinctError, OutOfRangeError

INTERVAL = "interval"
CYCLIC = "cyclic"


@dataclass(frozen=True)
class Structure:
    """The ambient set a coloring lives on: the interval [n] or the group Z_n."""

    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in (INTERVAL, CYCLIC):
            raise AwError(f"unknown structure kind {self.kind!r}")
        if self.n < 1:
            raise AwError("structure size must be positive")

    @staticmethod
    def interval(n: int) -> "Structure":
        return Structure(INTERVAL, n)

    @staticmethod
    def cyclic(n: int) -> "Structure":
        return Structure(CYCLIC, n)

    def positions(self) -> range:
        return range(1, self.n + 1) if self.kind == INTERVAL else range(self.n)

    def slot(self, position: int) -> int:
        """0-based fill-order index of a position."""
        return position - 1 if self.kind == INTERVAL else position

    def position(self, slot: int) -> int:
        return slot + 1 if self.kind == INTERVAL else slot

    def __str__(self) -> str:
        return f"[{self.n}]" if self.kind == INTERVAL else f"Z_{self.n}"


@dataclass(frozen=True)
class Progression:
    """A k-AP a, a+d, ..., a+(k-1)d with k distinct members."""

    a: int
    d: int
    k: int
    elems: tuple[int, ...]

    def as_set(self) -> frozenset[int]:
        return frozenset(self.elems)

    def sorted_elems(self) -> tuple[int, ...]:
        return tuple(sorted(self.elems))


def elements(a: int, d: int, k: int, s: Structure) -> tuple[int, ...]:
    """Positions of the k-AP starting at a with difference d, in order.

    Raises NonDistinctError when the cyclic progression would repeat an
    element, OutOfRangeError when the interval progression leaves [1..n].
    """
    if d < 1:
        raise AwError("common difference must be >= 1")
    if k < 2:
        raise AwError("progression length must be >= 2")
    n = s.n
    if s.kind == INTERVAL:
        if a < 1 or a + (k - 1) * d > n:
            raise OutOfRangeError(f"{a}+{k - 1}*{d} leaves [1..{n}]")
        return tuple(a + i * d for i in range(k))
    # distinctness in Z_n holds iff the orbit of d is long enough
    if n // math.gcd(d, n) < k:
        raise NonDistinctError(f"{k}-AP with d={d} repeats in Z_{n}")
    return tuple((a + i * d) % n for i in range(k))


def progression(a: int, d: int, k: int, s: Structure) -> Progression:
    return Progression(a, d, k, elements(a, d, k, s))


def _interval_kap_count(n: int, k: int) -> int:
    """Closed form for the number of k-APs in [n]: sum_d max(0, n-(k-1)d)."""
    total = 0
    d = 1
    while n - (k - 1) * d > 0:
        total += n - (k - 1) * d
        d += 1
    return total


@lru_cache(maxsize=256)
def _enumerate_kaps_cached(kind: str, n: int, k: int) -> tuple[Progression, ...]:
    s = Structure(kind, n)
    seen: dict[tuple[int, ...], Progression] = {}
    if kind == INTERVAL:
        d = 1
        while (k - 1) * d <= n - 1:
            for a in range(1, n - (k - 1) * d + 1):
                p = progression(a, d, k, s)
                seen.setdefault(p.sorted_elems(), p)
            d += 1
    else:
        for d in range(1, n):
            if n // math.gcd(d, n) < k:
                continue
            for a in range(n):
                p = progression(a, d, k, s)
                key = p.sorted_elems()
                if key not in seen:
                    seen[key] = p
    return tuple(seen[key] for key in sorted(seen))


def enumerate_kaps(s: Structure, k: int) -> tuple[Progression, ...]:
    """All k-APs of s, deduplicated as position sets, in a stable order.

    The representative (a,d) kept for each set is the first one found by the
    ascending (d,a) scan; the returned tuple is sorted by element set.
    """
    if k < 2:
        raise AwError("progression length must be >= 2")
    return _enumerate_kaps_cached(s.kind, s.n, k)


@dataclass(frozen=True)
class Coloring:
    """A total assignment of color ids 1..r to the positions of a structure.

    `assign` is indexed by fill order (slot), i.e. assign[s.slot(pos)] is the
    color of `pos`.  Exactness (surjectivity onto 1..r) is a checked
    refinement, not a construction invariant: use is_exact()/require_exact().
    """

    structure: Structure
    assign: tuple[int, ...]
    r: int = field(default=0)

    def __post_init__(self) -> None:
        if len(self.assign) != self.structure.n:
            raise AwError("coloring length differs from structure size")
        if self.r == 0:
            object.__setattr__(self, "r", max(self.assign, default=0))
        for c in self.assign:
            if not 1 <= c <= self.r:
                raise AwError(f"color {c} outside 1..{self.r}")

    def color_of(self, position: int) -> int:
        return self.assign[self.structure.slot(position)]

    def used_colors(self) -> set[int]:
        return set(self.assign)

    def is_exact(self) -> bool:
        return self.used_colors() == set(range(1, self.r + 1))

    def require_exact(self) -> "Coloring":
        if not self.is_exact():
            raise AwError(f"coloring is not an exact {self.r}-coloring")
        return self

    def color_classes(self) -> dict[int, list[int]]:
        classes: dict[int, list[int]] = {c: [] for c in range(1, self.r + 1)}
        for pos in self.structure.positions():
            classes[self.color_of(pos)].append(pos)
        return classes

    def singleton_colors(self) -> list[int]:
        return [c for c, cls in self.color_classes().items() if len(cls) == 1]


def is_rainbow(c: Coloring, p: Progression) -> bool:
    """True iff the colors on p's elements are pairwise distinct."""
    return len({c.color_of(pos) for pos in p.elems}) == p.k


def find_rainbow_kap(c: Coloring, k: int) -> Progression | None:
    """First rainbow k-AP in ascending (d,a) scan order, or None.

    Streams over (a,d) pairs without deduplication; existence does not
    depend on enumeration order, only the reported representative does.
    """
    s = c.structure
    n = s.n
    if k > n or k < 2:
        return None
    if s.kind == INTERVAL:
        d = 1
        while (k - 1) * d <= n - 1:
            for a in range(1, n - (k - 1) * d + 1):
                seen: set[int] = set()
                for i in range(k):
                    col = c.assign[a - 1 + i * d]
                    if col in seen:
                        break
                    seen.add(col)
                else:
                    return progression(a, d, k, s)
            d += 1
        return None
    for d in range(1, n):
        if n // math.gcd(d, n) < k:
            continue
        for a in range(n):
            seen = set()
            for i in range(k):
                col = c.assign[(a + i * d) % n]
                if col in seen:
                    break
                seen.add(col)
            else:
                return progression(a, d, k, s)
    return None


def has_rainbow_kap(c: Coloring, k: int) -> bool:
    return find_rainbow_kap(c, k) is not None


def merge_top_colors(c: Coloring) -> Coloring:
    """Merge color classes r-1 and r into one, yielding an exact (r-1)-coloring.

    Merging classes of a rainbow-free coloring keeps it rainbow-free, which
    is why a witness at r certifies witnesses at every smaller color count.
    """
    if c.r < 2:
        raise AwError("need at least two colors to merge")
    new = tuple(min(col, c.r - 1) for col in c.assign)
    return Coloring(c.structure, new, c.r - 1)


@lru_cache(maxsize=256)
def _incidence_cached(kind: str, n: int, k: int) -> tuple[tuple[int, ...], ...]:
    s = Structure(kind, n)
    incidence: list[list[int]] = [[] for _ in range(n)]
    for ap_id, p in enumerate(enumerate_kaps(s, k)):
        for pos in p.elems:
            incidence[s.slot(pos)].append(ap_id)
    return tuple(tuple(v) for v in incidence)


def ap_incidence(s: Structure, k: int) -> tuple[tuple[int, ...], ...]:
    """Per-slot list of AP ids (indices into enumerate_kaps) containing it."""
    return _incidence_cached(s.kind, s.n, k)


@lru_cache(maxsize=256)
def kaps_by_max_slot(kind: str, n: int, k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """For each slot j: the slot-tuples of all k-APs whose largest slot is j."""
    s = Structure(kind, n)
    buckets: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for p in enumerate_kaps(s, k):
        slots = tuple(sorted(s.slot(pos) for pos in p.elems))
        buckets[slots[-1]].append(slots)
    return tuple(tuple(b) for b in buckets)


@lru_cache(maxsize=256)
def _almost_rainbow_entries_cached(kind: str, n: int, k: int):
    per_slot: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(n)]
    for j in range(n):
        for slots in kaps_by_max_slot(kind, n, k)[j]:
            rest = slots[:-1]
            per_slot[rest[-1]].append((rest, slots[-1]))
    return tuple(tuple(v) for v in per_slot)


def almost_rainbow_entries(s: Structure, k: int):
    """Propagation entries keyed by second-largest slot.

    Entry (rest, target): when the second-largest slot of a k-AP is colored,
    every slot in `rest` is colored; if their colors are k-1 distinct values
    the AP is almost-rainbow and constrains the target's domain.
    """
    return _almost_rainbow_entries_cached(s.kind, s.n, k)


# --- coloring text format -------------------------------------------------
#
# First line: `structure=<interval|cyclic> n=<n> r=<r>`
# Then one coloring per line, whitespace-separated color ids in position order.


def format_colorings(colorings: list[Coloring]) -> str:
    if not colorings:
        raise AwError("nothing to format")
    first = colorings[0]
    for c in colorings[1:]:
        if c.structure != first.structure or c.r != first.r:
            raise AwError("all colorings in one file must share structure and r")
    lines = [f"structure={first.structure.kind} n={first.structure.n} r={first.r}"]
    lines.extend(" ".join(str(col) for col in c.assign) for c in colorings)
    return "\n".join(lines) + "\n"


def parse_colorings(text: str) -> list[Coloring]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise AwError("empty coloring file")
    header: dict[str, str] = {}
    for tok in lines[0].split():
        if "=" not in tok:
            raise AwError(f"malformed header token {tok!r}")
        key, val = tok.split("=", 1)
        header[key] = val
    try:
        s = Structure(header["structure"], int(header["n"]))
        r = int(header["r"])
    except (KeyError, ValueError) as exc:
        raise AwError(f"malformed coloring header: {lines[0]!r}") from exc
    out = []
    for ln in lines[1:]:
        try:
            assign = tuple(int(tok) for tok in ln.split())
        except ValueError as exc:
            raise AwError(f"malformed coloring line: {ln!r}") from exc
        out.append(Coloring(s, assign, r))
    if not out:
        raise AwError("coloring file has a header but no colorings")
    return out


def iter_all_exact_colorings(s: Structure, r: int) -> Iterator[Coloring]:
    """Every exact r-coloring, one representative per color permutation class.

    Enumerates restricted-growth strings; intended for tiny n in tests and
    constructions, not for search.
    """
    n = s.n
    if r > n:
        return
    assign = [0] * n

    def rec(i: int, max_used: int) -> Iterator[Coloring]:
        if i == n:
            if max_used == r:
                yield Coloring(s, tuple(assign), r)
            return
        for c in range(1, min(max_used + 1, r) + 1):
            assign[i] = c
            yield from rec(i + 1, max(max_used, c))

    yield from rec(0, 0)
