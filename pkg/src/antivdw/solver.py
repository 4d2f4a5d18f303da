"""Backtracking search for rainbow-free exact colorings and aw values.

find_rainbow_free answers one decision question: does [n] or Z_n admit an
exact r-coloring with no rainbow k-AP?  Positions are filled in ascending
order; assigning a position intersects the candidate domain of the last
open element of every almost-rainbow k-AP (one uncolored element, k-1
distinct colors on the rest).  Colors are branched in ascending order and
capped at one more than the largest color used so far, so the sequential
search enumerates exactly the lexicographically-minimal representative of
each color-permutation class and the first witness found is the lex-min
one.  In interval mode an all-color-1 prefix is additionally pruned against
cached aw values of shorter intervals; cyclic mode uses only the lex-min,
domain-union and wipeout rules, because a suffix of Z_n is not a copy of a
smaller cyclic group.

compute_aw ascends r from an analytic lower bound until the search space is
exhausted; every witness returned anywhere is re-verified by a full scan
before being trusted.  compute_sz finds the largest k-AP-free subset of [n]
by branch and bound; it feeds the sz-sandwich bounds.

Work may be split across threads at a fixed depth; the kernel releases the
GIL under numba, workers share read-only tables and a first-writer-wins
abort flag, and the aw value is identical for any worker count (only the
returned witness may differ from the sequential lex-min one).
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import bounds as bounds_mod
from ._engine import ABORTED, EXHAUSTED, FOUND, build_tables, search_kernel
from .core import (
    INTERVAL,
    Coloring,
    Structure,
    almost_rainbow_entries,
    has_rainbow_kap,
)
from .errors import AwError, CacheMissError, DomainWipeout, InconclusiveError


@dataclass(frozen=True)
class SearchOptions:
    """Pruning toggles and budgets; defaults reproduce the paper's search."""

    lexmin: bool = True
    union_prune: bool = True
    prefix_prune: bool = True
    wipeout: bool = True
    jobs: int = 1
    split_depth: int = 4
    max_nodes: int | None = None
    timeout: float | None = None


DEFAULT_OPTIONS = SearchOptions()


@dataclass
class SearchResult:
    status: str  # "witness" | "exhausted" | "inconclusive"
    witness: Coloring | None
    nodes: int
    solutions: int = 0


@dataclass
class AwComputation:
    aw: int
    witness: Coloring | None
    nodes: int
    seconds: float
    method: str


# --- reference partial-coloring model --------------------------------------


@dataclass
class PartialColoring:
    """Explicit model of the search state: assignments plus per-position domains.

    This is the readable reference for the propagation rule the array kernel
    inlines.  Positions must be colored in fill order (interval 1..n, cyclic
    0..n-1); domains only ever shrink.
    """

    structure: Structure
    k: int
    r: int
    assign: list[int | None]
    domains: list[set[int]]
    next: int
    max_used: int

    @staticmethod
    def fresh(s: Structure, k: int, r: int) -> "PartialColoring":
        return PartialColoring(
            structure=s,
            k=k,
            r=r,
            assign=[None] * s.n,
            domains=[set(range(1, r + 1)) for _ in range(s.n)],
            next=0,
            max_used=0,
        )

    def candidates(self, lexmin: bool = True) -> list[int]:
        """Colors branchable at the next position, in ascending order."""
        cap = min(self.max_used + 1, self.r) if lexmin else self.r
        return sorted(c for c in self.domains[self.next] if c <= cap)

    def assign_color(self, position: int, color: int) -> None:
        """Color `position` (which must be the next open one) and propagate."""
        slot = self.structure.slot(position)
        if slot != self.next:
            raise AwError("positions must be colored in fill order")
        if color not in self.domains[slot]:
            raise AwError(f"color {color} not in domain of position {position}")
        self.assign[slot] = color
        self.domains[slot] = {color}
        self.next += 1
        self.max_used = max(self.max_used, color)
        propagate(self, position, self.k)


def propagate(pc: PartialColoring, i: int, k: int) -> list[set[int]]:
    """Apply the almost-rainbow domain rule for every k-AP closed off by i.

    For each k-AP whose elements are all colored except one element t, with
    i among them and k-1 distinct colors on the colored part, D(t) shrinks
    to its intersection with those colors.  Raises DomainWipeout when a
    domain empties.  Returns the (mutated) domain list.
    """
    if k != pc.k:
        raise AwError("progression length differs from the partial coloring's")
    s = pc.structure
    slot_i = s.slot(i)
    if pc.assign[slot_i] is None:
        raise AwError(f"position {i} is not colored")
    for rest, target in almost_rainbow_entries(s, k)[slot_i]:
        colors = {pc.assign[q] for q in rest}
        if None in colors or len(colors) != k - 1:
            continue
        dom = pc.domains[target]
        shrunk = dom & colors  # type: ignore[operator]
        if shrunk != dom:
            pc.domains[target] = shrunk
            if not shrunk:
                raise DomainWipeout(s.position(target))
    return pc.domains


# --- search orchestration ---------------------------------------------------


def _tautological_aw(n: int) -> int:
    return n + 1


def _prefix_prune_array(n: int, k: int, r: int, cache, enabled: bool) -> np.ndarray:
    """Depth-indexed prune flags; eager CacheMissError when a value is absent.

    prefix[i] == 1 means: an all-color-1 prefix of length i cannot extend,
    because aw([n-i+1],k) <= r.  Values for lengths below k are the |S|+1
    clamp; longer ones must come from the cache.
    """
    arr = np.zeros(n + 1, dtype=np.int64)
    if not enabled:
        return arr
    for i in range(2, n):
        m = n - i + 1
        if m < k:
            aw_m = m + 1
        else:
            rec = cache.get(INTERVAL, m, k) if cache is not None else None
            if rec is None:
                raise CacheMissError(
                    f"prefix pruning needs aw([{m}],{k}); bootstrap smaller n first"
                )
            aw_m = rec.aw
        if aw_m <= r:
            arr[i] = 1
    return arr


def _verify_witness(s: Structure, k: int, r: int, assign: list[int]) -> Coloring:
    witness = Coloring(s, tuple(assign), r)
    if not witness.is_exact():
        raise AwError("internal error: search produced a non-exact coloring")
    if has_rainbow_kap(witness, k):
        raise AwError("internal error: search witness contains a rainbow k-AP")
    return witness


def _viable_prefixes(
    tables, n: int, k: int, r: int, depth: int, opts: SearchOptions, prefix_arr
) -> list[tuple[int, ...]]:
    """Enumerate assignments of slots 0..depth-1 that survive every prune.

    Mirrors the kernel's branching rules exactly so that the union of the
    dispatched subtrees is the sequential search tree.
    """
    prop_start, prop_tgt, prop_rest = tables
    full = (1 << r) - 1
    out: list[tuple[int, ...]] = []

    def rec(i: int, colors: list[int], dom: list[int], m: int, used: int) -> None:
        if i == depth:
            out.append(tuple(colors))
            return
        cap = min(m + 1, r) if opts.lexmin else r
        cand = dom[i] & ((1 << cap) - 1)
        a = 1
        while cand:
            if cand & 1:
                abit = 1 << (a - 1)
                nd = list(dom)
                nd[i] = abit
                colors.append(a)
                dead = False
                for e in range(prop_start[i], prop_start[i + 1]):
                    amask = 0
                    off = e * (k - 1)
                    for q in range(k - 1):
                        rest_slot = prop_rest[off + q]
                        amask |= 1 << (colors[rest_slot] - 1)
                    if bin(amask).count("1") == k - 1:
                        t = int(prop_tgt[e])
                        nd[t] &= amask
                        if nd[t] == 0 and opts.wipeout:
                            dead = True
                            break
                u2 = used | abit
                m2 = max(m, a)
                if not dead:
                    ni = i + 1
                    union = 0
                    for j in range(n):
                        union |= nd[j]
                    if ni == n:
                        if u2 == full:
                            out.append(tuple(colors))
                    elif opts.union_prune and union != full:
                        pass
                    elif (
                        opts.prefix_prune
                        and ni >= 2
                        and u2 == 1
                        and prefix_arr[ni] == 1
                    ):
                        pass
                    else:
                        rec(ni, colors, nd, m2, u2)
                colors.pop()
            cand >>= 1
            a += 1

    rec(0, [], [full] * n, 0, 0)
    return out


def find_rainbow_free(
    s: Structure,
    k: int,
    r: int,
    cache=None,
    options: SearchOptions = DEFAULT_OPTIONS,
    count_all: bool = False,
) -> SearchResult:
    """Find an exact r-coloring of s with no rainbow k-AP, or prove none exists.

    Interval mode consults `cache` (aw([m],k) for m < n) for prefix pruning;
    passing cache=None disables that rule, passing an incomplete cache raises
    CacheMissError.  With count_all the full tree is walked and `solutions`
    reports the number of lex-min witnesses.
    """
    n = s.n
    if r < 1:
        raise AwError("color count must be >= 1")
    if k < 2:
        raise AwError("progression length must be >= 2")
    if r > n:
        return SearchResult("exhausted", None, 0)
    if r > 62:
        raise AwError("color counts above 62 are not supported")
    if k == 2:
        # any two distinct positions form a 2-AP, so only r=1 avoids rainbows
        if r == 1:
            return SearchResult("witness", Coloring(s, (1,) * n, 1), 0)
        return SearchResult("exhausted", None, 0)

    use_prefix = options.prefix_prune and s.kind == INTERVAL and cache is not None
    prefix_arr = _prefix_prune_array(n, k, r, cache, use_prefix)
    tables = build_tables(s, k)
    prop_start, prop_tgt, prop_rest = tables

    abort = np.zeros(1, dtype=np.int64)
    timer = None
    if options.timeout is not None:
        timer = threading.Timer(options.timeout, lambda: abort.__setitem__(0, 1))
        timer.daemon = True
        timer.start()
    max_nodes = options.max_nodes or 0

    def run(start_depth: int, init: tuple[int, ...]):
        out = np.zeros(n, dtype=np.int64)
        init_arr = np.zeros(max(1, start_depth), dtype=np.int64)
        for idx, col in enumerate(init):
            init_arr[idx] = col
        status, nodes, found = search_kernel(
            n,
            k,
            r,
            prop_start,
            prop_tgt,
            prop_rest,
            1 if options.lexmin else 0,
            1 if options.union_prune else 0,
            1 if use_prefix else 0,
            1 if options.wipeout else 0,
            prefix_arr,
            1 if count_all else 0,
            start_depth,
            init_arr,
            abort,
            max_nodes,
            out,
        )
        return int(status), int(nodes), int(found), out

    try:
        if options.jobs <= 1 or count_all:
            status, nodes, found, out = run(0, ())
            witness = None
            if found > 0:
                witness = _verify_witness(s, k, r, [int(v) for v in out])
            if status == ABORTED:
                return SearchResult("inconclusive", witness, nodes, found)
            if found > 0:
                return SearchResult("witness", witness, nodes, found)
            return SearchResult("exhausted", None, nodes, found)

        depth = min(options.split_depth, n)
        prefixes = _viable_prefixes(tables, n, k, r, depth, options, prefix_arr)
        if not prefixes:
            return SearchResult("exhausted", None, 0)
        total_nodes = 0
        witness_out: list[int] | None = None
        aborted = False
        with ThreadPoolExecutor(max_workers=options.jobs) as pool:
            futures = [pool.submit(run, len(p), p) for p in prefixes]
            for fut in futures:
                status, nodes, found, out = fut.result()
                total_nodes += nodes
                if status == FOUND and witness_out is None:
                    witness_out = [int(v) for v in out]
                    abort[0] = 1  # first witness wins; stop the others
                elif status == ABORTED and witness_out is None:
                    aborted = True
        if witness_out is not None:
            witness = _verify_witness(s, k, r, witness_out)
            return SearchResult("witness", witness, total_nodes)
        if aborted:
            return SearchResult("inconclusive", None, total_nodes)
        return SearchResult("exhausted", None, total_nodes)
    finally:
        if timer is not None:
            timer.cancel()


def compute_aw_detailed(
    s: Structure,
    k: int,
    cache=None,
    options: SearchOptions = DEFAULT_OPTIONS,
    start_r: int | None = None,
) -> AwComputation:
    """aw(s,k) with the certifying witness at aw-1 and search diagnostics.

    Ascends r from the analytic seed (or `start_r`) until exhaustion; the
    threshold is well-defined because a witness at r yields witnesses at all
    smaller r by class merging.
    """
    n = s.n
    t0 = time.perf_counter()
    if n < k:
        witness = Coloring(s, tuple(range(1, n + 1)), n)
        return AwComputation(n + 1, witness, 0, time.perf_counter() - t0, "formula")
    if k == 2:
        witness = Coloring(s, (1,) * n, 1)
        return AwComputation(2, witness, 0, time.perf_counter() - t0, "formula")

    deadline = None
    if options.timeout is not None:
        deadline = time.monotonic() + options.timeout

    def remaining_opts() -> SearchOptions:
        if deadline is None:
            return options
        left = deadline - time.monotonic()
        if left <= 0:
            raise InconclusiveError("time budget exhausted during r-ascent")
        return replace(options, timeout=left)

    r = start_r if start_r is not None else bounds_mod.seed_lower(s, k, cache)
    r = max(1, min(r, n))
    total_nodes = 0
    witness: Coloring | None = None
    while True:
        res = find_rainbow_free(s, k, r, cache=cache, options=remaining_opts())
        total_nodes += res.nodes
        if res.status == "inconclusive":
            raise InconclusiveError(
                f"budget exhausted at r={r} for aw({s},{k})", nodes=total_nodes
            )
        if res.status == "exhausted":
            aw = r
            break
        witness = res.witness
        r += 1
        if r > n + 1:
            raise AwError("internal error: no exhaustion level found")
    if witness is None:
        # exhaustion hit at the seed level; fetch the certifying witness
        res = find_rainbow_free(s, k, aw - 1, cache=cache, options=remaining_opts())
        total_nodes += res.nodes
        if res.status == "inconclusive":
            raise InconclusiveError(
                f"budget exhausted fetching witness at r={aw - 1}", nodes=total_nodes
            )
        if res.witness is None:
            raise AwError(
                f"internal error: no witness at aw-1={aw - 1}; seed bound was wrong"
            )
        witness = res.witness
    return AwComputation(aw, witness, total_nodes, time.perf_counter() - t0, "search")


def compute_aw(
    s: Structure,
    k: int,
    cache=None,
    options: SearchOptions = DEFAULT_OPTIONS,
    start_r: int | None = None,
) -> int:
    """Smallest r such that every exact r-coloring of s has a rainbow k-AP."""
    return compute_aw_detailed(s, k, cache, options, start_r).aw


def count_lexmin_witnesses(
    s: Structure, k: int, r: int, options: SearchOptions = DEFAULT_OPTIONS
) -> int:
    """Number of lex-min rainbow-free exact r-colorings (testing aid)."""
    res = find_rainbow_free(s, k, r, options=options, count_all=True)
    return res.solutions


# --- largest k-AP-free subset ----------------------------------------------


@lru_cache(maxsize=4096)
def _sz_impl(n: int, k: int) -> tuple[int, tuple[int, ...]]:
    best = 0
    best_set: tuple[int, ...] = ()
    chosen: list[int] = []
    member = bytearray(n + 1)

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

    def rec(pos: int) -> None:
        nonlocal best, best_set
        if len(chosen) + (n - pos + 1) <= best:
            return
        if pos > n:
            if len(chosen) > best:
                best = len(chosen)
                best_set = tuple(chosen)
            return
        if not closes_ap(pos):
            chosen.append(pos)
            member[pos] = 1
            rec(pos + 1)
            member[pos] = 0
            chosen.pop()
        rec(pos + 1)

    rec(1)
    return best, best_set


def compute_sz(n: int, k: int) -> int:
    """Largest size of a k-AP-free subset of [n], by branch and bound."""
    if n < 1:
        raise AwError("n must be positive")
    if k < 3:
        raise AwError("compute_sz expects k >= 3")
    if k > n:
        return n
    return _sz_impl(n, k)[0]


def sz_witness(n: int, k: int) -> tuple[int, ...]:
    """One maximum k-AP-free subset of [n] (companion to compute_sz)."""
    if k > n:
        return tuple(range(1, n + 1))
    return _sz_impl(n, k)[1]
