"""Explicit colorings and progression-free sets that certify lower bounds.

A digit-sphere set takes vectors x in {0..d-1}^m with ||x||^2 = l and reads
them as base-(2d-1) integers; carries never occur when two such vectors are
added, so a 3-AP of set members would force collinear equal-norm vectors.
These sets contain no 3-AP and no punctured 4-AP (a 3-element subset of a
4-AP), which is exactly what the rainbow-free witnesses here need: coloring
the set rainbow and everything else a single extra color kills every
rainbow 4-AP, in [n] directly and in Z_n when the set sits inside a short
enough prefix of the residues.

Every constructor re-verifies its output with the full-scan checks from
core before returning it; nothing here asserts an unverified claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import Coloring, Structure, has_rainbow_kap
from .errors import AwError, PreconditionError, WidthOverflowError

_WIDTH_LIMIT = 2**63 - 1
_VALIDATE_LIMIT = 2000  # construction-time set checks up to this span
DEFAULT_CDIV = Fraction(16, 5)


@dataclass(frozen=True)
class BehrendParams:
    m: int
    d: int
    ell: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.d < 2:
            raise AwError("digit-sphere sets need m >= 1 and d >= 2")
        if not 0 <= self.ell <= self.m * (self.d - 1) ** 2:
            raise AwError("squared norm outside the reachable range")

    def base(self) -> int:
        return 2 * self.d - 1

    def span(self) -> int:
        return self.base() ** self.m


@dataclass(frozen=True)
class BehrendSet:
    """Digit-sphere set; `values` = raw + shift, raw values in {0..span-1}.

    The raw set is used as-is for prefixes of Z_n and shifted by +1 for [n];
    both AP-freeness properties are translation invariant.
    """

    params: BehrendParams
    values: tuple[int, ...]
    shift: int = 0


def has_3ap(values) -> bool:
    """Exhaustive 3-AP check over all pairs of set members."""
    s = set(values)
    ordered = sorted(s)
    for i, x in enumerate(ordered):
        for z in ordered[i + 1 :]:
            if (x + z) % 2 == 0 and (x + z) // 2 in s:
                return True
    return False


def has_punctured_4ap(values) -> bool:
    """True iff some 3-element subset of a 4-AP lies in the set.

    A punctured 4-AP missing an interior element has both endpoints, whose
    distance is 3d; a punctured 4-AP that is itself a 3-AP is caught by the
    plain scan, including when its enclosing 4-AP would leave the range.
    """
    if has_3ap(values):
        return True
    s = set(values)
    ordered = sorted(s)
    for i, x in enumerate(ordered):
        for z in ordered[i + 1 :]:
            if (z - x) % 3 == 0:
                d = (z - x) // 3
                if d >= 1 and (x + d in s or x + 2 * d in s):
                    return True
    return False


def behrend_set(params: BehrendParams) -> BehrendSet:
    """The digit-sphere set for (m, d, l), checked AP-free for small spans."""
    if params.span() > _WIDTH_LIMIT:
        raise WidthOverflowError(f"(2d-1)^m = {params.span()} exceeds 63-bit width")
    base = params.base()
    weights = [base**i for i in range(params.m)]
    vals = []
    for x in product(range(params.d), repeat=params.m):
        if sum(c * c for c in x) == params.ell:
            vals.append(sum(c * w for c, w in zip(x, weights)))
    values = tuple(sorted(vals))
    if params.span() <= _VALIDATE_LIMIT:
        if has_3ap(values) or has_punctured_4ap(values):
            raise AwError(f"digit-sphere set {params} failed its AP-free check")
    return BehrendSet(params, values)


def _level_sets(m: int, d: int) -> dict[int, list[int]]:
    base = 2 * d - 1
    weights = [base**i for i in range(m)]
    buckets: dict[int, list[int]] = {}
    for x in product(range(d), repeat=m):
        ell = sum(c * c for c in x)
        buckets.setdefault(ell, []).append(sum(c * w for c, w in zip(x, weights)))
    return buckets


def _best_raw(limit: int, budget: int | None = None) -> BehrendSet:
    """Largest digit-sphere set inside {0..limit-1}.

    Sweeps m ascending then d ascending over all (m,d) with (2d-1)^m <=
    limit and keeps the largest level set; ties prefer smaller m, then d,
    then l.  `budget` caps the total number of vectors enumerated.
    """
    fallback = BehrendSet(BehrendParams(1, 2, 0), (0,) if limit >= 1 else ())
    if limit < 3:
        return fallback
    best = fallback
    spent = 0
    max_m = 2 * max(1, _floor_log(3, limit))
    for m in range(1, max_m + 1):
        if 3**m > limit:
            break
        d = 2
        while (2 * d - 1) ** m <= limit:
            spent += d**m
            if budget is not None and spent > budget:
                return best
            for ell, vals in sorted(_level_sets(m, d).items()):
                if len(vals) > len(best.values):
                    best = BehrendSet(BehrendParams(m, d, ell), tuple(sorted(vals)))
            d += 1
    return best


def _floor_log(base: int, n: int) -> int:
    e = 0
    power = base
    while power <= n:
        e += 1
        power *= base
    return e


def best_behrend_subset(n: int, budget: int | None = None) -> BehrendSet:
    """Largest digit-sphere set shifted by +1 to live inside [n] = {1..n}."""
    if n < 1:
        raise AwError("n must be positive")
    raw = _best_raw(n, budget)
    return BehrendSet(raw.params, tuple(v + 1 for v in raw.values), shift=1)


def best_behrend_prefix_set(n: int, cdiv: Fraction | float | str = DEFAULT_CDIV) -> BehrendSet:
    """Largest digit-sphere set inside the first floor(n/cdiv) residues of Z_n."""
    window = _prefix_window(n, cdiv)
    return _best_raw(window)


def _prefix_window(n: int, cdiv) -> int:
    frac = Fraction(str(cdiv)) if isinstance(cdiv, float) else Fraction(cdiv)
    if frac <= 3:
        raise PreconditionError("the prefix ratio must exceed 3")
    return int(Fraction(n) / frac)


def _distinct_color_witness(s: Structure, members: tuple[int, ...]) -> Coloring:
    """Members get colors 1..|S| in ascending order, the rest one extra color."""
    positions = set(members)
    if len(positions) >= s.n:
        raise PreconditionError("the set must leave room for the extra color")
    color_of = {pos: i + 1 for i, pos in enumerate(sorted(positions))}
    zero = len(positions) + 1
    assign = tuple(
        color_of.get(pos, zero) for pos in s.positions()
    )
    return Coloring(s, assign, zero)


def interval_witness_from_set(n: int, members) -> Coloring:
    """Exact (|S|+1)-coloring of [n] with no rainbow 4-AP, from a punctured-free S."""
    members = tuple(sorted(set(members)))
    if any(not 1 <= v <= n for v in members):
        raise PreconditionError("set members must lie in [1..n]")
    if has_punctured_4ap(members):
        raise PreconditionError("the set contains a punctured 4-AP")
    witness = _distinct_color_witness(Structure.interval(n), members)
    witness.require_exact()
    if n >= 4 and has_rainbow_kap(witness, 4):
        raise AwError("interval witness verification failed")
    return witness


def cyclic_witness_from_set(
    n: int, cdiv: Fraction | float | str = DEFAULT_CDIV
) -> Coloring:
    """Exact coloring of Z_n with no rainbow 4-AP from a short-prefix set.

    The set is the best digit-sphere set inside the first floor(n/cdiv)
    residues; a wrap-around 4-AP with three set members would need steps
    longer than the prefix allows, which is why the ratio must exceed 3.
    """
    window = _prefix_window(n, cdiv)
    raw = _best_raw(window) if window >= 1 else BehrendSet(BehrendParams(1, 2, 0), ())
    members = tuple(v for v in raw.values if v < window)
    witness = _distinct_color_witness(Structure.cyclic(n), members)
    witness.require_exact()
    if n >= 4 and has_rainbow_kap(witness, 4):
        raise AwError("cyclic witness verification failed")
    return witness


def ternary_coloring(m: int) -> Coloring:
    """Exact (m+1)-coloring of [3^m] by 3-adic valuation; no rainbow 3-AP.

    c(x) = m+1-e where 3^e exactly divides x; the top color marks the
    non-multiples of 3 and each valuation level gets its own color.
    """
    if m < 0:
        raise AwError("m must be >= 0")
    n = 3**m
    assign = []
    for x in range(1, n + 1):
        e = 0
        y = x
        while y % 3 == 0:
            y //= 3
            e += 1
        assign.append(m + 1 - e)
    coloring = Coloring(Structure.interval(n), tuple(assign), m + 1)
    coloring.require_exact()
    if has_rainbow_kap(coloring, 3):
        raise AwError("ternary coloring verification failed")
    return coloring


def triple_expansion(c: Coloring, s: int = 0) -> Coloring:
    """Stretch a rainbow-3-AP-free coloring of [n] onto [3n-s], one new color.

    Positions congruent to -s mod 3 inherit the inner coloring at (i+s)/3;
    everything else gets the fresh color.  For s in {-2,-1} the s=0 rule
    colors the two extra trailing positions with the fresh color.
    """
    if s not in (-2, -1, 0, 1, 2):
        raise AwError("the stretch offset must be between -2 and 2")
    st = c.structure
    if st.kind != "interval":
        raise AwError("triple expansion applies to interval colorings")
    n = st.n
    if n < s:
        raise PreconditionError("need n >= s")
    c.require_exact()
    if has_rainbow_kap(c, 3):
        raise PreconditionError("the seed coloring has a rainbow 3-AP")
    q = c.r
    fresh = q + 1
    shift = max(s, 0)
    n2 = 3 * n - s
    assign = []
    for i in range(1, n2 + 1):
        if (i + shift) % 3 == 0:
            assign.append(c.assign[(i + shift) // 3 - 1])
        else:
            assign.append(fresh)
    out = Coloring(Structure.interval(n2), tuple(assign), fresh)
    out.require_exact()
    if has_rainbow_kap(out, 3):
        raise AwError("triple expansion verification failed")
    return out


def near_identity_witness(n: int, k: int) -> Coloring:
    """Exact (n-1)-coloring of [n] without rainbow k-APs, for long k.

    The two middle positions share a color; any k-AP with k above half the
    length consists of consecutive integers and must contain both.
    """
    if n < 2:
        raise AwError("need n >= 2")
    h = (n + 1) // 2
    if k < h + 1:
        raise PreconditionError(f"need k >= {h + 1} for n={n}")
    assign = tuple(i if i <= h else i - 1 for i in range(1, n + 1))
    witness = Coloring(Structure.interval(n), assign, n - 1)
    witness.require_exact()
    if k <= n and has_rainbow_kap(witness, k):
        raise AwError("near-identity witness verification failed")
    return witness


def zn_nminus2_witness(n: int) -> Coloring:
    """Exact (n-2)-coloring of Z_n without rainbow (n-2)-APs, n composite.

    Residues 0, p, 2p (p the smallest prime factor) share one color; an
    (n-2)-AP missing two of them would extend to an n-AP through all of
    Z_n, forcing its difference to be divisible by p and the progression to
    be too short.
    """
    if n < 5:
        raise PreconditionError("need n >= 5")
    p = _smallest_prime_factor(n)
    if p == n:
        raise PreconditionError(f"{n} is prime; the coloring needs a composite n")
    mono = {0, p, 2 * p}
    nxt = 2
    assign = []
    for pos in range(n):
        if pos in mono:
            assign.append(1)
        else:
            assign.append(nxt)
            nxt += 1
    witness = Coloring(Structure.cyclic(n), tuple(assign), n - 2)
    witness.require_exact()
    if has_rainbow_kap(witness, n - 2):
        raise AwError("n-2 cyclic witness verification failed")
    return witness


def _smallest_prime_factor(n: int) -> int:
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return n


def first_occurrence_prefixes(c: Coloring) -> list[int]:
    """b_i = least x with i distinct colors on the first x positions.

    In any rainbow-3-AP-free interval coloring these satisfy b_{i+1} >= 2 b_i:
    otherwise {2 b_i - b_{i+1}, b_i, b_{i+1}} would be rainbow.
    """
    if c.structure.kind != "interval":
        raise AwError("prefix color counts are an interval notion")
    seen: set[int] = set()
    out = []
    for x, col in enumerate(c.assign, start=1):
        if col not in seen:
            seen.add(col)
            out.append(x)
    return out
