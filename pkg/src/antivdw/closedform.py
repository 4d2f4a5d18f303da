"""Closed-form evaluation of aw(Z_n,3) from the prime factorization of n.

For every odd prime p, aw(Z_p,3) is 3 or 4, decided by the multiplicative
order of 2 mod p: it is 3 exactly when 2 generates the whole group or when
(p-1)/2 is odd and equals the order.  Writing f2 for the parity indicator,
f3/f4 for the multiplicities of odd prime factors of each class,

    aw(Z_n,3) = 2 + f2(n) + f3(n) + 2*f4(n).

Primality testing is a deterministic strong-pseudoprime check over a fixed
witness base set proven exact far beyond 64 bits, and composites are split
with Brent's cycle-finding variant of Pollard rho, so inputs like
14582937583067568 factor exactly.

The module also builds a singleton extremal coloring for every n: an exact
(aw-1)-coloring of Z_n with no rainbow 3-AP in which one color appears
exactly once.  Odd primes are peeled one at a time, largest first; each
step blows an inner coloring up into residue class 0 mod s while the other
residue classes inherit the outer prime's coloring minus its singleton
color.  Class-4 prime base cases come from one cyclic solver run at r=3
(every extremal coloring of such Z_p is a singleton coloring, so the first
witness qualifies) and are memoized.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from .core import CYCLIC, Coloring, Structure, has_rainbow_kap
from .errors import AwError, NotCoprimeError

# Strong-pseudoprime witnesses proven deterministic for all n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes ascending."""

    pairs: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def odd_primes_with_multiplicity(self) -> list[int]:
        out: list[int] = []
        for p, e in self.pairs:
            if p != 2:
                out.extend([p] * e)
        return out

    def __str__(self) -> str:
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)


@dataclass(frozen=True)
class FCounts:
    f2: int
    f3: int
    f4: int


@dataclass(frozen=True)
class PrimeClass:
    p: int
    aw_value: int  # 3 or 4
    reason: str  # "generator" | "half-order-odd" | "neither"


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin over the fixed witness bases."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """One nontrivial factor of composite odd n, deterministic parameter scan."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            j = 0
            while j < r and g == 1:
                ys = y
                for _ in range(min(m, r - j)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                j += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AwError(f"factorization failed for {n}")  # unreachable for 64-bit inputs


def factorize(n: int) -> Factorization:
    """Complete factorization, deterministic for 64-bit inputs."""
    if n < 2:
        raise AwError("factorize expects n >= 2")
    counts: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(tuple(sorted(counts.items())))


def mult_order(a: int, m: int) -> int:
    """Least t >= 1 with a^t = 1 (mod m), via the factored group order."""
    if m < 2:
        raise AwError("modulus must be >= 2")
    if math.gcd(a, m) != 1:
        raise NotCoprimeError(f"{a} is not a unit mod {m}")
    phi = 1
    for p, e in factorize(m).pairs:
        phi *= (p - 1) * p ** (e - 1)
    t = phi
    phi_primes = factorize(phi).pairs if phi > 1 else ()
    for p, _ in phi_primes:
        while t % p == 0 and pow(a, t // p, m) == 1:
            t //= p
    return t


_prime_class_memo: dict[int, PrimeClass] = {}
_prime_class_lock = threading.Lock()


def classify_odd_prime(p: int) -> PrimeClass:
    """aw(Z_p,3) for an odd prime p, from the order of 2 mod p.

    The criterion is an if-and-only-if, so the classification is total.
    Results are memoized; concurrent insertion is idempotent.
    """
    cached = _prime_class_memo.get(p)
    if cached is not None:
        return cached
    if p < 3 or not is_prime(p):
        raise AwError(f"{p} is not an odd prime")
    order = mult_order(2, p)
    if order == p - 1:
        result = PrimeClass(p, 3, "generator")
    elif (p - 1) // 2 % 2 == 1 and order == (p - 1) // 2:
        result = PrimeClass(p, 3, "half-order-odd")
    else:
        result = PrimeClass(p, 4, "neither")
    with _prime_class_lock:
        _prime_class_memo.setdefault(p, result)
    return result


def f_counts(n: int) -> FCounts:
    """(f2, f3, f4): parity flag and class-3/class-4 odd prime multiplicities."""
    if n < 2:
        raise AwError("f_counts expects n >= 2")
    f2 = 0 if n % 2 else 1
    f3 = f4 = 0
    for p in factorize(n).odd_primes_with_multiplicity():
        if classify_odd_prime(p).aw_value == 3:
            f3 += 1
        else:
            f4 += 1
    return FCounts(f2, f3, f4)


def aw_zn3(n: int) -> int:
    """aw(Z_n,3) in closed form; n=1 falls back to the |S|+1 convention."""
    if n == 1:
        return 2
    fc = f_counts(n)
    return 2 + fc.f2 + fc.f3 + 2 * fc.f4


# --- singleton extremal colorings -------------------------------------------


def _rotate_singleton_to_zero(assign: list[int], n: int) -> list[int]:
    counts: dict[int, int] = {}
    for c in assign:
        counts[c] = counts.get(c, 0) + 1
    singles = [c for c, cnt in counts.items() if cnt == 1]
    if not singles:
        raise AwError("coloring has no singleton class")
    pos = assign.index(singles[0])
    return [assign[(pos + i) % n] for i in range(n)]


def _relabel_by_first_occurrence(assign: list[int]) -> list[int]:
    mapping: dict[int, int] = {}
    out = []
    for c in assign:
        if c not in mapping:
            mapping[c] = len(mapping) + 1
        out.append(mapping[c])
    return out


@lru_cache(maxsize=None)
def _class4_prime_base(p: int) -> tuple[int, ...]:
    """Singleton extremal 3-coloring of Z_p for a class-4 prime, via search."""
    from .solver import find_rainbow_free

    res = find_rainbow_free(Structure.cyclic(p), 3, 3)
    if res.witness is None:
        raise AwError(f"no rainbow-free exact 3-coloring of Z_{p}; {p} is not class 4")
    assign = _rotate_singleton_to_zero(list(res.witness.assign), p)
    return tuple(_relabel_by_first_occurrence(assign))


def _singleton_assign(n: int) -> list[int]:
    if n & (n - 1) == 0:  # power of two, including n = 2
        return [1] + [2] * (n - 1)
    if is_prime(n):
        if classify_odd_prime(n).aw_value == 3:
            return [1] + [2] * (n - 1)
        return list(_class4_prime_base(n))
    s = max(factorize(n).odd_primes_with_multiplicity())
    t = n // s
    inner = _singleton_assign(t)  # colors 1..qt, singleton at residue 0
    outer = _singleton_assign(s)  # colors 1..qs, singleton at residue 0
    qt = max(inner)
    # outer singleton color is dropped; its other colors move past the inner ids
    shift: dict[int, int] = {}
    for c in outer[1:]:
        if c not in shift:
            shift[c] = qt + len(shift) + 1
    out = [0] * n
    for pos in range(n):
        i = pos % s
        out[pos] = inner[pos // s] if i == 0 else shift[outer[i]]
    return out


def singleton_extremal_coloring(n: int, verify_limit: int = 2000) -> Coloring:
    """Exact (aw(Z_n,3)-1)-coloring of Z_n, rainbow-3-AP-free, one singleton.

    The singleton color sits at residue 0 and color ids follow first
    occurrence.  Output is re-verified by full scan up to verify_limit.
    """
    if n < 2:
        raise AwError("singleton colorings need n >= 2")
    assign = _relabel_by_first_occurrence(_singleton_assign(n))
    coloring = Coloring(Structure.cyclic(n), tuple(assign))
    expected = aw_zn3(n) - 1
    if coloring.r != expected:
        raise AwError(
            f"singleton construction used {coloring.r} colors, expected {expected}"
        )
    coloring.require_exact()
    if not coloring.singleton_colors():
        raise AwError("singleton construction lost its singleton class")
    if n <= verify_limit and has_rainbow_kap(coloring, 3):
        raise AwError("singleton construction produced a rainbow 3-AP")
    return coloring
