"""Exact integer machinery shared by the rest of the package.

Everything here works on Python ``int`` and :class:`fractions.Fraction`;
no floating point is used in any decision.  Sylvester numbers are computed
with ``gmpy2`` because the terms double in bit length at every step.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache, reduce

import gmpy2
import numpy as np

__all__ = [
    "BudgetExceeded",
    "SYLVESTER_MAX_INDEX",
    "sylvester",
    "sylvester_mpz",
    "semigroup_member",
    "apery_set",
    "representation_count",
    "floor_log2",
    "exceeds_double_exponential",
    "bound_method",
    "approx",
]

#: Largest Sylvester index served.  s_32 has about 2.9e9 bits (~370 MB).
SYLVESTER_MAX_INDEX = 32

APERY_LIMIT = 10**7
DP_LIMIT = 10**8
BRANCH_LIMIT = 10**6

_INT64_SAFE = 1 << 62


class BudgetExceeded(RuntimeError):
    """Raised when every available strategy would exceed its configured limit."""


# ---------------------------------------------------------------------------
# Sylvester's sequence
# ---------------------------------------------------------------------------

_sylvester_terms = [gmpy2.mpz(2)]
_sylvester_lock = threading.Lock()


def sylvester_mpz(m: int) -> gmpy2.mpz:
    """Return ``s_m`` as a ``gmpy2.mpz`` (memoized, thread safe)."""
    if m < 0:
        raise ValueError(f"Sylvester index must be non-negative, got {m}")
    if m > SYLVESTER_MAX_INDEX:
        raise ValueError(f"Sylvester index {m} exceeds cap {SYLVESTER_MAX_INDEX}")
    if m < len(_sylvester_terms):
        return _sylvester_terms[m]
    with _sylvester_lock:
        while len(_sylvester_terms) <= m:
            s = _sylvester_terms[-1]
            _sylvester_terms.append(s * (s - 1) + 1)
        return _sylvester_terms[m]


@lru_cache(maxsize=None)
def sylvester(m: int) -> int:
    """Return the ``m``-th term of Sylvester's sequence.

    ``s_0 = 2`` and ``s_m = s_{m-1}(s_{m-1} - 1) + 1``; equivalently
    ``s_m = s_0 s_1 ... s_{m-1} + 1``.

    >>> [sylvester(m) for m in range(5)]
    [2, 3, 7, 43, 1807]
    """
    return int(sylvester_mpz(m))


# ---------------------------------------------------------------------------
# Numerical semigroup membership
# ---------------------------------------------------------------------------


def _prepare(target: int, generators) -> tuple[int, tuple[int, ...]] | bool:
    """Reduce a membership query; returns a bool when already decided."""
    gens = sorted({int(g) for g in generators})
    if not gens:
        raise ValueError("semigroup generators must be non-empty")
    if gens[0] <= 0:
        raise ValueError(f"semigroup generators must be positive, got {gens}")
    if target < 0:
        return False
    if target == 0:
        return True
    gens = [g for g in gens if g <= target]
    if not gens:
        return False
    g = reduce(math.gcd, gens)
    if target % g:
        return False
    if g > 1:
        target //= g
        gens = [x // g for x in gens]
    if gens[0] == 1 or any(target % x == 0 for x in gens):
        return True
    # drop generators that are themselves combinations of smaller ones is
    # not attempted; duplicates were already removed
    return target, tuple(gens)


def _member_two(target: int, a: int, b: int) -> bool:
    g = math.gcd(a, b)
    if target % g:
        return False
    a, b, target = a // g, b // g, target // g
    if b == 1 or a == 1:
        return True
    x0 = (target * pow(a, -1, b)) % b
    return x0 * a <= target


def _schur_bound(gens: tuple[int, ...]) -> int:
    """Every integer above this is representable (coprime generators)."""
    return (gens[0] - 1) * (gens[-1] - 1) - 1


@lru_cache(maxsize=256)
def apery_set(generators: tuple[int, ...]) -> tuple[int, ...]:
    """Apéry set of the semigroup with respect to its smallest generator.

    Entry ``w[k]`` is the least semigroup element congruent to ``k`` modulo
    ``m = min(generators)``; ``w[k]`` is ``-1`` when the residue class is
    never reached (only possible if the generators share a factor).  The
    table is built by round-robin shortest-path relaxation: for every
    generator each residue cycle is walked once from its minimum, which is
    a running minimum along the cycle.
    """
    gens = tuple(sorted(set(generators)))
    m = gens[0]
    if m * gens[-1] < _INT64_SAFE:
        table = _apery_numpy(m, gens[1:])
    else:
        table = _apery_python(m, gens[1:])
    return tuple(table)


def _apery_numpy(m: int, others: tuple[int, ...]) -> list[int]:
    inf = np.int64(_INT64_SAFE)
    w = np.full(m, inf, dtype=np.int64)
    w[0] = 0
    for a in others:
        step = a % m
        if step == 0:
            continue
        g = math.gcd(step, m)
        length = m // g
        k = np.arange(length, dtype=np.int64)
        idx = (np.arange(g, dtype=np.int64)[:, None] + k[None, :] * step) % m
        vals = w[idx]
        start = vals.argmin(axis=1)
        finite = vals[np.arange(g), start] < inf
        if not finite.any():
            continue
        idx, start = idx[finite], start[finite]
        rows = np.arange(idx.shape[0])[:, None]
        rolled = idx[rows, (start[:, None] + k[None, :]) % length]
        shifted = w[rolled] - k[None, :] * a
        w[rolled] = np.minimum.accumulate(shifted, axis=1) + k[None, :] * a
    return [int(x) if x < inf else -1 for x in w]


def _apery_python(m: int, others: tuple[int, ...]) -> list[int]:
    w: list[int | None] = [None] * m
    w[0] = 0
    for a in others:
        step = a % m
        if step == 0:
            continue
        g = math.gcd(step, m)
        length = m // g
        for p in range(g):
            cycle = [(p + k * step) % m for k in range(length)]
            known = [(w[c], i) for i, c in enumerate(cycle) if w[c] is not None]
            if not known:
                continue
            _, start = min(known)
            cur = w[cycle[start]]
            for k in range(1, length):
                c = cycle[(start + k) % length]
                cur = cur + a
                if w[c] is None or w[c] > cur:
                    w[c] = cur
                else:
                    cur = w[c]
    return [-1 if x is None else x for x in w]


def _member_apery(target: int, gens: tuple[int, ...]) -> bool:
    table = apery_set(gens)
    w = table[target % gens[0]]
    return w >= 0 and target >= w


def _member_dp(target: int, gens: tuple[int, ...]) -> bool:
    # reachable sums as a bitset; each generator is closed under doubling shifts
    mask = (1 << (target + 1)) - 1
    reach = 1
    for g in gens:
        step = g
        while step <= target:
            reach |= (reach << step) & mask
            step <<= 1
    return bool((reach >> target) & 1)


def _branch_cost(target: int, gens: tuple[int, ...]) -> int:
    cost = 1
    for g in gens[2:]:
        cost *= target // g + 1
        if cost > 1 << 62:
            break
    return cost


def _member_branch(target: int, gens: tuple[int, ...]) -> bool:
    """Enumerate multiplicities of the largest generators, then solve a pair."""
    if target < 0:
        return False
    if len(gens) == 1:
        return target % gens[0] == 0
    if len(gens) == 2:
        return _member_two(target, gens[0], gens[1])
    big = gens[-1]
    rest = gens[:-1]
    for c in range(target // big + 1):
        if _member_branch(target - c * big, rest):
            return True
    return False


def semigroup_member(
    target: int,
    generators,
    *,
    strategy: str = "auto",
    apery_limit: int = APERY_LIMIT,
    dp_limit: int = DP_LIMIT,
    branch_limit: int = BRANCH_LIMIT,
) -> bool:
    """Decide whether ``target`` is a non-negative integer combination of ``generators``.

    Parameters
    ----------
    target : int
        Value to test; negative targets are never members.
    generators : iterable of int
        Positive generators (duplicates allowed).
    strategy : {"auto", "apery", "dp", "branch"}
        Force a strategy.  ``"auto"`` applies cheap exact shortcuts (gcd
        reduction, divisibility, the two-generator closed form, the Schur
        bound on the Frobenius number) and then picks the cheapest of the
        Apéry table, branching on large generators, or bitset dynamic
        programming.
    apery_limit, dp_limit, branch_limit : int
        Size limits for the three general strategies.

    Raises
    ------
    BudgetExceeded
        If no strategy fits inside its limit.
    """
    prepared = _prepare(target, generators)
    if isinstance(prepared, bool):
        return prepared
    t, gens = prepared
    if strategy == "apery":
        return _member_apery(t, gens)
    if strategy == "dp":
        return _member_dp(t, gens)
    if strategy == "branch":
        return _member_branch(t, gens)
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")

    if len(gens) == 2:
        return _member_two(t, gens[0], gens[1])
    if t > _schur_bound(gens):
        return True
    options = []
    branch_cost = _branch_cost(t, gens)
    if branch_cost <= branch_limit:
        options.append((branch_cost, _member_branch))
    if gens[0] <= apery_limit:
        options.append((gens[0] * len(gens), _member_apery))
    if t <= dp_limit:
        options.append(((t // 64 + 1) * len(gens) * 8, _member_dp))
    if not options:
        raise BudgetExceeded(
            f"membership of {t} in <{gens}> exceeds apery_limit={apery_limit}, "
            f"dp_limit={dp_limit}, branch_limit={branch_limit}"
        )
    _, method = min(options, key=lambda item: item[0])
    return method(t, gens)


def _count_two(target: int, a: int, b: int) -> int:
    g = math.gcd(a, b)
    if target % g:
        return 0
    a, b, target = a // g, b // g, target // g
    x0 = (target * pow(a, -1, b)) % b if b > 1 else 0
    if x0 * a > target:
        return 0
    return (target - x0 * a) // (a * b) + 1


def representation_count(target: int, generators, cap: int = 2, *, limit: int = BRANCH_LIMIT) -> int:
    """Number of ways to write ``target`` over ``generators``, truncated at ``cap``.

    Generators are taken as a list (repeated values count as distinct
    variables).  Used to decide whether a general polynomial restricted to a
    coordinate stratum has at least two monomials.
    """
    gens = sorted(int(g) for g in generators)
    if target < 0:
        return 0
    if not gens:
        return 1 if target == 0 else 0
    if target == 0:
        return 1
    # two different variables each dividing the target already give two monomials
    dividing = [g for g in gens if target % g == 0]
    if len(dividing) >= 2 and cap <= 2:
        return min(cap, 2)
    work = [0]

    def count(t: int, gs: list[int]) -> int:
        if t == 0:
            return 1
        if len(gs) == 1:
            return 1 if t % gs[0] == 0 else 0
        if len(gs) == 2:
            return min(cap, _count_two(t, gs[0], gs[1]))
        big, rest = gs[-1], gs[:-1]
        total = 0
        for c in range(t // big + 1):
            work[0] += 1
            if work[0] > limit:
                raise BudgetExceeded(f"representation count of {target} over {gens}")
            r = t - c * big
            if r > 0 and not semigroup_member(r, rest):
                continue
            total += count(r, rest)
            if total >= cap:
                return cap
        return total

    return min(cap, count(target, gens))


# ---------------------------------------------------------------------------
# Double exponential bounds
# ---------------------------------------------------------------------------


def floor_log2(x: Fraction | int) -> int:
    """Exact ``floor(log2(x))`` for a positive rational."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    num, den = x.numerator, x.denominator
    k = num.bit_length() - den.bit_length()
    # 2^k <= num/den < 2^(k+1) after at most one correction
    if k >= 0:
        if num < den << k:
            k -= 1
    else:
        if num << -k < den:
            k -= 1
    return k


def bound_method(n: int) -> str:
    """How :func:`exceeds_double_exponential` decides for exponent index ``n``."""
    return "exact" if n % 2 == 0 else "proved-by-bound"


def exceeds_double_exponential(value: Fraction | int, n: int, *, strict: bool = True) -> bool:
    """Check ``value > 2**(2**(n/2))`` (``>=`` when ``strict`` is false).

    For even ``n`` the comparison is exact.  For odd ``n`` the exponent
    ``2**(n/2)`` is irrational and the check is one-sided: with
    ``k = floor(log2(value))`` it returns true when ``k >= 1`` and
    ``k**2 >= 2**n``, which forces ``log2(value) >= k > 2**(n/2)``.  A false
    return for odd ``n`` only means the bound was not proved this way.
    """
    if n < 0:
        raise ValueError(f"exponent index must be non-negative, got {n}")
    value = Fraction(value)
    if value <= 1:
        return False
    if n % 2 == 0:
        threshold = 1 << (1 << (n // 2))
        return value > threshold if strict else value >= threshold
    k = floor_log2(value)
    return k >= 1 and k * k >= 1 << n


def approx(value: Fraction | int, digits: int = 3) -> str:
    """Decimal approximation of an exact rational in scientific notation.

    Display only; works for numbers far outside the float range.
    """
    value = Fraction(value)
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    value = abs(value)
    exp10 = math.floor((floor_log2(value)) * math.log10(2))
    # correct the estimate so that 1 <= mantissa < 10
    while value >= Fraction(10) ** (exp10 + 1):
        exp10 += 1
    while value < Fraction(10) ** exp10:
        exp10 -= 1
    scaled = value / Fraction(10) ** exp10 * 10 ** (digits - 1)
    mant = round(scaled)
    if mant >= 10**digits:
        mant //= 10
        exp10 += 1
    text = str(mant)
    mantissa = text[0] + ("." + text[1:] if digits > 1 else "")
    return f"{sign}{mantissa}e{exp10:+d}"
