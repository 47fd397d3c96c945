"""The eight Sylvester-sequence constructions and a few sporadic examples.

Each problem ``1a`` ... ``4b`` pairs a class of varieties (canonical
Calabi-Yau, terminal Fano, general type, terminal Calabi-Yau) with a goal:
small volume (``a``) or a long run of vanishing spaces of sections
(``b``).  For every admissible dimension ``n`` the generator emits one
hypersurface together with what is expected of it.

Weights grow doubly exponentially.  :func:`generate` materializes a
:class:`FamilyMember` only while the weights fit in
:data:`MATERIALIZE_BIT_CAP` bits; :func:`weight_stream` and
:func:`adjunction_degree` work for every ``n`` up to :data:`GENERATION_CAP`
without holding more than one weight at a time.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import gmpy2

from .exactmath import exceeds_double_exponential, sylvester_mpz
from .geometry import ClassificationReport, Hypersurface, VarietyClass, classify_hypersurface, hyp_volume, section_count
from .singularities import DEFAULT_BUDGET, QuotientSingularity, SingularityClass, normalize

__all__ = [
    "ProblemId",
    "DimensionError",
    "GenerationTooLarge",
    "Bound",
    "FamilyMember",
    "MemberCheck",
    "GENERATION_CAP",
    "MATERIALIZE_BIT_CAP",
    "dimension_range",
    "weight_stream",
    "family_degree",
    "adjunction_degree",
    "generate",
    "check_member",
    "member_report",
    "sporadic_catalog",
    "kollar_pair_volume",
    "product_with_curve",
    "terminal_cy_base_singularity",
]

GENERATION_CAP = 30
MATERIALIZE_BIT_CAP = 1 << 27


class ProblemId(str, enum.Enum):
    P1A = "1a"
    P1B = "1b"
    P2A = "2a"
    P2B = "2b"
    P3A = "3a"
    P3B = "3b"
    P4A = "4a"
    P4B = "4b"

    @property
    def adjunction(self) -> int:
        """``k`` with ``K_X = O_X(k)`` for every member."""
        return {"1": 0, "2": -1, "3": 1, "4": 0}[self.value[0]]

    @property
    def expected_class(self) -> VarietyClass:
        return {
            "1": VarietyClass("CalabiYau"),
            "2": VarietyClass("Fano", 1),
            "3": VarietyClass("GeneralType", 1),
            "4": VarietyClass("CalabiYau"),
        }[self.value[0]]

    @property
    def expected_singularity(self) -> SingularityClass:
        """Terminal everywhere except the canonical Calabi-Yau problems."""
        return SingularityClass.CANONICAL_AT_LEAST if self.value[0] == "1" else SingularityClass.TERMINAL

    @property
    def goal(self) -> str:
        return "MinVolume" if self.value[1] == "a" else "MaxVanishing"


class DimensionError(ValueError):
    """Requested dimension lies outside the family's stated range."""


class GenerationTooLarge(ValueError):
    """Weights too large to materialize; use :func:`weight_stream`."""


# smallest admissible dimension per parity: (odd, even)
_RANGES = {
    ProblemId.P1A: (1, 2),
    ProblemId.P1B: (1, 2),
    ProblemId.P2A: (3, 2),
    ProblemId.P2B: (3, 6),
    ProblemId.P3A: (1, 2),
    ProblemId.P3B: (5, 6),
    ProblemId.P4A: (5, 4),
    ProblemId.P4B: (9, 8),
}

_PARITY_SPLIT = {ProblemId.P2B, ProblemId.P3A, ProblemId.P3B, ProblemId.P4A, ProblemId.P4B}


def dimension_range(p: ProblemId, parity: str | None = None) -> int:
    """Smallest admissible dimension, optionally for one parity branch."""
    odd, even = _RANGES[ProblemId(p)]
    if parity == "odd":
        return odd
    if parity == "even":
        return even
    return min(odd, even)


def _branch(p: ProblemId, n: int) -> str:
    return ("odd" if n % 2 else "even") if p in _PARITY_SPLIT else "all"


def _check_range(p: ProblemId, n: int) -> str:
    branch = _branch(p, n)
    lo = dimension_range(p, "odd" if n % 2 else "even")
    if n < lo:
        where = f"{branch} branch " if branch != "all" else ""
        raise DimensionError(f"family {p.value} {where}needs n >= {lo}, got n = {n}")
    if n > GENERATION_CAP:
        raise DimensionError(f"family {p.value}: n = {n} exceeds the generation cap {GENERATION_CAP}")
    return branch


# ---------------------------------------------------------------------------
# Recipes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """A double exponential bound ``value > 2**(2**(exponent2/2))``.

    ``quantity`` is ``"volume"`` (the value is the reciprocal volume) or
    ``"M"`` (the first non-vanishing degree).  ``strict=False`` means
    ``>=``.
    """

    quantity: str
    exponent2: int
    strict: bool
    statement: str

    def holds(self, value: Fraction | int) -> bool:
        return exceeds_double_exponential(value, self.exponent2, strict=self.strict)


@dataclass(frozen=True)
class _Recipe:
    degree: gmpy2.mpz
    parts: Callable[[], Iterator[tuple[gmpy2.mpz, int]]]
    expected_M: Callable[[], int] | None = None
    expected_volume: Callable[[], Fraction] | None = None
    bound: Bound | None = None


def S(m: int) -> gmpy2.mpz:
    return sylvester_mpz(m)


def _quotients(c, m: int) -> Iterator[gmpy2.mpz]:
    """``c (s_m - 1) / s_j`` for ``j = m-1, ..., 0``.

    Uses ``s_m - 1 = s_0 ... s_{m-1}``: the quotient is ``c (s_j - 1)``
    times the product of the later terms, built up by multiplication so no
    large division is needed.
    """
    U = gmpy2.mpz(c)
    for j in range(m - 1, -1, -1):
        s = S(j)
        yield (s - 1) * U
        U *= s


def _quotient_sum(c, m: int) -> gmpy2.mpz:
    """Sum of the ``m`` weights produced by :func:`_quotients`.

    ``N_k = sum_{j<k} prod_{i<k, i!=j} s_i`` obeys ``N_{k+1} = N_k s_k +
    (s_k - 1)``, and the weights sum to ``c N_m``.  One product per step
    instead of ``m`` full-size quotients.
    """
    N = gmpy2.mpz(0)
    for k in range(m):
        s = S(k)
        N = N * s + (s - 1)
    return gmpy2.mpz(c) * N


class _Block:
    """``m`` weights ``c (s_m - 1) / s_j``; expanded lazily or summed in bulk."""

    def __init__(self, c, m: int):
        self.c, self.m = c, m


def _expand(parts):
    for item in parts:
        if isinstance(item, _Block):
            for w in _quotients(item.c, item.m):
                yield w, 1
        else:
            yield item


def _div(d, q) -> gmpy2.mpz:
    quo, rem = gmpy2.f_divmod(d, q)
    if rem:
        raise ArithmeticError(f"{q} does not divide the degree")
    return quo


def _recipe(p: ProblemId, n: int) -> _Recipe:
    if p is ProblemId.P1A:
        s = S(n)
        c, d = 2 * s - 3, (2 * s - 3) * (s - 1)

        def parts():
            yield _Block(c, n)
            yield s - 1, 1
            yield s - 2, 1

        vol = lambda: Fraction(1, int(c ** (n - 1) * (s - 1) ** (n - 1) * (s - 2)))  # noqa: E731
        bound = Bound("volume", 2 * n, True, "vol < 1/2^(2^n)") if n >= 2 else None
        return _Recipe(d, parts, expected_volume=vol, bound=bound)

    if p is ProblemId.P1B:
        s = S(n - 1)
        c = (3 * s - 4) ** 2
        d = (s - 1) * c

        def parts():
            yield _Block(c, n - 1)
            yield (s - 1) * (3 * s - 4), 1
            yield (s - 1) * (3 * s - 5), 1
            yield 3 * s * s - 9 * s + 7, 1

        bound = Bound("M", 2 * (n - 1), True, "M > 2^(2^(n-1))") if n >= 2 else None
        return _Recipe(d, parts, expected_M=lambda: int(3 * s * s - 9 * s + 7), bound=bound)

    if p is ProblemId.P2A:
        inner = _recipe(ProblemId.P1A, n - 1)
        s = S(n - 1)

        def parts():
            yield from inner.parts()
            yield gmpy2.mpz(1), 1

        vol = lambda: Fraction(1, int((2 * s - 3) ** (n - 2) * (s - 1) ** (n - 2) * (s - 2)))  # noqa: E731
        bound = Bound("volume", 2 * n, True, "vol(-K) < 1/2^(2^n)") if n >= 3 else None
        return _Recipe(inner.degree, parts, expected_volume=vol, bound=bound)

    if p is ProblemId.P2B:
        m = (n - 1) // 2 if n % 2 else (n - 2) // 2
        s = S(m)
        d = (2 * s - 3) * (s - 1)

        def parts():
            if n % 2:
                for j in range(m):
                    yield _div(d, S(j)), 2
            else:
                for j in range(m - 1):
                    yield _div(d, S(j)), 2
                yield _div(d, S(m - 1)), 1
                yield _div(d, 2 * S(m - 1)), 2
            yield 2 * (s - 1), 1
            yield s - 1, 1
            yield s - 2, 1

        e = n - 3 if n % 2 else n - 4
        bound = Bound("M", e, True, f"M > 2^(2^((n-{3 if n % 2 else 4})/2))")
        return _Recipe(2 * d, parts, expected_M=lambda: int(s - 2), bound=bound)

    if p is ProblemId.P3A:
        if n % 2:
            m = (n - 1) // 2
            d = S(m + 1) - 1

            def parts():
                for j in range(m + 1):
                    yield _div(d, S(j)), 2
                yield gmpy2.mpz(1), 1

            vol = lambda: 2 / Fraction(int(d)) ** (2 * m - 1)  # noqa: E731
            bound = Bound("volume", n, True, "vol < 1/2^(2^(n/2))") if n >= 5 else None
        else:
            m = (n - 2) // 2
            s = S(m)
            d = (s - 1) * (2 * s - 1)

            def parts():
                for j in range(m):
                    yield _div(d, S(j)), 2
                yield 2 * (s - 1), 1
                yield s - 1, 2
                yield gmpy2.mpz(1), 1

            vol = lambda: 1 / (Fraction(int(s - 1)) ** (2 * m) * Fraction(int(2 * s - 1)) ** (2 * m - 1))  # noqa: E731
            bound = Bound("volume", n, True, "vol < 1/2^(2^(n/2))") if n >= 4 else None
        return _Recipe(2 * d, parts, expected_volume=vol, bound=bound)

    if p is ProblemId.P3B:
        m = (n - 1) // 2 if n % 2 else (n - 2) // 2
        s, t = S(m), S(m - 1)
        d = (s - 1) * (2 * s - 1)

        def parts():
            if n % 2:
                for j in range(m):
                    yield _div(d, S(j)), 2
            else:
                for j in range(m - 1):
                    yield _div(d, S(j)), 2
                yield _div(d, t), 1
                yield _div(d, 2 * t), 2
            yield 2 * s - 2, 1
            yield t * t, 1
            yield (t - 1) ** 2, 1

        e = n - 3 if n % 2 else n - 4
        bound = Bound("M", e, False, f"M >= 2^(2^((n-{3 if n % 2 else 4})/2))")
        return _Recipe(2 * d, parts, expected_M=lambda: int((t - 1) ** 2), bound=bound)

    if p is ProblemId.P4A:
        if n % 2 == 0:
            m = (n - 2) // 2
            d = S(m + 1) - 1

            def parts():
                for j in range(m + 1):
                    yield _div(d, S(j)), 2
                yield gmpy2.mpz(1), 2

            bound = Bound("volume", n, True, "vol(O(1)) < 1/2^(2^(n/2))") if n >= 6 else None
        else:
            m = (n - 3) // 2
            s = S(m)
            d = (s - 1) * (2 * s - 1)

            def parts():
                for j in range(m):
                    yield _div(d, S(j)), 2
                yield 2 * (s - 1), 1
                yield s - 1, 2
                yield gmpy2.mpz(1), 2

            bound = Bound("volume", n, True, "vol(O(1)) < 1/2^(2^(n/2))") if n >= 7 else None
        return _Recipe(2 * d, parts, bound=bound)

    if p is ProblemId.P4B:
        m = (n - 2) // 2 if n % 2 == 0 else (n - 3) // 2
        u, v = S(m - 2), S(m - 1)
        w = 4 * u**3 - 6 * u**2 + 5 * u - 2
        d = (S(m) - 1) * w
        a = u * (2 * v - 1)
        b = 2 * (u - 1) * v

        def parts():
            if n % 2 == 0:
                for j in range(m):
                    yield _div(d, S(j)), 2
            else:
                for j in range(m - 2):
                    yield _div(d, S(j)), 2
                yield _div(d, u), 1
                yield _div(d, 2 * u), 2
                yield _div(d, v), 2
            yield a, 2
            yield b, 2

        e = n - 5 if n % 2 == 0 else n - 6
        bound = Bound("M", e, True, f"M > 2^(2^((n-{5 if n % 2 == 0 else 6})/2))")
        return _Recipe(2 * d, parts, expected_M=lambda: int(b), bound=bound)

    raise ValueError(f"unknown problem {p!r}")


def weight_stream(p: ProblemId | str, n: int) -> Iterator[tuple[gmpy2.mpz, int]]:
    """Weights of the ``n``-dimensional member as ``(value, multiplicity)`` pairs."""
    p = ProblemId(p)
    _check_range(p, n)
    return _expand(_recipe(p, n).parts())


def family_degree(p: ProblemId | str, n: int) -> gmpy2.mpz:
    p = ProblemId(p)
    _check_range(p, n)
    return _recipe(p, n).degree


def adjunction_degree(p: ProblemId | str, n: int) -> int:
    """``d - sum(weights)`` computed exactly from the weight recipe.

    Blocks of Sylvester quotients are summed with :func:`_quotient_sum`;
    every other weight is produced and added one at a time.
    """
    p = ProblemId(p)
    _check_range(p, n)
    recipe = _recipe(p, n)
    total = gmpy2.mpz(0)
    count = 0
    for item in recipe.parts():
        if isinstance(item, _Block):
            total += _quotient_sum(item.c, item.m)
            count += item.m
            continue
        value, mult = item
        total += value * mult
        count += mult
    if count != n + 2:
        raise ArithmeticError(f"{p.value}, n={n}: {count} weights for an {n}-fold hypersurface")
    return int(recipe.degree - total)


# ---------------------------------------------------------------------------
# Members
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyMember:
    """One generated hypersurface and what it is expected to satisfy.

    ``problem`` is ``None`` for sporadic catalog entries.  ``expected_M``
    and ``expected_volume`` are closed forms (``None`` where no closed form
    is stated); ``bound`` is present only in the dimensions where the
    double exponential bound is claimed.
    """

    problem: ProblemId | None
    n: int
    branch: str
    hypersurface: Hypersurface
    expected_class: VarietyClass
    expected_singularity: SingularityClass
    expected_M: int | None = None
    expected_volume: Fraction | None = None
    bound: Bound | None = None
    name: str = ""

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return f"{self.problem.value} n={self.n} ({self.branch})"

    def bound_value(self) -> Fraction | int | None:
        if self.bound is None:
            return None
        if self.bound.quantity == "volume":
            return 1 / hyp_volume(self.hypersurface)
        return min(self.hypersurface.weights)

    def header(self) -> dict:
        return {"problem": self.problem.value if self.problem else "sporadic", "n": self.n, "branch": self.branch}


def generate(p: ProblemId | str, n: int, *, bit_cap: int = MATERIALIZE_BIT_CAP) -> FamilyMember:
    """The ``n``-dimensional member of family ``p``.

    Raises :class:`DimensionError` outside the family's range and
    :class:`GenerationTooLarge` when the weights exceed ``bit_cap`` bits in
    total.
    """
    p = ProblemId(p)
    branch = _check_range(p, n)
    recipe = _recipe(p, n)
    # bit size estimate before materializing: every weight is below the degree
    if (n + 2) * int(recipe.degree).bit_length() > bit_cap:
        raise GenerationTooLarge(
            f"family {p.value}, n = {n}: weights need about {(n + 2) * int(recipe.degree).bit_length()} bits "
            f"(cap {bit_cap}); use weight_stream/adjunction_degree"
        )
    weights = []
    for value, mult in _expand(recipe.parts()):
        weights.extend([int(value)] * mult)
    h = Hypersurface.of(int(recipe.degree), weights)
    return FamilyMember(
        problem=p,
        n=n,
        branch=branch,
        hypersurface=h,
        expected_class=p.expected_class,
        expected_singularity=p.expected_singularity,
        expected_M=recipe.expected_M() if recipe.expected_M else None,
        expected_volume=recipe.expected_volume() if recipe.expected_volume else None,
        bound=recipe.bound,
    )


@dataclass(frozen=True)
class MemberCheck:
    """Comparison of a classification report with a member's expectations.

    ``singularity`` is ``"verified"`` when the pipeline proved the expected
    class, ``"asserted"`` when it could not decide (the claim then rests on
    the construction's proof), and ``"contradicted"`` otherwise.
    """

    well_formed: bool
    quasi_smooth: bool
    variety_class: bool
    singularity: str
    volume: bool | None
    M: bool | None
    bound: bool | None

    @property
    def ok(self) -> bool:
        flags = (self.well_formed, self.quasi_smooth, self.variety_class, self.volume, self.M, self.bound)
        return all(f is not False for f in flags) and self.singularity != "contradicted"

    def to_dict(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def check_member(member: FamilyMember, report: ClassificationReport) -> MemberCheck:
    got = report.overall.kind
    want = member.expected_singularity
    if want is SingularityClass.TERMINAL:
        if got is SingularityClass.TERMINAL:
            sing = "verified"
        elif got in (SingularityClass.UNKNOWN, SingularityClass.CANONICAL_AT_LEAST):
            sing = "asserted"
        else:
            sing = "contradicted"
    else:
        if got.is_canonical:
            sing = "verified"
        elif got is SingularityClass.UNKNOWN:
            sing = "asserted"
        else:
            sing = "contradicted"
    value = member.bound_value()
    return MemberCheck(
        well_formed=report.well_formed,
        quasi_smooth=bool(report.quasi_smooth),
        variety_class=report.variety_class == member.expected_class,
        singularity=sing,
        volume=None if member.expected_volume is None else report.volume == member.expected_volume,
        M=None if member.expected_M is None else report.M == member.expected_M,
        bound=None if member.bound is None else member.bound.holds(value),
    )


def member_report(member: FamilyMember, budget: int = DEFAULT_BUDGET) -> tuple[dict, MemberCheck]:
    """JSON-ready report for a family member: header, expectations, analysis."""
    report = classify_hypersurface(member.hypersurface, budget)
    check = check_member(member, report)
    out = member.header()
    out["expected"] = {
        "class": str(member.expected_class),
        "singularity": member.expected_singularity.value,
        "M": None if member.expected_M is None else str(member.expected_M),
        "volume": None
        if member.expected_volume is None
        else {"num": str(member.expected_volume.numerator), "den": str(member.expected_volume.denominator)},
        "bound": None if member.bound is None else member.bound.statement,
    }
    out["check"] = check.to_dict()
    out["report"] = report.to_dict()
    return out, check


# ---------------------------------------------------------------------------
# Sporadic examples and formulas
# ---------------------------------------------------------------------------


def _sporadic(name, degree, weights, cls, sing, volume) -> FamilyMember:
    h = Hypersurface.of(degree, weights)
    return FamilyMember(None, h.dimension, "sporadic", h, cls, sing, expected_volume=volume, name=name)


def sporadic_catalog() -> list[FamilyMember]:
    """Small examples quoted alongside the families."""
    gt1 = VarietyClass("GeneralType", 1)
    T, C = SingularityClass.TERMINAL, SingularityClass.CANONICAL_AT_LEAST
    return [
        _sporadic("X28 in P(14,5,4,3,1)", 28, (14, 5, 4, 3, 1), gt1, T, Fraction(1, 30)),
        _sporadic("X64 in P(19,16,11,9,7,1)", 64, (19, 16, 11, 9, 7, 1), gt1, T, Fraction(4, 13167)),
        _sporadic("X10 in P(5,2,1,1)", 10, (5, 2, 1, 1), gt1, T, Fraction(1)),
        _sporadic("X6 in P(3,2,1,1)", 6, (3, 2, 1, 1), VarietyClass("Fano", 1), T, Fraction(1)),
        _sporadic("X6 in P(3,2,1)", 6, (3, 2, 1), VarietyClass("CalabiYau"), C, Fraction(1)),
    ]


def geometric_genus(member: FamilyMember) -> int:
    """``h^0(K_X) = h^0(O_X(k))`` for ``K_X = O_X(k)``, ``k >= 0``."""
    k = member.hypersurface.adjunction
    if k < 0:
        return 0
    return section_count(member.hypersurface, k)


def kollar_pair_volume(n: int) -> Fraction:
    """Volume ``1/(s_{n+2} - 1)^n`` of Kollár's pair; ``1`` for ``n = 0``."""
    if n < 0:
        raise ValueError(f"dimension must be non-negative, got {n}")
    return Fraction(1, int(S(n + 2) - 1) ** n)


def product_with_curve(vol_z: Fraction, pg_z: int, n: int, g: int) -> tuple[Fraction, int]:
    """Volume and geometric genus of ``Z x C`` with ``dim(Z x C) = n``, genus ``g``."""
    if g < 2:
        raise ValueError(f"curve genus must be at least 2, got {g}")
    if n < 2:
        raise ValueError(f"product dimension must be at least 2, got {n}")
    return n * (2 * g - 2) * Fraction(vol_z), g * pg_z


def terminal_cy_base_singularity(m: int) -> QuotientSingularity:
    """The singularity along the base locus of the terminal Calabi-Yau family (``4b``).

    ``1/a((d/s_0)^2, ..., (d/s_{m-2})^2, d/s_{m-1}, b^2)`` with
    ``a = s_{m-2}(2 s_{m-1} - 1)``, ``b = 2(s_{m-2} - 1) s_{m-1}`` and
    ``d = (s_m - 1)(4u^3 - 6u^2 + 5u - 2)``, ``u = s_{m-2}``.  No proper
    weight subset helps here, so only the direct loop settles it.

    >>> str(terminal_cy_base_singularity(3))
    '1/39(3,3,2,2,12,28,28)'
    """
    if m < 3:
        raise ValueError(f"needs m >= 3, got {m}")
    u, v = S(m - 2), S(m - 1)
    d = (S(m) - 1) * (4 * u**3 - 6 * u**2 + 5 * u - 2)
    a = u * (2 * v - 1)
    b = 2 * (u - 1) * v
    raw = []
    for j in range(m - 1):
        raw += [d // S(j)] * 2
    raw += [d // v, b, b]
    return normalize(int(a), [int(x) for x in raw])
