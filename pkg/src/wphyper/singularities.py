"""Cyclic quotient singularities and their terminal / canonical classification.

A singularity of type ``1/r(b_1, ..., b_s)`` is the quotient of affine
space by ``mu_r`` acting with weights ``b_j``.  For a well-formed
presentation it is canonical (terminal) iff for every ``i = 1 .. r-1``

    sum_j (i * b_j mod r) >= r      (> r for terminal).

Checking this directly costs ``r - 1`` evaluations, so :func:`classify`
tries cheap certificates first and only falls back to the direct loop
inside an iteration budget.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

__all__ = [
    "DEFAULT_BUDGET",
    "IllFormedError",
    "SingularityClass",
    "CertificateKind",
    "Certificate",
    "SingularityVerdict",
    "QuotientSingularity",
    "AdjunctionContext",
    "normalize",
    "reid_tai_sum",
    "reid_tai_minimum",
    "reid_tai_direct",
    "weight_subset_certificate",
    "disjoint_subset_certificate",
    "check_certificate",
    "classify",
    "meet",
]

DEFAULT_BUDGET = 10**7
SUBSET_SIZE_CAP = 4
# above this order a DirectReidTai certificate is re-checked at its witness only
RECHECK_LIMIT = 20_000


class IllFormedError(ValueError):
    """The presentation is not well-formed, so the Reid-Tai test does not apply."""


class SingularityClass(str, enum.Enum):
    TERMINAL = "terminal"
    CANONICAL_AT_LEAST = "canonical"
    CANONICAL_NOT_TERMINAL = "canonical-not-terminal"
    UNKNOWN = "unknown"
    NOT_CANONICAL = "not-canonical"

    @property
    def is_canonical(self) -> bool:
        return self in _CANONICAL

    @property
    def is_definite(self) -> bool:
        return self in _DEFINITE

    def compatible_with(self, exact: SingularityClass) -> bool:
        """Whether this (possibly partial) verdict is consistent with an exact one."""
        if self is SingularityClass.UNKNOWN:
            return True
        if self is SingularityClass.CANONICAL_AT_LEAST:
            return exact.is_canonical
        return self is exact


_CANONICAL = {
    SingularityClass.TERMINAL,
    SingularityClass.CANONICAL_AT_LEAST,
    SingularityClass.CANONICAL_NOT_TERMINAL,
}
_DEFINITE = {
    SingularityClass.TERMINAL,
    SingularityClass.CANONICAL_NOT_TERMINAL,
    SingularityClass.NOT_CANONICAL,
}
# linear order used for the meet over strata
_RANK = {
    SingularityClass.TERMINAL: 4,
    SingularityClass.CANONICAL_AT_LEAST: 3,
    SingularityClass.CANONICAL_NOT_TERMINAL: 2,
    SingularityClass.UNKNOWN: 1,
    SingularityClass.NOT_CANONICAL: 0,
}


def meet(classes) -> SingularityClass:
    """Greatest lower bound of verdict classes; an empty meet is terminal."""
    return min(classes, key=_RANK.__getitem__, default=SingularityClass.TERMINAL)


class CertificateKind(str, enum.Enum):
    DIRECT_REID_TAI = "DirectReidTai"
    WEIGHT_SUBSET = "WeightSubset"
    GORENSTEIN_SUM = "GorensteinSum"
    INDEX1_PROMOTION = "Index1Promotion"
    SMOOTH_POINT = "SmoothPoint"
    ORBIT_CLOSURE = "OrbitClosure"


@dataclass(frozen=True)
class Certificate:
    """Evidence for a verdict, carrying what a checker needs to redo it.

    ``subsets`` holds one weight sub-multiset (canonical) or several
    disjoint ones (each contributes at least ``r``, so two or more give
    terminal).  ``minimum``/``witness`` record the direct loop result.
    ``source`` names the stratum an orbit-closure verdict was inherited from.
    """

    kind: CertificateKind
    subsets: tuple[tuple[int, ...], ...] = ()
    minimum: int | None = None
    witness: int | None = None
    weight_sum: int | None = None
    source: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.subsets:
            out["subsets"] = [[str(b) for b in s] for s in self.subsets]
        if self.minimum is not None:
            out["minimum"] = str(self.minimum)
        if self.witness is not None:
            out["witness"] = str(self.witness)
        if self.weight_sum is not None:
            out["weight_sum"] = str(self.weight_sum)
        if self.source is not None:
            out["source"] = list(self.source)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        def opt(key):
            return int(data[key]) if key in data else None

        return cls(
            kind=CertificateKind(data["kind"]),
            subsets=tuple(tuple(int(b) for b in s) for s in data.get("subsets", ())),
            minimum=opt("minimum"),
            witness=opt("witness"),
            weight_sum=opt("weight_sum"),
            source=tuple(data["source"]) if "source" in data else None,
        )


@dataclass(frozen=True)
class SingularityVerdict:
    kind: SingularityClass
    certificates: tuple[Certificate, ...] = ()

    @property
    def certificate(self) -> Certificate | None:
        return self.certificates[0] if self.certificates else None

    def to_dict(self) -> dict:
        return {"class": self.kind.value, "certificates": [c.to_dict() for c in self.certificates]}

    @classmethod
    def from_dict(cls, data: dict) -> SingularityVerdict:
        return cls(
            SingularityClass(data["class"]),
            tuple(Certificate.from_dict(c) for c in data.get("certificates", ())),
        )


@dataclass(frozen=True)
class AdjunctionContext:
    """Global information about the ambient variety: ``K = O(k)``."""

    k: int


@dataclass(frozen=True)
class QuotientSingularity:
    """``1/r(weights) x A^trivial_rank`` with every weight in ``[1, r-1]``."""

    r: int
    weights: tuple[int, ...]
    trivial_rank: int = 0
    _counts: Counter = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"group order must be positive, got {self.r}")
        if any(not 0 < b < self.r for b in self.weights):
            raise ValueError(f"weights {self.weights} not reduced modulo {self.r}; use normalize()")
        object.__setattr__(self, "_counts", Counter(self.weights))

    @property
    def weight_sum(self) -> int:
        return sum(self.weights)

    @property
    def is_gorenstein(self) -> bool:
        return self.weight_sum % self.r == 0

    @property
    def well_formed(self) -> bool:
        if self.r == 1:
            return True
        if not self.weights:
            return False
        counts = self._counts
        full = reduce(math.gcd, counts, self.r)
        if full != 1:
            return False
        for b, c in counts.items():
            if c > 1:
                continue
            rest = reduce(math.gcd, (x for x in counts if x != b), self.r)
            if rest != 1:
                return False
        return True

    def __str__(self) -> str:
        body = f"1/{self.r}({','.join(map(str, self.weights))})"
        return body + (f" x A^{self.trivial_rank}" if self.trivial_rank else "")


def normalize(r: int, raw_weights) -> QuotientSingularity:
    """Reduce weights modulo ``r`` and split off zero weights as trivial factors.

    >>> str(normalize(11, [6, 5, 22]))
    '1/11(6,5) x A^1'
    """
    if r < 1:
        raise ValueError(f"group order must be positive, got {r}")
    reduced = [int(b) % r for b in raw_weights]
    nonzero = tuple(b for b in reduced if b)
    return QuotientSingularity(r, nonzero if r > 1 else (), len(reduced) - len(nonzero))


# ---------------------------------------------------------------------------
# Direct criterion
# ---------------------------------------------------------------------------


def reid_tai_sum(i: int, r: int, weights) -> int:
    """``sum_j (i * b_j mod r)``."""
    return sum((i * b) % r for b in weights)


def reid_tai_minimum(sing: QuotientSingularity, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """Minimum of the Reid-Tai sum over ``i = 1 .. r-1`` and the first ``i`` attaining it.

    Raises :class:`~wphyper.exactmath.BudgetExceeded` when ``r - 1 > budget``.
    """
    from .exactmath import BudgetExceeded

    r = sing.r
    if r == 1:
        raise ValueError("the trivial group has no Reid-Tai sum")
    if r - 1 > budget:
        raise BudgetExceeded(f"direct Reid-Tai loop needs {r - 1} iterations, budget {budget}")
    counts = sing._counts
    if r >= 1 << 31:
        best = min((reid_tai_sum(i, r, sing.weights), i) for i in range(1, r))
        return best
    vals = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
    mult = np.fromiter(counts.values(), dtype=np.int64, count=len(counts))
    chunk = max(1, (1 << 21) // max(1, len(vals)))
    best, arg = None, None
    for lo in range(1, r, chunk):
        i = np.arange(lo, min(r, lo + chunk), dtype=np.int64)
        sums = ((i[:, None] * vals[None, :]) % r) @ mult
        k = int(sums.argmin())
        if best is None or sums[k] < best:
            best, arg = int(sums[k]), int(i[k])
    return best, arg


def reid_tai_direct(sing: QuotientSingularity, budget: int = DEFAULT_BUDGET) -> SingularityVerdict:
    """Classify by running the criterion over every group element.

    Returns an ``UNKNOWN`` verdict when the loop would exceed ``budget``.
    Trivial factors are ignored.
    """
    from .exactmath import BudgetExceeded

    if not sing.well_formed:
        raise IllFormedError(f"{sing} is not well-formed")
    if sing.r == 1:
        return SingularityVerdict(SingularityClass.TERMINAL, (Certificate(CertificateKind.SMOOTH_POINT),))
    try:
        low, i = reid_tai_minimum(sing, budget)
    except BudgetExceeded:
        return SingularityVerdict(SingularityClass.UNKNOWN)
    cert = Certificate(CertificateKind.DIRECT_REID_TAI, minimum=low, witness=i)
    if low > sing.r:
        kind = SingularityClass.TERMINAL
    elif low == sing.r:
        kind = SingularityClass.CANONICAL_NOT_TERMINAL
    else:
        kind = SingularityClass.NOT_CANONICAL
    return SingularityVerdict(kind, (cert,))


# ---------------------------------------------------------------------------
# Subset certificates
# ---------------------------------------------------------------------------


def _subset_ok(subset, r: int) -> bool:
    return bool(subset) and sum(subset) % r == 0 and reduce(math.gcd, subset, r) == 1


def _drop_variants(base: tuple[int, ...], depth: int):
    """``base`` with up to ``depth`` distinct values removed once each."""
    distinct = sorted(set(base))
    yield base
    for k in range(1, depth + 1):
        for drop in itertools.combinations(distinct, k):
            rest = list(base)
            for v in drop:
                rest.remove(v)
            yield tuple(rest)


def _candidates(counts: Counter, size_cap: int):
    """Sub-multisets tried as certificate subsets, in search order."""
    values = sorted(counts.elements())
    seen = set()

    def emit(sub):
        key = tuple(sorted(sub))
        if key and key not in seen:
            seen.add(key)
            return key
        return None

    for size in (1, 2):
        for sub in itertools.combinations(values, size):
            key = emit(sub)
            if key:
                yield key
    key = emit(values)
    if key:
        yield key
    for size in range(3, size_cap + 1):
        for sub in itertools.combinations(values, size):
            key = emit(sub)
            if key:
                yield key
    distinct = tuple(sorted(counts))
    for base, depth in ((tuple(values), 1), (distinct, 2)):
        for sub in _drop_variants(base, depth):
            key = emit(sub)
            if key:
                yield key


def weight_subset_certificate(sing: QuotientSingularity, size_cap: int = SUBSET_SIZE_CAP) -> Certificate | None:
    """Find a non-empty weight subset with sum divisible by ``r`` and gcd with ``r`` equal to 1.

    Such a subset forces every Reid-Tai sum to be at least ``r``, so the
    singularity is canonical.
    """
    if sing.r == 1 or not sing.weights:
        return None
    for sub in _candidates(sing._counts, size_cap):
        if _subset_ok(sub, sing.r):
            return Certificate(CertificateKind.WEIGHT_SUBSET, subsets=(sub,))
    return None


def disjoint_subset_certificate(sing: QuotientSingularity, size_cap: int = SUBSET_SIZE_CAP) -> Certificate | None:
    """Find a qualifying subset that occurs twice disjointly among the weights.

    Each copy contributes a positive multiple of ``r`` to every Reid-Tai
    sum, so the total exceeds ``r`` and the singularity is terminal.
    """
    if sing.r == 1:
        return None
    half = Counter({b: c // 2 for b, c in sing._counts.items() if c >= 2})
    if not half:
        return None
    for sub in _candidates(half, size_cap):
        if _subset_ok(sub, sing.r):
            return Certificate(CertificateKind.WEIGHT_SUBSET, subsets=(sub, sub))
    return None


def check_certificate(sing: QuotientSingularity, cert: Certificate) -> bool:
    """Independently re-verify a certificate against the singularity it claims."""
    kind = cert.kind
    if kind is CertificateKind.SMOOTH_POINT:
        return sing.r == 1
    if kind is CertificateKind.ORBIT_CLOSURE:
        # needs the ambient space; checked by geometry.check_stratum_verdict
        return cert.source is not None
    if not sing.well_formed:
        return False
    r = sing.r
    if kind in (CertificateKind.WEIGHT_SUBSET, CertificateKind.GORENSTEIN_SUM):
        if not cert.subsets:
            return False
        used = Counter()
        for sub in cert.subsets:
            if not _subset_ok(sub, r):
                return False
            used.update(sub)
        if any(sing._counts[b] < c for b, c in used.items()):
            return False
        if kind is CertificateKind.GORENSTEIN_SUM:
            return len(cert.subsets) == 1 and Counter(cert.subsets[0]) == sing._counts
        return True
    if kind is CertificateKind.INDEX1_PROMOTION:
        return cert.weight_sum == sing.weight_sum and math.gcd(sing.weight_sum, r) == 1
    if kind is CertificateKind.DIRECT_REID_TAI:
        if cert.minimum is None or cert.witness is None or not 0 < cert.witness < r:
            return False
        if reid_tai_sum(cert.witness, r, sing.weights) != cert.minimum:
            return False
        if r <= RECHECK_LIMIT:
            return min(reid_tai_sum(i, r, sing.weights) for i in range(1, r)) == cert.minimum
        return True
    return False


def classify(
    sing: QuotientSingularity,
    context: AdjunctionContext | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SingularityVerdict:
    """Tiered classification.

    1. ``r = 1`` is a smooth point.
    2. A weight-subset certificate proves canonical; a subset occurring
       twice, or ``K = O(+-1)`` in ``context`` with the weight sum prime to
       ``r``, upgrades to terminal.
    3. Otherwise (or to separate terminal from canonical) the direct loop
       runs when ``r - 1 <= budget``; ``budget=0`` disables it.
    4. Anything left is ``CANONICAL_AT_LEAST`` or ``UNKNOWN``.

    Every certificate is re-checked before it is returned.
    """
    if not sing.well_formed:
        raise IllFormedError(f"{sing} is not well-formed")
    if sing.r == 1:
        return SingularityVerdict(SingularityClass.TERMINAL, (Certificate(CertificateKind.SMOOTH_POINT),))

    certs: list[Certificate] = []
    canonical = False
    sub = weight_subset_certificate(sing)
    if sub is not None and check_certificate(sing, sub):
        canonical = True
        certs.append(sub)
    if sing.is_gorenstein:
        gor = Certificate(CertificateKind.GORENSTEIN_SUM, subsets=(tuple(sorted(sing.weights)),))
        if check_certificate(sing, gor):
            canonical = True
            certs.append(gor)

    if canonical:
        double = disjoint_subset_certificate(sing)
        if double is not None and check_certificate(sing, double):
            return SingularityVerdict(SingularityClass.TERMINAL, (double, *certs))
        if context is not None and context.k in (1, -1):
            promo = Certificate(CertificateKind.INDEX1_PROMOTION, weight_sum=sing.weight_sum)
            if check_certificate(sing, promo):
                return SingularityVerdict(SingularityClass.TERMINAL, (*certs, promo))

    direct = reid_tai_direct(sing, budget)
    if direct.kind is not SingularityClass.UNKNOWN:
        if canonical and not direct.kind.is_canonical:
            raise AssertionError(f"certificate {certs[0]} contradicts direct loop on {sing}")
        return SingularityVerdict(direct.kind, (*direct.certificates, *certs))
    if canonical:
        return SingularityVerdict(SingularityClass.CANONICAL_AT_LEAST, tuple(certs))
    return SingularityVerdict(SingularityClass.UNKNOWN)
