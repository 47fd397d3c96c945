"""Weighted projective spaces and hypersurfaces in them.

A :class:`Hypersurface` is always the *general* member of its linear
system: quasi-smoothness, base loci and which torus strata it meets are
read off from the weights and the degree, never from an explicit
polynomial.

Torus strata are indexed by the set ``I`` of non-vanishing coordinates.
The stratum ``U_I`` of the ambient space carries the cyclic group of order
``r = gcd(a_i : i in I)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce

from .exactmath import BudgetExceeded, representation_count, semigroup_member
from .singularities import (
    DEFAULT_BUDGET,
    AdjunctionContext,
    Certificate,
    CertificateKind,
    IllFormedError,
    QuotientSingularity,
    SingularityClass,
    SingularityVerdict,
    check_certificate,
    classify,
    meet,
    normalize,
)

__all__ = [
    "WeightSystem",
    "Hypersurface",
    "VarietyClass",
    "Stratum",
    "StratumVerdict",
    "ClassificationReport",
    "wps_well_formed",
    "wps_volume",
    "hyp_volume",
    "adjunction_class",
    "quasi_smooth_general",
    "quasi_smooth_failure",
    "hyp_well_formed",
    "strata",
    "stratum_singularity",
    "section_count",
    "first_nonvanishing",
    "classify_hypersurface",
    "check_orbit_closure",
]

MAX_VARIABLES = 21  # N <= 20
SECTION_CAP = 10**6
SMALL_DEGREE = 1 << 16  # bitset reachability below this degree
INHERIT_LIMIT = 256  # proper sub-strata tried per stratum for orbit-closure inheritance


# ---------------------------------------------------------------------------
# Basic objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSystem:
    """Weights of ``P(a_0, ..., a_N)``, stored in descending order."""

    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(sorted((int(a) for a in self.weights), reverse=True))
        if len(w) < 2:
            raise ValueError(f"a weighted projective space needs at least two weights, got {w}")
        if w[-1] < 1:
            raise ValueError(f"weights must be positive, got {w}")
        if len(w) > MAX_VARIABLES:
            raise ValueError(f"at most {MAX_VARIABLES} weights supported, got {len(w)}")
        object.__setattr__(self, "weights", w)

    @property
    def N(self) -> int:
        return len(self.weights) - 1

    def __str__(self) -> str:
        return "P(" + ",".join(map(str, self.weights)) + ")"


@dataclass(frozen=True)
class Hypersurface:
    space: WeightSystem
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"degree must be positive, got {self.degree}")

    @classmethod
    def of(cls, degree: int, weights) -> Hypersurface:
        return cls(WeightSystem(tuple(weights)), int(degree))

    @property
    def weights(self) -> tuple[int, ...]:
        return self.space.weights

    @property
    def dimension(self) -> int:
        return self.space.N - 1

    @property
    def adjunction(self) -> int:
        """``k`` with ``K_X = O_X(k)``, that is ``d - sum(a)``."""
        return self.degree - sum(self.weights)

    def __str__(self) -> str:
        return f"X_{self.degree} in {self.space}"


@dataclass(frozen=True)
class VarietyClass:
    """``CalabiYau``, ``GeneralType(k)`` or ``Fano(k)`` with ``k > 0``."""

    kind: str
    k: int = 0

    def __str__(self) -> str:
        return self.kind if self.kind == "CalabiYau" else f"{self.kind}({self.k})"

    @classmethod
    def parse(cls, text: str) -> VarietyClass:
        if text == "CalabiYau":
            return cls("CalabiYau")
        kind, _, rest = text.partition("(")
        if kind not in ("GeneralType", "Fano") or not rest.endswith(")"):
            raise ValueError(f"not a variety class: {text!r}")
        return cls(kind, int(rest[:-1]))


def wps_well_formed(space: WeightSystem) -> bool:
    """Every set of ``N`` weights is coprime."""
    w = space.weights
    # prefix/suffix gcds give all leave-one-out gcds in linear time
    pre = [0]
    for a in w:
        pre.append(math.gcd(pre[-1], a))
    suf = [0]
    for a in reversed(w):
        suf.append(math.gcd(suf[-1], a))
    suf.reverse()
    return all(math.gcd(pre[j], suf[j + 1]) == 1 for j in range(len(w)))


def wps_volume(space: WeightSystem) -> Fraction:
    return Fraction(1, math.prod(space.weights))


def hyp_volume(h: Hypersurface) -> Fraction:
    """Volume of ``O_X(1)``, i.e. ``d / (a_0 ... a_N)``."""
    return h.degree * wps_volume(h.space)


def adjunction_class(h: Hypersurface) -> VarietyClass:
    k = h.adjunction
    if k == 0:
        return VarietyClass("CalabiYau")
    return VarietyClass("GeneralType", k) if k > 0 else VarietyClass("Fano", -k)


# ---------------------------------------------------------------------------
# Representability of degrees
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _member_cached(target: int, gens: tuple[int, ...]) -> bool:
    return semigroup_member(target, gens)


class _Representability:
    """Answers ``t in <gens>`` for ``t <= limit`` with per-generator-set caching."""

    def __init__(self, limit: int):
        self.limit = limit
        self.small = limit <= SMALL_DEGREE
        self._reach: dict[tuple[int, ...], int] = {(): 1}

    def _bits(self, gens: tuple[int, ...]) -> int:
        bits = self._reach.get(gens)
        if bits is None:
            bits = self._bits(gens[:-1])
            mask = (1 << (self.limit + 1)) - 1
            step = gens[-1]
            while step <= self.limit:
                bits |= (bits << step) & mask
                step <<= 1
            self._reach[gens] = bits
        return bits

    def member(self, target: int, gens) -> bool:
        if target < 0:
            return False
        key = tuple(sorted(set(gens)))
        if self.small and target <= self.limit:
            return bool((self._bits(key) >> target) & 1)
        return _member_cached(target, key)


def _value_subsets(weights: tuple[int, ...]):
    """One index set per sub-multiset of ``weights`` with its multiplicity.

    Index sets with the same multiset of weights give identical strata and
    identical quasi-smoothness conditions.
    """
    groups: list[list[int]] = []
    for i, a in enumerate(weights):
        if groups and weights[groups[-1][0]] == a:
            groups[-1].append(i)
        else:
            groups.append([i])
    for choice in itertools.product(*(range(len(g) + 1) for g in groups)):
        if not any(choice):
            continue
        index = tuple(i for g, c in zip(groups, choice) for i in g[:c])
        mult = math.prod(math.comb(len(g), c) for g, c in zip(groups, choice))
        yield index, mult


def quasi_smooth_failure(h: Hypersurface) -> tuple[int, ...] | None:
    """An index set violating the quasi-smoothness criterion, or ``None``."""
    a, d = h.weights, h.degree
    if d in a:
        return None
    rep = _Representability(d)
    for index, _ in _value_subsets(a):
        gens = [a[i] for i in index]
        if rep.member(d, gens):
            continue
        inside = set(index)
        good = sum(1 for j in range(len(a)) if j not in inside and rep.member(d - a[j], gens))
        if good < len(index):
            return index
    return None


def quasi_smooth_general(h: Hypersurface) -> bool:
    """Quasi-smoothness of the general hypersurface of degree ``d``.

    True when some weight equals ``d`` or when, for every non-empty index
    set ``I``, either ``d`` is a non-negative combination of ``a_I`` or at
    least ``|I|`` indices ``j`` outside ``I`` have ``d - a_j`` such a
    combination.  Budget errors from membership queries propagate.
    """
    return quasi_smooth_failure(h) is None


# ---------------------------------------------------------------------------
# Strata
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    """Torus stratum ``U_I`` of the ambient space and how ``X`` meets it.

    ``meets`` is false when the general ``X`` misses ``U_I`` (a single
    monomial of degree ``d`` in the variables of ``I``).  ``multiplicity``
    counts the index sets with the same weights.
    """

    indices: tuple[int, ...]
    weights: tuple[int, ...]
    r: int
    in_base_locus: bool
    meets: bool
    multiplicity: int = 1

    @property
    def intersection_dimension(self) -> int | None:
        """Dimension of ``X`` meet ``U_I``, ``None`` when empty."""
        if self.in_base_locus:
            return len(self.indices) - 1
        return len(self.indices) - 2 if self.meets else None

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "weights": [_jint(a) for a in self.weights],
            "r": _jint(self.r),
            "in_base_locus": self.in_base_locus,
            "meets": self.meets,
            "multiplicity": self.multiplicity,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Stratum:
        return cls(
            tuple(data["indices"]),
            tuple(int(a) for a in data["weights"]),
            int(data["r"]),
            data["in_base_locus"],
            data["meets"],
            data.get("multiplicity", 1),
        )


def _meets(d: int, gens: list[int], in_base_locus: bool) -> bool:
    if in_base_locus:
        return True
    if len(gens) == 1:
        return False
    try:
        return representation_count(d, gens, cap=2) >= 2
    except BudgetExceeded:
        return True  # conservative: analyse the stratum anyway


def strata(h: Hypersurface, *, singular_only: bool = False) -> list[Stratum]:
    """Strata with ``r > 1`` or in the base locus, one per multiset of weights."""
    a, d = h.weights, h.degree
    rep = _Representability(d)
    out = []
    for index, mult in _value_subsets(a):
        gens = [a[i] for i in index]
        r = reduce(math.gcd, gens)
        base = not rep.member(d, gens)
        if r == 1 and (singular_only or not base):
            continue
        out.append(Stratum(index, tuple(gens), r, base, _meets(d, gens, base), mult))
    out.sort(key=lambda s: (len(s.indices), s.indices))
    return out


def _admissible(h: Hypersurface, s: Stratum) -> list[int]:
    inside = set(s.indices)
    return [j for j in range(len(h.weights)) if j not in inside and (h.degree - h.weights[j]) % s.r == 0]


def _quotient(r: int, raw, trivial: int) -> QuotientSingularity:
    sing = normalize(r, raw)
    return QuotientSingularity(sing.r, sing.weights, sing.trivial_rank + trivial)


def stratum_singularity(h: Hypersurface, s: Stratum, *, verify: bool = False, budget: int = DEFAULT_BUDGET) -> QuotientSingularity:
    """Quotient singularity of ``X`` at a general point of ``X`` meet ``U_I``.

    Off the base locus this is the ambient type ``1/r(a_i : i not in I)``
    with one direction along the stratum absorbed by ``X``.  On the base
    locus one more weight ``a_j`` with ``r | d - a_j`` is removed; every
    admissible ``j`` has the same residue, and with ``verify`` the verdicts
    of all choices are compared.
    """
    a = h.weights
    inside = set(s.indices)
    k = len(s.indices) - 1
    if not s.in_base_locus:
        return _quotient(s.r, [a[i] for i in range(len(a)) if i not in inside], max(k - 1, 0))
    choices = _admissible(h, s)
    if not choices:
        raise ValueError(f"base-locus stratum {s.weights} of {h} has no admissible index; not quasi-smooth?")

    def build(j: int) -> QuotientSingularity:
        return _quotient(s.r, [a[i] for i in range(len(a)) if i not in inside and i != j], k)

    sing = build(choices[0])
    if verify and len(choices) > 1:
        first = classify(sing, budget=budget).kind
        for j in choices[1:]:
            other = classify(build(j), budget=budget).kind
            if other is not first:
                raise AssertionError(f"stratum {s.weights} of {h}: verdict depends on j ({first} vs {other})")
    return sing


def hyp_well_formed(h: Hypersurface) -> tuple[bool, str]:
    """Well-formedness of ``X`` together with the rule that decided it.

    Quasi-smooth hypersurfaces of dimension at least 3 that are not linear
    cones are well-formed when the ambient space is.  Otherwise every
    singular stratum met by ``X`` must meet it in codimension at least 2.
    """
    if not wps_well_formed(h.space):
        return False, "ambient-not-well-formed"
    if h.dimension >= 3 and h.degree not in h.weights:
        try:
            if quasi_smooth_general(h):
                return True, "quasi-smooth-dim>=3"
        except BudgetExceeded:
            pass
    for s in strata(h, singular_only=True):
        dim = s.intersection_dimension
        if dim is not None and h.dimension - dim < 2:
            return False, "codimension-check"
    return True, "codimension-check"


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------


def _monomial_counts(weights, upto: int) -> list[int]:
    p = [1] + [0] * upto
    for a in weights:
        for t in range(a, upto + 1):
            p[t] += p[t - a]
    return p


def section_count(h: Hypersurface, ell: int, cap: int = SECTION_CAP) -> int:
    """``h^0(X, O_X(ell)) = p(ell) - p(ell - d)`` with ``p`` counting monomials."""
    if ell < 0:
        raise ValueError(f"ell must be non-negative, got {ell}")
    if ell > cap:
        raise BudgetExceeded(f"section count at ell={ell} exceeds cap {cap}")
    p = _monomial_counts(h.weights, ell)
    return p[ell] - (p[ell - h.degree] if ell >= h.degree else 0)


def first_nonvanishing(h: Hypersurface, cap: int = SECTION_CAP) -> int:
    """Least ``ell >= 1`` with ``H^0(X, O_X(ell)) != 0``: the smallest weight.

    Cross-checked against monomial counts when the smallest weight is
    within ``cap``.
    """
    m = min(h.weights)
    if m > cap:
        return m
    p = _monomial_counts(h.weights, m)
    for ell in range(1, m + 1):
        if p[ell] - (p[ell - h.degree] if ell >= h.degree else 0) > 0:
            return ell
    # only possible for a linear cone x_N = 0 style degree
    ell = m + 1
    while ell <= cap and section_count(h, ell, cap) == 0:
        ell += 1
    return ell


# ---------------------------------------------------------------------------
# Classification pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StratumVerdict:
    stratum: Stratum
    singularity: QuotientSingularity
    verdict: SingularityVerdict

    def to_dict(self) -> dict:
        sing = self.singularity
        return {
            **self.stratum.to_dict(),
            "singularity": {
                "r": _jint(sing.r),
                "weights": [_jint(b) for b in sing.weights],
                "trivial_rank": sing.trivial_rank,
                "text": str(sing),
            },
            "verdict": self.verdict.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> StratumVerdict:
        sd = data["singularity"]
        sing = QuotientSingularity(int(sd["r"]), tuple(int(b) for b in sd["weights"]), sd["trivial_rank"])
        return cls(Stratum.from_dict(data), sing, SingularityVerdict.from_dict(data["verdict"]))


@dataclass
class ClassificationReport:
    weights: tuple[int, ...]
    degree: int
    well_formed: bool
    well_formed_rule: str
    quasi_smooth: bool | None
    variety_class: VarietyClass
    adjunction: int
    volume: Fraction
    M: int
    overall: SingularityVerdict
    strata: list[StratumVerdict] = field(default_factory=list)
    certificates: list[Certificate] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def hypersurface(self) -> Hypersurface:
        return Hypersurface.of(self.degree, self.weights)

    @property
    def verified(self) -> bool:
        """Every check passed and the singularity class is proved."""
        return bool(self.well_formed and self.quasi_smooth and self.overall.kind.is_canonical)

    def to_dict(self) -> dict:
        return {
            "weights": [_jint(a) for a in self.weights],
            "degree": _jint(self.degree),
            "well_formed": self.well_formed,
            "well_formed_rule": self.well_formed_rule,
            "quasi_smooth": self.quasi_smooth,
            "class": str(self.variety_class),
            "adjunction": _jint(self.adjunction),
            "volume": {"num": str(self.volume.numerator), "den": str(self.volume.denominator)},
            "M": _jint(self.M),
            "overall": self.overall.kind.value,
            "overall_certificates": [c.to_dict() for c in self.overall.certificates],
            "certificates": [c.to_dict() for c in self.certificates],
            "strata": [s.to_dict() for s in self.strata],
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ClassificationReport:
        vol = data["volume"]
        return cls(
            weights=tuple(int(a) for a in data["weights"]),
            degree=int(data["degree"]),
            well_formed=data["well_formed"],
            well_formed_rule=data["well_formed_rule"],
            quasi_smooth=data["quasi_smooth"],
            variety_class=VarietyClass.parse(data["class"]),
            adjunction=int(data["adjunction"]),
            volume=Fraction(int(vol["num"]), int(vol["den"])),
            M=int(data["M"]),
            overall=SingularityVerdict(
                SingularityClass(data["overall"]),
                tuple(Certificate.from_dict(c) for c in data.get("overall_certificates", ())),
            ),
            strata=[StratumVerdict.from_dict(s) for s in data.get("strata", ())],
            certificates=[Certificate.from_dict(c) for c in data.get("certificates", ())],
            notes=list(data.get("notes", ())),
        )


def _jint(x: int) -> int | str:
    """JSON-safe integer: plain below 2**53, decimal string above."""
    return x if abs(x) < 1 << 53 else str(x)


def _ambient_quotient(h: Hypersurface, index) -> QuotientSingularity:
    a = h.weights
    inside = set(index)
    r = reduce(math.gcd, (a[i] for i in index))
    return _quotient(r, [a[i] for i in range(len(a)) if i not in inside], len(index) - 1)


def _inherit(h, s, sing, context, budget, cache) -> SingularityVerdict | None:
    """Verdict for ``U_I`` from an ambient verdict at a sub-stratum ``U_J``.

    The ambient space is canonical (terminal) along ``U_I`` when it is so
    at a point of ``U_J`` for ``J`` inside ``I``, because ``U_J`` lies in
    the closure of every torus orbit in ``U_I``.  Off the base locus ``X``
    has the ambient singularity there, up to a smooth factor.
    """
    a = h.weights
    best = None
    tried = 0
    seen = set()
    for size in range(1, len(s.indices)):
        for sub in itertools.combinations(s.indices, size):
            key = tuple(a[i] for i in sub)
            if key in seen:
                continue
            seen.add(key)
            tried += 1
            if tried > INHERIT_LIMIT:
                return best
            amb = _ambient_quotient(h, sub)
            ck = (amb.r, tuple(sorted(amb.weights)))
            if ck not in cache:
                try:
                    cache[ck] = classify(amb, budget=budget).kind
                except IllFormedError:
                    cache[ck] = SingularityClass.UNKNOWN
            kind = cache[ck]
            cert = Certificate(CertificateKind.ORBIT_CLOSURE, source=tuple(sub))
            if kind is SingularityClass.TERMINAL:
                return SingularityVerdict(SingularityClass.TERMINAL, (cert,))
            if kind.is_canonical and best is None:
                best = SingularityVerdict(SingularityClass.CANONICAL_AT_LEAST, (cert,))
                if context is not None and context.k in (1, -1):
                    promo = Certificate(CertificateKind.INDEX1_PROMOTION, weight_sum=sing.weight_sum)
                    if check_certificate(sing, promo):
                        return SingularityVerdict(SingularityClass.TERMINAL, (cert, promo))
    return best


def check_orbit_closure(h: Hypersurface, s: Stratum, verdict: SingularityVerdict, budget: int = DEFAULT_BUDGET) -> bool:
    """Re-verify an orbit-closure inherited verdict for stratum ``s`` of ``h``."""
    certs = {c.kind: c for c in verdict.certificates}
    cert = certs.get(CertificateKind.ORBIT_CLOSURE)
    if cert is None or cert.source is None or s.in_base_locus:
        return False
    sub = set(cert.source)
    if not sub or not sub < set(s.indices):
        return False
    amb = classify(_ambient_quotient(h, cert.source), budget=budget).kind
    if not amb.is_canonical:
        return False
    if verdict.kind is SingularityClass.TERMINAL and amb is not SingularityClass.TERMINAL:
        promo = certs.get(CertificateKind.INDEX1_PROMOTION)
        return promo is not None and check_certificate(stratum_singularity(h, s), promo)
    return True


_IMPROVES = (SingularityClass.UNKNOWN, SingularityClass.CANONICAL_AT_LEAST)


def classify_hypersurface(h: Hypersurface, budget: int = DEFAULT_BUDGET, *, verify: bool = False) -> ClassificationReport:
    """Full analysis of the general hypersurface of degree ``d``.

    Singularities are classified stratum by stratum; strata missed by
    ``X`` are skipped.  Global shortcuts: a quasi-smooth Calabi-Yau
    hypersurface is canonical, and ``K_X = O(+-1)`` lets canonical
    quotients with weight sum prime to ``r`` be promoted to terminal.
    Verdicts that stay undecided are reported as ``unknown`` rather than
    raising.
    """
    notes: list[str] = []
    certs: list[Certificate] = []
    k = h.adjunction
    vc = adjunction_class(h)
    vol = hyp_volume(h)
    M = first_nonvanishing(h)
    if min(h.weights) > SECTION_CAP:
        notes.append("M taken as the smallest weight; beyond the section-count cap")
    try:
        qs = quasi_smooth_general(h)
    except BudgetExceeded as exc:
        qs = None
        notes.append(f"quasi-smoothness undecided: {exc}")
    wf, rule = hyp_well_formed(h)

    def report(overall, verdicts=()):
        return ClassificationReport(h.weights, h.degree, wf, rule, qs, vc, k, vol, M, overall, list(verdicts), certs, notes)

    if not (wf and qs):
        notes.append("singularities not analysed: hypersurface must be well-formed and quasi-smooth")
        return report(SingularityVerdict(SingularityClass.UNKNOWN))

    if k == 0:
        certs.append(Certificate(CertificateKind.GORENSTEIN_SUM, weight_sum=sum(h.weights)))
        notes.append("quasi-smooth Calabi-Yau: K_X is Cartier, so X is canonical")
    if all(h.degree % a == 0 for a in h.weights):
        notes.append("every weight divides the degree: the base locus is empty")
    context = AdjunctionContext(k)
    cache: dict = {}
    verdicts = []
    for s in strata(h):
        if not s.meets:
            continue
        sing = stratum_singularity(h, s, verify=verify, budget=budget)
        try:
            v = classify(sing, context, budget)
        except IllFormedError:
            notes.append(f"stratum {s.weights}: ill-formed local presentation {sing}")
            v = SingularityVerdict(SingularityClass.UNKNOWN)
        if v.kind in _IMPROVES and not s.in_base_locus:
            better = _inherit(h, s, sing, context, budget, cache)
            if better is not None and (v.kind is SingularityClass.UNKNOWN or better.kind is SingularityClass.TERMINAL):
                v = SingularityVerdict(better.kind, (*better.certificates, *v.certificates))
        if v.kind is SingularityClass.UNKNOWN and k == 0:
            v = SingularityVerdict(SingularityClass.CANONICAL_AT_LEAST, (certs[0],))
        if v.kind is SingularityClass.UNKNOWN:
            notes.append(f"stratum {s.weights}: {sing} undecided within budget {budget}")
        verdicts.append(StratumVerdict(s, sing, v))

    if not verdicts:
        overall = SingularityVerdict(SingularityClass.TERMINAL, (Certificate(CertificateKind.SMOOTH_POINT),))
    else:
        kind = meet(sv.verdict.kind for sv in verdicts)
        worst = next(sv for sv in verdicts if sv.verdict.kind is kind)
        overall = SingularityVerdict(kind, tuple(certs) or worst.verdict.certificates)
    return report(overall, verdicts)
