"""Exhaustive search over Calabi-Yau surface hypersurfaces in P(a0,a1,a2,a3).

Every ``a0 >= a1 >= a2 >= a3`` with ``a0 <= max_weight`` is tried with
``d = a0 + a1 + a2 + a3``.  Survivors of the well-formedness and
quasi-smoothness filters are canonical automatically (Calabi-Yau), so no
Reid-Tai work is needed inside the loop.  The search certifies records
only below ``max_weight``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import Hypersurface, classify_hypersurface, hyp_well_formed

__all__ = ["RecordKind", "SearchConfig", "RecordSet", "enumerate_cy_surfaces", "quasi_smooth_kernel"]

MAX_WEIGHT_GUARD = 200


class RecordKind(str, enum.Enum):
    MIN_VOLUME = "minvol"
    MAX_BOTTOM_WEIGHT = "maxbottom"


@dataclass(frozen=True)
class SearchConfig:
    max_weight: int
    record: RecordKind = RecordKind.MIN_VOLUME
    workers: int = 1
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "record", RecordKind(self.record))
        if self.max_weight < 1:
            raise ValueError(f"max_weight must be positive, got {self.max_weight}")
        if self.max_weight > MAX_WEIGHT_GUARD:
            raise ValueError(f"max_weight {self.max_weight} exceeds the guard {MAX_WEIGHT_GUARD}")
        if self.dimension != 2:
            raise ValueError("only surfaces (dimension 2) are searched")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")

    def to_dict(self) -> dict:
        return {"dimension": self.dimension, "max_weight": self.max_weight, "record": self.record.value}


@dataclass
class RecordSet:
    config: SearchConfig
    best: Fraction | int | None
    achievers: list[tuple[int, ...]] = field(default_factory=list)
    examined: int = 0

    def to_dict(self) -> dict:
        if isinstance(self.best, Fraction):
            best = {"num": str(self.best.numerator), "den": str(self.best.denominator)}
        else:
            best = self.best
        return {
            "config": self.config.to_dict(),
            "best": best,
            "achievers": [list(a) for a in self.achievers],
            "examined": self.examined,
            "note": f"record certified only over weights a0 <= {self.config.max_weight}",
        }

    @classmethod
    def from_dict(cls, data: dict) -> RecordSet:
        c = data["config"]
        cfg = SearchConfig(c["max_weight"], RecordKind(c["record"]), dimension=c["dimension"])
        best = data["best"]
        if isinstance(best, dict):
            best = Fraction(int(best["num"]), int(best["den"]))
        return cls(cfg, best, [tuple(a) for a in data["achievers"]], data["examined"])

    def __eq__(self, other):
        if not isinstance(other, RecordSet):
            return NotImplemented
        # worker count is not part of the result
        return (self.config.to_dict(), self.best, self.achievers, self.examined) == (
            other.config.to_dict(),
            other.best,
            other.achievers,
            other.examined,
        )


def quasi_smooth_kernel(a: tuple[int, ...], d: int) -> bool:
    """Quasi-smoothness criterion for small degrees using reachability bitsets.

    Same test as :func:`wphyper.geometry.quasi_smooth_general`, specialised
    to a handful of variables: the representable degrees of every subset
    are built once, each from a smaller subset.
    """
    if d in a:
        return True
    n = len(a)
    full = (1 << (d + 1)) - 1
    reach = [1] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        bits = reach[mask ^ low]
        step = a[low.bit_length() - 1]
        while step <= d:
            bits |= (bits << step) & full
            step <<= 1
        reach[mask] = bits
    for mask in range(1, 1 << n):
        bits = reach[mask]
        if (bits >> d) & 1:
            continue
        good = 0
        for j in range(n):
            if not (mask >> j) & 1 and a[j] <= d and (bits >> (d - a[j])) & 1:
                good += 1
        if good < bin(mask).count("1"):
            return False
    return True


def _well_formed4(a: tuple[int, ...]) -> bool:
    g = math.gcd
    a0, a1, a2, a3 = a
    return g(g(a1, a2), a3) == 1 and g(g(a0, a2), a3) == 1 and g(g(a0, a1), a3) == 1 and g(g(a0, a1), a2) == 1


def _better(kind: RecordKind, value, best) -> int:
    """1 if ``value`` beats ``best``, 0 on a tie, -1 otherwise."""
    if best is None:
        return 1
    if value == best:
        return 0
    if kind is RecordKind.MIN_VOLUME:
        return 1 if value < best else -1
    return 1 if value > best else -1


def _shard(args) -> tuple:
    a0, kind = args
    kind = RecordKind(kind)
    best, achievers, examined = None, [], 0
    for a1 in range(a0, 0, -1):
        for a2 in range(a1, 0, -1):
            for a3 in range(a2, 0, -1):
                examined += 1
                a = (a0, a1, a2, a3)
                if not _well_formed4(a):
                    continue
                value = a3 if kind is RecordKind.MAX_BOTTOM_WEIGHT else None
                if value is not None and _better(kind, value, best) < 0:
                    continue
                d = a0 + a1 + a2 + a3
                if kind is RecordKind.MIN_VOLUME:
                    value = Fraction(d, a0 * a1 * a2 * a3)
                    if _better(kind, value, best) < 0:
                        continue
                if not quasi_smooth_kernel(a, d):
                    continue
                if not hyp_well_formed(Hypersurface.of(d, a))[0]:
                    continue
                cmp = _better(kind, value, best)
                if cmp > 0:
                    best, achievers = value, [a]
                elif cmp == 0:
                    achievers.append(a)
    return best, achievers, examined


def _merge(kind: RecordKind, parts) -> tuple:
    best, achievers, examined = None, [], 0
    for b, ach, ex in parts:
        examined += ex
        if b is None:
            continue
        cmp = _better(kind, b, best)
        if cmp > 0:
            best, achievers = b, list(ach)
        elif cmp == 0:
            achievers.extend(ach)
    return best, sorted(achievers, reverse=True), examined


def enumerate_cy_surfaces(cfg: SearchConfig, *, recheck: bool = True) -> RecordSet:
    """Best volume or bottom weight among quasi-smooth Calabi-Yau surfaces.

    Shards by the top weight ``a0``; shard results merge associatively, so
    the outcome does not depend on ``cfg.workers``.  With ``recheck`` every
    achiever is run through the full classification pipeline.
    """
    jobs = [(a0, cfg.record.value) for a0 in range(1, cfg.max_weight + 1)]
    if cfg.workers == 1:
        parts = [_shard(j) for j in jobs]
    else:
        # largest shards first for load balance; merge order is irrelevant
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_shard, sorted(jobs, reverse=True)))
    best, achievers, examined = _merge(cfg.record, parts)
    if recheck:
        for a in achievers:
            rep = classify_hypersurface(Hypersurface.of(sum(a), a))
            if not (rep.well_formed and rep.quasi_smooth and rep.adjunction == 0 and rep.overall.kind.is_canonical):
                raise AssertionError(f"achiever {a} fails the classification pipeline")
    return RecordSet(cfg, best, achievers, examined)
