"""Infinite languages over the integers, with decidable membership and a
canonical injective enumeration.

A language here is always an infinite subset of Z built from three parts:
a finite set, an optional upward tail {j, j+1, ...}, and optionally all
negative integers. That closed form is enough to express every language any
strategy or adversary in this package constructs, while keeping membership
O(log n) and enumeration lazy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

IN = "In"
OUT = "Out"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ClosedFormLanguage:
    """finite_part | [tail_start, inf) | Z_{<0}; at least one infinite part."""

    finite_part: frozenset[int] = frozenset()
    tail_start: int | None = None
    include_negatives: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "finite_part", frozenset(self.finite_part))
        if self.tail_start is None and not self.include_negatives:
            raise ValueError("language must be infinite: add a tail or the negatives")

    def __contains__(self, x: int) -> bool:
        if x in self.finite_part:
            return True
        if self.tail_start is not None and x >= self.tail_start:
            return True
        return self.include_negatives and x < 0

    def elements(self) -> Iterator[int]:
        """Canonical order: finite part ascending, then tail and negatives
        interleaved (tail first), skipping anything already produced."""
        emitted = set()
        for v in sorted(self.finite_part):
            emitted.add(v)
            yield v
        streams = []
        if self.tail_start is not None:
            streams.append(itertools.count(self.tail_start))
        if self.include_negatives:
            streams.append(itertools.count(-1, -1))
        while True:
            for stream in streams:
                for v in stream:
                    if v not in emitted:
                        emitted.add(v)
                        yield v
                        break

    def normalized(self) -> "ClosedFormLanguage":
        """Minimal representation of the same set (for set equality checks)."""
        finite = set(self.finite_part)
        tail = self.tail_start
        negs = self.include_negatives
        if negs:
            finite = {v for v in finite if v >= 0}
            if tail is not None and tail <= 0:
                tail = 0  # negatives plus a tail reaching 0 cover everything upward
        if tail is not None:
            finite = {v for v in finite if v < tail}
            while tail - 1 in finite:
                tail -= 1
                finite.discard(tail)
        return ClosedFormLanguage(frozenset(finite), tail, negs)

    def same_set(self, other: "ClosedFormLanguage") -> bool:
        return self.normalized() == other.normalized()

    def to_record(self) -> dict:
        return {
            "finite_part": sorted(self.finite_part),
            "tail_start": self.tail_start,
            "include_negatives": self.include_negatives,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ClosedFormLanguage":
        return cls(
            frozenset(rec.get("finite_part", ())),
            rec.get("tail_start"),
            bool(rec.get("include_negatives", False)),
        )


def suffix_from(j: int) -> ClosedFormLanguage:
    """The upward ray {j, j+1, j+2, ...}."""
    return ClosedFormLanguage(tail_start=j)


NEGATIVES = ClosedFormLanguage(include_negatives=True)
NATURALS = suffix_from(0)


def member(lang: ClosedFormLanguage, x: int) -> bool:
    return x in lang


def enumerate_at(lang: ClosedFormLanguage, k: int) -> int:
    """k-th element of the canonical enumeration, k >= 0."""
    if k < 0:
        raise ValueError("enumeration index must be nonnegative")
    return next(itertools.islice(lang.elements(), k, None))


def project_language(lang: ClosedFormLanguage, removed: Iterable[int]) -> ClosedFormLanguage:
    """lang minus a finite removed set, back in closed form.

    Removing a finite set never makes the result finite here, but puncturing
    the negative ray is not expressible in closed form and is rejected.
    """
    removed = frozenset(removed)
    if lang.include_negatives and any(r < 0 for r in removed):
        raise ValueError("cannot remove negatives from a language containing all of them")
    finite = set(lang.finite_part) - removed
    tail = lang.tail_start
    if tail is not None:
        hit = [r for r in removed if r >= tail]
        if hit:
            top = max(hit)
            finite.update(v for v in range(tail, top + 1) if v not in removed)
            tail = top + 1
    return ClosedFormLanguage(frozenset(finite), tail, lang.include_negatives)


def map_language(lang: ClosedFormLanguage, shift: int, inverse: bool = False) -> ClosedFormLanguage:
    """Apply the piecewise bijection f(x) = x for x < 0, x + shift for x >= 0
    (or its inverse). Only this family of bijections is supported."""
    if shift < 0:
        raise ValueError("unsupported bijection: shift must be nonnegative")
    if not inverse:
        fwd = lambda v: v if v < 0 else v + shift
        finite = {fwd(v) for v in lang.finite_part}
        tail = lang.tail_start
        if tail is not None:
            if tail >= 0:
                tail += shift
            else:
                finite.update(range(tail, 0))
                tail = shift
        return ClosedFormLanguage(frozenset(finite), tail, lang.include_negatives)
    def back(v: int) -> int:
        if 0 <= v < shift:
            raise ValueError(f"{v} is outside the image of the shift bijection")
        return v if v < 0 else v - shift

    finite = {back(v) for v in lang.finite_part}
    tail = lang.tail_start
    if tail is not None:
        if tail >= shift:
            tail -= shift
        elif shift > 0:
            # the tail sweeps through the gap [0, shift), which f never hits
            raise ValueError("language tail covers points outside the bijection image")
    return ClosedFormLanguage(frozenset(finite), tail, lang.include_negatives)


def zigzag_encode(n: int) -> int:
    """Bijection N -> Z: 0, -1, 1, -2, 2, ..."""
    if n < 0:
        raise ValueError("encode takes a natural number")
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def zigzag_decode(z: int) -> int:
    """Inverse of zigzag_encode."""
    return 2 * z if z >= 0 else -2 * z - 1


class TranscriptLimitLanguage:
    """The limit language of an adaptive run, known only through certificates.

    `seen` holds members enumerated so far, `excluded` holds elements the
    adversary has committed never to enumerate, and `promised` is an optional
    closed-form subset guaranteed to end up in the limit.
    """

    def __init__(
        self,
        promised: ClosedFormLanguage | None = None,
        excluded: Iterable[int] = (),
    ) -> None:
        self.seen: set[int] = set()
        self.excluded: set[int] = set(excluded)
        self.promised = promised
        if promised is not None:
            for x in self.excluded:
                if x in promised:
                    raise ValueError("excluded element lies in the promised part")

    def add_seen(self, x: int) -> None:
        if x in self.excluded:
            raise ValueError(f"{x} was committed as never-enumerated")
        self.seen.add(x)

    def add_excluded(self, x: int) -> None:
        if x in self.seen:
            raise ValueError(f"{x} was already enumerated")
        if self.promised is not None and x in self.promised:
            raise ValueError(f"{x} lies in the promised part")
        self.excluded.add(x)

    def status(self, x: int) -> str:
        if x in self.seen or (self.promised is not None and x in self.promised):
            return IN
        if x in self.excluded:
            return OUT
        return UNKNOWN
