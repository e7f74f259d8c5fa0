"""Parameterized families of languages and their analytic oracles.

The families here are intensional: an uncountable family like
{A u Z_{<0} | A subset of Z} is represented by its parameters (required and
forbidden finite sets), never by materializing members. Consistency, closure,
closure dimension, intersection, and projection are all answered in closed
form; tests cross-check them against brute-force enumeration on bounded
windows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import IndexBoundExceeded, UnboundedClosureDimension
from .langs import ClosedFormLanguage, suffix_from

DEFAULT_INDEX_BOUND = 10_000

FINITE = "finite"
INFINITE = "infinite"
NO_CONSISTENT = "no_consistent"


@dataclass(frozen=True)
class ClosureResult:
    """Intersection of all consistent languages: finite set, infinite
    closed-form language, or nothing consistent at all."""

    kind: str
    finite_set: frozenset[int] = frozenset()
    language: ClosedFormLanguage | None = None

    @classmethod
    def finite(cls, members: Iterable[int]) -> "ClosureResult":
        return cls(FINITE, finite_set=frozenset(members))

    @classmethod
    def infinite(cls, language: ClosedFormLanguage) -> "ClosureResult":
        return cls(INFINITE, language=language)

    @classmethod
    def no_consistent(cls) -> "ClosureResult":
        return cls(NO_CONSISTENT)

    @property
    def is_infinite(self) -> bool:
        return self.kind == INFINITE

    def __contains__(self, x: int) -> bool:
        if self.kind == FINITE:
            return x in self.finite_set
        if self.kind == INFINITE:
            return x in self.language
        return False

    def members_in(self, window: Iterable[int]) -> frozenset[int]:
        return frozenset(x for x in window if x in self)


def language_intersection(
    a: ClosedFormLanguage, b: ClosedFormLanguage
) -> ClosedFormLanguage | frozenset[int]:
    """Exact intersection of two closed-form languages; a frozenset when the
    result is finite."""
    tail = None
    if a.tail_start is not None and b.tail_start is not None:
        tail = max(a.tail_start, b.tail_start)
    negatives = a.include_negatives and b.include_negatives
    finite = {v for v in a.finite_part if v in b}
    finite |= {v for v in b.finite_part if v in a}
    # a tail dipping below zero meets the other side's negative ray
    for lo, hi in ((a, b), (b, a)):
        if lo.tail_start is not None and lo.tail_start < 0 and hi.include_negatives:
            finite.update(range(lo.tail_start, 0))
    if tail is not None:
        finite = {v for v in finite if v < tail}
    if negatives:
        finite = {v for v in finite if v >= 0}
    if tail is None and not negatives:
        return frozenset(finite)
    return ClosedFormLanguage(frozenset(finite), tail, negatives)


def closure_intersection(a: ClosureResult, b: ClosureResult) -> ClosureResult:
    if a.kind == NO_CONSISTENT or b.kind == NO_CONSISTENT:
        raise ValueError("cannot intersect with an inconsistent closure")
    if a.kind == FINITE or b.kind == FINITE:
        fin, other = (a, b) if a.kind == FINITE else (b, a)
        return ClosureResult.finite(x for x in fin.finite_set if x in other)
    merged = language_intersection(a.language, b.language)
    if isinstance(merged, frozenset):
        return ClosureResult.finite(merged)
    return ClosureResult.infinite(merged)


class CollectionSpec:
    """Common oracle surface for every family variant."""

    def consistent(self, sample: Iterable[int]) -> bool:
        raise NotImplementedError

    def closure(self, sample: Iterable[int]) -> ClosureResult:
        raise NotImplementedError

    def closure_dimension(self) -> int:
        raise NotImplementedError

    def intersection(self) -> ClosureResult:
        return self.closure(())

    def project(self, removed: Iterable[int]) -> "CollectionSpec":
        raise NotImplementedError

    def to_record(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class SuffixFamily(CollectionSpec):
    """Languages required u A u P_j with A avoiding the forbidden set.

    `offset` pins j; offset=None ranges over all j >= min_offset.
    """

    required: frozenset[int] = frozenset()
    forbidden: frozenset[int] = frozenset()
    offset: int | None = None
    min_offset: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "required", frozenset(self.required))
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))
        if self.required & self.forbidden:
            raise ValueError("required and forbidden sets must be disjoint")
        if self.offset is not None and self.offset < 0:
            raise ValueError("suffix offsets are natural numbers")
        if self.min_offset < 0:
            raise ValueError("min_offset must be nonnegative")

    def _offset_cap(self, sample: frozenset[int]) -> int | None:
        """Largest admissible j for the sample, or None when unbounded.

        Raises ValueError when no j works (inconsistent sample).
        """
        blocked = sample & self.forbidden
        low = self.offset if self.offset is not None else self.min_offset
        if blocked:
            # forbidden sample elements must be swept up by the tail
            cap = min(blocked)
            if cap < low:
                raise ValueError("no admissible offset")
            return self.offset if self.offset is not None else cap
        return self.offset  # None means unbounded when offsets are free

    def consistent(self, sample: Iterable[int]) -> bool:
        try:
            self._offset_cap(frozenset(sample))
        except ValueError:
            return False
        return True

    def closure(self, sample: Iterable[int]) -> ClosureResult:
        sample = frozenset(sample)
        try:
            cap = self._offset_cap(sample)
        except ValueError:
            return ClosureResult.no_consistent()
        core = sample | self.required
        if cap is None:
            return ClosureResult.finite(core)
        return ClosureResult.infinite(ClosedFormLanguage(core, cap, False))

    def closure_dimension(self) -> int:
        if self.offset is None:
            raise UnboundedClosureDimension(
                "free-offset suffix families admit arbitrarily large finite-closure sets"
            )
        return -1

    def project(self, removed: Iterable[int]) -> "SuffixFamily":
        removed = frozenset(removed)
        required = self.required - removed
        forbidden = self.forbidden | removed
        if self.offset is not None:
            hit = [r for r in removed if r >= self.offset]
            offset = self.offset
            if hit:
                top = max(hit)
                required |= frozenset(
                    v for v in range(self.offset, top + 1) if v not in removed
                )
                offset = top + 1
            return SuffixFamily(required, forbidden - required, offset, 0)
        removed_nat = [r for r in removed if r >= 0]
        min_offset = max([self.min_offset] + [r + 1 for r in removed_nat])
        return SuffixFamily(required, forbidden, None, min_offset)

    def to_record(self) -> dict:
        return {
            "variant": "suffix",
            "required": sorted(self.required),
            "forbidden": sorted(self.forbidden),
            "offset": self.offset,
            "min_offset": self.min_offset,
        }


@dataclass(frozen=True)
class NegFamily(CollectionSpec):
    """Languages required u A u Z_{<0} with A avoiding the forbidden set."""

    required: frozenset[int] = frozenset()
    forbidden: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "required", frozenset(self.required))
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))
        if self.required & self.forbidden:
            raise ValueError("required and forbidden sets must be disjoint")
        if any(v < 0 for v in self.forbidden):
            raise ValueError("forbidding a negative is vacuous: every member has them all")

    def consistent(self, sample: Iterable[int]) -> bool:
        return all(x < 0 or x in self.required or x not in self.forbidden for x in sample)

    def closure(self, sample: Iterable[int]) -> ClosureResult:
        sample = frozenset(sample)
        if not self.consistent(sample):
            return ClosureResult.no_consistent()
        core = frozenset(v for v in (sample | self.required) if v >= 0)
        return ClosureResult.infinite(ClosedFormLanguage(core, None, True))

    def closure_dimension(self) -> int:
        return -1  # every closure contains the negative ray

    def project(self, removed: Iterable[int]) -> "NegFamily":
        removed = frozenset(removed)
        if any(r < 0 for r in removed):
            raise ValueError("cannot project away part of the negative ray")
        return NegFamily(self.required - removed, self.forbidden | removed)

    def to_record(self) -> dict:
        return {
            "variant": "neg",
            "required": sorted(self.required),
            "forbidden": sorted(self.forbidden),
        }


@dataclass(frozen=True)
class ExplicitCountable(CollectionSpec):
    """An explicitly indexed countable collection.

    Either a finite tuple of languages (everything exact) or a rule k -> L_k.
    Rule-based instances may carry analytic shortcuts; otherwise searches run
    up to index_bound and raise IndexBoundExceeded past it, which means
    "unknown", not "false".
    """

    languages: tuple[ClosedFormLanguage, ...] | None = None
    rule: Callable[[int], ClosedFormLanguage] | None = None
    index_bound: int = DEFAULT_INDEX_BOUND
    consistent_fn: Callable[[frozenset[int]], bool] | None = None
    closure_fn: Callable[[frozenset[int]], ClosureResult] | None = None
    declared_dimension: int | None = None
    rule_name: str | None = None

    def __post_init__(self) -> None:
        if (self.languages is None) == (self.rule is None):
            raise ValueError("provide exactly one of languages / rule")
        if self.languages is not None:
            object.__setattr__(self, "languages", tuple(self.languages))

    def language_at(self, k: int) -> ClosedFormLanguage:
        if self.languages is not None:
            return self.languages[k]
        return self.rule(k)

    def __len__(self) -> int:
        if self.languages is None:
            raise TypeError("rule-based collection has no finite size")
        return len(self.languages)

    def consistent(self, sample: Iterable[int]) -> bool:
        sample = frozenset(sample)
        if self.consistent_fn is not None:
            return self.consistent_fn(sample)
        if self.languages is not None:
            return any(all(x in lang for x in sample) for lang in self.languages)
        for k in range(self.index_bound):
            if all(x in self.rule(k) for x in sample):
                return True
        raise IndexBoundExceeded(
            f"no consistent language among the first {self.index_bound}"
        )

    def closure(self, sample: Iterable[int]) -> ClosureResult:
        sample = frozenset(sample)
        if self.closure_fn is not None:
            return self.closure_fn(sample)
        if self.languages is None:
            raise IndexBoundExceeded(
                "closure over a rule-based collection needs a closure_fn"
            )
        consistent = [
            lang for lang in self.languages if all(x in lang for x in sample)
        ]
        if not consistent:
            return ClosureResult.no_consistent()
        merged: ClosedFormLanguage | frozenset[int] = consistent[0]
        for lang in consistent[1:]:
            if isinstance(merged, frozenset):
                merged = frozenset(v for v in merged if v in lang)
            else:
                merged = language_intersection(merged, lang)
        if isinstance(merged, frozenset):
            return ClosureResult.finite(merged)
        return ClosureResult.infinite(merged)

    def closure_dimension(self) -> int:
        if self.declared_dimension is not None:
            return self.declared_dimension
        if self.languages is None:
            raise IndexBoundExceeded(
                "closure dimension of a rule-based collection must be declared"
            )
        if len(self.languages) > 12:
            raise IndexBoundExceeded("subfamily enumeration too large; declare the dimension")
        # the largest finite-closure sample is a largest finite subfamily
        # intersection, so try every subfamily
        best = -1
        for r in range(1, len(self.languages) + 1):
            for group in itertools.combinations(self.languages, r):
                merged: ClosedFormLanguage | frozenset[int] = group[0]
                for lang in group[1:]:
                    if isinstance(merged, frozenset):
                        merged = frozenset(v for v in merged if v in lang)
                    else:
                        merged = language_intersection(merged, lang)
                if isinstance(merged, frozenset):
                    best = max(best, len(merged))
        return best

    def project(self, removed: Iterable[int]) -> "ExplicitCountable":
        removed = frozenset(removed)
        if self.languages is None:
            raise IndexBoundExceeded("cannot project a rule-based collection eagerly")
        from .langs import project_language

        projected = tuple(project_language(lang, removed) for lang in self.languages)
        return ExplicitCountable(languages=projected, index_bound=self.index_bound)

    def to_record(self) -> dict:
        if self.languages is not None:
            return {
                "variant": "explicit",
                "languages": [lang.to_record() for lang in self.languages],
            }
        return {"variant": "explicit", "rule": self.rule_name or "<rule>"}


@dataclass(frozen=True)
class UnionSpec(CollectionSpec):
    """Union of component families."""

    parts: tuple[CollectionSpec, ...]
    declared_dimension: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("union of nothing")

    def _part_flags(self, sample: frozenset[int]) -> list[bool]:
        flags = []
        unknown = False
        for part in self.parts:
            try:
                flags.append(part.consistent(sample))
            except IndexBoundExceeded:
                flags.append(False)
                unknown = True
        if not any(flags) and unknown:
            raise IndexBoundExceeded("consistency unknown past bound in a union part")
        return flags

    def consistent(self, sample: Iterable[int]) -> bool:
        return any(self._part_flags(frozenset(sample)))

    def closure(self, sample: Iterable[int]) -> ClosureResult:
        sample = frozenset(sample)
        flags = self._part_flags(sample)
        live = [part for part, ok in zip(self.parts, flags) if ok]
        if not live:
            return ClosureResult.no_consistent()
        result = live[0].closure(sample)
        for part in live[1:]:
            result = closure_intersection(result, part.closure(sample))
        return result

    def closure_dimension(self) -> int:
        if self.declared_dimension is not None:
            return self.declared_dimension
        for part in self.parts:
            part.closure_dimension()  # propagate UnboundedClosureDimension
        raise IndexBoundExceeded("declare the dimension of a union explicitly")

    def project(self, removed: Iterable[int]) -> "UnionSpec":
        return UnionSpec(tuple(part.project(removed) for part in self.parts))

    def to_record(self) -> dict:
        return {"variant": "union", "parts": [p.to_record() for p in self.parts]}


@dataclass(frozen=True)
class ChainSpec(CollectionSpec):
    """A monotone chain C_0 within C_1 within ..., given by an index rule.

    Links and their intersections are memoized: chains are consumed one link
    per step by strategies, often across many runs.
    """

    rule: Callable[[int], CollectionSpec]
    index_bound: int = DEFAULT_INDEX_BOUND
    declared_dimension: int | None = None
    rule_name: str | None = None
    _links: dict = field(default_factory=dict, hash=False, compare=False, repr=False)
    _cores: dict = field(default_factory=dict, hash=False, compare=False, repr=False)

    def at(self, i: int) -> CollectionSpec:
        if i not in self._links:
            self._links[i] = self.rule(i)
        return self._links[i]

    def intersection_at(self, i: int) -> ClosureResult:
        if i not in self._cores:
            self._cores[i] = self.at(i).intersection()
        return self._cores[i]

    def consistent(self, sample: Iterable[int]) -> bool:
        sample = frozenset(sample)
        for i in range(self.index_bound):
            if self.at(i).consistent(sample):
                return True
        raise IndexBoundExceeded(
            f"not consistent in the first {self.index_bound} chain links"
        )

    def closure(self, sample: Iterable[int]) -> ClosureResult:
        raise IndexBoundExceeded("closure over a whole chain is not computable")

    def closure_dimension(self) -> int:
        if self.declared_dimension is None:
            raise IndexBoundExceeded("declare the dimension of a chain explicitly")
        return self.declared_dimension

    def project(self, removed: Iterable[int]) -> "ChainSpec":
        removed = frozenset(removed)
        rule = self.rule
        return ChainSpec(
            lambda i: rule(i).project(removed),
            self.index_bound,
            self.declared_dimension,
        )

    def to_record(self) -> dict:
        return {"variant": "chain", "rule": self.rule_name or "<rule>"}


def uniform_without_samples_check(spec: CollectionSpec) -> bool:
    """True iff the intersection of all members is infinite."""
    return spec.intersection().is_infinite


def intersection_stream(spec: CollectionSpec) -> Iterator[int] | frozenset[int]:
    """Canonical injective stream of the common intersection, or the finite set."""
    result = spec.intersection()
    if result.is_infinite:
        return result.language.elements()
    if result.kind == FINITE:
        return result.finite_set
    raise ValueError("no consistent language: empty collection intersection")


# --- the standing cast of collections -------------------------------------


def suffix_union() -> SuffixFamily:
    """All of {A u P_j}: non-uniformly generatable, empty common core."""
    return SuffixFamily()


def neg_union() -> NegFamily:
    """All of {A u Z_{<0}}: uniformly generatable without samples."""
    return NegFamily()


def marked_suffix_union(i: int) -> SuffixFamily:
    """{A u P_j} with markers {0..i} required in every member."""
    return SuffixFamily(required=frozenset(range(i + 1)))


def marked_neg_union(i: int) -> NegFamily:
    """{A u Z_{<0}} with markers {0..i} forbidden in every member."""
    return NegFamily(forbidden=frozenset(range(i + 1)))


def marked_union(i: int) -> UnionSpec:
    """Union of the two marked families: members either carry all markers
    (suffix side) or none of them (negatives side)."""
    return UnionSpec((marked_suffix_union(i), marked_neg_union(i)))


def ray_family(index_bound: int = DEFAULT_INDEX_BOUND) -> ExplicitCountable:
    """The countable family of rays {P_k | k in N}, with exact oracles."""

    def consistent_fn(sample: frozenset[int]) -> bool:
        return all(x >= 0 for x in sample)

    def closure_fn(sample: frozenset[int]) -> ClosureResult:
        if not consistent_fn(sample):
            return ClosureResult.no_consistent()
        if not sample:
            return ClosureResult.finite(())
        return ClosureResult.infinite(suffix_from(min(sample)))

    return ExplicitCountable(
        rule=suffix_from,
        index_bound=index_bound,
        consistent_fn=consistent_fn,
        closure_fn=closure_fn,
        declared_dimension=0,
        rule_name="rays",
    )


def sensitivity_collection() -> UnionSpec:
    """Rays joined with the negative-ray family; generatable at any fixed
    noise level, not with unknown noise."""
    return UnionSpec((ray_family(), neg_union()))


_RAY_POOL: list[ClosedFormLanguage] = []


def _rays_upto(n: int) -> tuple[ClosedFormLanguage, ...]:
    while len(_RAY_POOL) <= n:
        _RAY_POOL.append(suffix_from(len(_RAY_POOL)))
    return tuple(_RAY_POOL[: n + 1])


def ray_prefix_chain(index_bound: int = DEFAULT_INDEX_BOUND) -> ChainSpec:
    """C_t = {P_0, ..., P_t}: the canonical growing chain of ray families."""

    def link(t: int) -> ExplicitCountable:
        def closure_fn(sample: frozenset[int]) -> ClosureResult:
            if any(x < 0 for x in sample):
                return ClosureResult.no_consistent()
            cap = min([t] + ([min(sample)] if sample else []))
            return ClosureResult.infinite(suffix_from(cap))

        return ExplicitCountable(
            languages=_rays_upto(t),
            consistent_fn=lambda sample: all(x >= 0 for x in sample),
            closure_fn=closure_fn,
        )

    return ChainSpec(link, index_bound=index_bound, rule_name="ray-prefixes")


def collection_by_name(name: str) -> CollectionSpec:
    """Resolve the names used in experiment configs."""
    if name == "C1":
        return suffix_union()
    if name == "C2":
        return neg_union()
    if name == "P-family":
        return ray_family()
    if name == "sensitivity":
        return sensitivity_collection()
    for prefix, builder in (
        ("C1^i:", marked_suffix_union),
        ("C2^i:", marked_neg_union),
        ("C^i:", marked_union),
    ):
        if name.startswith(prefix):
            return builder(int(name[len(prefix):]))
    if name.startswith("P:"):
        return ExplicitCountable(languages=(suffix_from(int(name[2:])),))
    raise ValueError(f"unknown collection name: {name!r}")
