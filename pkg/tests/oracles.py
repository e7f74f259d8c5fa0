"""Independent brute-force oracles for the family oracles.

Two levels:

* literal materialization on a tiny window: enumerate every language of a
  family restricted to the window (all finite-part subsets drawn from the
  window, all tail offsets up to just past the window) and answer
  consistency/closure by direct set operations;

* minimal-language construction on larger windows: the intersection of all
  consistent languages equals the intersection of the *minimal* consistent
  language per admissible tail offset (adding elements to the free part only
  enlarges a language), which brute-forces [-20,20]-scale checks without
  2^41 subsets.

Both are deliberately separate code paths from the analytic oracles they
check.
"""

from __future__ import annotations

import itertools

from limitgen.families import (
    ExplicitCountable,
    NegFamily,
    SuffixFamily,
    UnionSpec,
)

TINY_LO, TINY_HI = -6, 6


def window(lo: int, hi: int) -> list[int]:
    return list(range(lo, hi + 1))


def _suffix_traces(fam: SuffixFamily, lo: int, hi: int) -> list[frozenset[int]]:
    pts = window(lo, hi)
    pool = [v for v in pts if v not in fam.forbidden]
    if fam.offset is not None:
        offsets = [fam.offset]
    else:
        offsets = list(range(fam.min_offset, hi + 2))  # hi+1 stands in for all larger
    traces = set()
    for j in offsets:
        for r in range(len(pool) + 1):
            for a_part in itertools.combinations(pool, r):
                lang = set(fam.required) | set(a_part) | {v for v in pts if v >= j}
                traces.add(frozenset(v for v in lang if lo <= v <= hi))
    return sorted(traces, key=sorted)


def _neg_traces(fam: NegFamily, lo: int, hi: int) -> list[frozenset[int]]:
    pts = window(lo, hi)
    pool = [v for v in pts if v not in fam.forbidden]
    traces = set()
    for r in range(len(pool) + 1):
        for a_part in itertools.combinations(pool, r):
            lang = set(fam.required) | set(a_part) | {v for v in pts if v < 0}
            traces.add(frozenset(v for v in lang if lo <= v <= hi))
    return sorted(traces, key=sorted)


def literal_traces(spec, lo: int = TINY_LO, hi: int = TINY_HI) -> list[frozenset[int]]:
    """Every member of the family, restricted to the window."""
    if isinstance(spec, SuffixFamily):
        return _suffix_traces(spec, lo, hi)
    if isinstance(spec, NegFamily):
        return _neg_traces(spec, lo, hi)
    if isinstance(spec, ExplicitCountable):
        pts = window(lo, hi)
        return [frozenset(v for v in pts if v in lang) for lang in _listed(spec, hi)]
    if isinstance(spec, UnionSpec):
        merged = []
        for part in spec.parts:
            merged.extend(literal_traces(part, lo, hi))
        return merged
    raise TypeError(f"no literal oracle for {type(spec)!r}")


def _listed(spec: ExplicitCountable, hi: int):
    """Languages of an explicit collection relevant to a window check.

    For rule-based collections the first hi+2 members are materialized; this
    is exact for the ray family (later rays trace identically to ray hi+1 on
    the window and cannot contain window samples).
    """
    if spec.languages is not None:
        return spec.languages
    return tuple(spec.rule(k) for k in range(hi + 2))


def brute_consistent(traces, sample) -> bool:
    sample = frozenset(sample)
    return any(sample <= trace for trace in traces)


def brute_closure(traces, sample):
    """Window trace of the closure, or None when nothing is consistent."""
    sample = frozenset(sample)
    live = [trace for trace in traces if sample <= trace]
    if not live:
        return None
    out = set(live[0])
    for trace in live[1:]:
        out &= trace
    return frozenset(out)


# --- minimal-language oracle for larger windows -----------------------------


def minimal_traces(spec, sample, lo: int, hi: int) -> list[frozenset[int]] | None:
    """Window traces of the minimal consistent languages for the sample.

    Their intersection equals the closure's window trace: enlarging the free
    part only enlarges a language, so minimal members decide the
    intersection.
    """
    sample = frozenset(sample)
    pts = window(lo, hi)
    if isinstance(spec, SuffixFamily):
        blocked = sample & spec.forbidden
        lows = [spec.offset] if spec.offset is not None else list(range(spec.min_offset, hi + 2))
        traces = []
        for j in lows:
            if any(x < j for x in blocked):
                continue  # forbidden sample points must ride the tail
            lang = set(spec.required) | sample | {v for v in pts if v >= j}
            traces.append(frozenset(v for v in lang if lo <= v <= hi))
        return traces or None
    if isinstance(spec, NegFamily):
        bad = [x for x in sample if x >= 0 and x in spec.forbidden and x not in spec.required]
        if bad:
            return None
        lang = set(spec.required) | sample | {v for v in pts if v < 0}
        return [frozenset(v for v in lang if lo <= v <= hi)]
    if isinstance(spec, ExplicitCountable):
        live = [
            frozenset(v for v in pts if v in lang)
            for lang in _listed(spec, hi)
            if all(x in lang for x in sample)
        ]
        return live or None
    if isinstance(spec, UnionSpec):
        merged: list[frozenset[int]] = []
        for part in spec.parts:
            sub = minimal_traces(part, sample, lo, hi)
            if sub:
                merged.extend(sub)
        return merged or None
    raise TypeError(f"no minimal-language oracle for {type(spec)!r}")


def brute_closure_window(spec, sample, lo: int, hi: int):
    traces = minimal_traces(spec, sample, lo, hi)
    if traces is None:
        return None
    out = set(traces[0])
    for trace in traces[1:]:
        out &= trace
    return frozenset(out)
