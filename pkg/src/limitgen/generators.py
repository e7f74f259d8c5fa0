"""Generator strategies: the constructive algorithms played against sources.

Every strategy is a deterministic state machine whose state is a pure
function of the prefix it has observed, so replays from the same prefix are
reproducible. `fresh()` returns an unused instance with the same
configuration (needed by replay-based wrappers).
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator

from .errors import ModeMismatch, SearchExhausted
from .families import ChainSpec, CollectionSpec, uniform_without_samples_check
from .langs import zigzag_encode

DEFAULT_PROBE_CAP = 1_000_000


class Generator:
    """Maps each revealed element (None in sampleless play) to an output."""

    def step(self, revealed: int | None) -> int:
        raise NotImplementedError

    def fresh(self) -> "Generator":
        raise NotImplementedError


class _PoolGenerator(Generator):
    """Shared bookkeeping for strategies built from running max/min pools.

    The max pool is {t} u revealed u own outputs; the min pool is
    {0} u revealed u own outputs.
    """

    def __init__(self) -> None:
        self.t = -1
        self.revealed: set[int] = set()
        self._max = None  # max of revealed + outputs
        self._min = None

    def _absorb(self, value: int) -> None:
        self._max = value if self._max is None else max(self._max, value)
        self._min = value if self._min is None else min(self._min, value)

    def _observe(self, revealed: int | None) -> int:
        if revealed is None:
            raise ModeMismatch("this strategy consumes revealed samples")
        self.t += 1
        self.revealed.add(revealed)
        self._absorb(revealed)
        return revealed

    def max_candidate(self) -> int:
        return max(self.t, self._max) + 1

    def min_candidate(self) -> int:
        return min(0, self._min) - 1

    def step(self, revealed: int | None) -> int:
        self._observe(revealed)
        z = self._decide()
        self._absorb(z)
        return z

    def _decide(self) -> int:
        raise NotImplementedError

    def fresh(self) -> "Generator":
        return type(self)()


class MaxPlusOne(_PoolGenerator):
    """Always outputs one past everything seen or produced."""

    def _decide(self) -> int:
        return self.max_candidate()


class MinMinusOne(_PoolGenerator):
    """Always outputs one below everything seen or produced (and below 0)."""

    def _decide(self) -> int:
        return self.min_candidate()


class FollowSuffix(_PoolGenerator):
    """Outputs fresh integers above every nonnegative sample: correct in the
    limit for any language containing an upward ray."""

    def __init__(self) -> None:
        super().__init__()
        self._nat_max = 0  # t >= 0 dominates an empty pool anyway
        self._out_max = 0

    def step(self, revealed: int | None) -> int:
        x = self._observe(revealed)
        if x >= 0:
            self._nat_max = max(self._nat_max, x)
        z = max(self.t, self._nat_max, self._out_max) + 1
        self._out_max = z
        return z

    def fresh(self) -> "FollowSuffix":
        return FollowSuffix()


class _MarkerBranchGenerator(_PoolGenerator):
    """Two-branch strategies: pick the max or min candidate depending on a
    predicate over the revealed set."""

    def __init__(self, level: int) -> None:
        super().__init__()
        self.level = level

    def fresh(self) -> "Generator":
        return type(self)(self.level)


class OmissionTolerantGenerator(_MarkerBranchGenerator):
    """Handles up to `level` omissions for the marked union family: goes high
    once ANY marker in {0..level} has been revealed, low otherwise."""

    def _decide(self) -> int:
        markers = range(self.level + 1)
        if any(m in self.revealed for m in markers):
            return self.max_candidate()
        return self.min_candidate()


class NoiseTolerantGenerator(_MarkerBranchGenerator):
    """Handles noise level up to `level` for the marked union family: goes
    high only once ALL markers in {0..level} have been revealed."""

    def _decide(self) -> int:
        markers = range(self.level + 1)
        if all(m in self.revealed for m in markers):
            return self.max_candidate()
        return self.min_candidate()


class SensitivityGenerator(_MarkerBranchGenerator):
    """Level-aware strategy for rays-plus-negatives: goes low once all of
    {-1..-(level+1)} have been revealed, high otherwise."""

    def _decide(self) -> int:
        markers = range(-1, -(self.level + 2), -1)
        if all(m in self.revealed for m in markers):
            return self.min_candidate()
        return self.max_candidate()


class StreamGenerator(Generator):
    """A sampleless strategy: emits a fixed injective stream, ignoring input."""

    def __init__(self, factory: Callable[[], Iterator[int]]) -> None:
        self._factory = factory
        self._iter = factory()

    def step(self, revealed: int | None = None) -> int:
        return next(self._iter)

    def fresh(self) -> "StreamGenerator":
        return StreamGenerator(self._factory)


def intersection_generator(spec: CollectionSpec) -> StreamGenerator:
    """Enumerate the (infinite) common intersection of the collection."""
    if not uniform_without_samples_check(spec):
        raise ValueError("collection has a finite common intersection")
    return StreamGenerator(lambda: spec.intersection().language.elements())


class ChainGenerator(Generator):
    """Sampleless strategy for a growing chain of collections: at step t,
    emit the first unused element (canonical order) of the common
    intersection of link t."""

    def __init__(self, chain: ChainSpec, probe_cap: int = DEFAULT_PROBE_CAP) -> None:
        self.chain = chain
        self.probe_cap = probe_cap
        self.emitted: set[int] = set()
        self.t = -1

    def step(self, revealed: int | None = None) -> int:
        self.t += 1
        core = self.chain.intersection_at(self.t)
        if not core.is_infinite:
            raise SearchExhausted(f"chain link {self.t} has a finite common core")
        for v in itertools.islice(core.language.elements(), self.probe_cap):
            if v not in self.emitted:
                self.emitted.add(v)
                return v
        raise SearchExhausted("no unused element within the probe cap")

    def fresh(self) -> "ChainGenerator":
        return ChainGenerator(self.chain, self.probe_cap)


class NoisyFromStream(Generator):
    """Turns an injective stream into a sample-consuming strategy by skipping
    stream entries that have already been revealed."""

    def __init__(self, stream_factory: Callable[[], Iterator[int]]) -> None:
        self._factory = stream_factory
        self._iter = stream_factory()
        self._memo: list[int] = []
        self._cursor = 0
        self._seen: set[int] = set()

    def _entry(self, j: int) -> int:
        while j >= len(self._memo):
            self._memo.append(next(self._iter))
        return self._memo[j]

    def step(self, revealed: int | None) -> int:
        if revealed is None:
            raise ModeMismatch("noisy play needs revealed samples")
        self._seen.add(revealed)
        while self._entry(self._cursor) in self._seen:
            self._cursor += 1
        z = self._memo[self._cursor]
        self._cursor += 1
        return z

    def fresh(self) -> "NoisyFromStream":
        return NoisyFromStream(self._factory)


def noisy_from_sampleless(stream: StreamGenerator) -> NoisyFromStream:
    def factory() -> Iterator[int]:
        source = stream.fresh()
        return (source.step(None) for _ in itertools.count())

    return NoisyFromStream(factory)


class SamplelessFromNoisy(Generator):
    """Runs a sample-consuming strategy on the canonical universe enumeration
    and re-emits its outputs, skipping ones already emitted.

    With integer_universe=True the base strategy is fed 0, -1, 1, -2, ...
    (the zigzag order of Z); otherwise it is fed 0, 1, 2, ....
    """

    def __init__(
        self,
        base: Generator,
        integer_universe: bool = True,
        probe_cap: int = DEFAULT_PROBE_CAP,
    ) -> None:
        self.base = base
        self.integer_universe = integer_universe
        self.probe_cap = probe_cap
        self._memo: list[int] = []
        self._cursor = 0
        self._emitted: set[int] = set()

    def _feed_value(self, j: int) -> int:
        return zigzag_encode(j) if self.integer_universe else j

    def _entry(self, j: int) -> int:
        while j >= len(self._memo):
            self._memo.append(self.base.step(self._feed_value(len(self._memo))))
        return self._memo[j]

    def step(self, revealed: int | None = None) -> int:
        j = self._cursor
        while self._entry(j) in self._emitted:
            j += 1
            if j - self._cursor > self.probe_cap:
                raise SearchExhausted("base strategy never produced a fresh value")
        z = self._memo[j]
        self._cursor = j + 1
        self._emitted.add(z)
        return z

    def fresh(self) -> "SamplelessFromNoisy":
        return SamplelessFromNoisy(self.base.fresh(), self.integer_universe, self.probe_cap)


class DedupWrapper(Generator):
    """Feeds the base strategy only the first occurrence of each sample;
    repeats re-emit the base strategy's latest output."""

    def __init__(self, base: Generator) -> None:
        self.base = base
        self._seen: set[int] = set()
        self._last: int | None = None

    def step(self, revealed: int | None) -> int:
        if revealed is None:
            raise ModeMismatch("repetition play needs revealed samples")
        if revealed in self._seen:
            return self._last
        self._seen.add(revealed)
        self._last = self.base.step(revealed)
        return self._last

    def fresh(self) -> "DedupWrapper":
        return DedupWrapper(self.base.fresh())


class PrefixedGenerator(Generator):
    """Evaluates the base strategy as if a fixed prefix had already been
    revealed before the run started."""

    def __init__(self, base: Generator, prefix: tuple[int, ...]) -> None:
        self.base = base
        self.prefix = tuple(prefix)
        for v in self.prefix:
            self.base.step(v)  # pre-feed; those outputs are discarded

    def step(self, revealed: int | None) -> int:
        return self.base.step(revealed)

    def fresh(self) -> "PrefixedGenerator":
        return PrefixedGenerator(self.base.fresh(), self.prefix)


def reduce_by_prefix(base: Generator, removed: tuple[int, ...]) -> Generator:
    """G'(x_0..x_t) = G(y_1..y_d, x_0..x_t) for the removed elements y."""
    if not removed:
        return base
    return PrefixedGenerator(base, tuple(removed))


_BASELINES = {
    "max_plus_one": MaxPlusOne,
    "min_minus_one": MinMinusOne,
    "follow_suffix": FollowSuffix,
}


def baseline(name: str) -> Generator:
    try:
        return _BASELINES[name]()
    except KeyError:
        raise ValueError(f"unknown baseline {name!r}") from None
