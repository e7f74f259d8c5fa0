"""Strategies that ask membership queries, and the query-elimination wrapper.

Per step the interaction is: the source reveals x_t, the strategy may query
y_t (or pass), the oracle answers a_t, and the strategy outputs z_t. A
strategy reconstructs everything it needs from the transcript, so replays
are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import BudgetViolation, SearchExhausted
from .families import FINITE, ClosureResult, CollectionSpec, ExplicitCountable
from .generators import DEFAULT_PROBE_CAP, Generator

YES = True
NO = False


class FeedbackGenerator:
    """Two-phase strategy: query after the reveal, output after the answer.

    `budget` is the declared maximum number of non-pass queries over any
    run (None means unlimited).
    """

    budget: int | None = None

    def step_query(self, revealed: int) -> int | None:
        raise NotImplementedError

    def step_output(self, answer: bool | None) -> int:
        raise NotImplementedError

    def fresh(self) -> "FeedbackGenerator":
        raise NotImplementedError


class UnionFeedbackGenerator(FeedbackGenerator):
    """Plays a countable union of uniformly-generatable parts.

    For each part in turn: gather samples while the sample is no larger than
    the part's closure dimension (querying and outputting the running
    candidate), then stream fresh candidates from the closure of the sample,
    moving to the next part on the first \"No\" answer.
    """

    budget = None

    def __init__(self, parts: Sequence[CollectionSpec], probe_cap: int = DEFAULT_PROBE_CAP) -> None:
        self.parts = tuple(parts)
        if not self.parts:
            raise ValueError("need at least one part")
        # rejects parts with unbounded dimension up front
        self.dims = tuple(part.closure_dimension() for part in self.parts)
        self.probe_cap = probe_cap
        self.part_idx = 0
        self.phase = "enter"
        self.sample: set[int] = set()
        self.candidate = 0
        self._stream: Iterator[int] | None = None
        self._stream_started = False
        self.switches = 0  # part advances taken after a refused candidate

    def _candidate_stream(self, closure: ClosureResult) -> Iterator[int]:
        if closure.is_infinite:
            return closure.language.elements()
        if closure.kind == FINITE:
            return iter(sorted(closure.finite_set))
        raise SearchExhausted("no consistent language to stream from")

    def _settle_phase(self) -> None:
        """Advance part/phase bookkeeping; runs before each reveal."""
        while True:
            if self.part_idx >= len(self.parts):
                raise SearchExhausted("ran out of parts: target beyond the declared union")
            if self.phase == "stream":
                return
            if len(self.sample) <= self.dims[self.part_idx]:
                self.phase = "gather"
                return
            part = self.parts[self.part_idx]
            if part.consistent(self.sample):
                self._stream = self._candidate_stream(part.closure(self.sample))
                self._stream_started = False
                self.phase = "stream"
                return
            self.part_idx += 1
            self.phase = "enter"

    def _advance_candidate(self) -> None:
        """Move to the next fresh closure element, keeping the current
        candidate while it remains unrevealed."""
        if self._stream_started and self.candidate not in self.sample:
            return
        for _ in range(self.probe_cap):
            try:
                v = next(self._stream)
            except StopIteration:
                raise SearchExhausted("finite closure exhausted while streaming") from None
            if v not in self.sample:
                self.candidate = v
                self._stream_started = True
                return
        raise SearchExhausted("no fresh candidate within the probe cap")

    def step_query(self, revealed: int) -> int | None:
        self._settle_phase()
        self.sample.add(revealed)
        if self.phase == "stream":
            self._advance_candidate()
        return self.candidate

    def step_output(self, answer: bool | None) -> int:
        z = self.candidate
        if self.phase == "stream" and answer is NO:
            self.part_idx += 1
            self.phase = "enter"
            self._stream = None
            self._stream_started = False
            self.switches += 1
        return z

    def fresh(self) -> "UnionFeedbackGenerator":
        return UnionFeedbackGenerator(self.parts, self.probe_cap)


@dataclass
class ReplayNode:
    """Per-replay query record projected onto the full binary decision tree."""

    t: int
    query_times: tuple[int, ...]
    queries: tuple[int, ...]
    answers: tuple[bool, ...]
    preorder_index: int


def preorder_index(answers: Sequence[bool], depth: int) -> int:
    """Preorder position of the node reached in a full binary tree of the
    given depth by walking No=left / Yes=right along the answers.

    Answers only ever flip from No to Yes (revealed sets grow), so with Yes
    on the right the reached node's preorder position never decreases.
    """
    idx = 0
    remaining = depth
    for yes in answers:
        idx += 2**remaining if yes else 1
        remaining -= 1
    return idx


@dataclass
class DecisionTreeMonitor:
    """Tracks where each replay lands in the query decision tree."""

    depth: int
    records: list[ReplayNode] = field(default_factory=list)

    def record(self, t: int, query_times: Sequence[int], queries: Sequence[int], answers: Sequence[bool]) -> None:
        self.records.append(
            ReplayNode(
                t,
                tuple(query_times),
                tuple(queries),
                tuple(answers),
                preorder_index(answers, self.depth),
            )
        )

    def indices(self) -> list[int]:
        return [r.preorder_index for r in self.records]

    def non_decreasing(self) -> bool:
        idx = self.indices()
        return all(a <= b for a, b in zip(idx, idx[1:]))


class StripQueries(Generator):
    """Simulates a query-budgeted strategy without an oracle.

    Each step replays the strategy from scratch on the revealed prefix,
    answering every replayed query \"Yes\" exactly when the queried element
    has been revealed so far, and emits the replay's final output.
    """

    def __init__(self, base: FeedbackGenerator) -> None:
        if base.budget is None:
            raise ValueError("base strategy must declare a finite query budget")
        self.base = base
        self.monitor = DecisionTreeMonitor(depth=base.budget)
        self.revealed: list[int] = []
        self.seen: set[int] = set()
        self.t = -1

    def step(self, revealed: int | None) -> int:
        if revealed is None:
            raise ValueError("query elimination replays need revealed samples")
        self.t += 1
        self.revealed.append(revealed)
        self.seen.add(revealed)
        replay = self.base.fresh()
        query_times: list[int] = []
        queries: list[int] = []
        answers: list[bool] = []
        z = 0
        for j, xj in enumerate(self.revealed):
            y = replay.step_query(xj)
            if y is None:
                a = None
            else:
                a = y in self.seen
                query_times.append(j)
                queries.append(y)
                answers.append(a)
                if len(queries) > self.base.budget:
                    raise BudgetViolation(
                        f"replay asked {len(queries)} queries, budget {self.base.budget}"
                    )
            z = replay.step_output(a)
        self.monitor.record(self.t, query_times, queries, answers)
        return z

    def fresh(self) -> "StripQueries":
        return StripQueries(self.base.fresh())


class PlainAsFeedback(FeedbackGenerator):
    """A never-querying wrapper around a plain strategy (budget 0)."""

    budget = 0

    def __init__(self, base: Generator) -> None:
        self.base = base
        self._pending: int | None = None

    def step_query(self, revealed: int) -> int | None:
        self._pending = revealed
        return None

    def step_output(self, answer: bool | None) -> int:
        return self.base.step(self._pending)

    def fresh(self) -> "PlainAsFeedback":
        return PlainAsFeedback(self.base.fresh())


class OneShotProbeGenerator(FeedbackGenerator):
    """Budget-1 fixture: asks once (at the first step) whether `probe` is in
    the target, then plays low if Yes and high if No forever."""

    budget = 1

    def __init__(self, probe: int = -1) -> None:
        self.probe = probe
        self.answer: bool | None = None
        self.t = -1
        self._max = None
        self._min = None

    def _absorb(self, v: int) -> None:
        self._max = v if self._max is None else max(self._max, v)
        self._min = v if self._min is None else min(self._min, v)

    def step_query(self, revealed: int) -> int | None:
        self.t += 1
        self._absorb(revealed)
        return self.probe if self.t == 0 else None

    def step_output(self, answer: bool | None) -> int:
        if self.t == 0:
            self.answer = answer
        if self.answer is YES:
            z = min(0, self._min) - 1
        else:
            z = max(self.t, self._max) + 1
        self._absorb(z)
        return z

    def fresh(self) -> "OneShotProbeGenerator":
        return OneShotProbeGenerator(self.probe)


class IndexIdentifier(FeedbackGenerator):
    """Names the target by index in an explicitly listed collection.

    Queries the step number itself (the collection must live over the
    naturals), keeps positive / negative example sets, and outputs the least
    index consistent with both.
    """

    budget = None

    def __init__(self, collection: ExplicitCountable) -> None:
        if collection.languages is None:
            raise ValueError("identification needs an explicitly listed collection")
        self.languages = collection.languages
        self.positive: set[int] = set()
        self.negative: set[int] = set()
        self.t = -1
        self._failed = [False] * len(self.languages)

    def step_query(self, revealed: int) -> int | None:
        self.t += 1
        self.positive.add(revealed)
        return self.t

    def step_output(self, answer: bool | None) -> int:
        if answer is YES:
            self.positive.add(self.t)
        else:
            self.negative.add(self.t)
        for i, lang in enumerate(self.languages):
            if i > self.t or self._failed[i]:
                continue
            if any(v not in lang for v in self.positive) or any(
                v in lang for v in self.negative
            ):
                self._failed[i] = True
        for i in range(min(self.t + 1, len(self.languages))):
            if not self._failed[i]:
                return i
        return 0

    def fresh(self) -> "IndexIdentifier":
        return IndexIdentifier(ExplicitCountable(languages=self.languages))
