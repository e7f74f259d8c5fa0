"""The game loop: one generator vs one source under a declared mode.

Per step: the source reveals x_t (skipped in sampleless play), feedback
strategies may query y_t and receive a_t, the generator outputs z_t, and the
verdict is computed against the source's declared truth. Adaptive sources
see each output immediately after it is produced, before the verdict is
taken, so certified mistakes show up as Mistake verdicts in the transcript.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import ModeMismatch
from .feedback import FeedbackGenerator
from .generators import Generator
from .langs import IN, OUT, ClosedFormLanguage, TranscriptLimitLanguage
from .sources import ScriptedSource, Source, StagedAdversary

CORRECT = "Correct"
MISTAKE = "Mistake"
UNKNOWN_VERDICT = "Unknown"

STANDARD = "standard"
LOSSY = "lossy"
NOISY = "noisy"
SAMPLELESS = "sampleless"
FEEDBACK = "feedback"
IDENTIFICATION = "identification"
REPETITION = "repetition"


@dataclass(frozen=True)
class Mode:
    kind: str = STANDARD
    omissions: int | str | None = None  # an int budget or "infinite"
    noise: int | None = None
    noise_known: bool = True
    query_budget: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.omissions, int) and self.omissions < 0:
            raise ValueError("omission budget must be nonnegative")
        if self.noise is not None and self.noise < 0:
            raise ValueError("noise level must be nonnegative")
        if self.query_budget is not None and self.query_budget < 0:
            raise ValueError("query budget must be nonnegative")

    @classmethod
    def standard(cls) -> "Mode":
        return cls(STANDARD)

    @classmethod
    def lossy(cls, omissions: int | str) -> "Mode":
        return cls(LOSSY, omissions=omissions)

    @classmethod
    def noisy(cls, noise: int, known: bool = True) -> "Mode":
        return cls(NOISY, noise=noise, noise_known=known)

    @classmethod
    def sampleless(cls) -> "Mode":
        return cls(SAMPLELESS)

    @classmethod
    def feedback(cls, budget: int | None = None) -> "Mode":
        return cls(FEEDBACK, query_budget=budget)

    @classmethod
    def identification(cls) -> "Mode":
        return cls(IDENTIFICATION)

    @classmethod
    def repetition(cls) -> "Mode":
        return cls(REPETITION)

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "omissions": self.omissions,
            "noise": self.noise,
            "noise_known": self.noise_known,
            "query_budget": self.query_budget,
        }


@dataclass(frozen=True)
class StepRecord:
    t: int
    x: int | None
    y: int | None
    a: bool | None
    z: int
    verdict: str

    def to_record(self) -> dict:
        answer = None if self.a is None else ("Yes" if self.a else "No")
        return {"t": self.t, "x": self.x, "y": self.y, "a": answer, "z": self.z, "verdict": self.verdict}


@dataclass(frozen=True)
class RunResult:
    mistake_times: tuple[int, ...]
    observed_convergence: int
    unknown_count: int
    validity_violations: tuple[str, ...]
    no_trigger: bool = False
    certified_mistake_times: tuple[int, ...] = ()
    final_stage_mistakes: int = 0
    distinct_at_convergence: int | None = None

    @property
    def mistakes(self) -> int:
        return len(self.mistake_times)

    def to_record(self) -> dict:
        return {
            "mistake_times": list(self.mistake_times),
            "observed_convergence": self.observed_convergence,
            "unknown_count": self.unknown_count,
            "validity_violations": list(self.validity_violations),
            "no_trigger": self.no_trigger,
            "certified_mistake_times": list(self.certified_mistake_times),
            "final_stage_mistakes": self.final_stage_mistakes,
            "distinct_at_convergence": self.distinct_at_convergence,
        }


def oracle_answer(truth: ClosedFormLanguage, query: int) -> bool:
    """Exact membership answer; only committed truths can be queried."""
    if not isinstance(truth, ClosedFormLanguage):
        raise ModeMismatch("membership queries need a committed (scripted) truth")
    return query in truth


def verdict(z: int, truth, seen: set[int]) -> str:
    """Correct iff z is an unseen member of the truth; tri-state for
    adaptive limit truths."""
    if z in seen:
        return MISTAKE
    if isinstance(truth, ClosedFormLanguage):
        return CORRECT if z in truth else MISTAKE
    status = truth.status(z)
    if status == IN:
        return CORRECT
    if status == OUT:
        return MISTAKE
    return UNKNOWN_VERDICT


def _identification_target(generator, truth: ClosedFormLanguage) -> int:
    languages = getattr(generator, "languages", None)
    if languages is None:
        raise ModeMismatch("identification needs an index-outputting strategy")
    for i, lang in enumerate(languages):
        if lang.same_set(truth):
            return i
    raise ModeMismatch("the truth is not in the identified collection")


def _check_compat(generator, source: Source, mode: Mode) -> None:
    needs_feedback = mode.kind in (FEEDBACK, IDENTIFICATION)
    if needs_feedback != isinstance(generator, FeedbackGenerator):
        raise ModeMismatch(f"generator type does not fit mode {mode.kind!r}")
    if needs_feedback and not isinstance(source.truth_view(), ClosedFormLanguage):
        raise ModeMismatch("feedback play needs a scripted source")
    if source.adaptive and mode.kind != STANDARD:
        raise ModeMismatch("adaptive sources play in standard mode only")
    if mode.kind == SAMPLELESS and isinstance(generator, FeedbackGenerator):
        raise ModeMismatch("sampleless play takes a plain generator")


def run(
    generator,
    source: Source,
    mode: Mode,
    horizon: int,
) -> tuple[list[StepRecord], RunResult]:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    _check_compat(generator, source, mode)
    truth = source.truth_view()
    target_index = (
        _identification_target(generator, truth) if mode.kind == IDENTIFICATION else None
    )
    records: list[StepRecord] = []
    seen: set[int] = set()
    outputs_seen: set[int] = set()
    violations: list[str] = []
    mistakes: list[int] = []
    unknown = 0
    for t in range(horizon):
        x = None if mode.kind == SAMPLELESS else source.emit(t)
        y = a = None
        if mode.kind in (FEEDBACK, IDENTIFICATION):
            y = generator.step_query(x)
            if y is not None:
                a = oracle_answer(truth, y)
            z = generator.step_output(a)
        else:
            z = generator.step(x)
        if x is not None:
            seen.add(x)
        source.observe(t, z)
        if mode.kind == IDENTIFICATION:
            v = CORRECT if z == target_index else MISTAKE
        else:
            v = verdict(z, truth, seen)
        if mode.kind == SAMPLELESS:
            if z in outputs_seen:
                violations.append(f"output-repeat@{t}:{z}")
            outputs_seen.add(z)
        if v == MISTAKE:
            mistakes.append(t)
        elif v == UNKNOWN_VERDICT:
            unknown += 1
        records.append(StepRecord(t, x, y, a, z, v))
    violations.extend(validate_stream(records, source, mode, horizon))
    convergence = mistakes[-1] + 1 if mistakes else 0
    distinct = None
    if mode.kind == REPETITION:
        distinct = len({r.x for r in records[:convergence] if r.x is not None})
    no_trigger = False
    certified: tuple[int, ...] = ()
    stage_mistakes = 0
    if isinstance(source, StagedAdversary):
        no_trigger = source.no_trigger
        certified = source.certified_mistake_times
        stage_mistakes = source.final_stage_mistakes(horizon)
    return records, RunResult(
        mistake_times=tuple(mistakes),
        observed_convergence=convergence,
        unknown_count=unknown,
        validity_violations=tuple(violations),
        no_trigger=no_trigger,
        certified_mistake_times=certified,
        final_stage_mistakes=stage_mistakes,
        distinct_at_convergence=distinct,
    )


def validate_stream(
    records: list[StepRecord], source: Source, mode: Mode, horizon: int
) -> list[str]:
    """Check the emitted stream against the declared enumeration contract."""
    violations: list[str] = []
    xs = [r.x for r in records if r.x is not None]
    if mode.kind != REPETITION:
        seen: set[int] = set()
        for r in records:
            if r.x is None:
                continue
            if r.x in seen:
                violations.append(f"repeat@{r.t}:{r.x}")
            seen.add(r.x)
    if not isinstance(source, ScriptedSource):
        return violations
    spec = source.spec
    truth = spec.truth
    emitted = set(xs)
    noise_emitted = [v for v in xs if v not in truth]
    declared_noise = spec.noise_count
    if len(noise_emitted) > declared_noise:
        violations.append(
            f"noise-budget:{len(noise_emitted)}>{declared_noise}"
        )
    if mode.kind == NOISY and mode.noise is not None and len(noise_emitted) > mode.noise:
        violations.append(f"noise-mode-budget:{len(noise_emitted)}>{mode.noise}")
    if isinstance(spec.omissions, frozenset):
        if mode.kind == LOSSY and isinstance(mode.omissions, int):
            if len(spec.omissions) > mode.omissions:
                violations.append(
                    f"omission-budget:{len(spec.omissions)}>{mode.omissions}"
                )
        if spec.order == "canonical" and spec.repeat_seed is None:
            # coverage: early canonical elements must show up unless omitted
            must_show = min(horizon // 2, max(horizon - declared_noise - 1, 0))
            for k, v in enumerate(truth.elements()):
                if k >= must_show:
                    break
                if v not in emitted and v not in spec.omissions:
                    violations.append(f"coverage-miss:{v}")
    return violations


# --- trace serialization ---------------------------------------------------


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def write_trace(
    fp: IO[str],
    header: dict,
    records: Iterable[StepRecord],
    result: RunResult,
) -> None:
    fp.write(_dump({"header": header}) + "\n")
    for record in records:
        fp.write(_dump(record.to_record()) + "\n")
    fp.write(_dump({"summary": result.to_record()}) + "\n")


def truth_record(truth) -> dict:
    if isinstance(truth, ClosedFormLanguage):
        return {"kind": "closed_form", **truth.to_record()}
    if isinstance(truth, TranscriptLimitLanguage):
        return {
            "kind": "transcript_limit",
            "seen": sorted(truth.seen),
            "excluded": sorted(truth.excluded),
            "promised": truth.promised.to_record() if truth.promised else None,
        }
    raise TypeError(f"unknown truth type {type(truth)!r}")
