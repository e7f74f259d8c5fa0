import io

import pytest

from limitgen import engine
from limitgen.engine import Mode, oracle_answer, run, verdict, write_trace
from limitgen.errors import ModeMismatch
from limitgen.families import SuffixFamily, neg_union
from limitgen.feedback import UnionFeedbackGenerator
from limitgen.generators import (
    DedupWrapper,
    NoiseTolerantGenerator,
    baseline,
    intersection_generator,
    noisy_from_sampleless,
)
from limitgen.langs import (
    NEGATIVES,
    ClosedFormLanguage,
    TranscriptLimitLanguage,
    suffix_from,
)
from limitgen.sources import ScriptedSource, ScriptedSpec, staged_union_adversary


def scripted(truth, **kwargs):
    return ScriptedSource(ScriptedSpec(truth, **kwargs))


def test_verdict_cases():
    truth = ClosedFormLanguage(frozenset({5}), None, True)
    assert verdict(-4, truth, {5, -1}) == engine.CORRECT
    assert verdict(5, truth, {5, -1}) == engine.MISTAKE  # already seen
    limit = TranscriptLimitLanguage(promised=NEGATIVES)
    assert verdict(42, limit, set()) == engine.UNKNOWN_VERDICT
    limit.add_excluded(7)
    assert verdict(7, limit, set()) == engine.MISTAKE


def test_oracle_answers():
    assert oracle_answer(NEGATIVES, -3) is True
    assert oracle_answer(suffix_from(5), 2) is False
    assert oracle_answer(ClosedFormLanguage(frozenset({0}), None, True), 0) is True
    with pytest.raises(ModeMismatch):
        oracle_answer(TranscriptLimitLanguage(), -1)


def test_sampleless_run_has_no_mistakes():
    truth = ClosedFormLanguage(frozenset({7}), None, True)
    records, result = run(
        intersection_generator(neg_union()), scripted(truth), Mode.sampleless(), 100
    )
    assert result.mistakes == 0
    assert result.observed_convergence == 0
    assert all(r.x is None for r in records)


def test_sampleless_run_flags_output_repeats():
    class Stutter:
        def step(self, revealed=None):
            return -1

        def fresh(self):
            return Stutter()

    _, result = run(Stutter(), scripted(NEGATIVES), Mode.sampleless(), 5)
    assert any(v.startswith("output-repeat") for v in result.validity_violations)


def test_noise_tolerant_run_converges_quickly():
    records, result = run(
        NoiseTolerantGenerator(0),
        scripted(suffix_from(0), noise=((0, -1),)),
        Mode.noisy(1),
        200,
    )
    assert result.observed_convergence <= 2
    assert all(r.verdict == engine.CORRECT for r in records[2:])


def test_staged_run_mistake_prefix():
    _, result = run(
        baseline("max_plus_one"), staged_union_adversary(), Mode.standard(), 1_000
    )
    assert result.mistake_times[:3] == (0, 2, 4)
    assert len(result.certified_mistake_times) >= 10
    assert result.certified_mistake_times == result.mistake_times
    assert result.unknown_count > 0  # off-trigger outputs stay undetermined


def test_feedback_run_answers_match_truth():
    truth = ClosedFormLanguage(frozenset({3}), None, True)
    gen = UnionFeedbackGenerator([neg_union(), SuffixFamily(offset=0)])
    records, _ = run(gen, scripted(truth), Mode.feedback(), 50)
    for r in records:
        assert r.y is not None
        assert r.a == (r.y in truth)


def test_mode_mismatch_combinations():
    with pytest.raises(ModeMismatch):
        run(baseline("max_plus_one"), scripted(NEGATIVES), Mode.feedback(), 5)
    with pytest.raises(ModeMismatch):
        run(
            UnionFeedbackGenerator([neg_union()]),
            scripted(NEGATIVES),
            Mode.standard(),
            5,
        )
    with pytest.raises(ModeMismatch):
        run(
            UnionFeedbackGenerator([neg_union()]),
            staged_union_adversary(),
            Mode.feedback(),
            5,
        )
    with pytest.raises(ModeMismatch):
        run(baseline("max_plus_one"), staged_union_adversary(), Mode.sampleless(), 5)


def test_validation_catches_repeats_outside_repetition_mode():
    src = scripted(suffix_from(0), repeat_seed=1)
    _, result = run(baseline("max_plus_one"), src, Mode.standard(), 50)
    assert any(v.startswith("repeat@") for v in result.validity_violations)


def test_repetition_mode_allows_repeats_and_reports_distinct_count():
    src = scripted(suffix_from(5), repeat_seed=1)
    gen = DedupWrapper(baseline("follow_suffix"))
    _, result = run(gen, src, Mode.repetition(), 100)
    assert not any(v.startswith("repeat@") for v in result.validity_violations)
    assert result.distinct_at_convergence is not None


def test_validation_flags_noise_over_mode_budget():
    src = scripted(suffix_from(0), noise=((0, -1), (1, -2)))
    _, result = run(baseline("max_plus_one"), src, Mode.noisy(1), 50)
    assert any(v.startswith("noise-mode-budget") for v in result.validity_violations)


def test_validation_flags_omissions_over_mode_budget():
    src = scripted(suffix_from(0), omissions=frozenset({4}))
    _, result = run(baseline("max_plus_one"), src, Mode.lossy(0), 50)
    assert any(v.startswith("omission-budget") for v in result.validity_violations)


def test_validation_coverage_passes_for_canonical_sources():
    src = scripted(ClosedFormLanguage(frozenset({3}), None, True))
    _, result = run(baseline("min_minus_one"), src, Mode.standard(), 100)
    assert not result.validity_violations


def test_trace_round_is_byte_identical():
    def one_trace() -> bytes:
        src = scripted(suffix_from(0), order="blocks:5", noise=((2, -9),))
        records, result = run(
            noisy_from_sampleless(intersection_generator(neg_union())),
            src,
            Mode.noisy(1),
            200,
        )
        buf = io.StringIO()
        write_trace(
            buf,
            {"seed": 5, "truth": engine.truth_record(src.truth_view())},
            records,
            result,
        )
        return buf.getvalue().encode()

    assert one_trace() == one_trace()


def test_identification_mode_verdicts():
    from limitgen.families import ExplicitCountable
    from limitgen.feedback import IndexIdentifier

    listed = (suffix_from(0), suffix_from(5))
    gen = IndexIdentifier(ExplicitCountable(languages=listed))
    records, result = run(gen, scripted(suffix_from(5)), Mode.identification(), 40)
    assert all(r.verdict == engine.CORRECT for r in records[1:])
    assert result.observed_convergence <= 1
