"""Deterministic simulation framework for language generation in the limit
over the integer universe: lazy infinite languages, collection oracles,
generator strategies, scripted and adaptive adversaries, a transcripted game
loop, and a CLI of named experiments."""

from .engine import Mode, RunResult, StepRecord, run, validate_stream, verdict
from .errors import (
    BudgetViolation,
    IndexBoundExceeded,
    LimitGenError,
    ModeMismatch,
    SearchExhausted,
    UnboundedClosureDimension,
)
from .families import (
    ChainSpec,
    ClosureResult,
    CollectionSpec,
    ExplicitCountable,
    NegFamily,
    SuffixFamily,
    UnionSpec,
    collection_by_name,
    intersection_stream,
    language_intersection,
    marked_neg_union,
    marked_suffix_union,
    marked_union,
    neg_union,
    ray_family,
    ray_prefix_chain,
    sensitivity_collection,
    suffix_union,
    uniform_without_samples_check,
)
from .feedback import (
    DecisionTreeMonitor,
    FeedbackGenerator,
    IndexIdentifier,
    OneShotProbeGenerator,
    PlainAsFeedback,
    StripQueries,
    UnionFeedbackGenerator,
    preorder_index,
)
from .generators import (
    ChainGenerator,
    DedupWrapper,
    FollowSuffix,
    Generator,
    MaxPlusOne,
    MinMinusOne,
    NoiseTolerantGenerator,
    NoisyFromStream,
    OmissionTolerantGenerator,
    SamplelessFromNoisy,
    SensitivityGenerator,
    StreamGenerator,
    baseline,
    intersection_generator,
    noisy_from_sampleless,
    reduce_by_prefix,
)
from .langs import (
    NATURALS,
    NEGATIVES,
    ClosedFormLanguage,
    TranscriptLimitLanguage,
    enumerate_at,
    map_language,
    member,
    project_language,
    suffix_from,
    zigzag_decode,
    zigzag_encode,
)
from .sources import (
    ScriptedSource,
    ScriptedSpec,
    Source,
    StagedAdversary,
    noise_prefix_adversary,
    omission_adversary,
    sensitivity_adversary,
    staged_union_adversary,
)

__all__ = [name for name in dir() if not name.startswith("_")]
