"""Toolkit for mining, detecting, and scoring build-file refactorings."""

from .mining import (
    BuildSystem,
    ChangeKind,
    CommitRecord,
    FileDiff,
    MiningFilter,
    MiningStats,
    classify_build_file,
    extract_diff,
    mine_commits,
)
from .build_parsers import (
    BuildElement,
    BuildModel,
    ElementKind,
    infer_hierarchy,
    parse_ant,
    parse_build_file,
    parse_gradle,
    parse_maven,
)
from .taxonomy import (
    MainCategory,
    RefactoringType,
    TechnicalDebt,
    registry,
    td_categories_for,
)
from .detectors import (
    CommitContext,
    DetectedRefactoring,
    DetectorConfig,
    detect_all,
)
from .llm_backend import (
    LlmConfig,
    PromptMode,
    PromptSpec,
    build_prompt,
    classify_commit,
    parse_response,
)
from .evaluation import EvaluationReport, GoldLabel, render_report, score

__version__ = "0.1.0"
