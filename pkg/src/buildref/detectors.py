"""Deterministic detection of the 24 refactoring types from commit context.

Each category detector compares the before/after build models of one commit
(plus the project hierarchy) and emits zero or more detections. Rules are
binary: a static detection always has confidence 1.0. Several rules firing on
one commit is normal; nothing is ranked or suppressed beyond exact-duplicate
removal.
"""

from __future__ import annotations

import logging
import posixpath

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .build_parsers import (
    ORDERING_KEYWORDS,
    BuildElement,
    BuildModel,
    ElementKind,
    HierarchyGraph,
    infer_hierarchy,
    parse_build_file,
    tokenize,
)
from .mining import ChangeKind, CommitRecord, FileDiff
from . import taxonomy

logger = logging.getLogger(__name__)

SUBROUTINE_KINDS = (ElementKind.TASK, ElementKind.TARGET, ElementKind.METHOD)
VALUE_KINDS = (ElementKind.VARIABLE, ElementKind.PROPERTY)


@dataclass(frozen=True)
class DetectorConfig:
    """Similarity thresholds; the defaults are deliberately conservative."""

    move_similarity: float = 0.7
    rename_similarity: float = 0.8
    min_fragment_tokens: int = 5


DEFAULT_CONFIG = DetectorConfig()


@dataclass(frozen=True)
class Evidence:
    path: str
    span: tuple[int, int]
    role: str  # "source" or "destination"


@dataclass(frozen=True)
class DetectedRefactoring:
    type: str
    details: str
    evidence: tuple[Evidence, ...]
    backend: str = "static"
    confidence: float = 1.0
    unknown_type: bool = False

    def __post_init__(self) -> None:
        if not self.unknown_type:
            taxonomy.get_type(self.type)
        if self.backend == "static" and self.confidence != 1.0:
            raise ValueError("static detections are binary: confidence must be 1.0")


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    union = sa | sb
    return len(sa & sb) / len(union)


def containment(part: Sequence[str], whole: Sequence[str]) -> float:
    """Fraction of `part` tokens (with multiplicity) found in `whole`."""
    if not part:
        return 0.0
    pc, wc = Counter(part), Counter(whole)
    shared = sum(min(n, wc[t]) for t, n in pc.items())
    return shared / len(part)


@dataclass(frozen=True)
class CommitContext:
    commit: CommitRecord
    before_models: Mapping[str, BuildModel]
    after_models: Mapping[str, BuildModel]
    before_hierarchy: HierarchyGraph
    after_hierarchy: HierarchyGraph

    @classmethod
    def from_commit(
        cls,
        commit: CommitRecord,
        extra_files: Optional[Mapping[str, str]] = None,
    ) -> "CommitContext":
        """Parse every touched build-file version (plus optional untouched
        sibling files from the same tree snapshots) into models."""
        before: dict[str, BuildModel] = {}
        after: dict[str, BuildModel] = {}
        for fd in commit.file_diffs:
            if fd.before_content is not None:
                before[fd.old_path or fd.path] = _safe_parse(fd.old_path or fd.path, fd.before_content)
            if fd.after_content is not None:
                after[fd.path] = _safe_parse(fd.path, fd.after_content)
        for path, content in sorted((extra_files or {}).items()):
            model = _safe_parse(path, content)
            before.setdefault(path, model)
            after.setdefault(path, model)
        return cls(
            commit=commit,
            before_models=before,
            after_models=after,
            before_hierarchy=infer_hierarchy(before),
            after_hierarchy=infer_hierarchy(after),
        )

    def diff_for(self, path: str) -> Optional[FileDiff]:
        return next((d for d in self.commit.file_diffs if d.path == path), None)


def _safe_parse(path: str, content: str) -> BuildModel:
    from .build_parsers import XmlMalformedError

    try:
        return parse_build_file(path, content)
    except XmlMalformedError as exc:
        logger.warning("%s: %s; treating file as one opaque block", path, exc)
        from .mining import classify_build_file, BuildSystem

        return BuildModel(
            build_system=classify_build_file(path) or BuildSystem.GRADLE,
            elements=(
                BuildElement(
                    kind=ElementKind.RAW_BLOCK,
                    name=None,
                    body_tokens=tokenize(content),
                    attributes={},
                    span=(1, max(1, content.count("\n") + 1)),
                ),
            ),
            module_links=(),
            source_path=path,
            warnings=(str(exc),),
        )


# --- shared machinery --------------------------------------------------------

def _named_index(model: BuildModel) -> dict[tuple[ElementKind, str], list[BuildElement]]:
    index: dict[tuple[ElementKind, str], list[BuildElement]] = {}
    for el in model.elements:
        if el.name:
            index.setdefault((el.kind, el.name), []).append(el)
    return index


def _non_ordering_attrs(el: BuildElement) -> dict[str, str]:
    return {
        k: v
        for k, v in el.attributes.items()
        if k not in ORDERING_KEYWORDS and k != "ordering"
    }


def _ordering_attrs(el: BuildElement) -> dict[str, str]:
    return {k: v for k, v in el.attributes.items() if k in ORDERING_KEYWORDS}


@dataclass
class _FileChanges:
    added: list[BuildElement] = field(default_factory=list)
    removed: list[BuildElement] = field(default_factory=list)
    modified: list[tuple[BuildElement, BuildElement]] = field(default_factory=list)


def _element_changes(before: BuildModel, after: BuildModel) -> _FileChanges:
    """Pair elements across versions by (kind, name); unnamed ones by exact body."""
    changes = _FileChanges()
    b_index = _named_index(before)
    a_index = _named_index(after)
    for key in sorted(set(b_index) | set(a_index), key=lambda k: (k[0].value, k[1])):
        b_els = b_index.get(key, [])
        a_els = a_index.get(key, [])
        for b_el, a_el in zip(b_els, a_els):
            if b_el.body_tokens != a_el.body_tokens or dict(b_el.attributes) != dict(a_el.attributes):
                changes.modified.append((b_el, a_el))
        changes.removed.extend(b_els[len(a_els):])
        changes.added.extend(a_els[len(b_els):])

    # unnamed elements pair only on an exact body match
    a_unnamed = Counter((el.kind, el.body_tokens) for el in after.elements if not el.name)
    for el in before.elements:
        if el.name:
            continue
        key = (el.kind, el.body_tokens)
        if a_unnamed.get(key, 0) > 0:
            a_unnamed[key] -= 1
        else:
            changes.removed.append(el)
    b_unnamed = Counter((el.kind, el.body_tokens) for el in before.elements if not el.name)
    for el in after.elements:
        if el.name:
            continue
        key = (el.kind, el.body_tokens)
        if b_unnamed.get(key, 0) > 0:
            b_unnamed[key] -= 1
        else:
            changes.added.append(el)
    return changes


@dataclass(frozen=True)
class _Move:
    kind: ElementKind
    name: str
    src_path: str
    dst_path: str
    src_el: BuildElement
    dst_el: BuildElement


def _moved_elements(ctx: CommitContext, kinds: Sequence[ElementKind]) -> list[_Move]:
    """Named elements that vanished from one file and appeared in another."""
    moves: list[_Move] = []
    for src_path in sorted(ctx.before_models):
        b_model = ctx.before_models[src_path]
        a_model = ctx.after_models.get(src_path)
        a_index = _named_index(a_model) if a_model else {}
        for el in b_model.elements:
            if el.kind not in kinds or not el.name:
                continue
            if (el.kind, el.name) in a_index:
                continue  # still present: not a move away
            for dst_path in sorted(ctx.after_models):
                if dst_path == src_path:
                    continue
                dst_index = _named_index(ctx.after_models[dst_path])
                dst_candidates = dst_index.get((el.kind, el.name))
                if not dst_candidates:
                    continue
                dst_before = ctx.before_models.get(dst_path)
                if dst_before and (el.kind, el.name) in _named_index(dst_before):
                    continue  # destination already had it
                moves.append(
                    _Move(el.kind, el.name, src_path, dst_path, el, dst_candidates[0])
                )
    return moves


def _relation(ctx: CommitContext, a: str, b: str) -> str:
    """'ancestor' when a is above b, 'descendant' when below, else 'sibling'."""
    for graph in (ctx.after_hierarchy, ctx.before_hierarchy):
        if a in graph.nodes and b in graph.nodes:
            if graph.is_ancestor(a, b):
                return "ancestor"
            if graph.is_ancestor(b, a):
                return "descendant"
    a_dir, b_dir = posixpath.dirname(a), posixpath.dirname(b)
    if a_dir != b_dir:
        if _dir_contains(a_dir, b_dir):
            return "ancestor"
        if _dir_contains(b_dir, a_dir):
            return "descendant"
    return "sibling"


def _dir_contains(outer: str, inner: str) -> bool:
    if outer == "":
        return inner != ""
    return inner.startswith(outer + "/")


def _file_token_counter(model: Optional[BuildModel]) -> Counter:
    counter: Counter = Counter()
    if model is None:
        return counter
    for el in model.elements:
        counter.update(el.body_tokens)
    return counter


def _token_matches_name(token: str, name: str) -> bool:
    return (
        token == name
        or token == f"${name}"
        or f"${{{name}}}" in token
        or f"@{{{name}}}" in token
    )


def _model_references_name(model: BuildModel, name: str, exclude: Sequence[BuildElement] = ()) -> bool:
    skip = {id(e) for e in exclude}
    for el in model.elements:
        if id(el) in skip:
            continue
        if any(_token_matches_name(t, name) for t in el.body_tokens):
            return True
        for value in el.attributes.values():
            if any(_token_matches_name(t, name) for t in tokenize(value)):
                return True
    return any(name in link.target for link in model.module_links)


def _reference_count(model: Optional[BuildModel], name: str, exclude: Sequence[BuildElement] = ()) -> int:
    if model is None:
        return 0
    skip = {id(e) for e in exclude}
    count = 0
    for el in model.elements:
        if id(el) in skip:
            continue
        count += sum(1 for t in el.body_tokens if _token_matches_name(t, name))
        for value in el.attributes.values():
            count += sum(1 for t in tokenize(value) if _token_matches_name(t, name))
    return count


def _literal_value(el: BuildElement) -> Optional[str]:
    if el.kind in VALUE_KINDS and el.attributes.get("literal") == "true":
        value = el.attributes.get("value", "")
        return value or None
    return None


def _shared_paths(ctx: CommitContext) -> list[str]:
    return sorted(set(ctx.before_models) & set(ctx.after_models))


# --- category detectors --------------------------------------------------------

def _canonical_signature(el: BuildElement):
    """Element identity modulo known equivalent forms and pure formatting."""
    if el.kind is ElementKind.PLUGIN:
        return ("plugin", el.name)
    if el.kind is ElementKind.DEPENDENCY:
        return (
            "dependency",
            el.name,
            el.attributes.get("version", ""),
            el.attributes.get("configuration", ""),
        )
    if el.kind in VALUE_KINDS:
        return (el.kind.value, el.name, el.attributes.get("value", " ".join(el.body_tokens)))
    ordering = tuple(sorted(_ordering_attrs(el).items()))
    return (el.kind.value, el.name, el.body_tokens, ordering)


def detect_clean_up(ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()
    renamed_sources: set[int] = set()
    moves = _moved_elements(
        ctx, (ElementKind.TASK, ElementKind.TARGET, ElementKind.METHOD,
              ElementKind.DEPENDENCY, ElementKind.PROPERTY, ElementKind.VARIABLE,
              ElementKind.PLUGIN)
    )
    moved_source_ids = {id(m.src_el) for m in moves}

    # Reformat Code: same semantic element multiset, different text.
    for path in _shared_paths(ctx):
        diff = ctx.diff_for(path)
        if diff is None or diff.before_content == diff.after_content:
            continue
        before, after = ctx.before_models[path], ctx.after_models[path]
        if not before.elements and not after.elements:
            continue
        if Counter(map(_canonical_signature, before.elements)) == Counter(
            map(_canonical_signature, after.elements)
        ):
            span = _changed_span(diff)
            out.add(
                DetectedRefactoring(
                    type="Reformat Code",
                    details=f"{path} rewritten in an equivalent form (layout or syntax style only)",
                    evidence=(Evidence(path, span, "destination"),),
                )
            )

    # Rename Field: same body, new name, within one file.
    rename_pairs: list[tuple[str, BuildElement, BuildElement, float]] = []
    for path in _shared_paths(ctx):
        changes = _element_changes(ctx.before_models[path], ctx.after_models[path])
        candidates = []
        for b_el in changes.removed:
            if not b_el.name:
                continue
            for a_el in changes.added:
                if not a_el.name or a_el.kind is not b_el.kind:
                    continue
                sim = jaccard(b_el.body_tokens, a_el.body_tokens)
                if sim >= config.rename_similarity:
                    candidates.append((sim, b_el, a_el))
        candidates.sort(key=lambda c: (-c[0], c[1].span, c[2].span))
        used_b: set[int] = set()
        used_a: set[int] = set()
        for sim, b_el, a_el in candidates:
            if id(b_el) in used_b or id(a_el) in used_a:
                continue
            used_b.add(id(b_el))
            used_a.add(id(a_el))
            rename_pairs.append((path, b_el, a_el, sim))

    for path, b_el, a_el, sim in rename_pairs:
        renamed_sources.add(id(b_el))
        out.add(
            DetectedRefactoring(
                type="Rename Field",
                details=f"{b_el.kind.value} '{b_el.name}' renamed to '{a_el.name}' in {path}",
                evidence=(
                    Evidence(path, b_el.span, "source"),
                    Evidence(path, a_el.span, "destination"),
                ),
            )
        )

    # Remove Unused Code: deletion of an element nothing referenced. Raw
    # blocks carry lexical pseudo-names, not referenceable identifiers, so
    # they are out of scope here.
    for path in sorted(ctx.before_models):
        after_model = ctx.after_models.get(path)
        after_index = _named_index(after_model) if after_model else {}
        for el in ctx.before_models[path].elements:
            if el.kind is ElementKind.RAW_BLOCK:
                continue
            if not el.name or (el.kind, el.name) in after_index:
                continue
            if id(el) in renamed_sources or id(el) in moved_source_ids:
                continue
            if any(
                _model_references_name(m, el.name, exclude=(el,))
                for m in ctx.before_models.values()
            ):
                continue
            if any(_model_references_name(m, el.name) for m in ctx.after_models.values()):
                continue
            if _similar_added_elsewhere(ctx, el, config):
                continue
            out.add(
                DetectedRefactoring(
                    type="Remove Unused Code",
                    details=f"unreferenced {el.kind.value} '{el.name}' deleted from {path}",
                    evidence=(Evidence(path, el.span, "source"),),
                )
            )
    return out


def _similar_added_elsewhere(ctx: CommitContext, el: BuildElement, config: DetectorConfig) -> bool:
    for path in sorted(ctx.after_models):
        before_model = ctx.before_models.get(path)
        before_index = _named_index(before_model) if before_model else {}
        for candidate in ctx.after_models[path].elements:
            if candidate.kind is not el.kind:
                continue
            if candidate.name and (candidate.kind, candidate.name) in before_index:
                continue
            if jaccard(el.body_tokens, candidate.body_tokens) >= config.move_similarity:
                return True
    return False


def _changed_span(diff: FileDiff) -> tuple[int, int]:
    hunks = diff.hunks
    if not hunks:
        return (1, 1)
    first = min(h.new_start if h.new_len else max(h.new_start, 1) for h in hunks)
    last = max(h.new_start + max(h.new_len - 1, 0) for h in hunks)
    return (max(first, 1), max(last, 1))


def detect_module_hierarchy(
    ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG
) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()
    added_paths = [
        fd.path for fd in ctx.commit.file_diffs if fd.change_kind is ChangeKind.ADDED
    ]
    for new_path in sorted(added_paths):
        new_model = ctx.after_models.get(new_path)
        if new_model is None:
            continue
        for src_path in sorted(ctx.before_models):
            if src_path == new_path:
                continue
            moved = _block_moved_from(ctx, src_path, new_model, config)
            if moved is None:
                continue
            src_el, dst_el = moved
            relation = _relation(ctx, new_path, src_path)
            if relation == "ancestor":
                type_id = "Extract And Pull Up Module"
                wording = "a newly created parent build file"
            elif relation == "descendant":
                type_id = "Extract And Push Down Module"
                wording = "a newly created child build file"
            else:
                type_id = "Extract Module"
                wording = "a new build file at the same level"
            out.add(
                DetectedRefactoring(
                    type=type_id,
                    details=f"logic from {src_path} extracted into {wording} {new_path}",
                    evidence=(
                        Evidence(src_path, src_el.span, "source"),
                        Evidence(new_path, dst_el.span, "destination"),
                    ),
                )
            )
    return out


def _block_moved_from(
    ctx: CommitContext, src_path: str, new_model: BuildModel, config: DetectorConfig
) -> Optional[tuple[BuildElement, BuildElement]]:
    before = ctx.before_models[src_path]
    after = ctx.after_models.get(src_path)
    changes = (
        _element_changes(before, after)
        if after is not None
        else _FileChanges(removed=list(before.elements))
    )
    best: Optional[tuple[float, BuildElement, BuildElement]] = None
    for b_el in changes.removed:
        for n_el in new_model.elements:
            if n_el.kind is not b_el.kind:
                continue
            if not b_el.name and len(n_el.body_tokens) < config.min_fragment_tokens:
                continue
            sim = jaccard(b_el.body_tokens, n_el.body_tokens)
            if sim >= config.move_similarity:
                if best is None or sim > best[0]:
                    best = (sim, b_el, n_el)
    if best is None:
        return None
    return best[1], best[2]


def detect_subroutine(
    ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG
) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()

    for path in _shared_paths(ctx):
        before, after = ctx.before_models[path], ctx.after_models[path]
        changes = _element_changes(before, after)
        out.update(_extract_subroutines(path, changes, config))
        out.update(_detect_dry(path, changes, config))
        scheduled = _detect_scheduling(path, changes)
        if scheduled:
            out.add(scheduled)

    for move in _moved_elements(ctx, SUBROUTINE_KINDS):
        relation = _relation(ctx, move.dst_path, move.src_path)
        if relation == "ancestor":
            out.add(
                DetectedRefactoring(
                    type="Pull Up Method",
                    details=f"{move.kind.value} '{move.name}' pulled up from {move.src_path} to {move.dst_path}",
                    evidence=(
                        Evidence(move.src_path, move.src_el.span, "source"),
                        Evidence(move.dst_path, move.dst_el.span, "destination"),
                    ),
                )
            )
        elif relation == "descendant":
            out.add(
                DetectedRefactoring(
                    type="Push Down Task",
                    details=f"{move.kind.value} '{move.name}' pushed down from {move.src_path} to {move.dst_path}",
                    evidence=(
                        Evidence(move.src_path, move.src_el.span, "source"),
                        Evidence(move.dst_path, move.dst_el.span, "destination"),
                    ),
                )
            )
    return out


def _extract_subroutines(
    path: str, changes: _FileChanges, config: DetectorConfig
) -> set[DetectedRefactoring]:
    """Extract Method / Extract Task: a fragment leaves a host element and
    reappears as a new named unit that the file now invokes."""
    out: set[DetectedRefactoring] = set()
    hosts: list[tuple[BuildElement, Optional[BuildElement]]] = [
        (b, a) for b, a in changes.modified
    ] + [(el, None) for el in changes.removed]

    for new_el in changes.added:
        if not new_el.name or len(new_el.body_tokens) < config.min_fragment_tokens:
            continue
        if new_el.kind is ElementKind.METHOD:
            type_id = "Extract Method"
            noun = "method"
        elif new_el.kind in (ElementKind.TASK, ElementKind.TARGET):
            type_id = "Extract Task"
            noun = "task"
        else:
            continue
        referenced = any(
            _element_mentions(other, new_el.name)
            for other in changes.added + [a for _, a in changes.modified if a is not None]
            if other is not new_el
        )
        if not referenced:
            continue
        for host_before, host_after in hosts:
            lost = Counter(host_before.body_tokens)
            if host_after is not None:
                lost -= Counter(host_after.body_tokens)
            if not lost:
                continue
            overlap = sum(min(n, lost[t]) for t, n in Counter(new_el.body_tokens).items())
            if overlap / len(new_el.body_tokens) >= 0.5:
                origin = host_before.name or "an existing block"
                out.add(
                    DetectedRefactoring(
                        type=type_id,
                        details=f"fragment of '{origin}' extracted into new {noun} '{new_el.name}' in {path}",
                        evidence=(
                            Evidence(path, host_before.span, "source"),
                            Evidence(path, new_el.span, "destination"),
                        ),
                    )
                )
                break
    return out


def _element_mentions(el: BuildElement, name: str) -> bool:
    if any(_token_matches_name(t, name) for t in el.body_tokens):
        return True
    return any(
        name in value for key, value in el.attributes.items() if key in ORDERING_KEYWORDS
    )


def _detect_scheduling(path: str, changes: _FileChanges) -> Optional[DetectedRefactoring]:
    """Fires when every change in the file is an ordering-constraint change."""
    ordering_evidence: list[Evidence] = []
    for b_el, a_el in changes.modified:
        if (
            b_el.body_tokens == a_el.body_tokens
            and _non_ordering_attrs(b_el) == _non_ordering_attrs(a_el)
            and _ordering_attrs(b_el) != _ordering_attrs(a_el)
        ):
            ordering_evidence.append(Evidence(path, a_el.span, "destination"))
        else:
            return None
    for el in changes.added:
        if el.is_ordering_only:
            ordering_evidence.append(Evidence(path, el.span, "destination"))
        else:
            return None
    for el in changes.removed:
        if el.is_ordering_only:
            ordering_evidence.append(Evidence(path, el.span, "source"))
        else:
            return None
    if not ordering_evidence:
        return None
    return DetectedRefactoring(
        type="Scheduling Tasks",
        details=f"task execution order constraints changed in {path}",
        evidence=tuple(ordering_evidence),
    )


def _detect_dry(
    path: str, changes: _FileChanges, config: DetectorConfig
) -> set[DetectedRefactoring]:
    """Near-identical removed definitions replaced by one parameterized construct."""
    out: set[DetectedRefactoring] = set()
    removed = [
        el
        for el in changes.removed
        if el.name and el.kind in (ElementKind.TASK, ElementKind.TARGET, ElementKind.RAW_BLOCK)
    ]
    if len(removed) < 2:
        return out
    groups: list[list[BuildElement]] = []
    for el in removed:
        placed = False
        for group in groups:
            if all(
                g.kind is el.kind
                and jaccard(g.body_tokens, el.body_tokens) >= config.move_similarity
                for g in group
            ):
                group.append(el)
                placed = True
                break
        if not placed:
            groups.append([el])

    loop_markers = {"each", "for", "collect", "foreach"}
    for group in groups:
        if len(group) < 2:
            continue
        names = [el.name for el in group if el.name]
        total_tokens = sum(len(el.body_tokens) for el in group)
        for candidate in changes.added:
            tokens = set(candidate.body_tokens)
            mentioned = sum(1 for n in names if n in tokens)
            has_loop = bool(tokens & loop_markers)
            if mentioned >= 2 and has_loop and len(candidate.body_tokens) < total_tokens:
                evidence = tuple(
                    Evidence(path, el.span, "source") for el in group
                ) + (Evidence(path, candidate.span, "destination"),)
                out.add(
                    DetectedRefactoring(
                        type="DRY",
                        details=(
                            f"{len(group)} near-identical definitions ({', '.join(names)}) "
                            f"consolidated into one parameterized construct in {path}"
                        ),
                        evidence=evidence,
                    )
                )
                break
    return out


def detect_dependency(
    ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG
) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()
    for move in _moved_elements(ctx, (ElementKind.DEPENDENCY,)):
        relation = _relation(ctx, move.dst_path, move.src_path)
        if relation == "ancestor":
            type_id = "Pull Up Dependency"
        elif relation == "descendant":
            type_id = "Push Down Dependency"
        else:
            type_id = "Move Dependency"
        out.add(
            DetectedRefactoring(
                type=type_id,
                details=f"dependency {move.name} moved from {move.src_path} to {move.dst_path}",
                evidence=(
                    Evidence(move.src_path, move.src_el.span, "source"),
                    Evidence(move.dst_path, move.dst_el.span, "destination"),
                ),
            )
        )
    return out


_EXTERNAL_CONFIG_MARKERS = ("ConfigSlurper", "loadProperties", "withReader", "withInputStream")


def detect_properties(
    ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG
) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()

    for move in _moved_elements(ctx, (ElementKind.PROPERTY,)):
        src_is_props = move.src_path.endswith(".properties")
        dst_is_props = move.dst_path.endswith(".properties")
        relation = _relation(ctx, move.dst_path, move.src_path)
        if dst_is_props and not src_is_props:
            out.add(
                DetectedRefactoring(
                    type="Externalize Properties",
                    details=f"property '{move.name}' moved out of {move.src_path} into {move.dst_path}",
                    evidence=(
                        Evidence(move.src_path, move.src_el.span, "source"),
                        Evidence(move.dst_path, move.dst_el.span, "destination"),
                    ),
                )
            )
        elif relation == "ancestor":
            out.add(
                DetectedRefactoring(
                    type="Pull Up Properties",
                    details=f"property '{move.name}' pulled up from {move.src_path} to {move.dst_path}",
                    evidence=(
                        Evidence(move.src_path, move.src_el.span, "source"),
                        Evidence(move.dst_path, move.dst_el.span, "destination"),
                    ),
                )
            )

    # In-file externalization: a literal leaves the script and the script now
    # reads an external .properties (or similar) configuration source.
    for path in _shared_paths(ctx):
        if path.endswith(".properties"):
            continue
        before, after = ctx.before_models[path], ctx.after_models[path]
        changes = _element_changes(before, after)
        literal_gone: list[BuildElement] = []
        for b_el, a_el in changes.modified:
            if _literal_value(b_el) and not _literal_value(a_el):
                literal_gone.append(a_el)
        for el in changes.removed:
            if _literal_value(el):
                literal_gone.append(el)
        if not literal_gone:
            continue
        after_tokens = set(_file_token_counter(after))
        before_tokens = set(_file_token_counter(before))
        gained = after_tokens - before_tokens
        reads_external = any(t.endswith(".properties") for t in gained) or any(
            m in gained for m in _EXTERNAL_CONFIG_MARKERS
        )
        if not reads_external:
            # an Ant-style <property file="..."/> read added
            new_prop_files = [
                el
                for el in changes.added
                if el.kind is ElementKind.PROPERTY
                and el.attributes.get("file", "").endswith(".properties")
            ]
            reads_external = bool(new_prop_files)
        if reads_external:
            anchor = literal_gone[0]
            out.add(
                DetectedRefactoring(
                    type="Externalize Properties",
                    details=f"hardcoded configuration moved out of {path} into an external properties file",
                    evidence=(Evidence(path, anchor.span, "destination" if anchor in [a for _, a in changes.modified] else "source"),),
                )
            )
    return out


def detect_variables(
    ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG
) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()
    moves = _moved_elements(ctx, VALUE_KINDS)
    moved_source_ids = {id(m.src_el) for m in moves}

    for move in moves:
        if move.kind is not ElementKind.VARIABLE:
            continue  # property moves are handled by detect_properties
        relation = _relation(ctx, move.dst_path, move.src_path)
        if relation == "ancestor":
            type_id = "Pull Up Variable"
        elif relation == "descendant":
            type_id = "Push Down Variable"
        else:
            type_id = "Move Variable"
        out.add(
            DetectedRefactoring(
                type=type_id,
                details=f"variable '{move.name}' moved from {move.src_path} to {move.dst_path}",
                evidence=(
                    Evidence(move.src_path, move.src_el.span, "source"),
                    Evidence(move.dst_path, move.dst_el.span, "destination"),
                ),
            )
        )

    # Extract Variable (same file) and the cross-file extract variants.
    for path in sorted(ctx.after_models):
        after = ctx.after_models[path]
        before = ctx.before_models.get(path)
        before_index = _named_index(before) if before else {}
        for el in after.elements:
            if el.kind not in VALUE_KINDS or not el.name:
                continue
            if (el.kind, el.name) in before_index:
                continue
            literal = _literal_value(el)
            if not literal:
                continue
            if before is not None:
                before_count = _file_token_counter(before)[literal]
                after_count = _file_token_counter(after)[literal] - Counter(el.body_tokens)[literal]
                refs = _reference_count(after, el.name, exclude=(el,))
                if before_count >= 2 and after_count < before_count and refs >= 1:
                    out.add(
                        DetectedRefactoring(
                            type="Extract Variable",
                            details=f"repeated literal '{literal}' replaced by {el.kind.value} '{el.name}' in {path}",
                            evidence=(Evidence(path, el.span, "destination"),),
                        )
                    )
            for other in sorted(set(_shared_paths(ctx)) - {path}):
                o_before = ctx.before_models[other]
                o_after = ctx.after_models[other]
                before_uses = _file_token_counter(o_before)[literal]
                after_uses = _file_token_counter(o_after)[literal]
                refs = _reference_count(o_after, el.name)
                if before_uses >= 1 and after_uses < before_uses and refs >= 1:
                    relation = _relation(ctx, path, other)
                    type_id = (
                        "Extract And Pull Up Variable"
                        if relation == "ancestor"
                        else "Extract And Move Variable"
                    )
                    use_site = _first_literal_span(o_before, literal)
                    out.add(
                        DetectedRefactoring(
                            type=type_id,
                            details=(
                                f"literal '{literal}' used in {other} extracted into "
                                f"{el.kind.value} '{el.name}' defined in {path}"
                            ),
                            evidence=(
                                Evidence(other, use_site, "source"),
                                Evidence(path, el.span, "destination"),
                            ),
                        )
                    )

    out.update(_detect_inline_variables(ctx, moved_source_ids))
    return out


def _first_literal_span(model: Optional[BuildModel], literal: str) -> tuple[int, int]:
    if model is not None:
        for el in model.elements:
            if literal in el.body_tokens:
                return el.span
    return (1, 1)


def _detect_inline_variables(
    ctx: CommitContext, moved_source_ids: set[int]
) -> set[DetectedRefactoring]:
    out: set[DetectedRefactoring] = set()
    # Inline Variable: definition removed, value substituted at its use sites.
    for path in _shared_paths(ctx):
        before, after = ctx.before_models[path], ctx.after_models[path]
        changes = _element_changes(before, after)
        for el in changes.removed:
            if el.kind not in VALUE_KINDS or not el.name or id(el) in moved_source_ids:
                continue
            literal = _literal_value(el)
            if not literal:
                continue
            before_refs = _reference_count(before, el.name, exclude=(el,))
            after_refs = _reference_count(after, el.name)
            before_uses = _file_token_counter(before)[literal] - Counter(el.body_tokens)[literal]
            after_uses = _file_token_counter(after)[literal]
            if before_refs >= 1 and after_refs == 0 and after_uses >= before_uses + 1:
                out.add(
                    DetectedRefactoring(
                        type="Inline Variable",
                        details=f"{el.kind.value} '{el.name}' inlined as '{literal}' in {path}",
                        evidence=(Evidence(path, el.span, "source"),),
                    )
                )
    return out


_CATEGORY_DETECTORS = (
    detect_clean_up,
    detect_module_hierarchy,
    detect_subroutine,
    detect_dependency,
    detect_properties,
    detect_variables,
)


def detect_all(ctx: CommitContext, config: DetectorConfig = DEFAULT_CONFIG) -> set[DetectedRefactoring]:
    """Union of the six category detectors, deduplicated on (type, evidence).

    A detector blowing up on a pathological input is logged and skipped so one
    bad file cannot sink the whole commit.
    """
    merged: dict[tuple, DetectedRefactoring] = {}
    for detector in _CATEGORY_DETECTORS:
        try:
            found = detector(ctx, config)
        except Exception:
            logger.warning(
                "%s failed on commit %s", detector.__name__, ctx.commit.commit_hash, exc_info=True
            )
            continue
        for det in found:
            merged.setdefault((det.type, det.evidence), det)
    return set(merged.values())


# --- wire format ---------------------------------------------------------------

def detection_to_json(commit_hash: str, det: DetectedRefactoring) -> str:
    import json

    return json.dumps(
        {
            "commit_hash": commit_hash,
            "RefactoringType": det.type,
            "Details": det.details,
            "evidence": [
                {"path": e.path, "start_line": e.span[0], "end_line": e.span[1], "role": e.role}
                for e in det.evidence
            ],
            "backend": det.backend,
            "confidence": det.confidence,
        },
        ensure_ascii=False,
    )


def detection_from_json(line: str) -> tuple[str, DetectedRefactoring]:
    import json

    obj = json.loads(line)
    det = DetectedRefactoring(
        type=obj["RefactoringType"],
        details=obj.get("Details", ""),
        evidence=tuple(
            Evidence(e["path"], (e["start_line"], e["end_line"]), e.get("role", "source"))
            for e in obj.get("evidence", [])
        ),
        backend=obj.get("backend", "static"),
        confidence=float(obj.get("confidence", 1.0)),
        unknown_type=taxonomy.resolve_type(obj["RefactoringType"]) is None,
    )
    return obj["commit_hash"], det


def sort_key(det: DetectedRefactoring) -> tuple:
    return (det.type, det.evidence and det.evidence[0].path or "", det.evidence)
