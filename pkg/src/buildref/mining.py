"""Mine git histories for commits that touch build files.

Walks a repository's log, keeps commits whose message matches a keyword
(default: any message containing "refactor", case-insensitively) and that
modify at least one Maven, Ant, or Gradle build file, and materializes each
survivor as a :class:`CommitRecord` carrying full before/after file contents
and line-level diff hunks.

Everything here shells out to the ``git`` binary; no repository state is
mutated and records are immutable once constructed.
"""

from __future__ import annotations

import difflib
import json
import logging
import os
import re
import subprocess
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator, Optional, Sequence

logger = logging.getLogger(__name__)

MAX_BUILD_FILE_BYTES = 5 * 1024 * 1024  # larger build files are skipped: parser protection

_HASH_RE = re.compile(r"^[0-9a-f]{40}$")


class BuildSystem(Enum):
    MAVEN = "Maven"
    ANT = "Ant"
    GRADLE = "Gradle"


class ChangeKind(Enum):
    ADDED = "added"
    DELETED = "deleted"
    MODIFIED = "modified"
    RENAMED = "renamed"


class RepoUnreadableError(Exception):
    """The given path is not a readable git repository."""


class GitObjectCorruptError(Exception):
    """A git object could not be read; the offending commit is skipped."""


_GRADLE_BASENAMES = {"settings.gradle", "settings.gradle.kts", "gradle.properties"}


def classify_build_file(path: str) -> Optional[BuildSystem]:
    """Classify a repo-relative path as a build file, or None.

    Matches on the final path segment only, case-sensitively: ``pom.xml`` is
    Maven, ``build.xml`` is Ant, and ``*.gradle`` / ``*.gradle.kts`` /
    ``gradle.properties`` are Gradle.
    """
    base = path.rsplit("/", 1)[-1]
    if base == "pom.xml":
        return BuildSystem.MAVEN
    if base == "build.xml":
        return BuildSystem.ANT
    if base in _GRADLE_BASENAMES or base.endswith(".gradle") or base.endswith(".gradle.kts"):
        return BuildSystem.GRADLE
    return None


@dataclass(frozen=True)
class Hunk:
    """One contiguous run of changed lines in a line diff.

    ``old_start``/``new_start`` are 1-based; a pure insertion has
    ``old_len == 0`` and ``old_start`` pointing at the line before which the
    insertion happens (0 when inserting at the top).
    """

    old_start: int
    old_len: int
    new_start: int
    new_len: int
    removed: tuple[str, ...]
    added: tuple[str, ...]


def _lines(text: Optional[str]) -> list[str]:
    if text is None:
        return []
    return text.split("\n")


def extract_diff(before_content: Optional[str], after_content: Optional[str]) -> list[Hunk]:
    """Longest-common-subsequence line diff between two file versions.

    Returns the changed regions only; :func:`apply_hunks` replays them onto
    ``before_content`` to reproduce ``after_content`` exactly.
    """
    if before_content is None and after_content is None:
        raise ValueError("at least one side of the diff must be present")
    a = _lines(before_content)
    b = _lines(after_content)
    matcher = difflib.SequenceMatcher(None, a, b, autojunk=False)
    hunks: list[Hunk] = []
    run: list[tuple[str, int, int, int, int]] = []

    def flush() -> None:
        if not run:
            return
        i1, j1 = run[0][1], run[0][3]
        i2, j2 = run[-1][2], run[-1][4]
        hunks.append(
            Hunk(
                old_start=i1 + 1 if i2 > i1 else i1,
                old_len=i2 - i1,
                new_start=j1 + 1 if j2 > j1 else j1,
                new_len=j2 - j1,
                removed=tuple(a[i1:i2]),
                added=tuple(b[j1:j2]),
            )
        )
        run.clear()

    for op in matcher.get_opcodes():
        if op[0] == "equal":
            flush()
        else:
            run.append(op)
    flush()
    return hunks


def apply_hunks(before_content: Optional[str], hunks: Sequence[Hunk]) -> str:
    """Replay hunks onto a before text, returning the after text."""
    lines = _lines(before_content)
    out: list[str] = []
    cursor = 0  # 0-based index into `lines`
    for h in hunks:
        anchor = h.old_start - 1 if h.old_len else h.old_start
        out.extend(lines[cursor:anchor])
        out.extend(h.added)
        cursor = anchor + h.old_len
    out.extend(lines[cursor:])
    return "\n".join(out)


@dataclass(frozen=True)
class FileDiff:
    """One build file's change within a commit."""

    path: str
    build_system: BuildSystem
    change_kind: ChangeKind
    old_path: Optional[str] = None
    before_content: Optional[str] = None
    after_content: Optional[str] = None

    def __post_init__(self) -> None:
        if self.change_kind is ChangeKind.ADDED and self.before_content is not None:
            raise ValueError(f"{self.path}: added file must not carry before_content")
        if self.change_kind is ChangeKind.DELETED and self.after_content is not None:
            raise ValueError(f"{self.path}: deleted file must not carry after_content")

    @cached_property
    def hunks(self) -> tuple[Hunk, ...]:
        if self.before_content is None and self.after_content is None:
            return ()
        return tuple(extract_diff(self.before_content, self.after_content))


@dataclass(frozen=True)
class CommitRecord:
    """One mined commit restricted to its build-file diffs."""

    repo_id: str
    commit_hash: str
    message: str
    author: str
    timestamp: int
    file_diffs: tuple[FileDiff, ...]

    def __post_init__(self) -> None:
        if not _HASH_RE.match(self.commit_hash):
            raise ValueError(f"commit_hash must be 40 lowercase hex chars: {self.commit_hash!r}")


@dataclass(frozen=True)
class MiningFilter:
    """Selection criteria for :func:`mine_commits`."""

    message_keyword: str = "refactor"
    build_systems: frozenset[BuildSystem] = frozenset(BuildSystem)
    max_commits: Optional[int] = None
    exclude_merges: bool = True

    def __post_init__(self) -> None:
        if not self.build_systems:
            raise ValueError("build_systems must be non-empty")

    def matches_message(self, message: str) -> bool:
        return self.message_keyword.lower() in message.lower()


@dataclass
class MiningStats:
    """Counters filled in by mine_commits for diagnostics."""

    commits_scanned: int = 0
    commits_yielded: int = 0
    commits_skipped_corrupt: int = 0
    files_skipped: int = 0
    warnings: int = 0


def _git(repo_path: str, *args: str) -> bytes:
    proc = subprocess.run(
        ["git", "-C", repo_path, *args],
        capture_output=True,
        timeout=120,
    )
    if proc.returncode != 0:
        raise GitObjectCorruptError(proc.stderr.decode("utf-8", errors="replace").strip())
    return proc.stdout


def _show_file(repo_path: str, rev: str, path: str) -> Optional[str]:
    """Fetch one file version; returns None for binary or oversized blobs."""
    data = _git(repo_path, "show", f"{rev}:{path}")
    if len(data) > MAX_BUILD_FILE_BYTES or b"\x00" in data:
        return None
    return data.decode("utf-8", errors="replace")


_STATUS_KINDS = {
    "A": ChangeKind.ADDED,
    "C": ChangeKind.ADDED,
    "D": ChangeKind.DELETED,
    "M": ChangeKind.MODIFIED,
    "R": ChangeKind.RENAMED,
    "T": ChangeKind.MODIFIED,
}


def _changed_paths(
    repo_path: str, commit_hash: str, first_parent: Optional[str]
) -> list[tuple[ChangeKind, Optional[str], str]]:
    """List (kind, old_path, path) entries for one commit vs its first parent.

    Merge commits are diffed against their first parent explicitly; plain
    diff-tree would print nothing for them.
    """
    if first_parent:
        args = ["diff-tree", "-r", "-M", "--no-commit-id", "--name-status", "-z",
                first_parent, commit_hash]
    else:
        args = ["diff-tree", "-r", "-M", "--root", "--no-commit-id", "--name-status", "-z",
                commit_hash]
    out = _git(repo_path, *args).decode("utf-8", errors="replace")
    fields = [f for f in out.split("\x00") if f]
    entries: list[tuple[ChangeKind, Optional[str], str]] = []
    i = 0
    while i < len(fields):
        status = fields[i]
        kind = _STATUS_KINDS.get(status[0])
        if kind is None:
            i += 2
            continue
        if status[0] in ("R", "C"):
            old, new = fields[i + 1], fields[i + 2]
            i += 3
        else:
            old, new = fields[i + 1], fields[i + 1]
            i += 2
        entries.append((kind, old if old != new else None, new))
    return entries


def _build_file_diff(
    repo_path: str,
    commit_hash: str,
    has_parent: bool,
    kind: ChangeKind,
    old_path: Optional[str],
    path: str,
    system: BuildSystem,
) -> Optional[FileDiff]:
    before = after = None
    if kind is not ChangeKind.DELETED:
        after = _show_file(repo_path, commit_hash, path)
        if after is None:
            return None
    if kind is not ChangeKind.ADDED and has_parent:
        before = _show_file(repo_path, f"{commit_hash}^", old_path or path)
        if before is None:
            return None
    if not has_parent and kind is not ChangeKind.DELETED:
        kind = ChangeKind.ADDED
        before = None
    return FileDiff(
        path=path,
        build_system=system,
        change_kind=kind,
        old_path=old_path,
        before_content=before,
        after_content=after,
    )


def mine_commits(
    repo_path: str,
    mining_filter: Optional[MiningFilter] = None,
    stats: Optional[MiningStats] = None,
) -> Iterator[CommitRecord]:
    """Yield matching commits in reverse-chronological order.

    A commit is yielded when its message contains the filter keyword
    (case-insensitive substring) and it modifies at least one file classified
    into one of the filter's build systems. Each record's file_diffs contain
    only those build files. Corrupt objects skip the commit and bump the
    warning counters instead of aborting the walk.
    """
    mining_filter = mining_filter or MiningFilter()
    stats = stats if stats is not None else MiningStats()
    repo_path = os.path.abspath(repo_path)
    try:
        _git(repo_path, "rev-parse", "--git-dir")
    except (GitObjectCorruptError, FileNotFoundError, NotADirectoryError) as exc:
        raise RepoUnreadableError(f"{repo_path}: {exc}") from exc

    repo_id = os.path.basename(repo_path.rstrip("/")) or repo_path
    log_args = ["log", "--format=%H%x1f%an%x1f%at%x1f%P%x1f%B%x1e"]
    if mining_filter.exclude_merges:
        log_args.append("--no-merges")
    try:
        raw = _git(repo_path, *log_args).decode("utf-8", errors="replace")
    except GitObjectCorruptError:
        # empty repository: no commits to walk
        return

    yielded = 0
    for chunk in raw.split("\x1e"):
        chunk = chunk.lstrip("\n")
        if not chunk.strip():
            continue
        stats.commits_scanned += 1
        commit_hash, author, ts, parents, message = chunk.split("\x1f", 4)
        if not mining_filter.matches_message(message):
            continue
        first_parent = parents.split()[0] if parents.strip() else None
        try:
            entries = _changed_paths(repo_path, commit_hash, first_parent)
            diffs = []
            for kind, old_path, path in entries:
                system = classify_build_file(path)
                if system is None or system not in mining_filter.build_systems:
                    continue
                diff = _build_file_diff(
                    repo_path, commit_hash, bool(parents.strip()), kind, old_path, path, system
                )
                if diff is None:
                    stats.files_skipped += 1
                    stats.warnings += 1
                    logger.warning("skipping binary or oversized build file %s in %s", path, commit_hash)
                    continue
                diffs.append(diff)
        except GitObjectCorruptError as exc:
            stats.commits_skipped_corrupt += 1
            stats.warnings += 1
            logger.warning("skipping corrupt commit %s: %s", commit_hash, exc)
            continue
        if not diffs:
            continue
        record = CommitRecord(
            repo_id=repo_id,
            commit_hash=commit_hash,
            message=message.rstrip("\n"),
            author=author,
            timestamp=int(ts),
            file_diffs=tuple(sorted(diffs, key=lambda d: d.path)),
        )
        stats.commits_yielded += 1
        yield record
        yielded += 1
        if mining_filter.max_commits is not None and yielded >= mining_filter.max_commits:
            return


# --- line-oriented JSON wire format ---------------------------------------

def commit_to_json(record: CommitRecord) -> str:
    """Serialize one CommitRecord as a single JSON line."""
    payload = {
        "repo_id": record.repo_id,
        "commit_hash": record.commit_hash,
        "message": record.message,
        "author": record.author,
        "timestamp": record.timestamp,
        "file_diffs": [
            {
                "path": d.path,
                "build_system": d.build_system.value,
                "change_kind": d.change_kind.value,
                **({"old_path": d.old_path} if d.old_path else {}),
                "before_content": d.before_content,
                "after_content": d.after_content,
            }
            for d in record.file_diffs
        ],
    }
    return json.dumps(payload, ensure_ascii=False)


def commit_from_json(line: str) -> CommitRecord:
    obj = json.loads(line)
    diffs = tuple(
        FileDiff(
            path=d["path"],
            build_system=BuildSystem(d["build_system"]),
            change_kind=ChangeKind(d["change_kind"]),
            old_path=d.get("old_path"),
            before_content=d.get("before_content"),
            after_content=d.get("after_content"),
        )
        for d in obj["file_diffs"]
    )
    return CommitRecord(
        repo_id=obj["repo_id"],
        commit_hash=obj["commit_hash"],
        message=obj["message"],
        author=obj["author"],
        timestamp=int(obj["timestamp"]),
        file_diffs=diffs,
    )
