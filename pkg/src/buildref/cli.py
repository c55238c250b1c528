"""Batch command line: mine -> detect -> evaluate -> report, plus taxonomy.

Stages communicate through line-delimited JSON files so runs can be resumed,
cached, and mixed across backends. Exit codes: 0 success, 1 usage error,
2 data error, 3 backend/transport error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from . import evaluation, llm_backend, taxonomy
from .build_parsers import XmlMalformedError, model_to_json
from .detectors import (
    CommitContext,
    DetectorConfig,
    detect_all,
    detection_to_json,
    sort_key,
)
from .mining import (
    BuildSystem,
    CommitRecord,
    MiningFilter,
    MiningStats,
    RepoUnreadableError,
    commit_from_json,
    commit_to_json,
    mine_commits,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we map usage errors to 1
        raise UsageError(message)


def _build_parser() -> tuple[_Parser, list[_Parser]]:
    parser = _Parser(prog="buildref", description=__doc__)
    parser.add_argument("--config", help="key=value file with flag defaults; flags win")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_mine = sub.add_parser("mine", help="walk a git repo for refactoring commits")
    p_mine.add_argument("--repo", required=True)
    p_mine.add_argument("--out", default="-")
    p_mine.add_argument("--keyword", default="refactor")
    p_mine.add_argument("--build-systems", default="maven,ant,gradle")
    p_mine.add_argument("--max-commits", type=int, default=None)
    p_mine.add_argument("--include-merges", action="store_true")

    p_detect = sub.add_parser("detect", help="detect refactorings in mined commits")
    p_detect.add_argument("--commits", required=True)
    p_detect.add_argument("--out", default="-")
    p_detect.add_argument("--backend", choices=["static", "llm"], default="static")
    p_detect.add_argument("--prompt-mode", choices=["zero-shot", "one-shot"], default="zero-shot")
    p_detect.add_argument("--endpoint")
    p_detect.add_argument("--model")
    p_detect.add_argument("--api-key-env", default="BUILDREF_API_KEY")
    p_detect.add_argument("--temperature", type=float, default=0.0)
    p_detect.add_argument("--max-output-tokens", type=int, default=2048)
    p_detect.add_argument("--timeout", type=float, default=60.0)
    p_detect.add_argument("--max-retries", type=int, default=3)
    p_detect.add_argument("--rate", type=float, default=None, help="max requests per second")
    p_detect.add_argument("--parallelism", type=int, default=1)
    p_detect.add_argument("--cache-dir", default=None)
    p_detect.add_argument("--no-cache", action="store_true")
    p_detect.add_argument("--move-similarity", type=float, default=0.7)
    p_detect.add_argument("--rename-similarity", type=float, default=0.8)
    p_detect.add_argument("--dump-models", default=None, help="debug: write parsed build models here")

    p_eval = sub.add_parser("evaluate", help="score predictions against gold labels")
    p_eval.add_argument("--gold", required=True)
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--out", default="-")
    p_eval.add_argument("--backend-label", default="static")
    p_eval.add_argument("--set-mode", action="store_true")

    p_report = sub.add_parser("report", help="render an evaluation report")
    p_report.add_argument("--in", dest="in_path", required=True)
    p_report.add_argument("--format", choices=["md", "json"], default="md")

    p_tax = sub.add_parser("taxonomy", help="print the 24-type registry")
    p_tax.add_argument("--json", action="store_true")

    return parser, [p_mine, p_detect, p_eval, p_report, p_tax]


def _apply_config_file(parsers: Sequence[_Parser], argv: Sequence[str]) -> None:
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if not path:
        return
    defaults = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            defaults[key.strip().replace("-", "_")] = value.strip()
    # subparsers do not inherit parent defaults, so set them on each
    for parser in parsers:
        parser.set_defaults(**defaults)


def _open_out(path: str):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line for line in fh.read().split("\n") if line.strip()]


# --- subcommands -------------------------------------------------------------

def _cmd_mine(args) -> int:
    systems = frozenset(
        BuildSystem(name.strip().capitalize()) for name in args.build_systems.split(",") if name.strip()
    )
    mining_filter = MiningFilter(
        message_keyword=args.keyword,
        build_systems=systems,
        max_commits=args.max_commits,
        exclude_merges=not args.include_merges,
    )
    stats = MiningStats()
    out = _open_out(args.out)
    try:
        for record in mine_commits(args.repo, mining_filter, stats):
            out.write(commit_to_json(record) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    logger.info(
        "scanned %d commits, yielded %d, warnings %d",
        stats.commits_scanned, stats.commits_yielded, stats.warnings,
    )
    return EXIT_OK


def _detect_static(record: CommitRecord, config: DetectorConfig, dump_sink) -> list[str]:
    ctx = CommitContext.from_commit(record)
    if dump_sink is not None:
        for side, models in (("before", ctx.before_models), ("after", ctx.after_models)):
            for path in sorted(models):
                dump_sink.write(json.dumps(
                    {"commit_hash": record.commit_hash, "version": side, **model_to_json(models[path])}
                ) + "\n")
    detections = sorted(detect_all(ctx, config), key=sort_key)
    return [detection_to_json(record.commit_hash, d) for d in detections]


def _detect_llm(record: CommitRecord, args, llm_config, rate_limiter) -> list[str]:
    mode = (
        llm_backend.PromptMode.ONE_SHOT
        if args.prompt_mode == "one-shot"
        else llm_backend.PromptMode.ZERO_SHOT
    )
    lines: list[str] = []
    # one prompt per build system present in the commit, as prompts are system-tailored
    for system in sorted({fd.build_system for fd in record.file_diffs}, key=lambda s: s.value):
        sub_record = CommitRecord(
            repo_id=record.repo_id,
            commit_hash=record.commit_hash,
            message=record.message,
            author=record.author,
            timestamp=record.timestamp,
            file_diffs=tuple(fd for fd in record.file_diffs if fd.build_system is system),
        )
        spec = llm_backend.PromptSpec(mode=mode, build_system=system)
        prompt = llm_backend.build_prompt(sub_record, spec)
        detections = _cached_classify(sub_record, spec, prompt, args, llm_config, rate_limiter)
        for det in sorted(detections, key=sort_key):
            lines.append(detection_to_json(record.commit_hash, det))
    return lines


def _cached_classify(record, spec, prompt, args, llm_config, rate_limiter):
    cache_path = None
    if args.cache_dir and not args.no_cache:
        digest = hashlib.sha256(
            llm_config.model.encode() + b"\x00" + prompt.encode()
        ).hexdigest()
        os.makedirs(args.cache_dir, exist_ok=True)
        cache_path = os.path.join(args.cache_dir, f"{digest}.json")
        if os.path.exists(cache_path):
            with open(cache_path, encoding="utf-8") as fh:
                return llm_backend.parse_response(fh.read())
    detections = llm_backend.classify_commit(
        record, spec, llm_config, rate_limiter=rate_limiter
    )
    if cache_path:
        with open(cache_path, "w", encoding="utf-8") as fh:
            fh.write(llm_backend.serialize_detections(detections))
    return detections


def _cmd_detect(args) -> int:
    llm_config = None
    rate_limiter = None
    if args.backend == "llm":
        if not args.endpoint or not args.model:
            raise UsageError("detect --backend llm requires --endpoint and --model")
    records = [commit_from_json(line) for line in _read_lines(args.commits)]
    if args.backend == "llm":
        llm_config = llm_backend.LlmConfig(
            endpoint=args.endpoint,
            model=args.model,
            api_key_env=args.api_key_env,
            temperature=args.temperature,
            max_output_tokens=args.max_output_tokens,
            timeout_seconds=args.timeout,
            max_retries=args.max_retries,
            requests_per_second=args.rate,
        )
        if args.rate:
            rate_limiter = llm_backend.RateLimiter(args.rate, burst=max(args.parallelism, 1))

    detector_config = DetectorConfig(
        move_similarity=args.move_similarity,
        rename_similarity=args.rename_similarity,
    )
    dump_sink = open(args.dump_models, "w", encoding="utf-8") if args.dump_models else None

    def worker(record: CommitRecord) -> list[str]:
        if args.backend == "static":
            return _detect_static(record, detector_config, dump_sink)
        return _detect_llm(record, args, llm_config, rate_limiter)

    out = _open_out(args.out)
    try:
        if args.parallelism > 1:
            with ThreadPoolExecutor(max_workers=args.parallelism) as pool:
                for lines in pool.map(worker, records):  # map preserves input order
                    for line in lines:
                        out.write(line + "\n")
        else:
            for record in records:
                for line in worker(record):
                    out.write(line + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
        if dump_sink is not None:
            dump_sink.close()
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    gold = evaluation.gold_from_lines(_read_lines(args.gold))
    pred = evaluation.predictions_from_lines(_read_lines(args.pred))
    report = evaluation.score(gold, pred, backend=args.backend_label, set_mode=args.set_mode)
    out = _open_out(args.out)
    try:
        out.write(evaluation.report_to_json(report) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_report(args) -> int:
    with open(args.in_path, encoding="utf-8") as fh:
        report = evaluation.report_from_json(fh.read())
    fmt = "json" if args.format == "json" else "markdown_table"
    print(evaluation.render_report(report, fmt))
    return EXIT_OK


def _cmd_taxonomy(args) -> int:
    if args.json:
        print(taxonomy.registry_to_json())
        return EXIT_OK
    current = None
    for t in taxonomy.registry():
        if t.category is not current:
            current = t.category
            print(f"# {current.value}")
        debts = sorted(d.value for d in taxonomy.td_categories_for(t))
        suffix = " [build-specific]" if t.build_specific else ""
        td_part = f" (TD: {', '.join(debts)})" if debts else ""
        print(f"- {t.id}{suffix}{td_part}")
    return EXIT_OK


_COMMANDS = {
    "mine": _cmd_mine,
    "detect": _cmd_detect,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
    "taxonomy": _cmd_taxonomy,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        _apply_config_file(subparsers, argv)
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return _COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        llm_backend.TransportError,
        llm_backend.UnparseableResponseError,
    ) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (
        RepoUnreadableError,
        XmlMalformedError,
        evaluation.UnknownCommitError,
        taxonomy.UnknownTypeError,
        llm_backend.MixedBuildSystemsError,
        llm_backend.EmptyDiffError,
        json.JSONDecodeError,
        FileNotFoundError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
