import json

import pytest

import fixtures
from buildref.cli import EXIT_BACKEND, EXIT_DATA, EXIT_OK, EXIT_USAGE, run
from buildref.evaluation import report_from_json
from conftest import build_git_repo


def build_pipeline_repo(root):
    """12 labeled refactoring commits plus an initial and two noise commits.

    Returns (hashes of the 12 refactoring commits in commit order, gold types).
    """
    initial_files = {}
    for _, before, _, _ in fixtures.PIPELINE_CASES:
        initial_files.update(before)
    initial_files["noise/build.gradle"] = "apply plugin: 'java'\n"
    initial_files["README.md"] = "demo\n"

    steps = [("initial build setup", initial_files)]
    expected = []
    for name, _, after, gold_type in fixtures.PIPELINE_CASES:
        steps.append((f"refactor: {name}", dict(after)))
        expected.append(gold_type)
    steps.append(("tweak build config", {"noise/build.gradle": "apply plugin: 'java'\n// tuned\n"}))
    steps.append(("refactor docs", {"README.md": "demo refreshed\n"}))

    hashes = build_git_repo(root, steps)
    refactor_hashes = hashes[1 : 1 + len(fixtures.PIPELINE_CASES)]
    return refactor_hashes, expected


@pytest.fixture
def pipeline(tmp_path):
    repo = tmp_path / "repo"
    hashes, expected = build_pipeline_repo(repo)
    return repo, hashes, expected


def test_end_to_end_static_pipeline(pipeline, tmp_path):
    repo, hashes, expected = pipeline
    commits = tmp_path / "commits.jsonl"
    preds = tmp_path / "pred.jsonl"
    gold = tmp_path / "gold.jsonl"
    report_path = tmp_path / "report.json"

    assert run(["mine", "--repo", str(repo), "--out", str(commits)]) == EXIT_OK
    mined = [json.loads(l) for l in commits.read_text().strip().split("\n")]
    assert len(mined) == 12
    assert {m["commit_hash"] for m in mined} == set(hashes)

    assert run(["detect", "--commits", str(commits), "--backend", "static", "--out", str(preds)]) == EXIT_OK

    gold.write_text(
        "\n".join(
            json.dumps({"commit_hash": h, "types": [t]}) for h, t in zip(hashes, expected)
        )
        + "\n"
    )
    assert run(
        ["evaluate", "--gold", str(gold), "--pred", str(preds), "--out", str(report_path)]
    ) == EXIT_OK

    report = report_from_json(report_path.read_text())
    assert report.n_commits == 12
    covered = {t for t in expected}
    for type_id in covered:
        m = report.per_type[type_id]
        assert m.f1 == 1.0, f"{type_id}: tp={m.tp} fp={m.fp} fn={m.fn}"
    assert report.overall_macro.f1 == 1.0


def test_detect_parallelism_preserves_order(pipeline, tmp_path):
    repo, _, _ = pipeline
    commits = tmp_path / "commits.jsonl"
    run(["mine", "--repo", str(repo), "--out", str(commits)])
    seq = tmp_path / "seq.jsonl"
    par = tmp_path / "par.jsonl"
    assert run(["detect", "--commits", str(commits), "--out", str(seq)]) == EXIT_OK
    assert run(["detect", "--commits", str(commits), "--parallelism", "4", "--out", str(par)]) == EXIT_OK
    assert seq.read_text() == par.read_text()


def test_detect_is_idempotent(pipeline, tmp_path):
    repo, _, _ = pipeline
    commits = tmp_path / "commits.jsonl"
    run(["mine", "--repo", str(repo), "--out", str(commits)])
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    run(["detect", "--commits", str(commits), "--out", str(out1)])
    run(["detect", "--commits", str(commits), "--out", str(out2)])
    assert out1.read_text() == out2.read_text()


def test_detection_lines_schema(pipeline, tmp_path):
    repo, _, _ = pipeline
    commits = tmp_path / "commits.jsonl"
    preds = tmp_path / "pred.jsonl"
    run(["mine", "--repo", str(repo), "--out", str(commits)])
    run(["detect", "--commits", str(commits), "--out", str(preds)])
    for line in preds.read_text().strip().split("\n"):
        obj = json.loads(line)
        assert {"commit_hash", "RefactoringType", "Details", "evidence", "backend", "confidence"} <= set(obj)
        assert obj["backend"] == "static"
        assert obj["confidence"] == 1.0


def test_evaluate_pred_equals_gold_is_perfect(tmp_path):
    gold = tmp_path / "gold.jsonl"
    gold.write_text(json.dumps({"commit_hash": "5" * 40, "types": ["DRY"]}) + "\n")
    out = tmp_path / "report.json"
    assert run(["evaluate", "--gold", str(gold), "--pred", str(gold), "--out", str(out)]) == EXIT_OK
    report = report_from_json(out.read_text())
    assert report.overall_macro.f1 == 1.0


def test_report_markdown(tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    gold.write_text(json.dumps({"commit_hash": "5" * 40, "types": ["DRY"]}) + "\n")
    report_path = tmp_path / "report.json"
    run(["evaluate", "--gold", str(gold), "--pred", str(gold), "--out", str(report_path)])
    assert run(["report", "--in", str(report_path), "--format", "md"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "| DRY | 1.00 | 1.00 | 1.00 |" in out
    assert "| All Refs. |" in out


def test_taxonomy_output(capsys):
    assert run(["taxonomy"]) == EXIT_OK
    out = capsys.readouterr().out
    type_lines = [l for l in out.split("\n") if l.startswith("- ")]
    header_lines = [l for l in out.split("\n") if l.startswith("# ")]
    assert len(type_lines) == 24
    assert len(header_lines) == 6
    assert sum("[build-specific]" in l for l in type_lines) == 8


def test_taxonomy_json(capsys):
    assert run(["taxonomy", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert len(payload) == 24


def test_usage_errors_exit_1(capsys):
    assert run(["mine"]) == EXIT_USAGE  # --repo missing
    assert run(["detect", "--commits", "x", "--backend", "llm", "--out", "y"]) == EXIT_USAGE
    assert run(["frobnicate"]) == EXIT_USAGE


def test_data_errors_exit_2(tmp_path, capsys):
    assert run(["mine", "--repo", str(tmp_path / "not-a-repo"), "--out", "-"]) == EXIT_DATA
    missing = tmp_path / "missing.jsonl"
    assert run(["detect", "--commits", str(missing), "--out", "-"]) == EXIT_DATA
    bad = tmp_path / "bad.jsonl"
    bad.write_text("this is not json\n")
    assert run(["detect", "--commits", str(bad), "--out", "-"]) == EXIT_DATA


def test_unknown_pred_commit_is_data_error(tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    pred = tmp_path / "pred.jsonl"
    gold.write_text(json.dumps({"commit_hash": "6" * 40, "types": ["DRY"]}) + "\n")
    pred.write_text(json.dumps({"commit_hash": "7" * 40, "types": ["DRY"]}) + "\n")
    assert run(["evaluate", "--gold", str(gold), "--pred", str(pred), "--out", "-"]) == EXIT_DATA


def test_llm_transport_failure_exits_3(pipeline, tmp_path, monkeypatch, capsys):
    repo, _, _ = pipeline
    commits = tmp_path / "commits.jsonl"
    run(["mine", "--repo", str(repo), "--out", str(commits)])

    from buildref import llm_backend

    def failing_transport(url, headers, body, timeout):
        raise llm_backend.TransportError("connection refused")

    monkeypatch.setattr(llm_backend, "_requests_transport", failing_transport)
    code = run(
        [
            "detect", "--commits", str(commits), "--backend", "llm",
            "--endpoint", "http://127.0.0.1:1/v1", "--model", "m",
            "--max-retries", "0", "--out", "-",
        ]
    )
    assert code == EXIT_BACKEND


def test_llm_detect_with_mocked_transport_and_cache(pipeline, tmp_path, monkeypatch):
    repo, hashes, _ = pipeline
    commits = tmp_path / "commits.jsonl"
    run(["mine", "--repo", str(repo), "--out", str(commits)])

    from buildref import llm_backend

    calls = {"n": 0}

    def canned_transport(url, headers, body, timeout):
        calls["n"] += 1
        content = '[{"RefactoringType": "Reformat Code", "Details": "stub"}]'
        return 200, json.dumps({"choices": [{"message": {"content": content}}]})

    monkeypatch.setattr(llm_backend, "_requests_transport", canned_transport)
    cache = tmp_path / "cache"
    out1 = tmp_path / "llm1.jsonl"
    args = [
        "detect", "--commits", str(commits), "--backend", "llm",
        "--endpoint", "http://mock/v1", "--model", "m", "--prompt-mode", "one-shot",
        "--cache-dir", str(cache),
    ]
    assert run(args + ["--out", str(out1)]) == EXIT_OK
    first_calls = calls["n"]
    assert first_calls == 12
    lines = [json.loads(l) for l in out1.read_text().strip().split("\n")]
    assert {l["RefactoringType"] for l in lines} == {"Reformat Code"}
    assert {l["backend"] for l in lines} == {"llm"}

    out2 = tmp_path / "llm2.jsonl"
    assert run(args + ["--out", str(out2)]) == EXIT_OK
    assert calls["n"] == first_calls  # all served from cache
    assert out2.read_text() == out1.read_text()


def test_config_file_defaults_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "buildref.cfg"
    cfg.write_text("format=json\n")
    gold = tmp_path / "gold.jsonl"
    gold.write_text(json.dumps({"commit_hash": "8" * 40, "types": ["DRY"]}) + "\n")
    report_path = tmp_path / "report.json"
    run(["evaluate", "--gold", str(gold), "--pred", str(gold), "--out", str(report_path)])

    assert run(["--config", str(cfg), "report", "--in", str(report_path)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["backend"] == "static"

    assert run(["--config", str(cfg), "report", "--in", str(report_path), "--format", "md"]) == EXIT_OK
    assert "| All Refs. |" in capsys.readouterr().out


def test_dump_models_debug_flag(pipeline, tmp_path):
    repo, _, _ = pipeline
    commits = tmp_path / "commits.jsonl"
    dump = tmp_path / "models.jsonl"
    run(["mine", "--repo", str(repo), "--out", str(commits)])
    assert run(["detect", "--commits", str(commits), "--out", "-", "--dump-models", str(dump)]) == EXIT_OK
    entries = [json.loads(l) for l in dump.read_text().strip().split("\n")]
    assert entries
    assert {"kind", "name", "attributes", "span"} <= set(entries[0]["elements"][0])
