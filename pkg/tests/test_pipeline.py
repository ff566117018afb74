import csv
import json
from datetime import timedelta

import pytest

from maintscore.categories import DatasetRecord
from maintscore.config import RunConfig
from maintscore.history import ScriptedRepo
from maintscore.pipeline import compute_stats, project_slug, resolve_source, run_pipeline, single_commit_delta

from mini import differing_golden_files, mine_mini


@pytest.fixture(scope="module")
def mini_runs(tmp_path_factory):
    work = tmp_path_factory.mktemp("mini")
    first = mine_mini(work, "first")
    second = mine_mini(work, "second", "--workers", "1")
    return first, second


def test_mini_dataset_matches_golden(mini_runs):
    (code, out), _ = mini_runs
    assert code == 0
    assert differing_golden_files(out) == []


def test_mini_dataset_second_run_identical(mini_runs):
    (_, first), (code, second) = mini_runs
    assert code == 0
    for name in ("delta.csv", "lifespan.csv", "stats.json", "baseline.csv", "baseline_delta.csv",
                 "baseline_lifespan.csv", "skipped.csv", "categories.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_mini_run_directory_layout(mini_runs):
    (_, out), _ = mini_runs
    rows = list(csv.DictReader(open(out / "delta.csv", encoding="utf-8")))
    assert len(rows) == 8
    for r in rows:
        snap = json.loads((out / "snapshots" / r["commit"] / "snapshot.json").read_text())
        assert snap["M"] == pytest.approx(float(r["M_after"]), abs=1e-9)
        assert (out / "snapshots" / r["parent"] / "profile.json").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 7 and manifest["records"] == 8
    assert json.loads((out / "categories.json").read_text()) == {"Miscellaneous": 8}


def test_empty_dataset(tmp_path):
    ds = tmp_path / "empty.csv"
    ds.write_text("project_url,commit_hash,category\n", encoding="utf-8")
    cfg = RunConfig(dataset=ds, cache_dir=tmp_path / "cache")
    run_pipeline(cfg, tmp_path / "out")
    assert (tmp_path / "out" / "delta.csv").read_text() == "project,commit,parent,category,M_before,M_after,delta,direction\n"
    stats = json.loads((tmp_path / "out" / "stats.json").read_text())
    assert stats["groups"]["energy"]["n"] == 0 and stats["groups"]["energy"]["p"] is None
    assert stats["lifespan"]["test"] is None


def _small_repo(path):
    repo = ScriptedRepo(path)
    repo.write("A.java", "class A {\n  void a() {}\n}\n")
    root = repo.commit("init", timedelta(0))
    repo.write("A.java", "class A {\n  void a() { if (x) y(); }\n}\n")
    second = repo.commit("edit", timedelta(hours=2))
    return repo, root, second


def test_missing_repo_and_commits_are_skipped(tmp_path):
    repo, root, second = _small_repo(tmp_path / "small")
    records = [
        DatasetRecord(str(tmp_path / "nowhere"), "a" * 40, "Power Save Mode"),
        DatasetRecord(str(repo.path), "b" * 40, "Power Save Mode"),
        DatasetRecord(str(repo.path), root, "Power Save Mode"),
        DatasetRecord(str(repo.path), second, "Power Save Mode"),
    ]
    result = run_pipeline(RunConfig(cache_dir=tmp_path / "cache"), tmp_path / "out", records)
    stages = sorted((s[2], s[1][:8]) for s in result.skipped)
    assert ("clone", "a" * 8) in stages and ("resolve", "b" * 8) in stages and ("delta", root[:8]) in stages
    assert [d.commit for d in result.deltas] == [second]
    skipped = list(csv.DictReader(open(tmp_path / "out" / "skipped.csv", encoding="utf-8")))
    assert {r["stage"] for r in skipped} >= {"clone", "resolve", "delta"}


def test_single_commit_delta(tmp_path):
    repo, _root, second = _small_repo(tmp_path / "small")
    cd = single_commit_delta(repo.path, second, RunConfig(cache_dir=tmp_path / "c"))
    assert cd.delta == pytest.approx(cd.m_after - cd.m_before)


def test_resolve_source(tmp_path):
    assert resolve_source("https://example.org/x.git", tmp_path) == "https://example.org/x.git"
    assert resolve_source("git@example.org:x/y.git", None) == "git@example.org:x/y.git"
    assert resolve_source("x.bundle", tmp_path) == str((tmp_path / "x.bundle").resolve())
    assert project_slug("https://example.org/a/b.git") != project_slug("https://example.org/c/b.git")


def test_compute_stats_category_groups(tmp_path):
    (tmp_path / "delta.csv").write_text(
        "project,commit,parent,category,M_before,M_after,delta,direction\n"
        "p,c1,c0,PowerSaveMode,1,0,-1.0,decrease\n"
        "p,c2,c1,PowerSaveMode,0,2,2.0,increase\n"
        "p,c3,c2,Miscellaneous,0,0,0.0,unchanged\n",
        encoding="utf-8",
    )
    doc = compute_stats(tmp_path, RunConfig(cache_dir=tmp_path))
    assert doc["groups"]["category:PowerSaveMode"]["n"] == 2
    assert doc["groups"]["category:Miscellaneous"]["degenerate"] is True
    assert doc["groups"]["baseline"]["n"] == 0
