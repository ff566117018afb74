"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line in the pytest terminal summary.
Run standalone with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import shutil
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from maintscore.categories import apply_min_count_rule, category_counts, normalize_categories, read_dataset
from maintscore.config import Guideline, GuidelineConfig, Level
from maintscore.history import Repo, track_lifespan
from maintscore.metrics.clones import detect_clones
from maintscore.metrics.lexer import lex
from maintscore.metrics.profile import analyze_tree
from maintscore.metrics.risk import RiskProfile
from maintscore.scoring import Direction, delta, guideline_score, level_compliance, snapshot_score, weight
from maintscore.stats import ks_two_sample, wilcoxon_signed_rank

from lifespan_cases import CASES, build_case
from mini import differing_golden_files, mine_mini
from oracles import brute_force_clones, brute_force_ks_d, wilcoxon_enumeration_p

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, str] = {}


def record(number: int, name: str, ok: bool, detail: str) -> bool:
    RESULTS[number] = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {name}: {detail}"
    return ok


def criterion_1() -> bool:
    w = weight(0.069)
    return record(1, "weight anchor", 13.48 <= w <= 13.51, f"w(0.069) = {w:.5f}")


def criterion_2() -> bool:
    rng = random.Random(2)
    worst = 0.0
    for _ in range(1000):
        n = rng.randint(10, 10**6)
        vh = rng.randint(1, n - 3)
        hi = rng.randint(vh + 1, n - 2)
        md = rng.randint(hi + 1, n - 1)
        cfg = GuidelineConfig((15, 30, 60), (md / n, hi / n, vh / n))
        prof = RiskProfile(Guideline.UNIT_SIZE, low=n - md, medium=md - hi, high=hi - vh, very_high=vh)
        worst = max(worst, abs(guideline_score(prof, cfg)) / n)
    return record(2, "zero at threshold", worst < 1e-6, f"max |M_g|/N = {worst:.2e} over 1000 profiles")


# Evaluated by hand with exact fractions before the scoring code existed.
TABLE2_PROFILE = RiskProfile(Guideline.UNIT_SIZE, low=1353, medium=1683, high=1622, very_high=2588)
TABLE2_C_VERY_HIGH = -30261.2464
TABLE2_M_G = -16044.4320


def criterion_3() -> bool:
    cfg = GuidelineConfig((15, 30, 60), (0.437, 0.223, 0.069))
    c = level_compliance(TABLE2_PROFILE, Level.VERY_HIGH, 0.069).compliance
    m = guideline_score(TABLE2_PROFILE, cfg)
    ok = abs(c - TABLE2_C_VERY_HIGH) <= 10 and abs(m - TABLE2_M_G) <= 10
    return record(3, "reference report", ok, f"C(veryHigh) = {c:.4f}, M_g = {m:.4f}")


def criterion_4() -> bool:
    rng = random.Random(4)
    worst = 0.0
    for k in range(200):
        n = rng.randint(1, 20)
        if k % 2:
            diffs = [float(rng.randint(-5, 5)) for _ in range(n)]  # ties and zeros
        else:
            diffs = [rng.gauss(0.2, 1.0) for _ in range(n)]
        if not any(diffs):
            diffs[0] = 1.0
        worst = max(worst, abs(wilcoxon_signed_rank(diffs, method="exact").p_value - wilcoxon_enumeration_p(diffs)))
    gap = 0.0
    for _ in range(50):
        diffs = [rng.gauss(rng.uniform(-0.5, 0.5), 1.0) for _ in range(25)]
        exact = wilcoxon_signed_rank(diffs, method="exact").p_value
        approx = wilcoxon_signed_rank(diffs, method="approx").p_value
        gap = max(gap, abs(exact - approx))
    ok = worst <= 1e-12 and gap <= 0.01
    return record(4, "wilcoxon exactness", ok, f"max |exact - enumeration| = {worst:.1e}, n=25 max |exact - approx| = {gap:.4f}")


def criterion_5() -> bool:
    rng = random.Random(5)
    worst = 0.0
    for k in range(200):
        n, m = rng.randint(1, 50), rng.randint(1, 50)
        if k % 2:
            a = [float(rng.randint(0, 8)) for _ in range(n)]
            b = [float(rng.randint(0, 10)) for _ in range(m)]
        else:
            a = [rng.expovariate(1.0) for _ in range(n)]
            b = [rng.expovariate(0.7) for _ in range(m)]
        worst = max(worst, abs(ks_two_sample(a, b).statistic - brute_force_ks_d(a, b)))
    return record(5, "ks statistic", worst <= 1e-12, f"max |D - oracle| = {worst:.1e} over 200 pairs")


def clone_corpora() -> list[Path]:
    return sorted(p for p in (FIXTURES / "clones").iterdir() if p.is_dir())


def corpus_input(directory: Path) -> dict[str, list[tuple[int, str]]]:
    out = {}
    for p in sorted(directory.iterdir()):
        f = lex(p.read_text(encoding="utf-8"), nested_comments=p.suffix == ".kt")
        out[p.name] = [(ln, f.code[ln - 1]) for ln in f.code_lines]
    return out


def criterion_6() -> bool:
    checked, bad = 0, []
    for corpus in clone_corpora():
        files = corpus_input(corpus)
        if sum(len(v) for v in files.values()) > 500:
            continue
        blocks, _ = detect_clones(files)
        found = {(b.file_a, b.start_a, b.file_b, b.start_b, b.length) for b in blocks}
        checked += 1
        if found != brute_force_clones(files, 6) or len(found) != len(blocks):
            bad.append(corpus.name)
    return record(6, "clone oracle", checked > 0 and not bad, f"{checked} corpora checked, mismatches: {bad or 'none'}")


def criterion_7() -> bool:
    bad, bins = [], set()
    with tempfile.TemporaryDirectory() as tmp:
        for name in sorted(CASES):
            repo, energy, (ref, seconds, expected_bin) = build_case(name, Path(tmp) / name)
            rec = track_lifespan(Repo(repo.path), energy)
            bins.add(rec.bin)
            if (rec.refactoring_commit, rec.lifespan_seconds, rec.bin) != (ref, seconds, expected_bin):
                bad.append(name)
    ok = not bad and len(CASES) == 10 and len(bins) == 7
    return record(7, "lifespan fixtures", ok, f"{len(CASES)} repos, {len(bins)} bins covered, mismatches: {bad or 'none'}")


def criterion_8() -> bool:
    trees = [FIXTURES] + clone_corpora()
    with tempfile.TemporaryDirectory() as tmp:
        copies = []
        for k, t in enumerate(trees):
            dst = Path(tmp) / f"copy{k}"
            shutil.copytree(t, dst)
            copies.append(dst)
        snaps = []
        for t in trees + copies:
            a = analyze_tree(t)
            snaps.append(snapshot_score(a.profiles, a.guidelines, commit=str(t)))
    worst_anti, worst_zero = 0.0, 0.0
    for x, y in itertools.product(snaps, repeat=2):
        worst_anti = max(worst_anti, abs(delta(x, y).delta + delta(y, x).delta))
    for k in range(len(trees)):
        d = delta(snaps[k], snaps[k + len(trees)])
        worst_zero = max(worst_zero, abs(d.delta) + (d.direction is not Direction.UNCHANGED))
        worst_zero = max(worst_zero, abs(delta(snaps[k], snaps[k]).delta))
    ok = worst_anti < 1e-9 and worst_zero < 1e-9
    return record(8, "delta properties", ok, f"{len(snaps)} snapshots, max antisymmetry violation {worst_anti:.1e}, max identical-tree delta {worst_zero:.1e}")


def criterion_9() -> bool:
    with tempfile.TemporaryDirectory() as tmp:
        runs = [mine_mini(Path(tmp), "first"), mine_mini(Path(tmp), "second")]
        codes = [c for c, _ in runs]
        diffs = [differing_golden_files(out) for _, out in runs]
    ok = codes == [0, 0] and diffs == [[], []]
    return record(9, "end-to-end determinism", ok, f"exit codes {codes}, files differing from golden: {diffs}")


# Hand count: 22 + 3 alias spellings of PowerSaveMode, 19 + 1 of WakelockAddition
# (exactly 20, kept), 12 BugFixCodeRefinement (merged), 2 unknown and 1 empty.
EXPECTED_CATEGORIES = {"PowerSaveMode": 25, "WakelockAddition": 20, "Miscellaneous": 15}


def criterion_10() -> bool:
    records = apply_min_count_rule(normalize_categories(read_dataset(FIXTURES / "categories60.csv")))
    counts = category_counts(records)
    return record(10, "category rules", counts == EXPECTED_CATEGORIES and len(records) == 60, f"counts {counts}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_criterion(criterion):
    number = CRITERIA.index(criterion) + 1
    ok = criterion()
    assert ok, RESULTS[number]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(0 if all(results) else 1)
