"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
(and to stdout with ``-s``).  Runtime limits are asserted alongside the
numeric thresholds.
"""

import csv
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
from make_svm_reference import make_problem
from oracles import kendall_pairs_fast, svm_reference_objective

from senticorr.cli import main
from senticorr.errors import ConstantInput
from senticorr.features import (
    compute_word_stats,
    count_occurrences,
    select_keywords,
    word_distribution,
    word_entropy,
)
from senticorr.stats import concordance_counts, kendall, pearson, rank, spearman
from senticorr.stats.mic import mic, mic_exact
from senticorr.svm import smo_solve

ALPHA_STEPS = [1.0 + 0.25 * i for i in range(12)]
SVM_REFERENCE = json.loads((Path(__file__).parent / "data" / "svm_reference.json").read_text())


def test_criterion_1_entropy_limits(record_criterion):
    t0 = time.perf_counter()
    errors = [abs(word_entropy(word_distribution({d: 3 for d in range(m)}).values()) - math.log2(m))
              for m in (2, 4, 8, 16)]
    single = [word_entropy(word_distribution({0: k}).values()) for k in (1, 2, 7)]
    elapsed = time.perf_counter() - t0
    ok = max(errors) <= 1e-12 and all(h == 0.0 for h in single) and elapsed < 1.0
    record_criterion(1, ok, f"max |H - log2 M| = {max(errors):.1e}, single-support H = {single}, "
                            f"{elapsed:.3f}s")
    assert ok


def test_criterion_2_selection_monotone(record_criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    violations = 0
    for _ in range(100):
        vocab = [f"w{i}" for i in range(int(rng.integers(5, 40)))]
        sentences = []
        for _ in range(int(rng.integers(4, 60))):
            words = rng.choice(vocab, size=int(rng.integers(1, 8)))
            sentences.append((list(words), "pos" if rng.random() < 0.5 else "neg"))
        stats = compute_word_stats(count_occurrences(sentences))
        previous = None
        for alpha in ALPHA_STEPS:
            current = select_keywords(stats, alpha, alpha).positive_keywords
            if previous is not None and not current <= previous:
                violations += 1
            previous = current
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 5.0
    record_criterion(2, ok, f"{violations} growth steps over 100 tables x 11 alpha steps, {elapsed:.2f}s")
    assert ok


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    root = tmp_path_factory.mktemp("accept")
    t0 = time.perf_counter()
    assert main(["synth", "--seed", "0", "--out", str(root / "train")]) == 0
    corpus = root / "train" / "corpus.jsonl"
    assert main(["extract", str(corpus), "--out", str(root / "extract")]) == 0
    keywords = root / "extract" / "keywords.json"
    assert main(["train", str(corpus), str(keywords), "--out", str(root / "model")]) == 0
    elapsed = time.perf_counter() - t0
    return {"root": root, "corpus": corpus, "keywords": keywords,
            "model": root / "model" / "model.json", "elapsed": elapsed}


def test_criterion_3_end_to_end_f1(pipeline, record_criterion):
    meta = json.loads((pipeline["corpus"].parent / "corpus.meta.json").read_text())
    extract = json.loads((pipeline["root"] / "extract" / "extract_report.json").read_text())
    train = json.loads((pipeline["root"] / "model" / "train_report.json").read_text())
    sweep_f1 = extract["best"]["combined"]["cv"]["f1_mean"]
    train_f1 = train["cv"]["f1_mean"]
    ok = (meta["oracle"]["n_sentences"] == 2000 and min(sweep_f1, train_f1) >= 0.90
          and pipeline["elapsed"] < 60.0)
    record_criterion(3, ok, f"{meta['oracle']['n_sentences']} sentences, 5-fold F1 at sweep optimum "
                            f"{sweep_f1:.3f} (train CV {train_f1:.3f}), {pipeline['elapsed']:.1f}s")
    assert ok


def test_criterion_4_svm_fidelity(record_criterion):
    t0 = time.perf_counter()
    worst = 0.0
    worst_live = 0.0
    for row in SVM_REFERENCE:
        X, y, c = make_problem(row["index"])
        assert X.shape == (10, 4) and c == row["c"]
        res = smo_solve(X, y, c, tol=1e-8, obj_tol=0.0)
        worst = max(worst, abs(res.objective - row["objective"]))
        worst_live = max(worst_live, abs(res.objective - svm_reference_objective(X, y, c)))
    rng = np.random.default_rng(4)
    X = np.vstack([rng.normal(1.5, 0.6, (40, 4)), rng.normal(-1.5, 0.6, (40, 4))])
    y = np.r_[np.ones(40), -np.ones(40)]
    res = smo_solve(X, y, 1e3)
    accuracy = float(np.mean(np.where(X @ res.weights + res.bias > 0, 1, -1) == y))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and worst_live <= 1e-6 and accuracy == 1.0 and elapsed < 30.0
    record_criterion(4, ok, f"max objective gap {worst:.1e} (grid-dual oracle), {worst_live:.1e} "
                            f"(convex solver), separable accuracy {accuracy:.0%}, {elapsed:.1f}s")
    assert ok


def test_criterion_5_rank_oracles(record_criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = 0.0
    kendall_mismatch = 0
    checked = 0
    for _ in range(1000):
        x = rng.normal(size=50)
        y = x + rng.normal(scale=rng.uniform(0.1, 3.0), size=50)
        # inject ties by snapping a random subset onto a few shared values
        for v in (x, y):
            idx = rng.choice(50, size=int(rng.integers(5, 25)), replace=False)
            v[idx] = rng.choice(v[idx], size=3)[rng.integers(0, 3, idx.size)]
        try:
            worst = max(worst, abs(spearman(x, y) - pearson(rank(x), rank(y))))
        except ConstantInput:
            continue
        conc, disc = kendall_pairs_fast(x, y)
        k, l, _, _ = concordance_counts(x, y)
        if (k, l) != (conc, disc) or kendall(x, y) != (conc - disc) / (50 * 49 // 2):
            kendall_mismatch += 1
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = checked == 1000 and worst <= 1e-12 and kendall_mismatch == 0 and elapsed < 10.0
    record_criterion(5, ok, f"{checked} tied vectors: max |spearman - pearson(ranks)| = {worst:.1e}, "
                            f"{kendall_mismatch} kendall mismatches vs enumeration, {elapsed:.2f}s")
    assert ok


def test_criterion_6_mic_behavior(record_criterion):
    t0 = time.perf_counter()
    x = np.linspace(0.0, 1.0, 100)
    linear = mic(x, 3.0 * x - 1.0)
    xp = np.linspace(-1.0, 1.0, 201)
    parabola, r_parabola = mic(xp, xp ** 2), pearson(xp, xp ** 2)
    noise = [mic(*np.random.default_rng(600 + s).uniform(size=(2, 500))) for s in range(20)]
    rng = np.random.default_rng(6)
    above, monotone_unequal = 0, 0
    for i in range(50):
        n = int(rng.integers(4, 11))
        if i % 5 == 0:
            xs = np.sort(rng.random(n))
            ys = np.exp(xs) if i % 2 else -xs ** 3
            if abs(mic(xs, ys) - mic_exact(xs, ys)) > 1e-12:
                monotone_unequal += 1
        else:
            xs, ys = rng.integers(0, 6, size=(2, n)).astype(float)
        if mic(xs, ys) > mic_exact(xs, ys) + 1e-12:
            above += 1
    elapsed = time.perf_counter() - t0
    ok = (linear >= 0.999 and parabola >= 0.99 and abs(r_parabola) <= 0.05 and max(noise) <= 0.30
          and above == 0 and monotone_unequal == 0 and elapsed < 120.0)
    record_criterion(6, ok, f"linear {linear:.4f}, parabola {parabola:.4f} (r={r_parabola:+.3f}), "
                            f"noise max {max(noise):.3f} over 20 seeds, small samples: {above} above "
                            f"exact, {monotone_unequal} monotone unequal, {elapsed:.1f}s")
    assert ok


def _series(path):
    return {row["series"]: row for row in csv.DictReader(path.open(encoding="utf-8"))}


def test_criterion_7_correlate_recovery(pipeline, record_criterion):
    root = pipeline["root"]
    t0 = time.perf_counter()
    runs = {}
    for name, seed, dependence in (("strong", "1", "strong"), ("none", "2", "none")):
        out = root / f"eval_{name}"
        assert main(["synth", "--seed", seed, "--n-reviews", "2000", "--min-sentences", "4",
                     "--max-sentences", "12", "--dependence", dependence, "--out", str(out)]) == 0
        assert main(["correlate", str(out / "corpus.jsonl"), str(pipeline["model"]),
                     "--out", str(out)]) == 0
        runs[name] = (json.loads((out / "corpus.meta.json").read_text())["oracle"],
                      _series(out / "correlation.csv"))
    elapsed = time.perf_counter() - t0

    oracle, strong = runs["strong"]
    rho = float(strong["positive_ratio"]["spearman_rho"])
    recovered = abs(rho - oracle["spearman_rho"]) <= 0.05
    _, none = runs["none"]
    low = all(abs(float(row[f])) <= 0.1 for row in none.values() for f in ("spearman_rho", "kendall_tau"))
    low_mic = all(float(row["mic"]) <= 0.30 for row in none.values())
    ok = recovered and low and low_mic and elapsed < 60.0
    neg = none["negative_ratio"]
    pos = none["positive_ratio"]
    record_criterion(7, ok, f"planted: rho {rho:.3f} vs oracle {oracle['spearman_rho']:.3f}; "
                            f"independent: pos rho {float(pos['spearman_rho']):+.3f} "
                            f"tau {float(pos['kendall_tau']):+.3f} MIC {float(pos['mic']):.3f}, "
                            f"neg rho {float(neg['spearman_rho']):+.3f} MIC {float(neg['mic']):.3f}; "
                            f"{elapsed:.1f}s")
    assert ok


def _snapshot(directory):
    return {p.relative_to(directory).as_posix(): p.read_bytes()
            for p in sorted(directory.rglob("*")) if p.is_file()}


def test_criterion_8_determinism(tmp_path, capsys, record_criterion):
    t0 = time.perf_counter()
    src = tmp_path / "src"
    fast = ["--alpha-grid", "1,1.5,2,2.5", "--c-grid", "0.5,1,2"]
    assert main(["synth", "--seed", "8", "--n-reviews", "120", "--out", str(src)]) == 0
    corpus = src / "corpus.jsonl"
    assert main(["extract", str(corpus), "--out", str(src / "ex"), *fast]) == 0
    assert main(["train", str(corpus), str(src / "ex" / "keywords.json"), "--out", str(src / "tr"), *fast]) == 0
    model = src / "tr" / "model.json"
    capsys.readouterr()

    commands = {
        "synth": ["synth", "--seed", "8", "--n-reviews", "120"],
        "extract": ["extract", str(corpus), *fast],
        "train": ["train", str(corpus), str(src / "ex" / "keywords.json"), *fast],
        "correlate": ["correlate", str(corpus), str(model)],
        "demo-mic": ["demo-mic", "--n", "300", "--seed", "8"],
    }
    differing = []
    for name, argv in commands.items():
        outputs = []
        for rep in ("a", "b"):
            out = tmp_path / name / rep
            assert main([*argv, "--out", str(out)]) == 0
            files = _snapshot(out) if out.exists() else {}
            files["<stdout>"] = capsys.readouterr().out.encode()
            outputs.append(files)
        if outputs[0] != outputs[1]:
            differing.append(name)
    # the first-stage outputs must also match the reruns
    assert (tmp_path / "train" / "a" / "model.json").read_bytes() == model.read_bytes()
    elapsed = time.perf_counter() - t0
    ok = not differing and elapsed < 30.0
    record_criterion(8, ok, f"{len(commands)} commands rerun, differing outputs: {differing or 'none'}, "
                            f"{elapsed:.1f}s")
    assert ok
