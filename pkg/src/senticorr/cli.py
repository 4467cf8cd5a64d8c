"""Command line entry point.

Exit codes: 0 success, 2 unmet precondition (unlabeled or unscored corpus,
empty feature space, bad arguments), 3 unreadable or malformed input file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from senticorr import __version__
from senticorr.classifier import LabeledData, TrainedModel, select_c, sweep_alpha, train_model
from senticorr.config import PipelineConfig
from senticorr.corpus import dump_corpus, load_corpus
from senticorr.errors import CorpusError, SenticorrError
from senticorr.features import KeywordTable
from senticorr.sentiment import paired_samples, summarize_corpus, write_summaries_csv
from senticorr.stats import correlate, pearson
from senticorr.stats.mic import mic
from senticorr.stats.report import CorrelationReport, mic_settings, write_report_csv, write_report_json
from senticorr.synth import SynthSpec, VocabSpec, generate, generator_oracle, spec_to_json

log = logging.getLogger("senticorr")

EXIT_PRECONDITION = 2
EXIT_MALFORMED = 3

MODE_LABELS = {"positive": "Positive keywords", "negative": "Negative keywords", "combined": "Combination"}


class CommandError(Exception):
    def __init__(self, message, code=EXIT_PRECONDITION):
        super().__init__(message)
        self.code = code


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _effective_config(args) -> PipelineConfig:
    try:
        cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    except FileNotFoundError:
        raise CommandError(f"config file not found: {args.config}", EXIT_MALFORMED) from None
    except json.JSONDecodeError as exc:
        raise CommandError(f"{args.config}: {exc}", EXIT_MALFORMED) from None
    overrides = {
        "alpha_grid": args.alpha_grid,
        "c_grid": args.c_grid,
        "k": args.k,
        "seed": args.seed,
        "mic_b_exponent": args.mic_b_exponent,
        "mic_clump_factor": args.mic_clump_factor,
        "tokenizer": args.tokenizer,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(cfg, name, value)
    cfg.validate()
    log.debug("config %s: %s", cfg.digest(), cfg.to_json())
    return cfg


def _provenance(cfg: PipelineConfig) -> dict:
    return {"tool_version": __version__, "config": cfg.to_json(), "config_hash": cfg.digest()}


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _load(path, cfg):
    try:
        return load_corpus(path, tokenizer=cfg.tokenizer)
    except FileNotFoundError:
        raise CommandError(f"corpus file not found: {path}", EXIT_MALFORMED) from None
    except CorpusError as exc:
        raise CommandError(f"{path}: {exc}", EXIT_MALFORMED) from None


def _load_labeled(path, cfg):
    corpus = _load(path, cfg)
    if not corpus.reviews:
        raise CommandError(f"{path}: corpus is empty")
    missing = corpus.first_unlabeled()
    if missing is not None:
        raise CommandError(f"review {missing.review_id!r} carries no sentence labels")
    return LabeledData.coerce(corpus)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(v):
    return "-" if v is None else f"{v:.3f}"


def cmd_extract(args) -> int:
    cfg = _effective_config(args)
    data = _load_labeled(args.corpus, cfg)
    try:
        result = sweep_alpha(data, cfg.alpha_grid, cfg.c_grid, cfg.k, cfg.seed)
    except SenticorrError as exc:
        raise CommandError(str(exc)) from None
    log.debug("evaluated %d grid cells on %d sentences", len(result.grid), len(data))
    out = _out_dir(args)
    result.combined_table.save(out / "keywords.json")

    rows = []
    print(f"{'Keyword list':<34} {'C':>5} {'F1 mu':>7} {'F1 sigma':>9}")
    for mode in ("positive", "negative", "combined"):
        table, report = result.best[mode]
        if mode == "positive":
            label = f"{MODE_LABELS[mode]} (alpha={report.alpha:g})"
        elif mode == "negative":
            label = f"{MODE_LABELS[mode]} (alpha'={report.alpha:g})"
        else:
            label = MODE_LABELS[mode]
        print(f"{label:<34} {report.c_param:>5g} {report.f1_mean:>7.3f} {report.f1_std:>9.3f}")
        rows.append(f"{mode},{report.alpha!r},{report.alpha_prime!r},{report.c_param!r},"
                    f"{report.f1_mean:.6f},{report.f1_std:.6f},{report.macro_f1_mean:.6f},"
                    f"{report.n_features}")
    (out / "extract_summary.csv").write_text(
        "list,alpha,alpha_prime,c,f1_mean,f1_std,macro_f1_mean,n_features\n" + "\n".join(rows) + "\n",
        encoding="utf-8",
    )
    _write_json(out / "extract_report.json", {
        **_provenance(cfg),
        "corpus": str(args.corpus),
        "best": {m: {"table": t.to_json(), "cv": r.to_json()} for m, (t, r) in result.best.items()},
        "grid": [r.to_json() for r in result.grid],
    })
    return 0


def cmd_train(args) -> int:
    cfg = _effective_config(args)
    data = _load_labeled(args.corpus, cfg)
    try:
        table = KeywordTable.load(args.keywords)
    except FileNotFoundError:
        raise CommandError(f"keyword file not found: {args.keywords}", EXIT_MALFORMED) from None
    except ValueError as exc:
        raise CommandError(f"{args.keywords}: {exc}", EXIT_MALFORMED) from None
    if not table.keywords(args.mode):
        raise CommandError("empty feature space")
    try:
        report = select_c(data, table, cfg.c_grid, cfg.k, cfg.seed, args.mode)
    except SenticorrError as exc:
        raise CommandError(str(exc)) from None
    model = train_model(data, table, report.c_param, args.mode)
    out = _out_dir(args)
    model.save(out / "model.json")
    _write_json(out / "train_report.json", {**_provenance(cfg), "corpus": str(args.corpus),
                                            "keywords": str(args.keywords), "cv": report.to_json(),
                                            "converged": model.converged})
    print(f"{args.mode} list, C={report.c_param:g}: {cfg.k}-fold F1 "
          f"{report.f1_mean:.3f} +/- {report.f1_std:.3f} ({len(model.keywords)} keywords)")
    return 0


def cmd_correlate(args) -> int:
    cfg = _effective_config(args)
    corpus = _load(args.corpus, cfg)
    if not corpus.reviews:
        raise CommandError(f"{args.corpus}: corpus is empty")
    unscored = corpus.first_unscored()
    if unscored is not None:
        raise CommandError(f"review {unscored.review_id!r} has no score")
    try:
        model = TrainedModel.load(args.model)
    except FileNotFoundError:
        raise CommandError(f"model file not found: {args.model}", EXIT_MALFORMED) from None
    except ValueError as exc:
        raise CommandError(f"{args.model}: {exc}", EXIT_MALFORMED) from None

    summaries = summarize_corpus(corpus, model)
    (pos, scores), (neg, _) = paired_samples(summaries)
    if len(summaries) < 4:
        raise CommandError("need at least 4 reviews for MIC")
    series = {
        "positive_ratio": correlate(pos, scores, cfg.mic_b_exponent, cfg.mic_clump_factor),
        "negative_ratio": correlate(neg, scores, cfg.mic_b_exponent, cfg.mic_clump_factor),
    }
    report = CorrelationReport(
        series,
        mic_settings(cfg.mic_b_exponent, cfg.mic_clump_factor),
        {**_provenance(cfg), "corpus": str(args.corpus), "model": str(args.model)},
    )
    out = _out_dir(args)
    write_summaries_csv(summaries, out / "summaries.csv")
    write_report_csv(report, out / "correlation.csv")
    write_report_json(report, out / "correlation.json")

    print(f"{'Sentence ratio':<16} {'rho':>8} {'tau':>8} {'MIC':>8}")
    for name, s in series.items():
        flag = "  (constant input)" if s.constant_input else ""
        print(f"{name:<16} {_fmt(s.spearman_rho):>8} {_fmt(s.kendall_tau):>8} {s.mic:>8.3f}{flag}")
    return 0


def demo_samples(n: int, seed: int) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, n)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    return {
        "linear": (x, x),
        "parabolic": (x, x ** 2),
        "sinusoidal": (x, np.sin(2 * np.pi * x)),
        "circle": (np.cos(theta), np.sin(theta)),
        "noise": (rng.uniform(-1.0, 1.0, n), rng.uniform(-1.0, 1.0, n)),
    }


def cmd_demo_mic(args) -> int:
    cfg = _effective_config(args)
    if args.n < 50:
        raise CommandError("demo-mic needs n >= 50")
    print(f"{'case':<12} {'MIC':>7} {'pearson':>8}")
    for name, (x, y) in demo_samples(args.n, cfg.seed).items():
        m = mic(x, y, cfg.mic_b_exponent, cfg.mic_clump_factor)
        print(f"{name:<12} {m:>7.3f} {pearson(x, y):>8.3f}")
    return 0


def cmd_synth(args) -> int:
    cfg = _effective_config(args)
    try:
        spec = SynthSpec(
            n_reviews=args.n_reviews,
            min_sentences=args.min_sentences,
            max_sentences=args.max_sentences,
            vocab=VocabSpec(args.n_positive, args.n_negative, args.n_neutral),
            leak_rate=args.leak_rate,
            hard_rate=args.hard_rate,
            dependence=args.dependence,
        )
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    reviews = generate(spec, cfg.seed)
    out = _out_dir(args)
    dump_corpus(reviews, out / args.name)
    oracle = generator_oracle(reviews)
    _write_json(out / (Path(args.name).stem + ".meta.json"),
                {"tool_version": __version__, "seed": cfg.seed, "spec": spec_to_json(spec),
                 "oracle": oracle})
    print(f"wrote {oracle['n_reviews']} reviews / {oracle['n_sentences']} sentences; "
          f"gold-ratio vs score rho={_fmt(oracle['spearman_rho'])} tau={_fmt(oracle['kendall_tau'])}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its fields")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--alpha-grid", type=_floats, help="comma-separated alpha values")
    common.add_argument("--c-grid", type=_floats, help="comma-separated C values")
    common.add_argument("--k", type=int, help="number of CV folds")
    common.add_argument("--mic-b-exponent", type=float)
    common.add_argument("--mic-clump-factor", type=int)
    common.add_argument("--tokenizer", choices=("pretokenized", "fallback"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="senticorr",
        description="Keyword SVM sentence sentiment for reviews, correlated with review scores.",
        epilog="exit codes: 0 ok, 2 unmet precondition, 3 missing or malformed input file",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="entropy keyword sweep with k-fold CV")
    p.add_argument("corpus")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", parents=[common], help="train the SVM on a keyword table")
    p.add_argument("corpus")
    p.add_argument("keywords")
    p.add_argument("--mode", choices=("positive", "negative", "combined"), default="combined")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("correlate", parents=[common], help="sentiment ratios vs scores")
    p.add_argument("corpus")
    p.add_argument("model")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("demo-mic", parents=[common], help="MIC vs Pearson on standard shapes")
    p.add_argument("--n", type=int, default=500)
    p.set_defaults(func=cmd_demo_mic)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic labeled corpus")
    p.add_argument("--n-reviews", type=int, default=400)
    p.add_argument("--min-sentences", type=int, default=5)
    p.add_argument("--max-sentences", type=int, default=5)
    p.add_argument("--n-positive", type=int, default=30)
    p.add_argument("--n-negative", type=int, default=30)
    p.add_argument("--n-neutral", type=int, default=200)
    p.add_argument("--leak-rate", type=float, default=0.08)
    p.add_argument("--hard-rate", type=float, default=0.03)
    p.add_argument("--dependence", choices=("none", "weak", "strong"), default="strong")
    p.add_argument("--name", default="corpus.jsonl", help="output file name inside --out")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
