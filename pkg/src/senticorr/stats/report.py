"""Dependence statistics for sentiment-ratio/score pairs, with CSV/JSON export."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from senticorr.errors import ConstantInput
from senticorr.stats.correlation import kendall, pearson, spearman
from senticorr.stats.mic import DEFAULT_B_EXPONENT, DEFAULT_CLUMP_FACTOR, mic

CSV_FIELDS = ("series", "spearman_rho", "kendall_tau", "mic")


@dataclass(frozen=True)
class SeriesStats:
    n: int
    pearson_r: float | None
    spearman_rho: float | None
    kendall_tau: float | None
    kendall_tau_b: float | None
    mic: float
    constant_input: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pearson_r": self.pearson_r,
            "spearman_rho": self.spearman_rho,
            "kendall_tau": self.kendall_tau,
            "kendall_tau_b": self.kendall_tau_b,
            "mic": self.mic,
            "constant_input": self.constant_input,
        }


@dataclass
class CorrelationReport:
    series: dict[str, SeriesStats]
    mic_settings: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "series": {name: s.to_json() for name, s in self.series.items()},
            "mic_settings": self.mic_settings,
            **self.meta,
        }


def correlate(x, y, b_exponent: float = DEFAULT_B_EXPONENT,
              clump_factor: int = DEFAULT_CLUMP_FACTOR) -> SeriesStats:
    """All dependence statistics for one paired sample.

    If either variable is constant, the correlation coefficients are
    undefined: they are reported as ``None`` with ``constant_input`` set,
    while MIC (0 in that case) is still computed.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = mic(x, y, b_exponent, clump_factor)
    try:
        r = pearson(x, y)
        rho = spearman(x, y)
        tau_b = kendall(x, y, "b")
    except ConstantInput:
        return SeriesStats(x.size, None, None, None, None, m, True)
    return SeriesStats(x.size, r, rho, kendall(x, y, "a"), tau_b, m)


def mic_settings(b_exponent: float, clump_factor: int) -> dict:
    return {"b_exponent": b_exponent, "clump_factor": clump_factor, "exact": False}


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return f"{value:.6f}"


def write_report_csv(report: CorrelationReport, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for name, s in report.series.items():
            writer.writerow([name, _fmt(s.spearman_rho), _fmt(s.kendall_tau), _fmt(s.mic)])


def write_report_json(report: CorrelationReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")
