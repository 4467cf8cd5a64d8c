from senticorr.stats.correlation import concordance_counts, kendall, pearson, rank, spearman
from senticorr.stats.mic import (
    Grid,
    characteristic_matrix,
    equipartition,
    grid_counts,
    mic,
    mic_exact,
    mutual_information,
    resolution_bound,
)
from senticorr.stats.report import CorrelationReport, correlate, write_report_csv, write_report_json

__all__ = [
    "CorrelationReport", "Grid", "characteristic_matrix", "concordance_counts", "correlate",
    "equipartition", "grid_counts", "kendall", "mic", "mic_exact", "mutual_information",
    "pearson", "rank", "resolution_bound", "spearman", "write_report_csv", "write_report_json",
]
