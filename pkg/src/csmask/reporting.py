"""Evaluation report writers: aligned text, CSV rows, structured JSON.

The text header states the PSNR convention because the numbers are not
comparable across tools otherwise. In JSON, +inf PSNR entries are
stored as null with an "exact" flag so files stay standard JSON.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .baselines import TuningEntry
from .metrics import EvalReport

_CONVENTION = (
    "PSNR on magnitude images, peak = per-image max |reference|;"
    " exact reconstructions excluded from the mean"
)


def _fmt_psnr(v: float) -> str:
    return "exact" if math.isinf(v) else f"{v:9.4f}"


def report_text(report: EvalReport) -> str:
    lines = [
        f"pattern {report.pattern_id}  rate {report.rate} ({float(report.rate):.6g})",
        f"convention: {_CONVENTION}",
        f"mean PSNR {_fmt_psnr(report.mean_psnr_db).strip()} dB over"
        f" {len(report.psnr_db) - report.exact_count} slices"
        f" ({report.exact_count} exact excluded)",
        f"mean normalized error {report.mean_error:.6e}",
        "",
        f"{'slice':<24}{'psnr_db':>12}{'normalized_error':>20}",
    ]
    for label, p, e in zip(report.labels, report.psnr_db, report.errors):
        lines.append(f"{label:<24}{_fmt_psnr(p):>12}{e:>20.6e}")
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, out_dir, basename: str = "report") -> list[Path]:
    """Write <basename>.txt/.csv/.json; returns the paths written."""
    out_dir = Path(out_dir)
    txt = out_dir / f"{basename}.txt"
    txt.write_text(report_text(report), encoding="utf-8")

    csv_path = out_dir / f"{basename}.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "label", "psnr_db", "normalized_error"])
        for i, (label, p, e) in enumerate(
            zip(report.labels, report.psnr_db, report.errors)
        ):
            writer.writerow([i, label, repr(p) if math.isfinite(p) else "inf", repr(e)])

    json_path = out_dir / f"{basename}.json"
    doc = {
        "pattern_id": report.pattern_id,
        "rate": f"{report.rate.numerator}/{report.rate.denominator}",
        "rate_float": float(report.rate),
        "psnr_convention": _CONVENTION,
        "mean_psnr_db": None if math.isinf(report.mean_psnr_db) else report.mean_psnr_db,
        "mean_normalized_error": report.mean_error,
        "exact_count": report.exact_count,
        "slices": [
            {
                "label": label,
                "psnr_db": None if math.isinf(p) else p,
                "exact": math.isinf(p),
                "normalized_error": e,
            }
            for label, p, e in zip(report.labels, report.psnr_db, report.errors)
        ],
    }
    json_path.write_text(
        json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
    )
    return [txt, csv_path, json_path]


def write_tuning_log(path, entries: tuple[TuningEntry, ...]) -> None:
    """One CSV row per grid point, in evaluation order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "d", "seed", "mean_psnr_db"])
        for e in entries:
            writer.writerow(
                [
                    repr(e.r),
                    repr(e.d),
                    e.seed,
                    repr(e.mean_psnr_db) if math.isfinite(e.mean_psnr_db) else "inf",
                ]
            )
