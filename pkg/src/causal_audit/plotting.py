"""PNG bar charts of audit verdicts, rendered with the non-interactive Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .fairness import AuditReport, Verdict  # noqa: E402

_TITLES = {
    "parity": "False-positive rate by group",
    "cep": "Interventional conviction rate, do(outcome = negative)",
    "coefficient_cep": "Interventional rate by mechanism",
    "diagnostic": "Directed paths from protected to classification",
}


def _bars(verdict: Verdict) -> tuple[list[str], list[float], str]:
    if verdict.paths is not None:
        return (
            ["mediated", "unmediated"],
            [len(verdict.paths.mediated), len(verdict.paths.unmediated)],
            "paths",
        )
    groups = dict(verdict.groups or {})
    return list(groups), list(groups.values()), "probability"


def plot_verdict(verdict: Verdict, path: Path) -> Path:
    labels, values, ylabel = _bars(verdict)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    color = "tab:green" if verdict.passed else "tab:red"
    ax.bar(labels, values, color=color)
    ax.set_ylabel(ylabel)
    ax.set_title(_TITLES.get(verdict.criterion, verdict.criterion), fontsize=9)
    if ylabel == "probability":
        ax.set_ylim(0, max(1.0, *values) if values else 1.0)
        for i, v in enumerate(values):
            ax.annotate(f"{v:.4g}", (i, v), ha="center", va="bottom", fontsize=8)
    status = "pass" if verdict.passed else "fail"
    gap = "" if verdict.gap is None else f"  gap={verdict.gap:.3g}"
    ax.set_xlabel(f"{verdict.criterion}: {status}{gap}", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def plot_report(report: AuditReport, outdir, stem: str = "audit") -> list[Path]:
    """One PNG per verdict in ``outdir``; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [plot_verdict(v, outdir / f"{stem}-{v.criterion}.png") for v in report.verdicts]
