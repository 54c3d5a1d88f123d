"""Render report figures and a delimited summary alongside the report.

Plottable tasks: path certificates (cohomology dimensions against t),
Chern-Simons paths (meridian/longitude turn curves), and rho pipelines
(running rho through the cobordism chain).  Everything else only lands in
results.csv.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

from .runner import Report


def _flat_rows(report: Report):
    for t in report.tasks:
        if t.error:
            yield (t.task_id, t.kind, "error", t.error)
        for key, value in t.results.items():
            if isinstance(value, (dict, list)):
                continue
            yield (t.task_id, t.kind, key, value)


def write_results_csv(report: Report, outdir: Path) -> Path:
    path = outdir / "results.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["task", "kind", "field", "value"])
        for row in _flat_rows(report):
            writer.writerow(row)
    return path


def render_figures(report: Report, outdir: Path) -> list[Path]:
    """Write one PNG per plottable task plus results.csv; returns the files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [write_results_csv(report, outdir)]

    for t in report.tasks:
        if t.status != "ok":
            continue
        if t.kind == "path_certificate":
            ts = [float(Fraction(s)) for s in t.results["samples"]]
            fig, ax = plt.subplots(figsize=(5.0, 3.2))
            for key, marker in (("dim_z1", "o"), ("dim_h0", "s"), ("dim_h1", "^")):
                ax.plot(ts, t.results[key], marker=marker, label=key.replace("dim_", "dim "))
            ax.set_xlabel("t")
            ax.set_ylabel("dimension")
            ax.set_title(f"{t.task_id}: {t.results['verdict']}")
            ax.legend(frameon=False)
        elif t.kind == "cs":
            import numpy as np

            ts = np.linspace(0, 1, 101)
            fig, ax = plt.subplots(figsize=(5.0, 3.2))
            for name, series in sorted(t.results["paths"].items()):
                a = [float(Fraction(c)) for c in series["meridian"]]
                b = [float(Fraction(c)) for c in series["longitude"]]
                ax.plot(ts, np.polyval(a[::-1], ts), label=f"a_{name}")
                ax.plot(ts, np.polyval(b[::-1], ts), "--", label=f"b_{name}")
            ax.set_xlabel("t")
            ax.set_ylabel("turns")
            ax.set_title(f"{t.task_id}: boundary holonomy paths")
            ax.legend(frameon=False, ncol=2, fontsize=7)
        elif t.kind == "rho_pipeline":
            labels = ["terminal"] + [s["label"] for s in t.results["steps"]]
            running = [float(Fraction(str(t.results["rho_terminal"])))]
            for s in t.results["steps"]:
                running.append(running[-1] - float(Fraction(s["delta"])))
            fig, ax = plt.subplots(figsize=(5.0, 3.2))
            ax.plot(range(len(running)), running, marker="o")
            ax.set_xticks(range(len(running)))
            ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
            ax.set_ylabel("rho")
            ax.set_title(f"{t.task_id}: rho through the cobordism chain")
        else:
            continue
        fig.tight_layout()
        path = outdir / f"{t.task_id}_{t.kind}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
