"""Report rendering: delimited check summaries plus diagnostic figures.

Used by the command line's report path (``verify-paper --report-dir`` and
``dcoh affine --report-dir``): a CSV table of check outcomes is written next
to PNG figures for the quantities worth seeing on axes (witness growth
ladders, section-count profiles along towers, bound slack histograms).
"""

from __future__ import annotations

import csv
import os


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["figure.figsize"] = (6.0, 3.8)
    plt.rcParams["font.size"] = 9
    plt.rcParams["axes.spines.top"] = False
    plt.rcParams["axes.spines.right"] = False
    return plt


def write_check_report(results, outdir: str, seed: int) -> list[str]:
    """CSV of check outcomes plus figures extracted from check details.

    Returns the list of files written (relative to outdir).
    """
    os.makedirs(outdir, exist_ok=True)
    written = []

    path = os.path.join(outdir, "report.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "status", "cases", "seed", "description"])
        for r in results:
            w.writerow(
                [r.name, "pass" if r.passed else "fail", r.cases, seed,
                 " ".join(r.description.split())]
            )
    written.append("report.csv")

    by_name = {r.name: r for r in results}
    plt = _plt()

    r = by_name.get("affine-pathology")
    if r is not None and "witness ladders" in r.details:
        fig, ax = plt.subplots()
        for p, vals in sorted(r.details["witness ladders"].items()):
            degrees = [int(p) ** (j + 1) for j in range(len(vals))]
            ax.plot(degrees, vals, marker="o", label=f"p = {p}")
        ax.set_xscale("log")
        ax.set_xlabel("truncation degree")
        ax.set_ylabel("cokernel witness dimension")
        ax.set_title("Affine degree-1 witness growth")
        ax.legend()
        fig.tight_layout()
        fig.savefig(os.path.join(outdir, "affine_witness_growth.png"), dpi=150)
        plt.close(fig)
        written.append("affine_witness_growth.png")

    r = by_name.get("h0-monotone")
    if r is not None and r.details.get("samples"):
        fig, ax = plt.subplots()
        for k, sample in enumerate(r.details["samples"]):
            ax.plot(
                range(len(sample["h0"])),
                sample["h0"],
                marker="s",
                label=f"tower {k} (p = {sample['p']})",
            )
        ax.set_xlabel("tower level n")
        ax.set_ylabel("h^0 of level n")
        ax.set_title("Section counts along pullback towers")
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(os.path.join(outdir, "h0_monotone.png"), dpi=150)
        plt.close(fig)
        written.append("h0_monotone.png")

    r = by_name.get("spectral-bounds")
    hist_key = "edge slack histogram (clipped at 5)"
    if r is not None and hist_key in r.details:
        hist = r.details[hist_key]
        fig, ax = plt.subplots()
        ax.bar(range(len(hist)), hist)
        ax.set_xticks(range(len(hist)))
        ax.set_xticklabels([str(i) for i in range(len(hist) - 1)] + ["5+"])
        ax.set_xlabel("edge bound slack")
        ax.set_ylabel("count")
        ax.set_title("Edge inequality slack over simulations")
        fig.tight_layout()
        fig.savefig(os.path.join(outdir, "spectral_slack.png"), dpi=150)
        plt.close(fig)
        written.append("spectral_slack.png")

    return written


def write_affine_report(rep, outdir: str) -> list[str]:
    """CSV + growth figure for an affine finiteness report."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    path = os.path.join(outdir, "affine_report.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["degree", "truncation_degree", "value", "stable_level", "certified"])
        for e in rep.h0_ladder:
            w.writerow(
                [0, e["truncation_degree"], e["dim"], e["stable_level"], e["certified"]]
            )
        for e in rep.h1_witnesses:
            w.writerow([1, e["truncation_degree"], e["witness"], "", ""])
    written.append("affine_report.csv")

    plt = _plt()
    fig, ax = plt.subplots()
    ds = [e["truncation_degree"] for e in rep.h1_witnesses]
    ws = [e["witness"] for e in rep.h1_witnesses]
    ax.plot(ds, ws, marker="o", label="degree-1 witness")
    hs = [e["dim"] for e in rep.h0_ladder]
    ax.plot(
        [e["truncation_degree"] for e in rep.h0_ladder],
        hs,
        marker="s",
        label="degree-0 stabilised kernel",
    )
    ax.set_xlabel("truncation degree")
    ax.set_ylabel("dimension")
    ax.set_title("Affine cohomology truncations")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "affine_truncations.png"), dpi=150)
    plt.close(fig)
    written.append("affine_truncations.png")
    return written
