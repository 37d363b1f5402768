"""Deterministic figure rendering from partition-mac CSV files.

Output bytes are stable across runs on the same input: fixed figure
geometry, salted SVG ids, and no embedded timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "partition-mac-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import EmptyInputError, load_rates_csv, load_sweep_csv  # noqa: E402

FIGSIZE = (6.4, 4.2)
DPI = 120


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    output_path: str
    kind: str  # thresholds | pe_vs_ratio
    rates_csv: str | None = None
    x_label: str | None = None
    y_label: str | None = None
    q_range: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("thresholds", "pe_vs_ratio"):
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if self.kind == "pe_vs_ratio" and self.rates_csv is None:
            raise ValueError("pe_vs_ratio needs the rates CSV for the threshold markers")


def render(spec: PlotSpec) -> dict:
    if spec.kind == "thresholds":
        return plot_thresholds(spec.input_csv, spec.output_path,
                               x_label=spec.x_label, y_label=spec.y_label, q_range=spec.q_range)
    return plot_pe_vs_ratio(spec.input_csv, spec.rates_csv, spec.output_path,
                            x_label=spec.x_label, y_label=spec.y_label)


def _save(fig, output_path) -> None:
    path = str(output_path)
    if path.endswith(".svg"):
        fig.savefig(path, format="svg", metadata={"Date": None})
    elif path.endswith(".png"):
        fig.savefig(path, format="png", dpi=DPI)
    else:
        raise ValueError(f"unsupported output format for {path}: use .svg or .png")
    plt.close(fig)


def plot_thresholds(rates_csv, output_path, x_label=None, y_label=None, q_range=None) -> dict:
    """Threshold comparison on symmetric channels: C1, Cg and C2 (all are
    the 1/rate quantities, i.e. rounds per ln N) against q = q10 = q01.
    Degenerate cells are omitted."""
    rows = load_rates_csv(rates_csv)
    kept = [
        r for r in rows
        if abs(r["q10"] - r["q01"]) <= 1e-12 and not r["degenerate"]
        and (q_range is None or q_range[0] <= r["q10"] <= q_range[1])
    ]
    if not kept:
        raise EmptyInputError(f"{rates_csv}: no non-degenerate symmetric-q rows to plot")
    kept.sort(key=lambda r: r["q10"])
    qs = [r["q10"] for r in kept]
    series = {
        "C1 (partition, achievable)": [r["C1"] for r in kept],
        "Cg (group testing)": [r["Cg_threshold"] for r in kept],
        "C2 (partition, converse)": [r["C2"] for r in kept],
    }
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for (label, ys), style in zip(series.items(), ("o-", "s--", "^:")):
        ax.plot(qs, ys, style, label=label, markersize=4)
    ax.set_xlabel(x_label or "crossover probability q (q10 = q01)")
    ax.set_ylabel(y_label or "threshold T / ln N")
    ax.set_title("Partition vs group-testing thresholds")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, output_path)
    return {"q": qs, "series": series}


def plot_pe_vs_ratio(sweep_csv, rates_csv, output_path, x_label=None, y_label=None) -> dict:
    """Estimated error probability with Wilson CI bars against T/ln N, one
    series per user count, with vertical markers at the C1/C2 thresholds
    read from the rates CSV (never recomputed)."""
    rows = load_sweep_csv(sweep_csv)
    rates = load_rates_csv(rates_csv)
    by_n = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r)
    vlines = {}
    for (q10, q01) in sorted({(r["q10"], r["q01"]) for r in rows}):
        for rr in rates:
            if abs(rr["q10"] - q10) <= 1e-9 and abs(rr["q01"] - q01) <= 1e-9 and not rr["degenerate"]:
                vlines[(q10, q01)] = (rr["C1"], rr["C2"])
                break
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for n in sorted(by_n):
        cells = sorted(by_n[n], key=lambda r: r["t_over_logn"])
        xs = [r["t_over_logn"] for r in cells]
        ys = [r["p_hat"] for r in cells]
        lo = [r["p_hat"] - r["ci95_lo"] for r in cells]
        hi = [r["ci95_hi"] - r["p_hat"] for r in cells]
        ax.errorbar(xs, ys, yerr=[lo, hi], fmt="o-", capsize=3, markersize=4, label=f"N = {n}")
    for (q10, q01), (c1, c2) in vlines.items():
        ax.axvline(c1, color="tab:green", linestyle="--", alpha=0.8, label=f"C1 (q10={q10:g}, q01={q01:g})")
        ax.axvline(c2, color="tab:red", linestyle=":", alpha=0.8, label=f"C2 (q10={q10:g}, q01={q01:g})")
    ax.set_xlabel(x_label or "T / ln N")
    ax.set_ylabel(y_label or "estimated error probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("Decoding error vs round budget")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, output_path)
    return {"series": {n: len(v) for n, v in by_n.items()}, "vlines": vlines}
