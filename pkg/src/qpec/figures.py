"""Figure rendering for the command line tools.

Everything here draws to files with the Agg backend; the library's report
module stays purely data-side.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from qpec.report import compute_efficiency  # noqa: E402


def render_histogram(rows, path, title: str = "measured register triples") -> Path:
    """Bar chart of outcome labels; rows as produced by histogram_rows."""
    path = Path(path)
    labels = [r[0] for r in rows]
    counts = [r[1] for r in rows]
    width = max(6.0, 0.35 * len(labels) + 2.0)
    fig, ax = plt.subplots(figsize=(width, 4.0))
    ax.bar(range(len(labels)), counts, color="#4878cf")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90 if labels and len(labels[0]) > 4 else 0, fontsize=8)
    ax.set_xlabel("y2 | y1 | y0")
    ax.set_ylabel("count")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_efficiency_curve(path, m_max: int = 64, n: int = 3) -> Path:
    """Qubit efficiency against register width, with its 1/3 ceiling."""
    path = Path(path)
    ms = list(range(1, m_max + 1))
    etas = [float(compute_efficiency(n, m).eta) for m in ms]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ms, etas, marker="o", markersize=3, color="#4878cf", label="eta(m)")
    ax.axhline(1 / 3, linestyle="--", color="#d1605e", label="1/3 limit")
    ax.set_xlabel("register width m")
    ax.set_ylabel("classical bits per transmitted qubit")
    ax.set_ylim(0, 0.4)
    ax.set_title("qubit efficiency m / (3m + 2)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_detection_rates(results: list[dict], path) -> Path:
    """Detection rate per attack kind with the 1/4 reference line."""
    path = Path(path)
    names = [r["attack"] for r in results]
    rates = [r["detection_rate"] for r in results]
    fig, ax = plt.subplots(figsize=(max(5.0, 1.2 * len(names)), 4.0))
    ax.bar(range(len(names)), rates, color="#4878cf")
    ax.axhline(0.25, linestyle="--", color="#d1605e", label="1/4 per decoy")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylabel("per-decoy detection rate")
    ax.set_ylim(0, max(0.6, max(rates, default=0) + 0.05))
    ax.set_title("decoy detection by attack")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_residual_flatness(counts, path, attack: str) -> Path:
    """Eavesdropper residual distribution; flat bars mean zero leakage."""
    path = Path(path)
    total = float(sum(counts)) or 1.0
    freqs = [c / total for c in counts]
    cells = len(counts)
    fig, ax = plt.subplots(figsize=(max(5.0, 0.5 * cells), 4.0))
    ax.bar(range(cells), freqs, color="#4878cf")
    ax.axhline(1.0 / cells, linestyle="--", color="#d1605e", label="uniform")
    width = max(1, (cells - 1).bit_length())
    ax.set_xticks(range(cells))
    ax.set_xticklabels([format(i, f"0{width}b") for i in range(cells)], fontsize=8)
    ax.set_xlabel("estimate xor truth")
    ax.set_ylabel("frequency")
    ax.set_title(f"eavesdropper residuals under {attack}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
