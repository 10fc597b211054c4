"""Result reporting: efficiency metrics, histograms, summaries, JSON.

Efficiency ratios are kept as exact rationals; summaries render them to four
decimal places.  The JSON form round-trips losslessly (the ratio travels as a
"p/q" string).
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from qpec.qsim import MeasurementOutcome


@dataclass(frozen=True)
class EfficiencyMetrics:
    """Classical-bit count, total qubit count, and their exact ratio."""

    eta_cb: int
    eta_tq: int
    eta: Fraction

    def __post_init__(self) -> None:
        if self.eta != Fraction(self.eta_cb, self.eta_tq):
            raise ValueError("eta must equal eta_cb / eta_tq exactly")


def compute_efficiency(n: int, m: int) -> EfficiencyMetrics:
    """Qubit efficiency of one n-millionaire, m-bit comparison run.

    Classical payload is the n*m fortune bits; the quantum cost is 3m+2
    qubits per millionaire (three m-qubit input registers plus the two
    phase-kickback outputs).  Decoys are excluded by convention.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    eta_cb = n * m
    eta_tq = 3 * n * m + 2 * n
    return EfficiencyMetrics(eta_cb, eta_tq, Fraction(eta_cb, eta_tq))


def histogram_rows(outcomes: list[MeasurementOutcome]) -> list[tuple[str, int, float]]:
    """Aggregate outcome labels into (label, count, frequency) rows.

    Rows are sorted by descending count, then label, so output is stable.
    """
    counts = Counter(out.label() for out in outcomes)
    total = sum(counts.values())
    return [
        (label, count, count / total)
        for label, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]


def render_histogram_csv(rows: list[tuple[str, int, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "count", "frequency"])
    for label, count, freq in rows:
        writer.writerow([label, count, repr(freq)])
    return buf.getvalue()


def write_histogram_csv(rows: list[tuple[str, int, float]], path: str | Path) -> None:
    Path(path).write_text(render_histogram_csv(rows))


def render_summary(report) -> str:
    """Human-readable run summary for a ComparisonReport."""
    lines = [
        "private equality comparison summary",
        f"seed: {report.seed}   n={report.n}   m={report.m}",
    ]
    if report.aborted:
        lines.append(f"aborted: yes ({report.abort_reason})")
    else:
        lines.append("aborted: no")
        lines.append("verdicts:")
        for v in report.verdicts:
            rel = "=" if v.equal else "≠"
            word = "YES" if v.equal else "NO"
            lines.append(f"  {v.i} {rel} {v.j}   {word}")
    e = report.efficiency
    lines.append(
        f"efficiency: eta_cb={e.eta_cb} eta_tq={e.eta_tq} "
        f"eta={e.eta} ({float(e.eta):.4f})"
    )
    d = report.detection
    if d is not None:
        lines.append(
            f"decoy check: decoys={d.decoys} mismatches={d.mismatches} "
            f"error_rate={d.error_rate:.4f} passed={'yes' if d.passed else 'no'}"
        )
    return "\n".join(lines) + "\n"


def report_to_json_dict(report) -> dict:
    d = report.detection
    return {
        "n": report.n,
        "m": report.m,
        "seed": report.seed,
        "verdicts": [{"i": v.i, "j": v.j, "equal": v.equal} for v in report.verdicts],
        "efficiency": {
            "eta_cb": report.efficiency.eta_cb,
            "eta_tq": report.efficiency.eta_tq,
            "eta": f"{report.efficiency.eta.numerator}/{report.efficiency.eta.denominator}",
        },
        "detection": None
        if d is None
        else {
            "decoys": d.decoys,
            "mismatches": d.mismatches,
            "error_rate": d.error_rate,
        },
        "aborted": report.aborted,
        "abort_reason": report.abort_reason,
    }


def report_to_json(report) -> str:
    return json.dumps(report_to_json_dict(report), indent=2, sort_keys=True) + "\n"


def report_from_json_dict(data: dict):
    from qpec.protocol import ComparisonReport, DetectionStats, Verdict

    det = data.get("detection")
    detection = None
    if det is not None:
        decoys = int(det["decoys"])
        mismatches = int(det["mismatches"])
        detection = DetectionStats(
            decoys=decoys,
            mismatches=mismatches,
            error_rate=float(det["error_rate"]),
            passed=not data["aborted"] or data.get("abort_reason") != "decoy_check",
        )
    eff = data["efficiency"]
    num, den = eff["eta"].split("/")
    return ComparisonReport(
        n=int(data["n"]),
        m=int(data["m"]),
        seed=int(data["seed"]),
        verdicts=[
            Verdict(i=int(v["i"]), j=int(v["j"]), equal=bool(v["equal"]))
            for v in data["verdicts"]
        ],
        efficiency=EfficiencyMetrics(
            eta_cb=int(eff["eta_cb"]),
            eta_tq=int(eff["eta_tq"]),
            eta=Fraction(int(num), int(den)),
        ),
        detection=detection,
        aborted=bool(data["aborted"]),
        abort_reason=data.get("abort_reason"),
    )


def report_from_json(text: str):
    return report_from_json_dict(json.loads(text))
