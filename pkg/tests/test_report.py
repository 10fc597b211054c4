"""Reporting tests: efficiency arithmetic, histograms, summaries, JSON."""

import json
from fractions import Fraction

import pytest

from qpec.bits import BitVector
from qpec.protocol import ProtocolConfig, run_protocol
from qpec.qsim import MeasurementOutcome
from qpec.report import (
    EfficiencyMetrics,
    compute_efficiency,
    histogram_rows,
    render_histogram_csv,
    render_summary,
    report_from_json,
    report_to_json,
    write_histogram_csv,
)


def bv(s: str) -> BitVector:
    return BitVector.from_string(s)


# ---------------------------------------------------------------------------
# efficiency


def test_efficiency_worked_values():
    e = compute_efficiency(3, 2)
    assert e.eta_cb == 6
    assert e.eta_tq == 24
    assert e.eta == Fraction(1, 4)


@pytest.mark.parametrize(
    "n,m,cb,tq",
    [(1, 1, 1, 5), (2, 3, 6, 22), (3, 2, 6, 24), (5, 8, 40, 130), (7, 64, 448, 1358)],
)
def test_efficiency_formulas(n, m, cb, tq):
    e = compute_efficiency(n, m)
    assert (e.eta_cb, e.eta_tq) == (cb, tq)
    assert e.eta == Fraction(cb, tq)


def test_efficiency_depends_only_on_m():
    # eta = m / (3m + 2): the party count cancels.
    for m in (1, 2, 10, 1000):
        values = {compute_efficiency(n, m).eta for n in (1, 2, 9)}
        assert values == {Fraction(m, 3 * m + 2)}


def test_efficiency_limit_one_third():
    e = compute_efficiency(3, 1000)
    assert abs(float(e.eta) - 1 / 3) < 1e-3
    assert compute_efficiency(3, 10**6).eta == Fraction(10**6, 3 * 10**6 + 2)


def test_efficiency_metrics_consistency_check():
    EfficiencyMetrics(6, 24, Fraction(1, 4))
    with pytest.raises(ValueError):
        EfficiencyMetrics(6, 24, Fraction(1, 3))


def test_efficiency_rejects_bad_sizes():
    with pytest.raises(ValueError):
        compute_efficiency(0, 2)
    with pytest.raises(ValueError):
        compute_efficiency(2, 0)


# ---------------------------------------------------------------------------
# histogram


def out(y2: str, y1: str, y0: str) -> MeasurementOutcome:
    return MeasurementOutcome(bv(y2), bv(y1), bv(y0))


def test_histogram_rows_sorted_by_count_then_label():
    rows = histogram_rows([out("1", "0", "1"), out("1", "0", "1"), out("0", "1", "1")])
    assert rows == [("101", 2, 2 / 3), ("011", 1, 1 / 3)]


def test_histogram_label_is_concatenated_registers():
    rows = histogram_rows([out("11", "00", "10")])
    assert rows[0][0] == "110010"


def test_histogram_csv_round_trip(tmp_path):
    rows = histogram_rows([out("1", "0", "1"), out("0", "1", "1"), out("0", "1", "1")])
    text = render_histogram_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "label,count,frequency"
    assert len(lines) == 3
    path = tmp_path / "hist.csv"
    write_histogram_csv(rows, path)
    assert path.read_text() == text
    for line in lines[1:]:
        label, count, freq = line.split(",")
        assert float(freq) == int(count) / 3


def test_histogram_empty():
    assert histogram_rows([]) == []
    assert render_histogram_csv([]) == "label,count,frequency\n"


# ---------------------------------------------------------------------------
# summary and JSON


WORKED = dict(
    n=3, m=2, sophia_secret=bv("10"),
    fortunes=[bv("11"), bv("11"), bv("01")],
)


def test_summary_contains_verdict_lines():
    rep = run_protocol(ProtocolConfig(seed=7, **WORKED))
    text = render_summary(rep)
    assert "0 = 1   YES" in text
    assert "0 ≠ 2   NO" in text
    assert "1 ≠ 2   NO" in text
    assert "eta_tq=24" in text
    assert "eta=1/4" in text
    assert "aborted: no" in text


def test_summary_abort_line():
    from qpec.attacks import AttackModel

    cfg = ProtocolConfig(
        n=2, m=4, seed=0, attack=AttackModel(kind="measure-resend"),
        fortunes=[bv("0000"), bv("0000")],
    )
    rep = run_protocol(cfg)
    text = render_summary(rep)
    assert "aborted: yes (decoy_check)" in text


def test_report_json_round_trip():
    rep = run_protocol(ProtocolConfig(seed=7, **WORKED))
    blob = report_to_json(rep)
    data = json.loads(blob)
    assert data["efficiency"]["eta"] == "1/4"
    assert data["n"] == 3 and data["m"] == 2 and data["seed"] == 7
    again = report_from_json(blob)
    assert again.verdicts == rep.verdicts
    assert again.efficiency == rep.efficiency
    assert again.detection == rep.detection
    assert report_to_json(again) == blob


def test_report_json_hides_private_state():
    rep = run_protocol(ProtocolConfig(seed=7, **WORKED))
    data = json.loads(report_to_json(rep))
    for key in ("trent_sums", "outcomes", "transcript", "eve_record"):
        assert key not in data
    blob = report_to_json(rep)
    for total in rep.trent_sums:
        assert str(total) not in blob.replace('"eta": "1/4"', "")


def test_report_json_is_stable_bytes():
    a = report_to_json(run_protocol(ProtocolConfig(seed=42, **WORKED)))
    b = report_to_json(run_protocol(ProtocolConfig(seed=42, **WORKED)))
    assert a == b
    assert a.endswith("\n")
