"""Figure rendering writes PNG files next to the report output."""

from __future__ import annotations

from contractcheck import compare
from contractcheck.corpus import load_fixture
from contractcheck.figures import render_report_figures

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_metrics_and_counts_figures_written(tmp_path):
    legal = load_fixture("gcdc_legal").net
    partial = load_fixture("gcdc_partial")
    report = compare(legal, partial.net, partial.alignment)
    written = render_report_figures(report, tmp_path / "figs")
    assert len(written) == 2
    names = sorted(p.name for p in written)
    assert names == [
        "gcdc_partial_vs_gcdc_legal_behaviors.png",
        "gcdc_partial_vs_gcdc_legal_metrics.png",
    ]
    for path in written:
        data = path.read_bytes()
        assert data[:8] == PNG_MAGIC
        assert len(data) > 1000


def test_cli_compare_writes_figures(tmp_path, capsys):
    from contractcheck.cli import run
    from conftest import CORPUS_DIR

    figdir = tmp_path / "out"
    code = run([
        "compare",
        "--ground", str(CORPUS_DIR / "gcdc_legal.pnet"),
        "--candidate", str(CORPUS_DIR / "gcdc_partial.pnet"),
        "--align", str(CORPUS_DIR / "gcdc_partial.align"),
        "--figures", str(figdir),
    ])
    assert code == 0
    pngs = sorted(figdir.glob("*.png"))
    assert len(pngs) == 2
    err = capsys.readouterr().err
    assert "figure written to" in err
