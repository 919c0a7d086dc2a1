import numpy as np

from triseg.svg import heatmap_svg, loglog_svg


def test_heatmap_small(tmp_path):
    vals = np.linspace(0.0, 1.0, 25).reshape(5, 5)
    path = tmp_path / "h.svg"
    heatmap_svg(vals, path, title="demo")
    text = path.read_text()
    assert text.startswith("<svg")
    assert text.count("<rect") == 25
    assert "demo" in text


def test_heatmap_downsamples_large_fields(tmp_path):
    rng = np.random.default_rng(0)
    vals = rng.standard_normal((513, 513))
    path = tmp_path / "big.svg"
    heatmap_svg(vals, path, max_cells=128)
    text = path.read_text()
    assert text.count("<rect") <= 129 * 129


def test_heatmap_constant_field(tmp_path):
    path = tmp_path / "c.svg"
    heatmap_svg(np.full((4, 4), 3.0), path)
    assert "<rect" in path.read_text()


def test_loglog_plot_with_fit(tmp_path):
    eps = [1e-1, 1e-2, 1e-3]
    vals = [v**0.5 for v in eps]
    path = tmp_path / "p.svg"
    loglog_svg(eps, vals, path, title="decay", fit=(0.5, 0.0))
    text = path.read_text()
    assert text.count("<circle") == 3
    assert "slope=0.5000" in text


def test_loglog_plot_handles_zeros(tmp_path):
    path = tmp_path / "z.svg"
    loglog_svg([1e-1, 1e-2], [0.0, 0.0], path)
    assert "no positive data" in path.read_text()


def test_svg_deterministic(tmp_path):
    vals = np.arange(16.0).reshape(4, 4)
    p1 = tmp_path / "a.svg"
    p2 = tmp_path / "b.svg"
    heatmap_svg(vals, p1, title="t")
    heatmap_svg(vals, p2, title="t")
    assert p1.read_bytes() == p2.read_bytes()
