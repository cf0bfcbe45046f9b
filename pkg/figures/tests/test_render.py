from pathlib import Path

import pytest

from render import FigureSpec, SchemaError, main, read_rows, render, split_series

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

GOLDEN = {
    "depolarizing_sweep": GOLDEN_DIR / "depolarizing_sweep.csv",
    "depolarizing_verify": GOLDEN_DIR / "depolarizing_verify.csv",
    "pmax_vs_delta": GOLDEN_DIR / "pmax_vs_delta.csv",
    "theorem1_sweep": GOLDEN_DIR / "theorem1_sweep.csv",
    "trace": GOLDEN_DIR / "trace.csv",
}

H2_GROUND_ENERGY = -1.145599124123644  # annotation value from the producing run


@pytest.mark.parametrize("kind", sorted(GOLDEN))
def test_renders_all_five_kinds(kind, tmp_path):
    out = tmp_path / f"{kind}.png"
    spec = FigureSpec(str(GOLDEN[kind]), kind, str(out))
    if kind == "trace":
        spec.hline = H2_GROUND_ENERGY
        spec.hline_label = "ground energy"
    render(spec)
    assert out.stat().st_size > 0


def test_invalid_rows_truncate_series():
    header, rows = read_rows(str(GOLDEN["pmax_vs_delta"]))
    series = split_series(rows, header, "delta", "p_max", "N")
    # Large-N curves stop early: their delta range is strictly shorter.
    assert series["14"]["truncated"]
    assert max(series["14"]["x"]) < max(series["5"]["x"])
    assert len(series["14"]["x"]) < len(series["5"]["x"])


def test_fully_invalid_series_keeps_legend_entry(tmp_path):
    # N=20 in the theorem-1 golden CSV is invalid at every p.
    header, rows = read_rows(str(GOLDEN["theorem1_sweep"]))
    series = split_series(rows, header, "p", "bound", "N")
    assert series["20"]["x"] == [] and series["20"]["truncated"]
    out = tmp_path / "fig.png"
    render(FigureSpec(str(GOLDEN["theorem1_sweep"]), "theorem1_sweep", str(out)))
    assert out.exists()


def test_trace_ends_near_annotation():
    header, rows = read_rows(str(GOLDEN["trace"]))
    final_energy = float(rows[-1][header.index("energy")])
    assert final_energy == pytest.approx(H2_GROUND_ENERGY, abs=1e-3)


def test_render_is_pure_in_the_csv(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(FigureSpec(str(GOLDEN["depolarizing_sweep"]), "depolarizing_sweep", str(a)))
    render(FigureSpec(str(GOLDEN["depolarizing_sweep"]), "depolarizing_sweep", str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_schema_mismatch_rejected(tmp_path):
    with pytest.raises(SchemaError):
        render(FigureSpec(str(GOLDEN["trace"]), "depolarizing_sweep", str(tmp_path / "x.png")))
    with pytest.raises(SchemaError):
        FigureSpec(str(GOLDEN["trace"]), "histogram", str(tmp_path / "x.png"))


def test_cli_entry_point(tmp_path):
    out = tmp_path / "fig.png"
    code = main(["--in", str(GOLDEN["depolarizing_sweep"]),
                 "--kind", "depolarizing_sweep", "--out", str(out)])
    assert code == 0 and out.exists()
    assert main(["--in", str(GOLDEN["trace"]),
                 "--kind", "depolarizing_sweep", "--out", str(tmp_path / "y.png")]) == 1
