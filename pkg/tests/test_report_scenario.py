import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qufti.detection import one_nrd
from qufti.errors import ReferenceModeError
from qufti.report import CsvTable, emit_outputs, format_cell
from qufti.scenario import ScenarioError, ScenarioSpec, parse_scenario, render_scenario


def test_parse_defaults():
    spec = parse_scenario('{"m":4,"d":3,"scheme":"nrd"}')
    assert spec.k == 1 and spec.m == 4 and spec.d == 3


def test_parse_reference_mode_violation():
    with pytest.raises(ReferenceModeError):
        parse_scenario('{"m":3,"d":3,"scheme":"nrd"}')


def test_parse_one_nrd():
    spec = parse_scenario('{"m":4,"d":3,"scheme":"one-nrd","resolved_mode":2}')
    assert spec.detection == one_nrd(2)


@pytest.mark.parametrize(
    "text,path",
    [
        ('{"m":4,"d":3,"colour":1}', "$.colour"),
        ('{"m":"4","d":3}', "$.m"),
        ('{"m":4,"d":3,"k":0}', "$.k"),
        ('{"m":4,"d":3,"scheme":"pnr"}', "$.scheme"),
        ('{"m":4,"d":3,"phases":[1,2]}', "$.phases"),
        ('{"m":4,"d":3,"p_grid":[0.5,1.5]}', "$.p_grid[1]"),
        ('{"m":4,', "$"),
    ],
)
def test_parse_errors_carry_path(text, path):
    with pytest.raises(ScenarioError, match=path.replace("$", r"\$").replace("[", r"\[")):
        parse_scenario(text)


finite = st.floats(-10, 10, allow_nan=False)


@st.composite
def specs(draw):
    m = draw(st.integers(2, 8))
    d = draw(st.integers(1, m - 1))
    return ScenarioSpec(
        m=m,
        d=d,
        k=draw(st.integers(1, 3)),
        scheme=draw(st.sampled_from(["nrd", "spd", "one-nrd"])),
        resolved_mode=draw(st.integers(1, m)),
        phases=draw(st.none() | st.tuples(*[finite] * d)),
        starts=draw(st.integers(1, 64)),
        seed=draw(st.integers(0, 2**31)),
        p_grid=draw(st.none() | st.lists(st.floats(0, 1), min_size=1, max_size=5).map(tuple)),
        phase_mode=draw(st.sampled_from(["fixed", "per-p", "per-config"])),
        out=draw(st.none() | st.just("x.csv")),
    )


@settings(max_examples=100, deadline=None)
@given(specs())
def test_scenario_round_trip(spec):
    assert parse_scenario(render_scenario(spec)) == spec


def test_empty_table_header_only(tmp_path):
    path = tmp_path / "t.csv"
    emit_outputs(CsvTable(["a", "b"]), path)
    assert path.read_bytes() == b"a,b\n"


def test_three_rows_four_lines(tmp_path):
    t = CsvTable(["x", "y"])
    for i in range(3):
        t.add(i, 0.1 * i)
    path = tmp_path / "t.csv"
    emit_outputs(t, path)
    raw = path.read_bytes()
    assert raw.count(b"\n") == 4 and b"\r" not in raw


def test_svg_one_polyline_per_group(tmp_path):
    t = CsvTable(["m", "series", "v"])
    for s in ("nrd", "spd", "qcrb"):
        for m in (2, 3, 4):
            t.add(m, s, 0.1 * m)
    emit_outputs(t, tmp_path / "t.csv", tmp_path / "t.svg", ("m", "v", "series"))
    svg = (tmp_path / "t.svg").read_text()
    assert svg.count("<polyline") == 3


def test_row_width_checked():
    with pytest.raises(ValueError):
        CsvTable(["a"]).add(1, 2)


def test_io_error_names_path(tmp_path):
    bad = tmp_path / "missing" / "t.csv"
    with pytest.raises(OSError, match="missing"):
        emit_outputs(CsvTable(["a"]), bad)


@settings(max_examples=200)
@given(st.floats(-1e300, 1e300, allow_nan=False))
def test_csv_cells_reparse(x):
    y = float(format_cell(x))
    assert y == x or abs(y - x) <= 1e-14 * abs(x)


def test_special_cells():
    assert format_cell(float("inf")) == "inf" and format_cell(math.nan) == "nan"
    assert format_cell(True) == "true"
