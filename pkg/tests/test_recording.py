import json
import os

import pytest

from coopfollow.recording import (
    SCHEMA_VERSION,
    Row,
    atomic_write_text,
    dumps_line,
    read_record,
    record_lines,
    write_record,
)


def sample_row(t=0.01, **over):
    base = dict(
        t=t, x=1.0, y=-0.5, theta=0.1,
        e1=0.0, e2=0.02, e3=-0.01, ge2=0.02, ge3=-0.01, detected=True,
        beta=0.019, u=0.33, phi_x=0.6, phi_y=0.2, phi_d=0.33, f=0.26,
        f_human=0.0, v=0.18, v_r=0.17, omega_r=0.0,
        u_saturated=False, cmd_saturated=False, override=False,
        phi_x_cmd=0.67, phi_y_cmd=None, f_human_cmd=None, count_submit=None,
        events=(),
    )
    base.update(over)
    return Row(**base)


def test_row_round_trip():
    r = sample_row(events=("gap_enter", "count:3"), count_submit=3, phi_y_cmd=0.4)
    back = Row.from_obj(json.loads(dumps_line(r.to_obj())))
    assert back == r


def test_dumps_line_compact_and_finite_only():
    line = dumps_line({"a": 1.5, "b": [1, 2]})
    assert " " not in line
    with pytest.raises(ValueError):
        dumps_line({"x": float("nan")})
    with pytest.raises(ValueError):
        dumps_line({"x": float("inf")})


def test_dumps_line_uses_shortest_float_repr():
    # 0.1 must serialize as "0.1", not an expansion — this is what makes
    # rerecorded runs byte-identical
    assert dumps_line({"v": 0.1}) == '{"v":0.1}'
    assert dumps_line({"v": 1 / 3}) == '{"v":0.3333333333333333}'


def test_record_lines_header_footer():
    rows = [sample_row(t=0.01 * (k + 1)) for k in range(3)]
    lines = record_lines("deadbeef", "CC", 0.01, 7, rows, "completed", 0.03)
    header = json.loads(lines[0])
    footer = json.loads(lines[-1])
    assert header == {"kind": "header", "schema": SCHEMA_VERSION,
                      "scenario_hash": "deadbeef", "mode": "CC", "dt": 0.01, "seed": 7}
    assert footer == {"kind": "end", "status": "completed",
                      "completion_time": 0.03, "ticks": 3}
    assert len(lines) == 5


def test_write_read_round_trip(tmp_path):
    rows = [sample_row(t=0.01 * (k + 1), events=("count:2",) if k == 1 else ())
            for k in range(4)]
    p = str(tmp_path / "run.jsonl")
    write_record(p, record_lines("cafe", "MC", 0.01, 3, rows, "timeout", 0.04))
    header, back, footer = read_record(p)
    assert header["scenario_hash"] == "cafe" and header["mode"] == "MC"
    assert footer["status"] == "timeout" and footer["ticks"] == 4
    assert back == rows


def test_same_rows_same_bytes(tmp_path):
    rows = [sample_row(t=0.01 * (k + 1), e2=k * 0.1 + 0.05) for k in range(5)]
    a, b = str(tmp_path / "a.jsonl"), str(tmp_path / "b.jsonl")
    write_record(a, record_lines("h", "CC", 0.01, 1, rows, "completed", 0.05))
    write_record(b, record_lines("h", "CC", 0.01, 1, rows, "completed", 0.05))
    assert open(a, "rb").read() == open(b, "rb").read()


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    p = str(tmp_path / "out.txt")
    atomic_write_text(p, "first")
    atomic_write_text(p, "second")
    assert open(p).read() == "second"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_read_record_requires_header_and_footer(tmp_path):
    p = str(tmp_path / "broken.jsonl")
    row_line = dumps_line(sample_row().to_obj())
    with open(p, "w") as f:
        f.write(row_line + "\n")  # no header, no footer
    with pytest.raises(ValueError, match="missing header or footer"):
        read_record(p)
    with open(p, "w") as f:  # header but truncated before the footer
        f.write(dumps_line({"kind": "header", "schema": 1, "scenario_hash": "h",
                            "mode": "CC", "dt": 0.01, "seed": 1}) + "\n" + row_line + "\n")
    with pytest.raises(ValueError, match="missing header or footer"):
        read_record(p)


def test_read_record_skips_blank_lines(tmp_path):
    p = str(tmp_path / "gappy.jsonl")
    lines = record_lines("h", "CC", 0.01, 1, [sample_row()], "completed", 0.01)
    with open(p, "w") as f:
        f.write(lines[0] + "\n\n" + lines[1] + "\n\n" + lines[2] + "\n")
    header, rows, footer = read_record(p)
    assert len(rows) == 1 and footer["ticks"] == 1
