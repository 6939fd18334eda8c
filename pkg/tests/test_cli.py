import json

import pytest

from formal_derham.cli import main
from formal_derham.forms import Chart, FormalForm
from formal_derham.randgen import make_rng, rand_delta, rand_density, rand_form
from formal_derham.textio import (ChartIndexError, ParseError, format_any,
                                  parse_current, parse_form)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


GOLDENS = [
    (["d", "--chart", "0,1", "y1^3"], "(3*y1^2) dy1\n"),
    (["pair", "--chart", "0,1", "--cap", "3", "y1^2", "pw-unit*(ys1^2)"], "2\n"),
    (["pair", "--chart", "2,0", "dx2", "pw-unit dxs1"], "-1\n"),
    (["wedge", "--chart", "1,1", "dx1", "dy1"], "(1) dx1^dy1\n"),
    (["primitive", "--chart", "1,1", "(2*x1) dx1 + (y1) dy1"],
     "primitive: x1^2 + 1/2*y1^2\n"),
    (["kunneth", "psi", "dy1", "dx1", "--charts", "0,1,1,0"], "(-1) dx1^dy1\n"),
]


@pytest.mark.parametrize("argv,expected", GOLDENS)
def test_goldens(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out == expected


def test_output_is_byte_stable(capsys):
    argv = ["pullback", "--chart", "1,1", "--map", "x1=x1+x1*y1;y1=2*y1", "(x1) dy1"]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv) and first[0] == 0


def test_betti_report(capsys):
    code, out, _ = run(capsys, "betti", "--chart", "1,1", "--capx", "2", "--capy", "2",
                       "--augmented")
    assert code == 0
    report = dict(line.split("=", 1) for line in out.splitlines())
    assert report["betti"] == "0,0,0,0" and report["exact"] == "yes"
    code, out, _ = run(capsys, "betti", "--chart", "1,0", "--capx", "2", "--capy", "0",
                       "--truncation", "coefficient")
    assert "dims=3,3" in out.splitlines()


def test_json_format(capsys):
    code, out, _ = run(capsys, "pair", "--chart", "0,1", "--cap", "3", "--format", "json",
                       "y1^2", "pw-unit*(ys1^2)")
    assert code == 0 and json.loads(out) == {"kind": "rational", "value": "2"}
    code, out, _ = run(capsys, "d", "--format", "json", "--chart", "1,0", "x1^2")
    assert code == 0 and isinstance(json.loads(out), dict)


@pytest.mark.parametrize("argv,code", [
    (["d", "--chart", "1,1", "dy2"], 2),              # index outside the chart
    (["d", "--chart", "1,1", "(x1 dx1"], 2),          # syntax
    (["d", "--chart", "one", "x1"], 2),               # bad flag value
    (["frobnicate"], 2),
    (["pair", "--chart", "1,0", "dx1", "pw-unit"], 1),  # degree mismatch
    (["primitive", "--chart", "1,0", "--complex", "dist", "delta(a=1; dx=0; 1) dnil"], 1),
    (["primitive", "--chart", "2,0", "(x1) dx2"], 1),   # not closed
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code and err


def test_parse_form_examples():
    c = Chart(1, 1, 4)
    w = parse_form("(2*x1*y1) dx1^dy1", c)
    assert w.r == 2 and len(w.terms) == 1
    assert parse_form("dx1^dx1", c).is_zero()
    with pytest.raises(ChartIndexError):
        parse_form("dy2", c)
    with pytest.raises(ParseError):
        parse_form("(x1 +) dx1", c)


def test_round_trip_500_random_expressions():
    rng = make_rng(61)
    seen = 0
    while seen < 500:
        n, k = rng.randint(0, 2), rng.randint(0, 2)
        chart = Chart(n, k, 4)
        which = seen % 3
        if which == 0:
            obj = rand_form(rng, chart, None, 2, 2)
            back = parse_form(format_any(obj), chart)
        elif which == 1:
            if n + k == 0:
                continue
            obj = rand_density(rng, chart, None, 2, 1, nterms=2)
            back = parse_current(format_any(obj), chart)
        else:
            obj = rand_delta(rng, chart, None, max_order=2, y_deg=2, nterms=3)
            back = parse_current(format_any(obj), chart)
        if obj.is_zero():
            assert format_any(obj) == "0"
        else:
            assert back == obj and format_any(back) == format_any(obj)
        seen += 1
