import json
from fractions import Fraction

import pytest

from cuspslope.analyzer import SamplerConfig, sample_constrained_shapes, verify_shape
from cuspslope.certifier import certify_delta
from cuspslope.cli import main
from cuspslope.io import (
    ParseError,
    decode_scalar,
    dumps,
    encode_scalar,
    envelope,
    load_shape_file,
    loads,
    parse_number,
    parse_shape,
    parse_slope,
    shape_entry,
    to_jsonable,
)
from cuspslope.lattice import Slope, enumerate_short_slopes
from cuspslope.scalar import Scalar

R = Fraction


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- parsing -------------------------------------------------------------------

@pytest.mark.parametrize("text, expected", [
    ("3", Scalar.exact(3)),
    ("-7/2", Scalar.exact(R(-7, 2))),
    ("1.3", Scalar.interval(R(125, 100), R(135, 100))),
    ("3.4641", Scalar.interval(R(346405, 100000), R(346415, 100000))),
])
def test_parse_number(text, expected):
    assert parse_number(text) == expected


def test_parse_number_with_radius():
    assert parse_number("3.4641016", "1e-7") == Scalar.interval(R(34641015, 10**7), R(34641017, 10**7))
    assert parse_number("2", "0.5") == Scalar.interval(R(3, 2), R(5, 2))


@pytest.mark.parametrize("bad", ["abc", "1/0", "nan", "inf", ""])
def test_parse_number_errors(bad):
    with pytest.raises(ParseError):
        parse_number(bad)


def test_parse_slope():
    assert parse_slope("1/0") == Slope(1, 0)
    assert parse_slope("-4") == Slope(-4, 1)
    assert parse_slope("-3/-1") == Slope(3, 1)
    for bad in ("2/4", "0/0", "x"):
        with pytest.raises(ParseError):
            parse_slope(bad)


def test_parse_shape():
    s = parse_shape("1,0,0,4")
    assert s.is_exact and s.name == "1,0,0,4"
    assert parse_shape("fig8").name == "fig8"
    with pytest.raises(ParseError):
        parse_shape("1,2,3")


def test_shape_file_roundtrip():
    shapes = list(sample_constrained_shapes(SamplerConfig(seed=5, count=3)))
    text = json.dumps({"entries": [shape_entry(s) for s in shapes]})
    assert load_shape_file(text) == shapes


def test_shape_file_uncertainty():
    text = json.dumps([{"name": "f8", "meridian": ["1", "0"], "longitude": ["0", "3.46410161514"],
                        "uncertainty": "1e-11"}])
    (s,) = load_shape_file(text)
    assert s.longitude.y.width == R(2, 10**11)
    assert s.meridian.x.width == R(2, 10**11)


def test_scalar_encoding_roundtrip():
    for x in (Scalar.exact(R(-3, 7)), Scalar.interval(R(1, 3), R(5, 2)), enumerate_short_slopes(parse_shape("fig8"))[1].length):
        enc = encode_scalar(x)
        assert decode_scalar(json.loads(json.dumps(enc))) == x
    assert encode_scalar(Scalar.exact(R(1, 2))) == {"rational": "1/2"}


def _leaves(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _leaves(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _leaves(v)
    else:
        yield obj


def test_envelope_roundtrip():
    reports = [verify_shape(parse_shape("fig8")), certify_delta(8)]
    doc = envelope(["verify"], reports)
    text = dumps(doc)
    again = loads(text)
    assert again["schema"] == 1
    assert dumps(envelope(["verify"], again["results"])) == text
    assert not any(isinstance(v, float) for v in _leaves(json.loads(text)))
    length = again["results"][0]["integral_short_slopes"][0][1]
    assert isinstance(length, Scalar) and length == reports[0].integral_short_slopes[0][1]


# -- commands ------------------------------------------------------------------

def test_length(capsys):
    code, out, _ = run(capsys, "length", "--shape", "1,0,0,4", "--slope", "1/1")
    assert code == 0 and "4.1231056" in out and "17" in out
    code, out, _ = run(capsys, "length", "--shape", "1,0,0,4", "--slope", "1/0")
    assert code == 0 and out.strip() == "length(1/0) = 1"


def test_length_json(capsys):
    code, out, _ = run(capsys, "length", "--shape", "1,0,0,4", "--slope", "1/1", "--format", "json")
    doc = loads(out)
    assert code == 0 and doc["results"]["length_squared"] == Scalar.exact(17)


def test_length_errors(capsys):
    assert run(capsys, "length", "--shape", "1,0,0,0", "--slope", "1/1")[0] == 3
    assert run(capsys, "length", "--shape", "1,0,0", "--slope", "1/1")[0] == 2
    assert run(capsys, "length", "--shape", "1,0,0,4", "--slope", "2/4")[0] == 2
    assert run(capsys, "length", "--shape", "1,0,0,4")[0] == 2


def test_distance(capsys):
    code, out, _ = run(capsys, "distance", "--slope=-4/1", "--slope", "4/1")
    assert code == 0 and out.strip() == "8"
    assert run(capsys, "distance", "--slope", "1/0")[0] == 2


def test_short(capsys):
    code, out, _ = run(capsys, "short", "--shape", "fig8")
    assert code == 0 and out.startswith("10 slope(s)")
    code, out, _ = run(capsys, "short", "--shape", "1,0,0,7")
    assert out.startswith("1 slope(s)") and "1/0" in out
    code, out, _ = run(capsys, "short", "--shape", "1,0,0,4", "--max-length", "0.5", "--format", "json")
    assert code == 0 and loads(out)["results"] == []


def test_short_json_is_stable(capsys):
    a = run(capsys, "short", "--shape", "fig8", "--format", "json")[1]
    b = run(capsys, "short", "--shape", "fig8", "--format", "json")[1]
    assert a == b


def test_verify_census(capsys, tmp_path):
    shapes = list(sample_constrained_shapes(SamplerConfig(seed=11, count=100)))
    f = tmp_path / "census.json"
    f.write_text(json.dumps({"entries": [shape_entry(s) for s in shapes]}))
    code, out, err = run(capsys, "verify", str(f))
    doc = loads(out)
    assert code == 0 and len(doc["results"]) == 100
    assert all(r["bound_holds"] for r in doc["results"])


def test_verify_sampled_and_fig8(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "42", "--count", "5", "--shape", "fig8")
    doc = loads(out)
    assert code == 0 and len(doc["results"]) == 6
    fig8 = next(r for r in doc["results"] if r["shape_name"] == "fig8")
    assert fig8["satisfies_min_slope"] is False and fig8["count"] == 9


def test_verify_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", str(bad))[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    degenerate = tmp_path / "deg.json"
    degenerate.write_text(json.dumps([{"name": "d", "meridian": ["1", "0"], "longitude": ["2", "0"]}]))
    assert run(capsys, "verify", str(degenerate))[0] == 3


def test_verify_exit_4_on_violation(capsys, monkeypatch):
    import cuspslope.cli as cli
    from dataclasses import replace

    real = cli.verify_shape
    monkeypatch.setattr(cli, "verify_shape", lambda s, c: replace(real(s, c), bound_holds=False))
    code, _, err = run(capsys, "verify", "--seed", "1", "--count", "1")
    assert code == 4 and "bound violated" in err


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--delta", "9")
    assert code == 0 and "Infeasible" in out and "1361.67" in out
    code, out, _ = run(capsys, "certify", "--delta", "8")
    assert code == 0 and "WitnessFound" in out and "witness a=" in out
    code, out, _ = run(capsys, "certify", "--max")
    assert code == 0 and "Δ_max = 8" in out
    assert run(capsys, "certify", "--delta", "0")[0] == 2
    assert run(capsys, "certify")[0] == 2


def test_certify_json(capsys):
    code, out, _ = run(capsys, "certify", "--max", "--format", "json")
    doc = loads(out)
    assert doc["results"]["delta_max"] == 8
    assert [r["verdict"] for r in doc["results"]["reports"]] == ["WitnessFound"] * 8 + ["Infeasible"] * 4


def test_certify_exit_5_when_indeterminate(capsys, monkeypatch):
    import cuspslope.cli as cli
    from cuspslope.errors import IndeterminateEnclosure

    def boom():
        raise IndeterminateEnclosure("forced")

    monkeypatch.setattr(cli, "certify_delta", lambda d: boom())
    assert run(capsys, "certify", "--delta", "3")[0] == 5


def test_precision_flag(capsys):
    code, out, _ = run(capsys, "length", "--shape", "1,0,0,4", "--slope", "1/1", "--format", "json",
                       "--precision", "32")
    doc = loads(out)
    assert doc["precision_bits"] == 32
    assert doc["results"]["length"].lo.denominator <= 2 ** 32
    assert run(capsys, "length", "--shape", "1,0,0,4", "--slope", "1/1", "--precision", "4")[0] == 2


def test_demo(capsys):
    code, out, _ = run(capsys, "demo", "fig8")
    assert code == 0
    assert "[-4, -3, -2, -1, 0, 1, 2, 3, 4]" in out and "distance(-4/1, 4/1) = 8" in out
    assert "FAILED" not in out


def test_stdout_only_report(capsys):
    code, out, err = run(capsys, "verify", "--shape", "fig8")
    assert err == "" and json.loads(out)["schema"] == 1
    assert to_jsonable(Slope(1, 0)) == {"p": 1, "q": 0}
