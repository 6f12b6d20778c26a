import math

from magatom import report


def make_record():
    return report.OutputRecord(
        command="demo",
        inputs={"gamma": 4.0, "label": "a,b"},
        columns=("x", "y", "tag"),
        rows=[(0.1, 4.0, "plain"), (1e-300, -2.5e17, 'quo"te'), (None, 3, "x,y")],
        diagnostics=["warn: something"],
    )


def test_number_formatting_round_trips():
    for x in (0.1, 1 / 3, 2.0 / 3.0, 1e-300, 9.399451214, -2.5e17, 4.0):
        assert float(report.format_number(x)) == x


def test_csv_round_trip():
    rec = make_record()
    text = report.to_csv(rec)
    header, rows = report.parse_csv(text)
    assert header == rec.columns
    for parsed, orig in zip(rows, rec.rows):
        for p, o in zip(parsed, orig):
            assert p == o


def test_csv_quoting():
    rec = make_record()
    text = report.to_csv(rec)
    assert '"quo""te"' in text
    assert '"x,y"' in text
    assert text.endswith("\r\n")


def test_json_payload_round_trips():
    import json

    rec = make_record()
    doc = json.loads(report.to_json(rec))
    assert doc["schema_version"] == report.SCHEMA_VERSION
    assert doc["command"] == "demo"
    assert doc["columns"] == list(rec.columns)
    for parsed, orig in zip(doc["rows"], rec.rows):
        for p, o in zip(parsed, orig):
            assert p == o
    assert doc["inputs"]["gamma"] == 4.0
    assert doc["diagnostics"] == ["warn: something"]


def test_json_handles_non_finite():
    rec = report.OutputRecord("demo", {}, ("x",), [(float("nan"),), (float("inf"),)])
    import json

    doc = json.loads(report.to_json(rec))
    assert doc["rows"][0][0] == "nan"
    assert doc["rows"][1][0] == "inf"


def test_determinism():
    a = report.to_csv(make_record())
    b = report.to_csv(make_record())
    assert a == b
    assert report.to_json(make_record()) == report.to_json(make_record())


def test_render_dispatch():
    rec = make_record()
    assert report.render(rec, "csv") == report.to_csv(rec)
    assert report.render(rec, "json") == report.to_json(rec)
    try:
        report.render(rec, "xml")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for unknown format")
