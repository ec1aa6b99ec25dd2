import json

import pytest

from exceptions import InvalidParamsError
from measures import params_from_rho
from pipeline import solve_queue
from records import (ERROR_MARKER, OutputRecord, format_table_csv, load_records, parse_table_csv,
                     save_records)


@pytest.fixture
def record():
    return OutputRecord.from_outcome(solve_queue(params_from_rho(0.7, 3, 2, 1.0, 2)))


def test_record_from_outcome(record):
    assert record.n_states == 1 + 2 + 3 + 4 + 2 * 4
    assert len(record.p) == 6
    assert record.params["K"] == 2
    assert record.method == "squaring"
    assert record.measures["L"] > 0
    assert record.error is None


def test_json_round_trip(record):
    assert OutputRecord.from_json(record.to_json()) == record
    data = json.loads(record.to_json())
    assert OutputRecord.from_dict(data).to_dict() == data


def test_failed_record_round_trip():
    failed = OutputRecord.failed({"r": 2, "c": 2, "K": 1}, "uniform", "не збігся")
    assert OutputRecord.from_json(failed.to_json()) == failed
    assert failed.p == []


def test_from_dict_requires_fields():
    with pytest.raises(InvalidParamsError):
        OutputRecord.from_dict({"method": "linear"})
    with pytest.raises(InvalidParamsError):
        OutputRecord.from_json("{not json")


def test_save_and_load(tmp_path, record):
    path = tmp_path / "records.json"
    save_records(str(path), [record, record])
    assert load_records(str(path)) == [record, record]
    assert path.read_text(encoding="utf-8").startswith("[\n  {")


def test_load_rejects_non_list(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"a": 1}', encoding="utf-8")
    with pytest.raises(InvalidParamsError):
        load_records(str(path))


def test_table_csv_layout():
    text = format_table_csv([0.1, 0.95], [1, 3], [[0.4, 3.2144], [0.40001, None]])
    assert text.splitlines() == ["K,0.1,0.95", "1,0.400,3.214", f"3,0.400,{ERROR_MARKER}"]
    parsed = parse_table_csv(text)
    assert parsed == {"rhos": [0.1, 0.95], "ks": [1, 3], "grid": [[0.4, 3.214], [0.4, None]]}


def test_table_csv_shape_checked():
    with pytest.raises(InvalidParamsError):
        format_table_csv([0.1], [1, 3], [[1.0]])
    with pytest.raises(InvalidParamsError):
        parse_table_csv("rho,0.1\n1,2.0\n")
