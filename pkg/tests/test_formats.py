import json

import numpy as np
import pytest

from physector.extraction import run_psep
from physector.formats import (
    FormatError,
    load_measurement,
    load_record,
    load_state,
    measurement_from_dict,
    measurement_to_dict,
    record_from_dict,
    report_csv,
    report_from_dict,
    report_to_dict,
    save_measurement,
    save_record,
    state_from_dict,
    state_to_dict,
)
from physector.measurement import identity_measurement, random_measurement
from physector.simulate import FrequencyRecord
from physector.states import even_cat_diagonal


def test_measurement_roundtrip(tmp_path):
    m = random_measurement(4, 6, seed=1)
    d = measurement_to_dict(m)
    assert d["n_outcomes"] == 6 and d["n_levels"] == 4 and d["complete"] is True
    path = tmp_path / "m.json"
    save_measurement(m, path)
    assert load_measurement(path) == m


def test_measurement_csv(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0.25,1\n0.75,0\n")
    m = load_measurement(path)
    np.testing.assert_array_equal(m.coefficients, [[0.25, 1.0], [0.75, 0.0]])
    assert m.complete
    path.write_text("0.2,1\n0.7,0\n")
    assert not load_measurement(path).complete


@pytest.mark.parametrize(
    "payload",
    [
        {"n_outcomes": 2, "n_levels": 1},
        {"coefficients": [[1, -0.1]]},
        {"coefficients": [[1, 0], [0]]},
        {"n_outcomes": 3, "coefficients": [[1.0]]},
        {"complete": True, "coefficients": [[0.5], [0.4]]},
        {"coefficients": "abc"},
    ],
)
def test_measurement_rejects(payload):
    with pytest.raises(FormatError):
        measurement_from_dict(payload)


def test_state_roundtrip(tmp_path):
    s = even_cat_diagonal(0.5, 6)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(state_to_dict(s)))
    loaded = load_state(path)
    np.testing.assert_array_equal(loaded.diag, s.diag)
    with pytest.raises(FormatError):
        state_from_dict({"n_levels": 3, "diag": [0.5, 0.5]})
    with pytest.raises(FormatError):
        state_from_dict({"diag": [0.9, 0.9]})


def test_record_roundtrip(tmp_path):
    rec = FrequencyRecord([5, 0, 3], 10, seed=7)
    path = tmp_path / "c.json"
    save_record(rec, path)
    assert json.loads(path.read_text()) == {"n_events": 10, "seed": 7, "counts": [5, 0, 3]}
    assert load_record(path) == rec


def test_record_seed_optional():
    assert record_from_dict({"n_events": 4, "counts": [1, 3]}).seed == -1


@pytest.mark.parametrize(
    "payload",
    [
        {"n_events": 4, "counts": [1, -3]},
        {"n_events": 4, "counts": [1.5, 2]},
        {"n_events": 4, "counts": [5, 2]},
        {"counts": [1]},
        {"n_events": 0, "counts": [0]},
    ],
)
def test_record_rejects(payload):
    with pytest.raises(FormatError):
        record_from_dict(payload)


def test_unreadable_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        load_record(path)
    with pytest.raises(FormatError):
        load_measurement(tmp_path / "missing.json")


def test_report_json_and_csv():
    report = run_psep([identity_measurement(3)], [FrequencyRecord([600, 0, 400], 1000)], alpha=0.05)
    d = report_to_dict(report, note="x")
    assert d["extracted_sector"] == [0, 2]
    assert d["d_phys"] == 2
    assert d["note"] == "x"
    assert [lvl["level"] for lvl in d["levels"]] == [0, 2]
    back = report_from_dict(json.loads(json.dumps(d)))
    assert back == report
    lines = report_csv(report).splitlines()
    assert lines[0] == "k,subspace_levels,mean_b_sub,std_b_sub,mean_w,mean_variance"
    assert lines[1].startswith("0,0,")
    assert lines[2].startswith("1,0 2,2.0,")
    assert len(lines) == 1 + len(report.steps)
