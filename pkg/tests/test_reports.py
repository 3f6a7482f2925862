import json

from coexist_sim.reports import ReportWriter, apply_precision, csv_text, fixed


# ----------------------
# apply_precision
# ----------------------


def test_fields_round_by_name() -> None:
    doc = {
        "raman_rate": 91327.4123456789,
        "qber_estimate": 0.45551234567,
        "std_offset_error_ps": 70.123456,
        "events": [{"time_s": 2.0251234567, "score": 12.34567}],
        "detection_snr": [13.709812, None],
        "rounds": 1000,
    }
    out = apply_precision(doc)
    assert out["raman_rate"] == 91327.41
    assert out["qber_estimate"] == 0.455512
    assert out["std_offset_error_ps"] == 70.123
    assert out["events"] == [{"time_s": 2.025123, "score": 12.346}]
    assert out["detection_snr"] == [13.7098, None]
    assert out["rounds"] == 1000


def test_total_rate_and_echoed_inputs_are_untouched() -> None:
    doc = {
        "budget": {"total_rate": 0.1 + 0.2},
        "settings": {"k_spont": 7.123456789123e-9},
        "scenario": {"link": {"elements": [{"length_km": 50.0000000001}]}},
    }
    assert apply_precision(doc) == doc


def test_unlisted_fields_keep_nine_digits() -> None:
    assert fixed(1.23456789123) == 1.23456789
    assert fixed(float("inf")) == float("inf")


def test_rounding_is_idempotent() -> None:
    once = apply_precision({"rate": 2363545.7123, "center_thz": 193.41450987})
    assert apply_precision(once) == once


# ----------------------
# csv_text / ReportWriter
# ----------------------


def test_csv_cells_round_by_column() -> None:
    text = csv_text(("time_s", "score"), [(2.0251234567, 12.34567), (None, 9.0)])
    assert text == "time_s,score\n2.025123,12.346\n,9.0\n"


def test_writer_applies_precision_to_json(tmp_path) -> None:
    writer = ReportWriter(tmp_path, "json")
    path = writer.json("r.json", {"mean_offset_error_ps": 1.23456, "settings": {"x": 1.23456}})
    assert json.loads(path.read_text()) == {"mean_offset_error_ps": 1.235, "settings": {"x": 1.23456}}
    assert writer.csv("r.csv", "a\n") is None
    assert writer.written == [path]
