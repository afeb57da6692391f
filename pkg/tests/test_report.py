import pytest

from qschur.report import Mismatch, VerificationReport, series_mismatch, table_mismatch
from qschur.series import MultiSeries, TruncationBox


def test_json_round_trip():
    rep = VerificationReport("x", {"r": 2}, {"r": 2, "qmax": 3}, {"r": 2, "qmax": 2}, "fail",
                             Mismatch([1, 0], 3, 4), ["a note"])
    back = VerificationReport.from_json(rep.to_json())
    assert back == rep
    assert rep.to_dict()["schema"] == 1


def test_pass_cannot_carry_mismatch():
    with pytest.raises(ValueError):
        VerificationReport("x", status="pass", mismatch=Mismatch(0, 1, 2))


def test_unknown_schema_rejected():
    d = VerificationReport("x").to_dict()
    d["schema"] = 2
    with pytest.raises(ValueError):
        VerificationReport.from_dict(d)


def test_first_mismatch_is_smallest_key():
    assert table_mismatch({(1,): 1, (2,): 5}, {(2,): 4, (0,): 1}).key == [0]
    box = TruncationBox(r=1, qmax=4)
    a = MultiSeries.monomial(box, q=3) + MultiSeries.monomial(box, q=1)
    mm = series_mismatch(a, MultiSeries.monomial(box, q=3))
    assert mm.key == [1, 0, 0, 0] and (mm.lhs, mm.rhs) == (1, 0)
