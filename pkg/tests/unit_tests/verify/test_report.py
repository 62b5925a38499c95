import numpy as np
import pytest

from wiener_convex.verify.report import CheckReport, jsonable


@pytest.mark.unit_test
def test_jsonable_converts_numpy_values():
    """Test numpy scalars and arrays become plain values and non finite floats become strings."""
    value = {
        1: np.float64(0.5),
        "array": np.arange(3),
        "flag": np.bool_(True),
        "count": np.int64(4),
        "bad": [np.nan, np.inf, -np.inf],
        "pair": (1.0, "a"),
    }
    assert jsonable(value) == {
        "1": 0.5,
        "array": [0, 1, 2],
        "flag": True,
        "count": 4,
        "bad": ["nan", "inf", "-inf"],
        "pair": [1.0, "a"],
    }
    assert type(jsonable(np.int64(4))) is int
    assert type(jsonable(np.bool_(False))) is bool


@pytest.mark.unit_test
def test_report_to_dict():
    """Test the report keeps its headline values and converts its details."""
    report = CheckReport(name="coarea", passed=True, measured=np.float64(1e-3), tolerance=0.01, details={"rows": np.ones(2)})
    assert report.to_dict() == {
        "name": "coarea",
        "passed": True,
        "measured": 1e-3,
        "tolerance": 0.01,
        "seed": None,
        "details": {"rows": [1.0, 1.0]},
    }
