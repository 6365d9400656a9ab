import math

import numpy as np
import pytest

from monopsony_lab import ModelDomainError, Status
from monopsony_lab.csvio import format_value, read_csv, read_studies, write_csv


def test_empty_table_is_header_only(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(["a", "b"], [], path)
    assert path.read_bytes() == b"a,b\n"


def test_shortest_round_trip_formatting(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(["x", "y"], [[1.0, 0.5]], path)
    assert path.read_bytes() == b"x,y\n1,0.5\n"


@pytest.mark.parametrize(
    "value, text",
    [(None, ""), (Status.FORMAL, "formal"), (np.float64(2.0), "2"), (math.nan, "nan"), (-math.inf, "-inf"), (3, "3"), (1e-300, "1e-300")],
)
def test_format_value(value, text):
    assert format_value(value) == text


def test_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    table = rng.normal(size=(50, 3)) * 10.0 ** rng.integers(-12, 12, size=(50, 3))
    path = tmp_path / "t.csv"
    write_csv(["a", "b", "c"], table.tolist(), path)
    header, rows = read_csv(path)
    assert header == ["a", "b", "c"]
    back = np.array([[float(v) for v in row] for row in rows])
    assert back.tobytes() == table.tobytes()
    assert b"\r" not in path.read_bytes()


def test_ragged_row_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_csv(["a", "b"], [[1]], tmp_path / "t.csv")


def test_read_studies(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("effect,se\n0.1,0.2\n-0.3,0.05\n", encoding="utf-8")
    studies = read_studies(path)
    assert [(s.effect, s.se) for s in studies] == [(0.1, 0.2), (-0.3, 0.05)]


@pytest.mark.parametrize("text", ["se,effect\n0.1,0.2\n", "effect,se\n0.1\n", "effect,se\n0.1,0\n", "effect,se\nx,0.1\n"])
def test_read_studies_rejects_bad_input(tmp_path, text):
    path = tmp_path / "s.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ModelDomainError):
        read_studies(path)
