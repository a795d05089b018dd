import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from riemstats import DataTable, InputError, PipelineConfig, emit_csv, load_csv, standardize


def test_students_fixture_rows(students):
    assert students.n == 10 and students.p == 5
    assert students.col_labels == ("Math", "Science", "Spanish", "History", "Phys. Ed.")
    i = students.row_labels.index("Lucía")
    assert students.values[i].tolist() == [7.0, 6.5, 9.2, 8.6, 8.0]
    assert students.row_labels[-1] == "María"


def test_header_only_rejected():
    with pytest.raises(InputError, match="fewer than 3 rows"):
        load_csv(b"a,b\n")


def test_minimal_single_column():
    t = load_csv("x\n1\n2\n3\n")
    assert t.p == 1 and t.n == 3
    assert t.values[:, 0].tolist() == [1.0, 2.0, 3.0]


def test_non_numeric_cell():
    with pytest.raises(InputError, match="non-numeric"):
        load_csv("id,a\nr1,1\nr2,oops\nr3,3\n")


def test_duplicate_labels():
    with pytest.raises(InputError, match="duplicate"):
        load_csv("id,a\nr1,1\nr1,2\nr3,3\n")
    with pytest.raises(InputError, match="duplicate"):
        load_csv("id,a,a\nr1,1,1\nr2,2,2\nr3,3,3\n")


def test_missing_value_rejected():
    with pytest.raises(InputError):
        load_csv("id,a\nr1,1\nr2,\nr3,3\n")


def test_stream_input():
    t = load_csv(io.BytesIO("n,v\nα,1\nβ,2\nγ,4\n".encode()))
    assert t.row_labels == ("α", "β", "γ")


def test_standardize_none_is_identity(students):
    assert standardize(students, "none") is students


def test_standardize_zscore_hand_values():
    t = DataTable.from_array([[1.0], [2.0], [3.0]])
    z = standardize(t, "zscore").values[:, 0]
    # population sd of (1, 2, 3) is sqrt(2/3)
    expected = [-math.sqrt(1.5), 0.0, math.sqrt(1.5)]
    np.testing.assert_allclose(z, expected, atol=1e-15)
    np.testing.assert_allclose(z, [-1.2247, 0.0, 1.2247], atol=1e-4)


def test_standardize_constant_column():
    t = DataTable.from_array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
    with pytest.raises(InputError, match="constant"):
        standardize(t, "zscore")


def test_config_validation(students):
    with pytest.raises(InputError):
        PipelineConfig(min_dist=-1)
    with pytest.raises(InputError):
        PipelineConfig(n_epochs=0)
    with pytest.raises(InputError):
        PipelineConfig(embedding_dim=1)
    with pytest.raises(InputError, match="k out of range"):
        PipelineConfig(k=10).check_against(students)
    PipelineConfig(k=9).check_against(students)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(3, 12), st.integers(1, 5)), elements=finite))
def test_csv_round_trip(values):
    t = DataTable.from_array(values)
    assert load_csv(emit_csv(t)) == t


def test_round_trip_numeric_labels():
    t = DataTable.from_array(np.arange(6.0).reshape(3, 2), row_labels=["1", "2", "3"])
    assert load_csv(emit_csv(t)) == t


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(3, 30), st.integers(1, 4)), elements=st.floats(-100, 100)))
def test_zscore_moments(values):
    t = DataTable.from_array(values)
    if np.any(values.std(axis=0) < 1e-3):
        return
    z = standardize(t, "zscore").values
    assert np.all(np.abs(z.mean(axis=0)) < 1e-12)
    assert np.all(np.abs(z.std(axis=0) - 1) < 1e-12)
