"""Dataset container, validation, normalization, and manifest I/O tests."""

import numpy as np
import pytest

from mvclust.data import (
    EmptyDatasetError,
    LabelValueError,
    ManifestError,
    MatrixFormatError,
    MultiViewDataset,
    NonFiniteValueError,
    RowCountMismatchError,
    load_dataset,
    minmax_normalize,
    parse_manifest,
    restrict,
    save_dataset,
    validate,
)


def two_view_dataset(n=4, labels=True):
    rng = np.random.default_rng(0)
    views = [rng.normal(size=(n, 2)), rng.normal(size=(n, 3))]
    lab = np.arange(n) % 2 if labels else None
    return MultiViewDataset(views, lab, ("left", "right"))


# ------------------------------------------------------------------ container


def test_dataset_shape_properties():
    ds = two_view_dataset()
    assert ds.n_samples == 4
    assert ds.n_views == 2
    assert ds.dims == [2, 3]
    assert ds.view_names == ("left", "right")


def test_dataset_views_are_immutable():
    ds = two_view_dataset()
    with pytest.raises(ValueError):
        ds.views[0][0, 0] = 99.0
    with pytest.raises(ValueError):
        ds.labels[0] = 5


def test_dataset_copies_input_arrays():
    src = np.ones((3, 2))
    ds = MultiViewDataset([src])
    src[0, 0] = -1.0
    assert ds.views[0][0, 0] == 1.0


# ----------------------------------------------------------------- validation


def test_validate_accepts_well_formed_dataset():
    validate(two_view_dataset())


def test_validate_rejects_empty_view_list():
    with pytest.raises(EmptyDatasetError):
        validate(MultiViewDataset([]))


def test_validate_rejects_zero_column_view():
    with pytest.raises(EmptyDatasetError):
        validate(MultiViewDataset([np.ones((3, 1)), np.ones((3, 0))]))


def test_validate_rejects_row_count_mismatch():
    with pytest.raises(RowCountMismatchError):
        validate(MultiViewDataset([np.ones((4, 2)), np.ones((5, 2))]))


def test_validate_reports_nonfinite_coordinates():
    X = np.ones((3, 2))
    X[1, 0] = np.nan
    with pytest.raises(NonFiniteValueError) as err:
        validate(MultiViewDataset([np.ones((3, 2)), X]))
    assert (err.value.view, err.value.row, err.value.col) == (1, 1, 0)


def test_validate_rejects_label_length_mismatch():
    with pytest.raises(RowCountMismatchError):
        validate(MultiViewDataset([np.ones((4, 2))], labels=[0, 1, 0]))


def test_validate_rejects_sparse_label_alphabet():
    # class 1 never occurs
    with pytest.raises(LabelValueError):
        validate(MultiViewDataset([np.ones((3, 2))], labels=[0, 2, 0]))
    with pytest.raises(LabelValueError):
        validate(MultiViewDataset([np.ones((3, 2))], labels=[-1, 0, 1]))


# -------------------------------------------------------------- normalization


def test_minmax_maps_column_to_unit_interval():
    ds = MultiViewDataset([np.array([[0.0], [5.0], [10.0]])])
    normed, record = minmax_normalize(ds)
    assert normed.views[0][:, 0].tolist() == [0.0, 0.5, 1.0]
    assert record.mins[0][0] == 0.0 and record.maxs[0][0] == 10.0


def test_minmax_constant_column_becomes_half():
    ds = MultiViewDataset([np.array([[7.0, 1.0], [7.0, 3.0], [7.0, 2.0]])])
    normed, _ = minmax_normalize(ds)
    assert normed.views[0][:, 0].tolist() == [0.5, 0.5, 0.5]


def test_minmax_identity_on_unit_interval_column():
    ds = MultiViewDataset([np.array([[0.0], [0.25], [1.0]])])
    normed, record = minmax_normalize(ds)
    np.testing.assert_allclose(normed.views[0], ds.views[0])
    assert (record.mins[0][0], record.maxs[0][0]) == (0.0, 1.0)


def test_minmax_idempotent():
    ds = two_view_dataset(n=20)
    once, _ = minmax_normalize(ds)
    twice, _ = minmax_normalize(once)
    for a, b in zip(once.views, twice.views):
        np.testing.assert_allclose(a, b, atol=1e-12)


def test_minmax_preserves_column_order():
    rng = np.random.default_rng(3)
    ds = MultiViewDataset([rng.normal(size=(30, 4))])
    normed, _ = minmax_normalize(ds)
    for j in range(4):
        raw_order = np.argsort(ds.views[0][:, j], kind="stable")
        new_order = np.argsort(normed.views[0][:, j], kind="stable")
        assert (raw_order == new_order).all()


def test_minmax_preserves_labels_and_validates():
    ds = two_view_dataset()
    normed, _ = minmax_normalize(ds)
    validate(normed)
    assert (normed.labels == ds.labels).all()
    for X in normed.views:
        assert X.min() >= 0.0 and X.max() <= 1.0


def test_record_replays_onto_other_data():
    ds = MultiViewDataset([np.array([[0.0], [10.0]])])
    _, record = minmax_normalize(ds)
    other = MultiViewDataset([np.array([[5.0], [20.0]])])
    replayed = record.apply(other)
    assert replayed.views[0][:, 0].tolist() == [0.5, 2.0]


# ------------------------------------------------------------------- file I/O


def test_save_load_round_trip(tmp_path):
    ds = two_view_dataset(n=6)
    manifest = save_dataset(ds, tmp_path)
    back = load_dataset(manifest)
    assert back.n_views == 2 and back.dims == ds.dims
    for a, b in zip(ds.views, back.views):
        np.testing.assert_array_equal(a, b)
    assert (back.labels == ds.labels).all()
    assert back.view_names == ds.view_names


def test_load_hand_written_manifest(tmp_path):
    (tmp_path / "a.csv").write_text("1,2\n3,4\n5,6\n7,8\n")
    (tmp_path / "b.csv").write_text("0,1\n1,0\n0,0\n1,1\n")
    (tmp_path / "y.txt").write_text("0\n1\n0\n1\n")
    (tmp_path / "m.cfg").write_text(
        "# comment\nview = a.csv\nview = b.csv\nlabels = y.txt\nname.1 = first\n"
    )
    ds = load_dataset(tmp_path / "m.cfg")
    assert ds.n_samples == 4 and ds.dims == [2, 2]
    assert ds.views[0][3, 1] == 8.0
    assert ds.view_names[0] == "first"


def test_load_shifts_one_based_labels(tmp_path):
    (tmp_path / "a.csv").write_text("1\n2\n3\n")
    (tmp_path / "y.txt").write_text("1\n2\n1\n")
    (tmp_path / "m.cfg").write_text("view = a.csv\nlabels = y.txt\n")
    ds = load_dataset(tmp_path / "m.cfg")
    assert ds.labels.tolist() == [0, 1, 0]


def test_load_rejects_row_count_mismatch(tmp_path):
    (tmp_path / "a.csv").write_text("1\n2\n3\n4\n")
    (tmp_path / "b.csv").write_text("1\n2\n3\n4\n5\n")
    (tmp_path / "m.cfg").write_text("view = a.csv\nview = b.csv\n")
    with pytest.raises(RowCountMismatchError):
        load_dataset(tmp_path / "m.cfg")


def test_load_reports_missing_file_with_path(tmp_path):
    (tmp_path / "m.cfg").write_text("view = gone.csv\n")
    with pytest.raises(ManifestError) as err:
        load_dataset(tmp_path / "m.cfg")
    assert "gone.csv" in str(err.value)


def test_load_reports_ragged_row_with_line_number(tmp_path):
    (tmp_path / "a.csv").write_text("1,2\n3\n")
    (tmp_path / "m.cfg").write_text("view = a.csv\n")
    with pytest.raises(MatrixFormatError) as err:
        load_dataset(tmp_path / "m.cfg")
    assert err.value.line_no == 2


def test_load_reports_non_numeric_cell(tmp_path):
    (tmp_path / "a.csv").write_text("1,2\n3,oops\n")
    (tmp_path / "m.cfg").write_text("view = a.csv\n")
    with pytest.raises(MatrixFormatError) as err:
        load_dataset(tmp_path / "m.cfg")
    assert "oops" in str(err.value) and err.value.line_no == 2


def test_manifest_rejects_unknown_key(tmp_path):
    (tmp_path / "m.cfg").write_text("view = a.csv\nbogus = 1\n")
    with pytest.raises(ManifestError):
        parse_manifest(tmp_path / "m.cfg")


def test_manifest_requires_views(tmp_path):
    (tmp_path / "m.cfg").write_text("labels = y.txt\n")
    with pytest.raises(ManifestError):
        parse_manifest(tmp_path / "m.cfg")


def test_loaded_dataset_passes_later_validation(tmp_path):
    # load -> validate -> normalize -> validate is total
    ds = two_view_dataset(n=5)
    back = load_dataset(save_dataset(ds, tmp_path))
    validate(back)
    normed, _ = minmax_normalize(back)
    validate(normed)


# ------------------------------------------------------------------- restrict


def test_restrict_keeps_selected_views_and_columns():
    ds = two_view_dataset(n=5)
    out = restrict(ds, [1], [np.array([0, 2])])
    assert out.n_views == 1 and out.dims == [2]
    np.testing.assert_array_equal(out.views[0], ds.views[1][:, [0, 2]])
    assert out.view_names == ("right",)
    assert (out.labels == ds.labels).all()
