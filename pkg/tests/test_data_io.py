import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boostray import (
    Dataset,
    DataError,
    FormatError,
    StratificationError,
    load_csv,
    load_fmx,
    stratified_holdout,
    stratified_kfold,
    write_csv,
    write_fmx,
)
from conftest import make_random_dataset


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestLoadCsv:
    def test_first_appearance_class_order(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, [
            "label,f0,f1",
            "covid,1.0,2.0",
            "normal,3.0,4.0",
            "covid,5.0,6.0",
        ])
        ds = load_csv(p)
        assert ds.n_rows == 3
        assert ds.n_cols == 2
        assert ds.n_classes == 2
        assert ds.class_names == ("covid", "normal")
        assert ds.labels.tolist() == [0, 1, 0]
        np.testing.assert_array_equal(
            ds.features, np.array([[1, 2], [3, 4], [5, 6]], dtype=np.float32)
        )

    def test_nan_cell_reports_row_and_col(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["label,f0,f1", "a,1.0,2.0", "b,NaN,4.0"])
        with pytest.raises(DataError, match=r"\(row 1, col 0\)"):
            load_csv(p)

    def test_unparsable_cell_reports_row_and_col(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["label,f0,f1", "a,1.0,oops", "b,2.0,4.0"])
        with pytest.raises(DataError, match=r"\(row 0, col 1\)"):
            load_csv(p)

    def test_ragged_row_reports_line_number(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["label,f0,f1", "a,1.0,2.0", "b,3.0"])
        with pytest.raises(FormatError, match="line 3"):
            load_csv(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("", encoding="utf-8")
        with pytest.raises(FormatError, match="empty"):
            load_csv(p)

    def test_header_only(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["label,f0"])
        with pytest.raises(FormatError, match="no data rows"):
            load_csv(p)

    def test_missing_label_header(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["f0,f1", "1.0,2.0"])
        with pytest.raises(FormatError, match="label"):
            load_csv(p)

    def test_infinite_value_rejected(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["label,f0", "a,1e999", "b,1.0"])
        with pytest.raises(DataError, match="non-finite"):
            load_csv(p)


class TestFmxFormat:
    def test_header_arithmetic_for_minimal_dataset(self, tmp_path):
        ds = Dataset(np.array([[1.5]], dtype=np.float32), np.array([0]), ("only",))
        p = tmp_path / "one.fmx"
        write_fmx(ds, p)
        # magic + version + n_rows + n_cols + n_classes = 4+4+8+8+4 bytes,
        # then one u32 label and one f32 feature
        assert p.stat().st_size == 28 + 4 + 4

    def test_round_trip_identity(self, tmp_path):
        ds = make_random_dataset(37, 11, 3, seed=5)
        p = tmp_path / "d.fmx"
        write_fmx(ds, p)
        back = load_fmx(p)
        assert back.class_names == ds.class_names
        np.testing.assert_array_equal(back.labels, ds.labels)
        assert back.features.tobytes() == ds.features.tobytes()

    def test_write_is_deterministic(self, tmp_path):
        ds = make_random_dataset(20, 6, 2, seed=9)
        a, b = tmp_path / "a.fmx", tmp_path / "b.fmx"
        write_fmx(ds, a)
        write_fmx(ds, b)
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.classes").read_bytes() == (tmp_path / "b.classes").read_bytes()

    def test_bad_magic(self, tmp_path):
        ds = make_random_dataset(4, 2, 2, seed=1)
        p = tmp_path / "d.fmx"
        write_fmx(ds, p)
        raw = bytearray(p.read_bytes())
        raw[:4] = b"FMX2"
        p.write_bytes(bytes(raw))
        with pytest.raises(FormatError, match="magic"):
            load_fmx(p)

    def test_bad_version(self, tmp_path):
        ds = make_random_dataset(4, 2, 2, seed=1)
        p = tmp_path / "d.fmx"
        write_fmx(ds, p)
        raw = bytearray(p.read_bytes())
        raw[4] = 9
        p.write_bytes(bytes(raw))
        with pytest.raises(FormatError, match="version"):
            load_fmx(p)

    def test_truncated_payload(self, tmp_path):
        ds = make_random_dataset(10, 3, 2, seed=2)
        p = tmp_path / "d.fmx"
        write_fmx(ds, p)
        raw = p.read_bytes()
        p.write_bytes(raw[:-5])
        with pytest.raises(FormatError, match="bytes"):
            load_fmx(p)

    def test_class_count_mismatch(self, tmp_path):
        ds = make_random_dataset(10, 3, 3, seed=2)
        p = tmp_path / "d.fmx"
        write_fmx(ds, p)
        (tmp_path / "d.classes").write_text("a\nb\n", encoding="utf-8")
        with pytest.raises(FormatError, match="class names"):
            load_fmx(p)

    def test_missing_classes_file(self, tmp_path):
        ds = make_random_dataset(5, 2, 2, seed=3)
        p = tmp_path / "d.fmx"
        write_fmx(ds, p)
        (tmp_path / "d.classes").unlink()
        with pytest.raises(FormatError, match="classes"):
            load_fmx(p)

    def test_csv_fmx_csv_full_precision(self, tmp_path):
        ds = make_random_dataset(25, 7, 2, seed=8)
        csv1 = tmp_path / "one.csv"
        write_csv(ds, csv1)
        loaded = load_csv(csv1)
        fmx = tmp_path / "via.fmx"
        write_fmx(loaded, fmx)
        csv2 = tmp_path / "two.csv"
        write_csv(load_fmx(fmx), csv2)
        assert csv1.read_bytes() == csv2.read_bytes()

    @settings(max_examples=25, deadline=None)
    @given(
        n_rows=st.integers(2, 30),
        n_cols=st.integers(1, 8),
        seed=st.integers(0, 10_000),
    )
    def test_round_trip_property(self, tmp_path_factory, n_rows, n_cols, seed):
        ds = make_random_dataset(n_rows, n_cols, 2, seed=seed)
        p = tmp_path_factory.mktemp("fmx") / "d.fmx"
        write_fmx(ds, p)
        back = load_fmx(p)
        assert back.features.tobytes() == ds.features.tobytes()
        np.testing.assert_array_equal(back.labels, ds.labels)
        assert back.class_names == ds.class_names


class TestDatasetValidation:
    def test_label_out_of_range(self):
        with pytest.raises(DataError, match="labels"):
            Dataset(np.ones((2, 2), dtype=np.float32), np.array([0, 2]), ("a", "b"))

    def test_absent_class(self):
        with pytest.raises(DataError, match="no rows"):
            Dataset(np.ones((2, 2), dtype=np.float32), np.array([0, 0]), ("a", "b"))

    def test_non_finite_features(self):
        X = np.ones((2, 2), dtype=np.float32)
        X[1, 1] = np.inf
        with pytest.raises(DataError, match="non-finite"):
            Dataset(X, np.array([0, 1]), ("a", "b"))

    def test_arrays_frozen(self):
        ds = make_random_dataset(4, 3, 2, seed=0)
        with pytest.raises(ValueError):
            ds.features[0, 0] = 1.0
        with pytest.raises(ValueError):
            ds.labels[0] = 1


def plan_is_partition(plan, n_rows):
    for train, test in plan.folds:
        assert np.all(np.diff(train) > 0)
        assert np.all(np.diff(test) > 0)
        assert np.intersect1d(train, test).size == 0
        combined = np.union1d(train, test)
        np.testing.assert_array_equal(combined, np.arange(n_rows))


class TestStratifiedKfold:
    def test_paper_shape_exact_fold_counts(self):
        # 500 + 125 rows, five folds -> every test fold holds 100 + 25
        ds = make_random_dataset(625, 3, 2, seed=42)
        labels = np.array([0] * 500 + [1] * 125, dtype=np.int32)
        ds = Dataset(np.asarray(ds.features), labels, ("no_finding", "covid"))
        plan = stratified_kfold(ds, k=5, seed=42)
        assert len(plan.folds) == 5
        for _, test in plan.folds:
            counts = np.bincount(ds.labels[test], minlength=2)
            assert counts.tolist() == [100, 25]
        plan_is_partition(plan, 625)

    def test_exact_divisibility(self):
        X = np.arange(12, dtype=np.float32).reshape(6, 2)
        ds = Dataset(X, np.array([0, 0, 0, 0, 1, 1]), ("a", "b"))
        plan = stratified_kfold(ds, k=2, seed=0)
        for _, test in plan.folds:
            counts = np.bincount(ds.labels[test], minlength=2)
            assert counts.tolist() == [2, 1]

    def test_determinism(self):
        ds = make_random_dataset(60, 4, 3, seed=7)
        p1 = stratified_kfold(ds, k=4, seed=123)
        p2 = stratified_kfold(ds, k=4, seed=123)
        for (tr1, te1), (tr2, te2) in zip(p1.folds, p2.folds):
            np.testing.assert_array_equal(tr1, tr2)
            np.testing.assert_array_equal(te1, te2)

    def test_seed_changes_assignment(self):
        ds = make_random_dataset(60, 4, 2, seed=7)
        p1 = stratified_kfold(ds, k=3, seed=1)
        p2 = stratified_kfold(ds, k=3, seed=2)
        assert any(
            not np.array_equal(a[1], b[1]) for a, b in zip(p1.folds, p2.folds)
        )

    def test_small_class_error_names_class(self):
        X = np.arange(10, dtype=np.float32).reshape(5, 2)
        ds = Dataset(X, np.array([0, 0, 0, 0, 1]), ("big", "tiny"))
        with pytest.raises(StratificationError, match="tiny"):
            stratified_kfold(ds, k=2, seed=0)

    def test_k_below_two(self):
        ds = make_random_dataset(10, 2, 2, seed=0)
        with pytest.raises(StratificationError, match="k"):
            stratified_kfold(ds, k=1, seed=0)

    @settings(max_examples=30, deadline=None)
    @given(
        seed=st.integers(0, 10_000),
        k=st.integers(2, 6),
        per_class=st.lists(st.integers(6, 25), min_size=2, max_size=4),
    )
    def test_partition_and_balance_properties(self, seed, k, per_class):
        labels = np.concatenate([
            np.full(c, i, dtype=np.int32) for i, c in enumerate(per_class)
        ])
        rng = np.random.default_rng(seed)
        labels = labels[rng.permutation(labels.size)]
        X = rng.standard_normal((labels.size, 2)).astype(np.float32)
        ds = Dataset(X, labels, tuple(f"c{i}" for i in range(len(per_class))))
        plan = stratified_kfold(ds, k=k, seed=seed)
        plan_is_partition(plan, labels.size)
        seen = np.concatenate([test for _, test in plan.folds])
        assert np.sort(seen).tolist() == list(range(labels.size))
        for _, test in plan.folds:
            counts = np.bincount(ds.labels[test], minlength=len(per_class))
            for cls, total in enumerate(per_class):
                assert abs(counts[cls] - total / k) <= 1


class TestStratifiedHoldout:
    def test_paper_shape_counts(self):
        labels = np.array([0] * 125 + [1] * 500 + [2] * 500, dtype=np.int32)
        rng = np.random.default_rng(0)
        X = rng.standard_normal((1125, 4)).astype(np.float32)
        ds = Dataset(X, labels, ("covid", "pneumonia", "no_finding"))
        plan = stratified_holdout(ds, test_fraction=0.2, seed=42)
        train, test = plan.folds[0]
        counts = np.bincount(ds.labels[test], minlength=3)
        assert counts.tolist() == [25, 100, 100]
        assert test.size == 225
        plan_is_partition(plan, 1125)

    def test_symmetric_half_split(self):
        X = np.arange(8, dtype=np.float32).reshape(4, 2)
        ds = Dataset(X, np.array([0, 0, 1, 1]), ("a", "b"))
        plan = stratified_holdout(ds, test_fraction=0.5, seed=3)
        _, test = plan.folds[0]
        counts = np.bincount(ds.labels[test], minlength=2)
        assert counts.tolist() == [1, 1]

    def test_class_emptied_is_error(self):
        X = np.arange(8, dtype=np.float32).reshape(4, 2)
        ds = Dataset(X, np.array([0, 0, 0, 1]), ("a", "b"))
        with pytest.raises(StratificationError, match="empty"):
            stratified_holdout(ds, test_fraction=0.9, seed=0)

    def test_fraction_bounds(self):
        ds = make_random_dataset(10, 2, 2, seed=0)
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(StratificationError):
                stratified_holdout(ds, test_fraction=bad, seed=0)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000), frac=st.floats(0.2, 0.8))
    def test_partition_property(self, seed, frac):
        ds = make_random_dataset(40, 3, 2, seed=seed)
        plan = stratified_holdout(ds, test_fraction=frac, seed=seed)
        plan_is_partition(plan, 40)
        _, test = plan.folds[0]
        assert test.size == int(np.floor(frac * 40 + 0.5))
