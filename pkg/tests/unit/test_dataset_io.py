"""
Unit tests for dataset CSV files and directory descriptors.
"""

import json

import numpy as np
import pytest

from wdro.constants import Split
from wdro.exceptions import DatasetIOError
from wdro.services.dataset_io import (
    META_FILENAME,
    truth_path,
    write_dataset,
    read_dataset,
    write_splits,
    read_splits,
)


class TestDatasetFiles:
    """Single split files."""

    def test_masked_split_reads_back_exactly(self, tmp_path, small_masked_train):
        path = write_dataset(small_masked_train, tmp_path / "train.csv")
        assert truth_path(path).exists()
        assert path.read_text().splitlines()[0] == "f0,f1,f2,f3,f4,y,g"

        restored = read_dataset(path, 3, Split.TRAIN)
        np.testing.assert_array_equal(restored.features, small_masked_train.features)
        np.testing.assert_array_equal(restored.labels, small_masked_train.labels)
        np.testing.assert_array_equal(restored.groups, small_masked_train.groups)
        np.testing.assert_array_equal(restored.true_groups, small_masked_train.true_groups)

    def test_fully_labeled_file_without_truth(self, tmp_path):
        path = tmp_path / "val.csv"
        path.write_text("f0,f1,y,g\n0.5,1.5,1,0\n-2,0.25,0,1\n")
        ds = read_dataset(path, 2, Split.VAL)
        np.testing.assert_array_equal(ds.true_groups, [0, 1])
        np.testing.assert_allclose(ds.features, [[0.5, 1.5], [-2.0, 0.25]])

    def test_missing_labels_need_truth(self, tmp_path):
        path = tmp_path / "train.csv"
        path.write_text("f0,f1,y,g\n0.5,1.5,1,-1\n-2,0.25,0,1\n")
        with pytest.raises(DatasetIOError, match="truth"):
            read_dataset(path, 2, Split.TRAIN)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetIOError) as exc_info:
            read_dataset(tmp_path / "nope.csv", 2, Split.TRAIN)
        assert exc_info.value.error_code == "IO_ERROR"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(DatasetIOError, match="header"):
            read_dataset(path, 2, Split.VAL)

    def test_out_of_range_group(self, tmp_path):
        path = tmp_path / "val.csv"
        path.write_text("f0,y,g\n0.5,1,4\n")
        with pytest.raises(DatasetIOError):
            read_dataset(path, 2, Split.VAL)


class TestSplitDirectories:
    """dataset.json descriptors."""

    def test_write_and_read_splits(self, tmp_path, small_splits, small_data_config):
        meta_path = write_splits(small_splits, tmp_path / "data", small_data_config)
        meta = json.loads(meta_path.read_text())
        assert meta["n_groups"] == 3
        assert meta["files"] == {"train": "train.csv", "val": "val.csv", "test": "test.csv"}

        restored = read_splits(tmp_path / "data")
        for split in Split:
            np.testing.assert_array_equal(restored[split].features, small_splits[split].features)
            np.testing.assert_array_equal(restored[split].groups, small_splits[split].groups)
            assert restored[split].split == split

    def test_missing_descriptor(self, tmp_path):
        with pytest.raises(DatasetIOError, match="descriptor"):
            read_splits(tmp_path)

    def test_descriptor_without_split(self, tmp_path):
        files = {"val": "val.csv", "test": "test.csv"}
        (tmp_path / META_FILENAME).write_text(json.dumps({"n_groups": 2, "files": files}))
        with pytest.raises(DatasetIOError, match="train"):
            read_splits(tmp_path)
