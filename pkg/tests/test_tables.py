"""
Test the CSV table reader and writer
"""
import numpy as np
import pandas as pd
import pytest

from app.core.exceptions import DataError
from app.services.tables import read_numeric_csv, write_csv


class TestNumericCsv:
    """Numeric column parsing"""

    def test_written_floats_read_back_exactly(self, tmp_path):
        rng = np.random.default_rng(11)
        values = np.concatenate([
            rng.standard_normal(500) * 10.0 ** rng.integers(-30, 30, 500),
            [0.1, 1.0 / 3.0, 2.0 / 3.0, 7.65e9, 195.55e12, -4.0e9, 5e-324],
        ])
        path = tmp_path / "table.csv"
        write_csv(pd.DataFrame({"delta_hz": values}), path)
        loaded = read_numeric_csv(path, ["delta_hz"])["delta_hz"]
        assert np.array_equal(loaded, values)

    def test_blank_cells_are_stripped(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("delta_hz , reflection\n 1.5e9 ,0.25\n-2e9, 1\n")
        columns = read_numeric_csv(path, ["delta_hz", "reflection"])
        np.testing.assert_array_equal(columns["delta_hz"], [1.5e9, -2e9])
        np.testing.assert_array_equal(columns["reflection"], [0.25, 1.0])

    def test_optional_column(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("delta_hz,reflection\n0,1\n")
        assert set(read_numeric_csv(path, ["delta_hz"], optional=["sigma", "reflection"])) == {"delta_hz", "reflection"}

    @pytest.mark.parametrize("cell", ["abc", "nan", "inf", ""])
    def test_bad_cell_names_row(self, tmp_path, cell):
        path = tmp_path / "table.csv"
        path.write_text(f"delta_hz,reflection\n0,1\n1,{cell}\n")
        with pytest.raises(DataError, match="row 3"):
            read_numeric_csv(path, ["delta_hz", "reflection"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            read_numeric_csv(tmp_path / "absent.csv", ["delta_hz"])
