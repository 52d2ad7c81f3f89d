"""
CSV tables: numeric column readers and fixed-precision writers
"""
import logging
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd

from app.core.exceptions import DataError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"


def read_numeric_csv(
    path: str | Path, required: Sequence[str], optional: Sequence[str] = ()
) -> Dict[str, np.ndarray]:
    """
    Read the named columns as floats.

    Raises DataError naming the first offending row (1-based, header is row 1).
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError as exc:
        raise DataError(f"{path}: file not found") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: not a readable CSV table ({exc})") from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DataError(
            f"{path}: missing column(s) {', '.join(missing)}; found {', '.join(frame.columns)}",
            detail={"missing": missing},
        )

    columns: Dict[str, np.ndarray] = {}
    for name in list(required) + [c for c in optional if c in frame.columns]:
        raw = frame[name].str.strip()
        values = pd.to_numeric(raw, errors="coerce")
        bad = values.isna() | ~np.isfinite(values.to_numpy(dtype=float, na_value=np.nan))
        if bad.any():
            index = int(np.flatnonzero(bad.to_numpy())[0])
            raise DataError(
                f"{path}: row {index + 2}: column {name!r} has non-numeric value {raw.iloc[index]!r}",
                detail={"row": index + 2, "column": name},
            )
        # to_numeric may round the last digit; float() parses exactly
        columns[name] = raw.map(float).to_numpy(dtype=float)
    logger.debug(f"read {len(frame)} rows from {path}")
    return columns


def write_csv(frame: pd.DataFrame, path: Optional[str | Path] = None) -> str:
    """Write with 17 significant digits; NaN becomes an empty cell. Returns the CSV text."""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
