"""CSV output for analysis tables."""

import logging
import sys
from pathlib import Path
from typing import Optional

import pandas as pd

logger = logging.getLogger(__name__)


def write_table(frame: pd.DataFrame, out: Optional[Path] = None) -> None:
    """Write a table as CSV to `out`, or to stdout when no path is given."""
    if out is None:
        frame.to_csv(sys.stdout, index=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    logger.info(f"Table written - path: {out}, rows: {len(frame)}")
