"""Figure rendering for dicke-g2 CSV sweep outputs.

Pure post-processing: reads the CSV files written by the dicke-g2 CLI and
renders deterministic PNG figures. No physics is recomputed here.
"""

from .csvin import CsvFormatError, read_csv
from .figures import (FigureSpec, MissingColumnError, NoDataError, render)

__all__ = [
    "CsvFormatError",
    "FigureSpec",
    "MissingColumnError",
    "NoDataError",
    "read_csv",
    "render",
]
