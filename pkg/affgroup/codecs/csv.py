"""Grids as comma-separated text."""
import io
import pathlib

import numpy as np

from ..models.grid import Grid2
from .base import Codec, PathLike


__all__ = ["CSV_HEADER", "CSVCodec"]


CSV_HEADER = "H,W,origin_x,origin_y,spacing"


class CSVCodec(Codec[Grid2]):
    """Header row, a row with the header's values, then the samples row by row."""

    suffixes = (".csv",)

    def read(self, path: PathLike) -> Grid2:
        lines = pathlib.Path(path).read_text().splitlines()
        if lines and lines[0].strip().startswith("H"):
            lines = lines[1:]
        if not lines:
            raise ValueError(f"{path} holds no grid.")
        fields = lines[0].split(",")
        if len(fields) != 5:
            raise ValueError(f"Expected the five fields {CSV_HEADER}, got {lines[0]!r}.")
        rows, cols = int(fields[0]), int(fields[1])
        values = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2)
        if values.shape != (rows, cols):
            raise ValueError(f"Grid holds {values.shape} samples, header announces {(rows, cols)}.")
        return Grid2(values=values, origin=(float(fields[2]), float(fields[3])), spacing=float(fields[4]))

    def write(self, value: Grid2, path: PathLike) -> None:
        buffer = io.StringIO()
        buffer.write(CSV_HEADER + "\n")
        rows, cols = value.shape
        buffer.write(f"{rows},{cols},{value.origin[0]!r},{value.origin[1]!r},{value.spacing!r}\n")
        np.savetxt(buffer, value.values, delimiter=",", fmt="%.17g")
        pathlib.Path(path).write_text(buffer.getvalue())
