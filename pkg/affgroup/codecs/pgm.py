"""Portable graymap images (P2 ASCII and P5 binary)."""
import logging
import pathlib
import typing

import numpy as np

from ..models.grid import Grid2
from .base import Codec, PathLike


__all__ = ["PGMCodec"]

logger = logging.getLogger(__name__)


def _header(data: bytes) -> typing.Tuple[typing.List[bytes], int]:
    """Magic, width, height and maxval tokens, and the offset just past the header."""
    tokens: typing.List[bytes] = []
    position = 0
    while len(tokens) < 4:
        while position < len(data) and data[position:position + 1].isspace():
            position += 1
        if data[position:position + 1] == b"#":
            while position < len(data) and data[position:position + 1] not in (b"\n", b"\r"):
                position += 1
            continue
        start = position
        while position < len(data) and not data[position:position + 1].isspace():
            position += 1
        if start == position:
            raise ValueError("Truncated PGM header.")
        tokens.append(data[start:position])
    # A single whitespace byte separates the header from P5 raster data.
    return tokens, position + 1


class PGMCodec(Codec[Grid2]):
    """PGM images as grids of values in [0, 1] on a centered unit grid."""

    suffixes = (".pgm",)

    def __init__(self, *, binary: bool = False, maxval: int = 255) -> None:
        """Initialize the codec.

        Args:
            binary (bool): Write P5 instead of P2.
            maxval (int): Largest gray level written, at most 65535.
        """
        if not 0 < maxval < 65536:
            raise ValueError(f"PGM maxval must lie in [1, 65535], got {maxval}.")
        self.binary = binary
        self.maxval = maxval

    def read(self, path: PathLike) -> Grid2:
        data = pathlib.Path(path).read_bytes()
        (magic, width, height, maxval), offset = _header(data)
        width, height, maxval = int(width), int(height), int(maxval)
        count = width * height
        if magic == b"P2":
            levels = np.array(data[offset:].split()[:count], dtype=float)
        elif magic == b"P5":
            dtype = ">u1" if maxval < 256 else ">u2"
            levels = np.frombuffer(data, dtype=dtype, count=count, offset=offset).astype(float)
        else:
            raise ValueError(f"Unsupported PGM magic {magic!r}.")
        if levels.size != count:
            raise ValueError(f"PGM raster holds {levels.size} samples, header announces {count}.")
        return Grid2.centered(levels.reshape(height, width) / maxval)

    def write(self, value: Grid2, path: PathLike) -> None:
        """Write values clipped to [0, 1] and quantized to maxval levels.

        Logs a warning when samples fall outside [0, 1].
        """
        outside = np.count_nonzero((value.values < 0.0) | (value.values > 1.0))
        if outside:
            logger.warning("Clipping %d of %d samples to [0, 1] while writing %s.", outside, value.values.size, path)
        levels = np.rint(np.clip(value.values, 0.0, 1.0) * self.maxval).astype(int)
        height, width = levels.shape
        header = f"{'P5' if self.binary else 'P2'}\n{width} {height}\n{self.maxval}\n".encode("ascii")
        if self.binary:
            raster = levels.astype(">u1" if self.maxval < 256 else ">u2").tobytes()
        else:
            raster = "\n".join(" ".join(str(level) for level in row) for row in levels).encode("ascii") + b"\n"
        pathlib.Path(path).write_bytes(header + raster)
