"""Readers and writers of grids and lifted signals."""

from .base import *
from .pgm import *
from .csv import *
from .lifted import *


def grid_codec_for(path: PathLike, *, binary: bool = False) -> Codec:
    """Grid codec chosen by file suffix.

    Raises:
        ValueError: if the suffix is not a grid format.
    """
    for codec in (PGMCodec(binary=binary), CSVCodec()):
        if codec.accepts(path):
            return codec
    raise ValueError(f"Cannot tell the grid format of {str(path)!r}; use .pgm or .csv.")
