"""Lifted signals as a JSON header line followed by raw little-endian doubles."""
import pathlib

import numpy as np

from ..errors import ShapeMismatch
from ..models.lifted import LiftedHeader, LiftedSignal
from .base import Codec, PathLike


__all__ = ["LiftedCodec"]


class LiftedCodec(Codec[LiftedSignal]):
    """Row-major samples over (ρ, θ, u, w, sign, x-row, x-col)."""

    suffixes = (".lifted", ".bin")

    def read(self, path: PathLike) -> LiftedSignal:
        """Read a lifted signal.

        Raises:
            ShapeMismatch: if the payload does not match the header's charts.
        """
        data = pathlib.Path(path).read_bytes()
        newline = data.find(b"\n")
        if newline < 0:
            raise ValueError(f"{path} has no header line.")
        header = LiftedHeader.model_validate_json(data[:newline])
        values = np.frombuffer(data, dtype=header.dtype, offset=newline + 1)
        expected = header.chart.shape + tuple(header.spatial.shape)
        if tuple(header.shape) != expected or values.size != int(np.prod(expected)):
            raise ShapeMismatch(f"Payload of {values.size} samples does not fit charts of shape {expected}.")
        return LiftedSignal(
            values=values.reshape((header.chart.size,) + tuple(header.spatial.shape)),
            chart=header.chart,
            spatial=header.spatial,
        )

    def write(self, value: LiftedSignal, path: PathLike) -> None:
        header = LiftedHeader(
            shape=list(value.chart.shape + tuple(value.spatial.shape)),
            chart=value.chart,
            spatial=value.spatial,
        )
        payload = np.ascontiguousarray(value.values, dtype="<f8").tobytes()
        pathlib.Path(path).write_bytes(header.model_dump_json().encode("utf-8") + b"\n" + payload)
