"""Brute-force alignment of two planar signals over G₂."""
import itertools
import logging
import math
import typing

import numpy as np
from scipy import ndimage

from ..errors import EmptySearchBox, ShapeMismatch
from ..models.config import SearchBox
from ..models.grid import Grid2
from ..models.group import AffineElement
from ..models.report import AlignmentResult
from .affine import batch_inverse, from_chart
from .signal import act, norms
from .workers import map_chunks


__all__ = ["element_from_params", "oracle_align"]


logger = logging.getLogger(__name__)

Params = typing.Tuple[float, float, float, float, float, float]


def element_from_params(params: typing.Sequence[float]) -> AffineElement:
    """Group element for search coordinates (tx, ty, ρ, θ, u, w), with v = e^w > 0."""
    tx, ty, rho, theta, u, w = (float(p) for p in params)
    radius = math.exp(rho)
    A = from_chart(radius * math.cos(theta), radius * math.sin(theta), u, math.exp(w))
    return AffineElement(x=(tx, ty), A=A)


def _matrix(rho: float, theta: float, u: float, w: float) -> np.ndarray:
    return element_from_params((0.0, 0.0, rho, theta, u, w)).A.to_array()


def _residuals(f1: Grid2, f2: Grid2, translations: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """‖f₁ − ρ([t, A])f₂‖₁ for one matrix and a stack of translations t."""
    points = f1.geometry.points()
    inverse = batch_inverse(matrix[None])[0]
    source = (points[None] - translations[:, None, None, :]) @ inverse.T
    index = f2.geometry.to_index(source)
    coords = np.moveaxis(index, -1, 0).reshape(2, -1)
    warped = ndimage.map_coordinates(f2.values, coords, order=1, mode="constant", cval=0.0)
    warped = warped.reshape((len(translations),) + f1.shape)
    return np.abs(f1.values[None] - warped).sum(axis=(1, 2)) * f1.spacing ** 2


def _objective(f1: Grid2, f2: Grid2, params: typing.Sequence[float]) -> float:
    translation = np.array([params[:2]], dtype=float)
    return float(_residuals(f1, f2, translation, _matrix(*params[2:]))[0])


def oracle_align(f1: Grid2, f2: Grid2, box: typing.Optional[SearchBox] = None) -> AlignmentResult:
    """Find g minimizing ‖f₁ − ρ(g)f₂‖₁ over a search box.

    A grid search over all box nodes is followed by coordinate descent whose step starts at half the
    grid step of each axis and halves again at every level. The result is deterministic.

    The search runs over the positive branch v = e^w of the chart only, so every candidate has
    det A > 0 and orientation-reversing alignments are out of reach.

    Args:
        f1 (Grid2): Reference signal.
        f2 (Grid2): Signal to move onto f1, on the same grid.
        box (typing.Optional[SearchBox]): Search ranges and refinement depth.

    Raises:
        EmptySearchBox: if an axis has no nodes.
        ShapeMismatch: if the grids differ.
    """
    box = box or SearchBox()
    if f1.geometry != f2.geometry:
        raise ShapeMismatch(f"Grids {f1.geometry} and {f2.geometry} differ.")
    axes = box.axes()
    if any(axis.count < 1 or axis.hi < axis.lo for axis in axes):
        raise EmptySearchBox(f"Search box {box} has an empty axis.")

    translations = np.array(list(itertools.product(axes[0].nodes(), axes[1].nodes())), dtype=float)
    linear = list(itertools.product(*(axis.nodes() for axis in axes[2:])))
    logger.debug("Searching %d translations × %d matrices.", len(translations), len(linear))

    def search(start: int, stop: int) -> typing.Tuple[float, Params]:
        best: typing.Tuple[float, Params] = (math.inf, (0.0,) * 6)
        for params in linear[start:stop]:
            residuals = _residuals(f1, f2, translations, _matrix(*params))
            i = int(np.argmin(residuals))
            if residuals[i] < best[0]:
                best = (float(residuals[i]), tuple(translations[i]) + tuple(params))
        return best

    # Ties resolve to the earliest node in search order.
    residual, best = min(map_chunks(search, len(linear), 16), key=lambda item: item[0])

    steps = [axis.step if axis.count > 1 else 0.0 for axis in axes]
    current = list(best)
    for _ in range(box.levels):
        steps = [step / 2.0 for step in steps]
        for i, step in enumerate(steps):
            if step == 0.0:
                continue
            for candidate in (current[i] - step, current[i] + step):
                trial = current.copy()
                trial[i] = candidate
                value = _objective(f1, f2, trial)
                if value < residual:
                    residual, current = value, trial

    g = element_from_params(current)
    difference = f1.values - act(g, f2).values
    l1, sup = norms(f1.with_values(difference))
    return AlignmentResult(g=g, params=tuple(current), residual_l1=l1, residual_sup=sup)
