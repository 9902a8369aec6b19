"""Sampling, the regular representation, norms and Fourier transforms of planar signals.

Fourier convention: F(u) = ∫ f(x) e^{−i2π⟨u,x⟩} dx in physical units, evaluated as a Riemann
sum over the grid including the phase of the grid origin. `idft` is its exact inverse.
"""
import logging
import typing

import numpy as np
from scipy import ndimage

from ..errors import ShapeMismatch, SingularMatrix
from ..models.grid import Grid2, GridGeometry, Spectrum2
from ..models.group import DET_EPSILON, AffineElement, Mat2
from .affine import apply, invert


__all__ = [
    "sample",
    "act",
    "norms",
    "dft",
    "idft",
    "dft_stack",
    "idft_stack",
    "circular_convolve",
    "affine_spectrum",
    "resample",
    "pad",
]


logger = logging.getLogger(__name__)


def sample(f: Grid2, points: typing.Any) -> typing.Union[float, np.ndarray]:
    """Bilinear interpolation of f at physical points; zero outside the grid extent.

    Args:
        f (Grid2): The signal.
        points (typing.Any): A point or an array of points of shape (..., 2).
    """
    points = np.asarray(points, dtype=float)
    index = f.geometry.to_index(points)
    flat = index.reshape(-1, 2).T
    values = ndimage.map_coordinates(f.values, flat, order=1, mode="constant", cval=0.0)
    if points.ndim == 1:
        return float(values[0])
    return values.reshape(points.shape[:-1])


def resample(f: Grid2, geometry: typing.Any) -> Grid2:
    """Sample f on the nodes of another grid geometry."""
    return Grid2.on(geometry, sample(f, geometry.points()))


def pad(f: Grid2, margin: int) -> Grid2:
    """Zero border of margin nodes around f, keeping the physical position of every sample."""
    if margin < 0:
        raise ValueError(f"Padding margin must be non-negative, got {margin}.")
    origin = (f.origin[0] - margin * f.spacing, f.origin[1] - margin * f.spacing)
    return Grid2(values=np.pad(f.values, margin), origin=origin, spacing=f.spacing)


def act(g: AffineElement, f: Grid2, det_epsilon: float = DET_EPSILON) -> Grid2:
    """Regular representation (ρ(g)f)(x) = f(g⁻¹x) on the grid of f.

    Raises:
        SingularMatrix: if g is not invertible.
    """
    source = apply(invert(g, det_epsilon), f.geometry.points())
    return f.with_values(sample(f, source))


def norms(f: Grid2) -> typing.Tuple[float, float]:
    """𝕃₁ norm (Σ|f|·spacing²) and sup norm of a sampled signal."""
    magnitude = np.abs(f.values)
    return float(magnitude.sum() * f.spacing ** 2), float(magnitude.max())


def _origin_phase(shape: typing.Tuple[int, int], origin: typing.Tuple[float, float], spacing: float) -> np.ndarray:
    u0 = np.fft.fftfreq(shape[0], spacing)[:, None]
    u1 = np.fft.fftfreq(shape[1], spacing)[None, :]
    return np.exp(-2j * np.pi * (u0 * origin[0] + u1 * origin[1]))


def dft_stack(values: np.ndarray, geometry: GridGeometry) -> np.ndarray:
    """`dft` of a stack of grids sharing one geometry, shape (..., H, W)."""
    phase = _origin_phase(geometry.shape, geometry.origin, geometry.spacing)
    return np.fft.fft2(values, axes=(-2, -1)) * geometry.spacing ** 2 * phase


def idft_stack(values: np.ndarray, geometry: GridGeometry) -> np.ndarray:
    """Complex `idft` of a stack of spectra belonging to one geometry."""
    phase = _origin_phase(geometry.shape, geometry.origin, geometry.spacing)
    return np.fft.ifft2(values / phase, axes=(-2, -1)) / geometry.spacing ** 2


def dft(f: Grid2) -> Spectrum2:
    """Transform of a grid under the module's Fourier convention."""
    return Spectrum2(values=dft_stack(f.values, f.geometry), origin=f.origin, spacing=f.spacing)


def idft(spectrum: Spectrum2, *, complex_values: bool = False) -> typing.Union[Grid2, np.ndarray]:
    """Inverse of `dft`, back onto the spectrum's spatial grid.

    Args:
        spectrum (Spectrum2): The spectrum.
        complex_values (bool): Return the raw complex samples instead of a real Grid2.
    """
    geometry = GridGeometry(shape=spectrum.shape, origin=spectrum.origin, spacing=spectrum.spacing)
    values = idft_stack(spectrum.values, geometry)
    if complex_values:
        return values
    return Grid2(values=values.real, origin=spectrum.origin, spacing=spectrum.spacing)


def circular_convolve(f: Grid2, k: Grid2) -> Grid2:
    """Direct circular convolution spacing²·Σ_m f[m]·k[n − m], evaluated by brute force.

    The result lives on a grid with origin `f.origin + k.origin`, so that
    `dft(circular_convolve(f, k)) = dft(f)·dft(k)`.

    Raises:
        ShapeMismatch: if the grids differ in shape or spacing.
    """
    if f.shape != k.shape or f.spacing != k.spacing:
        raise ShapeMismatch(f"Cannot convolve grids {f.shape}/{f.spacing} and {k.shape}/{k.spacing}.")
    out = np.zeros(f.shape)
    for (i, j), value in np.ndenumerate(f.values):
        if value != 0.0:
            out += value * np.roll(k.values, (i, j), axis=(0, 1))
    return Grid2(
        values=out * f.spacing ** 2,
        origin=(f.origin[0] + k.origin[0], f.origin[1] + k.origin[1]),
        spacing=f.spacing,
    )


def affine_spectrum(
    spectrum: Spectrum2,
    B: Mat2,
    det_epsilon: float = DET_EPSILON,
    *,
    shape: typing.Optional[typing.Tuple[int, int]] = None,
) -> Spectrum2:
    """Transform of x ↦ k₁(B⁻¹x) from the transform K₁ of k₁: |det B|·K₁(Bᵀu).

    K₁ is resampled at Bᵀu by bilinear interpolation in frequency space; frequencies outside
    the sampled band are taken as zero.

    Args:
        spectrum (Spectrum2): Transform K₁.
        B (Mat2): The warp.
        det_epsilon (float): Singularity threshold.
        shape (typing.Optional[typing.Tuple[int, int]]): Evaluate at the frequencies of a grid of
            this shape and the same spacing, centered at the origin, instead of the input's own.

    Raises:
        SingularMatrix: if B is not invertible.
    """
    det = B.det
    if not abs(det) > det_epsilon:
        raise SingularMatrix(f"Matrix {B.to_array().tolist()} has |det| = {abs(det):.3e}.")
    h, w = spectrum.shape
    du = np.asarray(spectrum.frequency_spacing)
    start = np.array([-(h // 2), -(w // 2)]) * du
    target = spectrum
    if shape is not None:
        target = Spectrum2(
            values=np.zeros(shape),
            origin=GridGeometry.centered(shape, spectrum.spacing).origin,
            spacing=spectrum.spacing,
        )
    query = target.frequencies() @ B.to_array()
    coords = ((query - start) / du).reshape(-1, 2).T
    shifted = np.fft.fftshift(spectrum.values)
    real = ndimage.map_coordinates(shifted.real, coords, order=1, mode="constant", cval=0.0)
    imag = ndimage.map_coordinates(shifted.imag, coords, order=1, mode="constant", cval=0.0)
    values = abs(det) * (real + 1j * imag).reshape(target.shape)
    return target.with_values(values)
