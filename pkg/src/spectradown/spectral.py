"""2D Fourier analysis: PSD estimation, wavenumber grids, spectral
differentiation and radial binning.

Wavenumber convention: mode indices map to *signed* frequencies in
[-N/2, N/2) (numpy's fftfreq layout). Physical wavenumbers are

    kappa_x = 2*pi*s(k_w) / (W*dx),    kappa_y = 2*pi*s(k_h) / (H*dx),

and the dimensionless isotropic index is k = sqrt(s_h^2 + s_w^2). The
forward transform is unnormalized, so PSD = |F|^2 / (H*W*dx).

Derivative operators zero the Nyquist wavenumber on even-sized axes:
multiplying the unpaired Nyquist mode by i*kappa would make the result
complex, so it is dropped (standard pseudospectral practice).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TooFewBinsError
from .fields import GridField, single_channel_field
from .validation import check_channel, check_grid_dims, check_spacing


@dataclass(frozen=True)
class Spectrum:
    """Full two-sided complex DFT coefficients of one channel."""

    coeffs: np.ndarray  # complex128, (H, W)
    dx: float

    @property
    def height(self) -> int:
        return self.coeffs.shape[0]

    @property
    def width(self) -> int:
        return self.coeffs.shape[1]


@dataclass(frozen=True)
class PSDGrid:
    """Per-mode power density |F|^2 / (H*W*dx)."""

    power: np.ndarray  # float64, (H, W)
    dx: float

    @property
    def height(self) -> int:
        return self.power.shape[0]

    @property
    def width(self) -> int:
        return self.power.shape[1]


@dataclass(frozen=True)
class WavenumberGrid:
    """Signed physical wavenumbers (rad/m) and dimensionless isotropic index."""

    kappa_x: np.ndarray
    kappa_y: np.ndarray
    kappa: np.ndarray
    k_index: np.ndarray


@dataclass(frozen=True)
class RadialSpectrum:
    """Isotropically binned 1D reduction of a PSD grid (DC excluded)."""

    bin_centers: np.ndarray
    bin_power: np.ndarray
    bin_counts: np.ndarray


def signed_frequencies(n: int) -> np.ndarray:
    """Integer signed mode frequencies in fftfreq order: 0, 1, ..., -N/2, ..., -1."""
    return np.fft.fftfreq(n) * n


@lru_cache(maxsize=64)
def _signed_index_grid(h: int, w: int):
    sy = signed_frequencies(h)
    sx = signed_frequencies(w)
    k_index = np.hypot(sy[:, None], sx[None, :])
    k_index.setflags(write=False)
    return k_index


def wavenumber_grid(height: int, width: int, dx: float) -> WavenumberGrid:
    """Physical wavenumbers under the signed-frequency mapping.

    At mode (k_h, k_w): kappa_x = 2*pi*s(k_w)/(W*dx), kappa_y = 2*pi*s(k_h)/(H*dx),
    kappa = sqrt(kappa_x^2 + kappa_y^2). kappa is zero only at the DC mode.
    """
    height, width = check_grid_dims(height, width)
    dx = check_spacing(dx)
    kx_1d = 2.0 * np.pi * np.fft.fftfreq(width, d=dx)
    ky_1d = 2.0 * np.pi * np.fft.fftfreq(height, d=dx)
    kappa_x = np.broadcast_to(kx_1d[None, :], (height, width)).copy()
    kappa_y = np.broadcast_to(ky_1d[:, None], (height, width)).copy()
    kappa = np.hypot(kappa_x, kappa_y)
    return WavenumberGrid(
        kappa_x=kappa_x,
        kappa_y=kappa_y,
        kappa=kappa,
        k_index=_signed_index_grid(height, width).copy(),
    )


@lru_cache(maxsize=64)
def derivative_wavenumbers(height: int, width: int, dx: float):
    """(kappa_y, kappa_x) grids for differentiation, Nyquist modes zeroed.

    Returned arrays are cached and read-only.
    """
    grid = wavenumber_grid(height, width, dx)
    kappa_x = grid.kappa_x.copy()
    kappa_y = grid.kappa_y.copy()
    if width % 2 == 0:
        kappa_x[:, width // 2] = 0.0
    if height % 2 == 0:
        kappa_y[height // 2, :] = 0.0
    kappa_x.setflags(write=False)
    kappa_y.setflags(write=False)
    return kappa_y, kappa_x


def dft2(field: GridField, channel=0) -> Spectrum:
    """Unnormalized forward 2D DFT of one channel."""
    idx = check_channel(field, channel)
    return Spectrum(coeffs=np.fft.fft2(field.values[idx]), dx=field.dx)


def inverse_dft2(spectrum: Spectrum) -> np.ndarray:
    """Inverse transform; the (tiny) imaginary residue is discarded."""
    return np.fft.ifft2(spectrum.coeffs).real


def psd_from_values(values: np.ndarray, dx: float) -> np.ndarray:
    """PSD of (..., H, W) real arrays: |F|^2 / (H*W*dx)."""
    h, w = values.shape[-2:]
    coeffs = np.fft.fft2(values, axes=(-2, -1))
    return (coeffs.real**2 + coeffs.imag**2) / (h * w * dx)


def psd(field: GridField, channel=0) -> PSDGrid:
    """Power spectral density of one channel."""
    idx = check_channel(field, channel)
    return PSDGrid(power=psd_from_values(field.values[idx], field.dx), dx=field.dx)


def spectral_derivative(field: GridField, channel=0, axis: str = "x") -> GridField:
    """Pseudospectral partial derivative of one channel.

    axis "x" differentiates along columns (zonal direction), "y" along rows
    (meridional). The output is a single-channel field named d<channel>_d<axis>.
    """
    idx = check_channel(field, channel)
    values = field.values[idx]
    deriv = derivative_values(values, field.dx, axis)
    name = f"d{field.channel_names[idx]}_d{axis}"
    return single_channel_field(deriv, field.dx, name)


def derivative_values(values: np.ndarray, dx: float, axis: str) -> np.ndarray:
    """Derivative of (..., H, W) arrays via i*kappa multiplication."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    h, w = values.shape[-2:]
    kappa_y, kappa_x = derivative_wavenumbers(h, w, dx)
    kappa = kappa_x if axis == "x" else kappa_y
    coeffs = np.fft.fft2(values, axes=(-2, -1))
    return np.fft.ifft2(1j * kappa * coeffs, axes=(-2, -1)).real


@lru_cache(maxsize=64)
def _radial_bins(height: int, width: int, n_bins: int, scale: str):
    """Mode-to-annulus assignment for an HxW grid; cached per geometry.

    Returns (flat mode->bin indices for non-DC modes, non-DC flat mask,
    bin_centers, bin_counts). Bins partition k in (0, k_max].
    """
    k = _signed_index_grid(height, width).ravel()
    mask = k > 0.0
    k_nz = k[mask]
    k_max = k_nz.max()
    if scale == "log":
        # smallest non-zero index is exactly 1 for any grid
        edges = np.geomspace(1.0, k_max, n_bins + 1)
    elif scale == "linear":
        edges = np.linspace(0.0, k_max, n_bins + 1)
    else:
        raise ValueError(f"scale must be 'linear' or 'log', got {scale!r}")
    idx = np.clip(np.searchsorted(edges, k_nz, side="right") - 1, 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    centers = np.empty(n_bins)
    sums = np.bincount(idx, weights=k_nz, minlength=n_bins)
    nonempty = counts > 0
    centers[nonempty] = sums[nonempty] / counts[nonempty]
    # empty annuli keep a nominal edge midpoint so plots stay monotone
    if scale == "log":
        mids = np.sqrt(edges[:-1] * edges[1:])
    else:
        mids = 0.5 * (edges[:-1] + edges[1:])
    centers[~nonempty] = mids[~nonempty]
    for arr in (idx, mask, centers, counts):
        arr.setflags(write=False)
    return idx, mask, centers, counts


def default_bin_count(height: int, width: int) -> int:
    return max(2, min(height, width) // 2)


def radial_bin(psd_grid: PSDGrid, n_bins=None, scale: str = "log") -> RadialSpectrum:
    """Isotropic binning of a PSD grid into annuli of the index k.

    The DC mode is excluded; every other mode lands in exactly one annulus,
    and bin_power is the arithmetic mean of the PSD over the annulus. Empty
    annuli get NaN power. Default: log-spaced bins, min(H, W)//2 of them.
    """
    h, w = psd_grid.power.shape
    if n_bins is None:
        n_bins = default_bin_count(h, w)
    n_bins = int(n_bins)
    if n_bins < 2:
        raise TooFewBinsError(f"need at least 2 bins, got {n_bins}")
    idx, mask, centers, counts = _radial_bins(h, w, n_bins, scale)
    return RadialSpectrum(
        bin_centers=centers.copy(),
        bin_power=binned_mean(psd_grid.power, idx, mask, counts),
        bin_counts=counts.copy(),
    )


def binned_mean(power: np.ndarray, idx, mask, counts) -> np.ndarray:
    sums = np.bincount(idx, weights=power.ravel()[mask], minlength=counts.size)
    out = np.full(counts.size, np.nan)
    nonempty = counts > 0
    out[nonempty] = sums[nonempty] / counts[nonempty]
    return out


def radial_bin_values(values: np.ndarray, dx: float, n_bins=None, scale: str = "log") -> RadialSpectrum:
    """radial_bin(psd) for a raw (H, W) array; convenience for diagnostics."""
    return radial_bin(PSDGrid(power=psd_from_values(values, dx), dx=dx), n_bins, scale)


@lru_cache(maxsize=64)
def _bin_matrix(height: int, width: int, n_bins: int, scale: str):
    """Scatter matrix turning non-DC mode powers into per-annulus means."""
    idx, mask, _, counts = _radial_bins(height, width, n_bins, scale)
    mat = np.zeros((int(mask.sum()), n_bins))
    mat[np.arange(idx.size), idx] = 1.0 / counts[idx]
    mat.setflags(write=False)
    return mat, mask, counts


@lru_cache(maxsize=64)
def _bin_matrix_half(height: int, width: int, n_bins: int, scale: str):
    """Scatter matrix for rfft2 half-spectra of real fields.

    Interior columns stand in for their Hermitian partners, so they carry
    weight 2; the k_w = 0 column (and the Nyquist column on even widths)
    count once. Against the same PSD this reproduces the full-grid annulus
    means exactly.
    """
    _, _, _, counts = _radial_bins(height, width, n_bins, scale)
    w2 = width // 2 + 1
    k_half = _signed_index_grid(height, width)[:, :w2]
    col_weight = np.full(w2, 2.0)
    col_weight[0] = 1.0
    if width % 2 == 0:
        col_weight[-1] = 1.0
    weights = np.broadcast_to(col_weight[None, :], (height, w2)).ravel()
    k_flat = k_half.ravel()
    mask = k_flat > 0.0
    k_max = k_flat[mask].max()
    if scale == "log":
        edges = np.geomspace(1.0, k_max, n_bins + 1)
    else:
        edges = np.linspace(0.0, k_max, n_bins + 1)
    idx = np.clip(np.searchsorted(edges, k_flat[mask], side="right") - 1, 0, n_bins - 1)
    mat = np.zeros((int(mask.sum()), n_bins))
    nonempty = counts > 0
    safe_counts = np.where(nonempty, counts, 1)
    mat[np.arange(idx.size), idx] = weights[mask] / safe_counts[idx]
    mat.setflags(write=False)
    mask.setflags(write=False)
    return mat, mask, counts


def binned_mean_half_stack(power_half: np.ndarray, width: int, n_bins: int, scale: str = "log") -> np.ndarray:
    """Radial bin means from half-spectrum PSDs (..., H, W//2+1)."""
    height, w2 = power_half.shape[-2:]
    mat, mask, counts = _bin_matrix_half(height, width, int(n_bins), scale)
    flat = power_half.reshape(-1, height * w2)[:, mask]
    binned = flat @ mat
    binned[:, counts == 0] = np.nan
    return binned.reshape(*power_half.shape[:-2], int(n_bins))


def binned_mean_stack(power: np.ndarray, n_bins: int, scale: str = "log") -> np.ndarray:
    """Radial bin means for stacked PSDs (..., H, W) -> (..., n_bins).

    Empty annuli come back as NaN, matching radial_bin.
    """
    h, w = power.shape[-2:]
    mat, mask, counts = _bin_matrix(h, w, int(n_bins), scale)
    flat = power.reshape(-1, h * w)[:, mask]
    binned = flat @ mat
    binned[:, counts == 0] = np.nan
    return binned.reshape(*power.shape[:-2], int(n_bins))
