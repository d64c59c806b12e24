"""Physics-consistency diagnostics for horizontal wind fields: kinetic
energy, divergence, vorticity, Helmholtz decomposition, and the
divergence power-spectrum expansion.

All spectral operators assume a periodic domain and share the
Nyquist-zeroed derivative wavenumbers from the spectral module, so the
decomposition, the derivatives, and the spectrum expansion are mutually
consistent to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import ChannelOutOfRangeError, GridMismatchError
from .fields import GridField, single_channel_field
from .spectral import (
    PSDGrid,
    RadialSpectrum,
    binned_mean,
    default_bin_count,
    derivative_wavenumbers,
    psd_from_values,
    _radial_bins,
)
from .validation import as_float_array, check_matching_grids, check_spacing

# canonical channel names expected by the diagnostics report
WIND_CHANNELS = ("u", "v")
DERIVED_VARIABLES = ("Eh", "div", "vort")


@dataclass(frozen=True)
class WindPair:
    """Zonal (u) and meridional (v) wind components on one grid."""

    u: np.ndarray  # (H, W), m/s
    v: np.ndarray
    dx: float

    def __post_init__(self):
        u = as_float_array(self.u, "u")
        v = as_float_array(self.v, "v")
        if u.shape != v.shape or u.ndim != 2:
            raise GridMismatchError(f"u and v must share a 2D grid, got {u.shape} vs {v.shape}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "dx", check_spacing(self.dx))


def wind_pair_from_field(field: GridField, u_name: str = "u", v_name: str = "v") -> WindPair:
    names = field.channel_names
    for name in (u_name, v_name):
        if name not in names:
            raise ChannelOutOfRangeError(f"field has no {name!r} channel (channels: {list(names)})")
    return WindPair(u=field.values[names.index(u_name)], v=field.values[names.index(v_name)], dx=field.dx)


def kinetic_energy(wind: WindPair) -> GridField:
    """Pointwise horizontal kinetic energy (u^2 + v^2)/2, in m^2/s^2."""
    return single_channel_field((wind.u**2 + wind.v**2) / 2.0, wind.dx, "Eh")


def _fd_derivative(values: np.ndarray, dx: float, axis_index: int) -> np.ndarray:
    """Second-order central difference with periodic wrap."""
    return (np.roll(values, -1, axis=axis_index) - np.roll(values, 1, axis=axis_index)) / (2.0 * dx)


def _wind_spectra(wind: WindPair):
    return np.fft.fft2(wind.u), np.fft.fft2(wind.v)


def divergence(wind: WindPair, method: str = "spectral") -> GridField:
    """Horizontal divergence du/dx + dv/dy, in 1/s."""
    if method == "spectral":
        ky, kx = derivative_wavenumbers(*wind.u.shape, wind.dx)
        fu, fv = _wind_spectra(wind)
        values = np.fft.ifft2(1j * (kx * fu + ky * fv)).real
    elif method == "central_fd":
        values = _fd_derivative(wind.u, wind.dx, 1) + _fd_derivative(wind.v, wind.dx, 0)
    else:
        raise ValueError(f"method must be 'spectral' or 'central_fd', got {method!r}")
    return single_channel_field(values, wind.dx, "div")


def vorticity(wind: WindPair, method: str = "spectral") -> GridField:
    """Relative vorticity dv/dx - du/dy, in 1/s."""
    if method == "spectral":
        ky, kx = derivative_wavenumbers(*wind.u.shape, wind.dx)
        fu, fv = _wind_spectra(wind)
        values = np.fft.ifft2(1j * (kx * fv - ky * fu)).real
    elif method == "central_fd":
        values = _fd_derivative(wind.v, wind.dx, 1) - _fd_derivative(wind.u, wind.dx, 0)
    else:
        raise ValueError(f"method must be 'spectral' or 'central_fd', got {method!r}")
    return single_channel_field(values, wind.dx, "vort")


@dataclass(frozen=True)
class HelmholtzParts:
    """Rotational/divergent split of a wind pair plus the removed mean flow.

    mean_u/mean_v hold every mode the discrete gradient cannot see: the
    constant (k=0) flow and, on even-sized grids, the Nyquist lines. For
    band-limited winds they are constant fields.
    """

    u_rot: np.ndarray
    v_rot: np.ndarray
    u_div: np.ndarray
    v_div: np.ndarray
    mean_u: np.ndarray
    mean_v: np.ndarray
    dx: float

    def reconstruct(self):
        return self.u_rot + self.u_div + self.mean_u, self.v_rot + self.v_div + self.mean_v

    def rotational_wind(self) -> WindPair:
        return WindPair(u=self.u_rot, v=self.v_rot, dx=self.dx)

    def divergent_wind(self) -> WindPair:
        return WindPair(u=self.u_div, v=self.v_div, dx=self.dx)


def helmholtz_decompose(wind: WindPair) -> HelmholtzParts:
    """Split wind into divergence-free and vorticity-free components.

    In spectral space the divergent part is the projection of (u_hat, v_hat)
    onto the wavevector direction and the rotational part its orthogonal
    complement, which solves the streamfunction/velocity-potential Poisson
    problems implicitly. Modes with zero derivative wavenumber go to the
    mean-flow component.
    """
    ky, kx = derivative_wavenumbers(*wind.u.shape, wind.dx)
    k_sq = kx**2 + ky**2
    fu, fv = _wind_spectra(wind)
    gradient_blind = k_sq == 0.0
    safe_k_sq = np.where(gradient_blind, 1.0, k_sq)
    along = (kx * fu + ky * fv) / safe_k_sq
    fu_div = np.where(gradient_blind, 0.0, kx * along)
    fv_div = np.where(gradient_blind, 0.0, ky * along)
    fu_mean = np.where(gradient_blind, fu, 0.0)
    fv_mean = np.where(gradient_blind, fv, 0.0)
    return HelmholtzParts(
        u_rot=np.fft.ifft2(fu - fu_div - fu_mean).real,
        v_rot=np.fft.ifft2(fv - fv_div - fv_mean).real,
        u_div=np.fft.ifft2(fu_div).real,
        v_div=np.fft.ifft2(fv_div).real,
        mean_u=np.fft.ifft2(fu_mean).real,
        mean_v=np.fft.ifft2(fv_mean).real,
        dx=wind.dx,
    )


def divergence_power_spectrum(wind: WindPair) -> PSDGrid:
    """Divergence PSD from the wind spectra (derivative-expansion path).

    Expands |F(div)|^2 as kx^2|F(u)|^2 + ky^2|F(v)|^2 + 2 kx ky Re(F(u) conj(F(v)))
    using the same Nyquist-zeroed wavenumbers as the derivative operators, so
    it matches psd(divergence(wind)) mode for mode.
    """
    ky, kx = derivative_wavenumbers(*wind.u.shape, wind.dx)
    fu, fv = _wind_spectra(wind)
    h, w = wind.u.shape
    cross = 2.0 * kx * ky * (fu * np.conj(fv)).real
    power = (
        kx**2 * (fu.real**2 + fu.imag**2)
        + ky**2 * (fv.real**2 + fv.imag**2)
        + cross
    ) / (h * w * wind.dx)
    # tiny negative residues from cancellation in the cross term are clipped
    return PSDGrid(power=np.maximum(power, 0.0), dx=wind.dx)


@dataclass(frozen=True)
class VariableDiagnostics:
    """Binned truth/pred spectra and the per-bin log-PSD gap for one variable."""

    bin_centers: np.ndarray
    psd_truth: np.ndarray
    psd_pred: np.ndarray
    log_gap: np.ndarray  # log(psd_truth+eps) - log(psd_pred+eps); >0 means under-powered prediction


@dataclass
class DiagnosticsReport:
    variables: dict = dataclass_field(default_factory=dict)

    CSV_HEADER = "variable,k_bin,psd_truth,psd_pred,log_gap"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for name, diag in self.variables.items():
            for center, p_truth, p_pred, gap in zip(
                diag.bin_centers, diag.psd_truth, diag.psd_pred, diag.log_gap
            ):
                lines.append(
                    f"{name},{center!r},{float(p_truth)!r},{float(p_pred)!r},{float(gap)!r}"
                )
        return "\n".join(lines) + "\n"


def diagnostic_variables(field: GridField, method: str = "spectral") -> dict:
    """Base channels plus Eh/div/vort as named (H, W) arrays.

    The field must carry "u" and "v" channels; every other channel (t2m,
    ...) is passed through under its own name.
    """
    wind = wind_pair_from_field(field)
    out = {name: field.values[i] for i, name in enumerate(field.channel_names)}
    out["Eh"] = kinetic_energy(wind).values[0]
    out["div"] = divergence(wind, method).values[0]
    out["vort"] = vorticity(wind, method).values[0]
    return out


def diagnostics_report(
    truth: GridField,
    pred: GridField,
    method: str = "spectral",
    n_bins=None,
    eps: float = 1e-12,
) -> DiagnosticsReport:
    """Radial spectra and log-PSD gaps for base and derived variables."""
    check_matching_grids(truth, pred, ("truth", "pred"))
    h, w = truth.height, truth.width
    if n_bins is None:
        n_bins = default_bin_count(h, w)
    truth_vars = diagnostic_variables(truth, method)
    pred_vars = diagnostic_variables(pred, method)
    idx, mask, centers, counts = _radial_bins(h, w, int(n_bins), "log")
    report = DiagnosticsReport()
    for name, truth_values in truth_vars.items():
        p_truth = binned_mean(psd_from_values(truth_values, truth.dx), idx, mask, counts)
        p_pred = binned_mean(psd_from_values(pred_vars[name], pred.dx), idx, mask, counts)
        report.variables[name] = VariableDiagnostics(
            bin_centers=centers.copy(),
            psd_truth=p_truth,
            psd_pred=p_pred,
            log_gap=np.log(p_truth + eps) - np.log(p_pred + eps),
        )
    return report


def mean_radial_spectrum(spectra: list) -> RadialSpectrum:
    """Average a list of RadialSpectrum taken on identical grids/bins."""
    if not spectra:
        raise ValueError("need at least one spectrum to average")
    stacked = np.stack([s.bin_power for s in spectra])
    first = spectra[0]
    return RadialSpectrum(
        bin_centers=first.bin_centers,
        bin_power=stacked.mean(axis=0),
        bin_counts=first.bin_counts,
    )
