"""Spectral-loss training and physics-consistency diagnostics for gridded
statistical downscaling experiments."""

__version__ = "0.1.0"

from .downscaler import (
    ConvDownscaler,
    DownscalerParams,
    TrainHistory,
    backward_values,
    evaluate_downscaler,
    forward,
    forward_values,
    init_params,
    load_model,
    save_model,
    train_downscaler,
)
from .errors import SpectradownError
from .fields import (
    ChannelStats,
    FieldPair,
    GridField,
    block_average_downsample,
    field_stats,
    make_field,
    single_channel_field,
    upsample_nearest,
)
from .grdio import read_grd, write_grd
from .loss import LossConfig, psd_loss, psd_loss_grad, psd_weights, total_loss
from .metrics import Ensemble, MetricsReport, crps, mae, rmse, spectral_gap
from .physics import (
    DiagnosticsReport,
    HelmholtzParts,
    WindPair,
    diagnostics_report,
    divergence,
    divergence_power_spectrum,
    helmholtz_decompose,
    kinetic_energy,
    vorticity,
    wind_pair_from_field,
)
from .spectral import (
    PSDGrid,
    RadialSpectrum,
    Spectrum,
    WavenumberGrid,
    dft2,
    inverse_dft2,
    psd,
    radial_bin,
    spectral_derivative,
    wavenumber_grid,
)
from .synth import (
    SynthSpec,
    gaussian_random_field,
    load_manifest,
    make_dataset,
    make_pairs,
    synth_sample,
    wind_from_potentials,
)

__all__ = [name for name in dir() if not name.startswith("_")]
