"""Synthetic atmospheric-like fields with prescribed power-law spectra and
known rotational/divergent structure.

Velocity fields are built from streamfunction/velocity-potential pairs so
their Helmholtz decomposition is known by construction; spectra are shaped
so the *velocity* components follow k^(-alpha), which puts the potentials
at k^(-(alpha+2)) (each derivative multiplies the spectrum by kappa^2).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import SpectradownError
from .fields import FieldPair, GridField, block_average_downsample, make_field
from .grdio import atomic_write_text, read_grd, write_grd
from .physics import WindPair
from .spectral import _signed_index_grid, derivative_wavenumbers, derivative_values
from .validation import check_grid_dims, check_matching_grids, check_spacing

CHANNELS = ("u", "v", "t2m")
# fixed per-channel RNG stream tags: (psi, chi, t2m)
_STREAMS = {"psi": 0, "chi": 1, "t2m": 2}


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic region.

    alpha is the target log-log slope magnitude of the *velocity* radial
    spectra; t2m uses alpha + 1 (smoother). rot_frac sets the expected share
    of kinetic energy in the rotational component. mean_value is written
    into the DC mode of every channel.
    """

    height: int = 64
    width: int = 64
    dx: float = 1.0
    alpha: float = 5.0 / 3.0
    rot_frac: float = 0.7
    seed: int = 0
    region_tag: str = "region-a"
    mean_value: float = 0.0

    def __post_init__(self):
        check_grid_dims(self.height, self.width)
        check_spacing(self.dx)
        if self.alpha <= 0.0:
            raise SpectradownError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.rot_frac <= 1.0:
            raise SpectradownError(f"rot_frac must be in [0, 1], got {self.rot_frac}")


def _spectral_shape(height: int, width: int, alpha: float) -> np.ndarray:
    """Per-mode amplitude factor k^(-alpha/2) with the DC mode zeroed."""
    k = _signed_index_grid(height, width).copy()
    k[0, 0] = 1.0
    shape = k ** (-alpha / 2.0)
    shape[0, 0] = 0.0
    return shape


def _shaped_noise(height: int, width: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Real Gaussian field with E|F(k)|^2 = H*W * k^(-alpha).

    Filtering white noise in Fourier space keeps Hermitian symmetry exact,
    so the inverse transform is real by construction.
    """
    noise = rng.standard_normal((height, width))
    coeffs = np.fft.fft2(noise) * _spectral_shape(height, width, alpha)
    return np.fft.ifft2(coeffs).real


def _unit_variance_scale(height: int, width: int, alpha: float) -> float:
    # E[var] of a shaped-noise field equals the mean squared shape factor
    return 1.0 / np.sqrt(np.mean(_spectral_shape(height, width, alpha) ** 2))


def _rng(spec: SynthSpec, sample: int, stream: int) -> np.random.Generator:
    # PCG64 seeded per (base seed, sample, stream): portable, independent draws
    return np.random.default_rng([spec.seed, sample, stream])


def gaussian_random_field(spec: SynthSpec) -> GridField:
    """Single-channel Gaussian random field with radial PSD ~ k^(-alpha).

    Unit expected variance; the DC mode carries spec.mean_value. The same
    spec yields bit-identical fields.
    """
    rng = _rng(spec, 0, 0)
    values = _shaped_noise(spec.height, spec.width, spec.alpha, rng)
    values *= _unit_variance_scale(spec.height, spec.width, spec.alpha)
    return make_field(
        values + spec.mean_value, spec.height, spec.width, spec.dx, ("grf",)
    )


def wind_from_potentials(psi: GridField, chi: GridField) -> WindPair:
    """Wind with rotational part from streamfunction psi and divergent part
    from velocity potential chi:

        u = -d(psi)/dy + d(chi)/dx,    v = d(psi)/dx + d(chi)/dy

    so that div = laplacian(chi) and vort = laplacian(psi).
    """
    check_matching_grids(psi, chi, ("psi", "chi"))
    p, c, dx = psi.values[0], chi.values[0], psi.dx
    u = -derivative_values(p, dx, "y") + derivative_values(c, dx, "x")
    v = derivative_values(p, dx, "x") + derivative_values(c, dx, "y")
    return WindPair(u=u, v=v, dx=dx)


def _velocity_norm(height: int, width: int, dx: float, alpha: float) -> float:
    """Scale for a potential so its derived wind has E[var(u)+var(v)] = 1."""
    ky, kx = derivative_wavenumbers(height, width, dx)
    shape = _spectral_shape(height, width, alpha + 2.0)
    energy = np.mean((kx**2 + ky**2) * shape**2)
    return 1.0 / np.sqrt(energy)


def synth_sample(spec: SynthSpec, sample_index: int) -> GridField:
    """One fine-resolution (u, v, t2m) truth field.

    Wind components follow k^(-alpha) with the requested rotational energy
    fraction; t2m is an independent, smoother field (slope alpha + 1).
    """
    h, w, dx = spec.height, spec.width, spec.dx
    vel_scale = _velocity_norm(h, w, dx, spec.alpha)
    psi_vals = _shaped_noise(h, w, spec.alpha + 2.0, _rng(spec, sample_index, _STREAMS["psi"]))
    chi_vals = _shaped_noise(h, w, spec.alpha + 2.0, _rng(spec, sample_index, _STREAMS["chi"]))
    psi_vals *= np.sqrt(spec.rot_frac) * vel_scale
    chi_vals *= np.sqrt(1.0 - spec.rot_frac) * vel_scale
    psi = make_field(psi_vals, h, w, dx, ("psi",))
    chi = make_field(chi_vals, h, w, dx, ("chi",))
    wind = wind_from_potentials(psi, chi)

    t2m = _shaped_noise(h, w, spec.alpha + 1.0, _rng(spec, sample_index, _STREAMS["t2m"]))
    t2m *= _unit_variance_scale(h, w, spec.alpha + 1.0)

    stack = np.stack([wind.u + spec.mean_value, wind.v + spec.mean_value, t2m + spec.mean_value])
    return make_field(stack, h, w, dx, CHANNELS)


def make_pairs(spec: SynthSpec, n_samples: int, factor: int) -> list:
    """Generate n_samples (coarse input, fine target) pairs in memory."""
    pairs = []
    for i in range(int(n_samples)):
        fine = synth_sample(spec, i)
        coarse = block_average_downsample(fine, factor)
        pairs.append(FieldPair(input=coarse, target=fine, factor=float(factor)))
    return pairs


MANIFEST_HEADER = "index,input_path,target_path,seed,region_tag"


def make_dataset(spec: SynthSpec, n_samples: int, factor: int, out_dir: str, workers: int = 1):
    """Write paired GRD1 files plus manifest.csv into out_dir.

    Returns (pairs, manifest rows). Generation is reproducible: identical
    spec and arguments give byte-identical files, regardless of workers.
    """
    os.makedirs(out_dir, exist_ok=True)
    n_samples = int(n_samples)

    def build(i: int):
        fine = synth_sample(spec, i)
        coarse = block_average_downsample(fine, factor)
        input_name = f"pair_{i:04d}.input.grd"
        target_name = f"pair_{i:04d}.target.grd"
        write_grd(os.path.join(out_dir, input_name), coarse)
        write_grd(os.path.join(out_dir, target_name), fine)
        pair = FieldPair(input=coarse, target=fine, factor=float(factor))
        return pair, (i, input_name, target_name, spec.seed, spec.region_tag)

    if workers > 1 and n_samples > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(build, range(n_samples)))
    else:
        results = [build(i) for i in range(n_samples)]

    pairs = [r[0] for r in results]
    rows = [r[1] for r in results]
    lines = [MANIFEST_HEADER]
    lines += [f"{i},{inp},{tgt},{seed},{tag}" for i, inp, tgt, seed, tag in rows]
    atomic_write_text(os.path.join(out_dir, "manifest.csv"), "\n".join(lines) + "\n")
    return pairs, rows


def load_manifest(path: str) -> list:
    """Read a manifest.csv back into FieldPairs; paths resolve relative to it."""
    base = os.path.dirname(os.path.abspath(path))
    pairs = []
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            coarse = read_grd(os.path.join(base, row["input_path"]))
            fine = read_grd(os.path.join(base, row["target_path"]))
            pairs.append(
                FieldPair(input=coarse, target=fine, factor=fine.height / coarse.height)
            )
    if not pairs:
        raise SpectradownError(f"manifest {path} lists no samples")
    return pairs


def load_spec_toml(path: str) -> SynthSpec:
    """Read a SynthSpec from a TOML file; unknown keys are rejected."""
    try:
        import tomllib
    except ModuleNotFoundError:  # python < 3.11
        import tomli as tomllib
    with open(path, "rb") as handle:
        data = tomllib.load(handle)
    allowed = set(SynthSpec.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise SpectradownError(f"unknown keys in {path}: {sorted(unknown)}")
    return SynthSpec(**data)
