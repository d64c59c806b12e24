import os

import numpy as np
import pytest

from spectradown import (
    SynthSpec,
    gaussian_random_field,
    helmholtz_decompose,
    load_manifest,
    make_dataset,
    make_pairs,
    make_field,
    synth_sample,
    wind_from_potentials,
)
from spectradown.errors import NotDivisibleError, SpectradownError
from spectradown.physics import divergence, vorticity
from spectradown.spectral import radial_bin_values
from spectradown.synth import load_spec_toml


def rms(a):
    return np.sqrt(np.mean(np.asarray(a) ** 2))


class TestSynthSpec:
    def test_validation(self):
        with pytest.raises(SpectradownError):
            SynthSpec(alpha=0.0)
        with pytest.raises(SpectradownError):
            SynthSpec(rot_frac=1.5)


class TestGaussianRandomField:
    def test_deterministic(self):
        spec = SynthSpec(height=32, width=32, seed=42)
        a = gaussian_random_field(spec)
        b = gaussian_random_field(spec)
        np.testing.assert_array_equal(a.values, b.values)

    def test_different_seeds_differ(self):
        a = gaussian_random_field(SynthSpec(height=32, width=32, seed=1))
        b = gaussian_random_field(SynthSpec(height=32, width=32, seed=2))
        assert np.abs(a.values - b.values).max() > 1e-3

    def test_mean_value_lands_in_dc(self):
        spec = SynthSpec(height=16, width=16, seed=3, mean_value=7.5)
        f = gaussian_random_field(spec)
        assert f.values[0].mean() == pytest.approx(7.5, abs=1e-12)

    def test_steeper_slope_means_less_high_k_power(self):
        # alpha=6 fields put a much smaller power fraction in the top band
        def top_fraction(alpha):
            fractions = []
            for seed in range(8):
                f = gaussian_random_field(SynthSpec(height=64, width=64, alpha=alpha, seed=seed))
                spectrum = radial_bin_values(f.values[0], 1.0, n_bins=8)
                weighted = np.nan_to_num(spectrum.bin_power) * spectrum.bin_counts
                fractions.append(weighted[-2:].sum() / weighted.sum())
            return np.mean(fractions)

        assert top_fraction(6.0) < 0.1 * top_fraction(1.0)

    def test_slope_control_quick(self):
        # compact version of the acceptance-7 oracle: 16 seeds at 64^2
        alpha = 5.0 / 3.0
        acc = None
        for seed in range(16):
            f = gaussian_random_field(SynthSpec(height=64, width=64, alpha=alpha, seed=seed))
            spectrum = radial_bin_values(f.values[0], 1.0)
            acc = spectrum.bin_power if acc is None else acc + spectrum.bin_power
        mean_power = acc / 16
        k = radial_bin_values(f.values[0], 1.0).bin_centers
        good = np.isfinite(mean_power)
        slope = np.polyfit(np.log(k[good]), np.log(mean_power[good]), 1)[0]
        assert slope == pytest.approx(-alpha, abs=0.25)


class TestWindFromPotentials:
    def test_pure_rotational_is_divergence_free(self):
        psi = gaussian_random_field(SynthSpec(height=32, width=32, alpha=3.0, seed=5))
        psi = make_field(psi.values, 32, 32, 1.0, ("psi",))
        chi = make_field(np.zeros((1, 32, 32)), 32, 32, 1.0, ("chi",))
        wind = wind_from_potentials(psi, chi)
        assert rms(divergence(wind).values) < 1e-10 * max(rms(wind.u), 1e-30)

    def test_pure_divergent_is_curl_free(self):
        chi = gaussian_random_field(SynthSpec(height=32, width=32, alpha=3.0, seed=6))
        chi = make_field(chi.values, 32, 32, 1.0, ("chi",))
        psi = make_field(np.zeros((1, 32, 32)), 32, 32, 1.0, ("psi",))
        wind = wind_from_potentials(psi, chi)
        assert rms(vorticity(wind).values) < 1e-10 * max(rms(wind.u), 1e-30)

    def test_single_mode_laplacian(self):
        # psi = sin(2 pi x / L) sin(2 pi y / L): vort = -2 (2 pi / L)^2 psi
        h = w = 32
        dx = 0.5
        length = h * dx
        ys, xs = np.meshgrid(np.arange(h) * dx, np.arange(w) * dx, indexing="ij")
        psi_vals = np.sin(2 * np.pi * xs / length) * np.sin(2 * np.pi * ys / length)
        psi = make_field(psi_vals, h, w, dx, ("psi",))
        chi = make_field(np.zeros((h, w)), h, w, dx, ("chi",))
        wind = wind_from_potentials(psi, chi)
        expected = -2.0 * (2 * np.pi / length) ** 2 * psi_vals
        np.testing.assert_allclose(vorticity(wind).values[0], expected, atol=1e-10)

    def test_helmholtz_recovers_construction(self):
        spec = SynthSpec(height=32, width=32, seed=7, rot_frac=0.6)
        field = synth_sample(spec, 0)
        wind = wind_from_potentials(
            make_field(field.values[0], 32, 32, 1.0, ("a",)),
            make_field(field.values[1], 32, 32, 1.0, ("b",)),
        )
        parts = helmholtz_decompose(wind)
        ru, rv = parts.reconstruct()
        assert rms(ru - wind.u) < 1e-8 * rms(wind.u)
        assert rms(rv - wind.v) < 1e-8 * rms(wind.v)


class TestEnergyPartition:
    def test_rot_frac_controls_energy_share(self):
        from spectradown import wind_pair_from_field

        fracs = []
        for seed in range(32):
            spec = SynthSpec(height=64, width=64, rot_frac=0.7, seed=seed)
            field = synth_sample(spec, 0)
            parts = helmholtz_decompose(wind_pair_from_field(field))
            ke_rot = 0.5 * np.mean(parts.u_rot**2 + parts.v_rot**2)
            ke_div = 0.5 * np.mean(parts.u_div**2 + parts.v_div**2)
            fracs.append(ke_rot / (ke_rot + ke_div))
        assert np.mean(fracs) == pytest.approx(0.7, abs=0.05)


class TestMakePairs:
    def test_shapes_and_factor(self):
        spec = SynthSpec(height=32, width=32, seed=8)
        pairs = make_pairs(spec, 2, 4)
        assert pairs[0].input.values.shape == (3, 8, 8)
        assert pairs[0].target.values.shape == (3, 32, 32)
        assert pairs[0].input.dx == pytest.approx(4.0 * pairs[0].target.dx)

    def test_not_divisible(self):
        spec = SynthSpec(height=30, width=30, seed=8)
        with pytest.raises(NotDivisibleError):
            make_pairs(spec, 1, 4)

    def test_coarse_spectrum_sits_below_fine(self):
        spec = SynthSpec(height=64, width=64, seed=9)
        for pair in make_pairs(spec, 3, 4):
            for c in range(3):
                fine = radial_bin_values(pair.target.values[c], pair.target.dx, n_bins=5)
                coarse = radial_bin_values(pair.input.values[c], pair.input.dx, n_bins=5)
                # compare mid/high-k annuli of the coarse grid against the
                # fine spectrum at the same dimensionless wavenumbers
                assert np.nansum(coarse.bin_power[2:]) < np.nansum(fine.bin_power[2:])


class TestMakeDataset:
    def test_writes_files_and_manifest(self, tmp_path):
        spec = SynthSpec(height=16, width=16, seed=10, region_tag="test-region")
        pairs, rows = make_dataset(spec, 3, 4, str(tmp_path))
        names = sorted(p.name for p in tmp_path.iterdir())
        assert "manifest.csv" in names
        assert "pair_0000.input.grd" in names and "pair_0002.target.grd" in names
        manifest = (tmp_path / "manifest.csv").read_text().splitlines()
        assert manifest[0] == "index,input_path,target_path,seed,region_tag"
        assert manifest[1].endswith("test-region")
        assert len(pairs) == 3

    def test_zero_samples(self, tmp_path):
        _, rows = make_dataset(SynthSpec(height=16, width=16), 0, 4, str(tmp_path))
        assert rows == []
        assert [p.name for p in tmp_path.iterdir()] == ["manifest.csv"]

    def test_byte_identical_regeneration(self, tmp_path):
        spec = SynthSpec(height=16, width=16, seed=11)
        dir_a, dir_b = tmp_path / "a", tmp_path / "b"
        make_dataset(spec, 2, 2, str(dir_a))
        make_dataset(spec, 2, 2, str(dir_b), workers=2)
        for name in ("manifest.csv", "pair_0000.input.grd", "pair_0001.target.grd"):
            assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()

    def test_manifest_round_trip(self, tmp_path):
        spec = SynthSpec(height=16, width=16, seed=12)
        written, _ = make_dataset(spec, 2, 4, str(tmp_path))
        loaded = load_manifest(str(tmp_path / "manifest.csv"))
        assert len(loaded) == 2
        np.testing.assert_array_equal(loaded[0].target.values, written[0].target.values)
        assert loaded[0].factor == pytest.approx(4.0)


def test_load_spec_toml(tmp_path):
    path = tmp_path / "spec.toml"
    path.write_text('height = 32\nwidth = 32\nalpha = 2.0\nseed = 5\nregion_tag = "r1"\n')
    spec = load_spec_toml(str(path))
    assert spec.height == 32 and spec.alpha == 2.0 and spec.region_tag == "r1"

    bad = tmp_path / "bad.toml"
    bad.write_text("height = 32\nbogus_key = 1\n")
    with pytest.raises(SpectradownError, match="bogus_key"):
        load_spec_toml(str(bad))
