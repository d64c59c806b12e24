import numpy as np
import pytest

from spectradown import make_field, psd_loss, psd_loss_grad, psd_weights, total_loss
from spectradown.errors import GridMismatchError, SpectradownError
from spectradown.loss import LossConfig, psd_loss_values, total_loss_values

from conftest import central_difference, random_field


def delta_truth(h, w, dx=1.0):
    """A unit impulse has |F| = 1 at every mode: flat spectrum reference."""
    values = np.zeros((h, w))
    values[0, 0] = 1.0
    return make_field(values, h, w, dx, ["q"])


def single_mode_perturbation(h, w, kh, kw, amplitude=0.05):
    ys, xs = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    return amplitude * np.cos(2 * np.pi * (kh * ys / h + kw * xs / w))


class TestLossConfig:
    def test_validation(self):
        with pytest.raises(SpectradownError):
            LossConfig(epsilon=0.0)
        with pytest.raises(SpectradownError):
            LossConfig(psd_lambda=-0.1)
        with pytest.raises(SpectradownError):
            LossConfig(base_loss="huber")


class TestPsdWeights:
    def test_dc_zero_and_max_one(self):
        w = psd_weights(8, 8)
        assert w[0, 0] == 0.0
        assert w.max() == 1.0

    def test_signed_mapping_value(self):
        # H=W=4: signed freqs (1,1) -> k=sqrt(2), k_max=2*sqrt(2) -> weight 1/4
        w = psd_weights(4, 4)
        assert w[1, 1] == pytest.approx(0.25)
        assert w[2, 2] == pytest.approx(1.0)  # Nyquist corner achieves k_max

    def test_symmetry_under_negation(self):
        w = psd_weights(6, 8)
        np.testing.assert_allclose(w, w[(-np.arange(6)) % 6][:, (-np.arange(8)) % 8])


class TestPsdLoss:
    def test_identical_fields(self):
        f = random_field(8, 8, seed=0)
        assert psd_loss(f, f) == 0.0

    def test_doubling_closed_form(self):
        # PSD scales by 4 -> log gap log(4) at every weighted mode
        rng = np.random.default_rng(1)
        f = make_field(10.0 * rng.standard_normal((16, 16)), 16, 16, 1.0, ["q"])
        doubled = f.with_values(2.0 * f.values)
        expected = np.log(4.0) * np.sqrt(psd_weights(16, 16).mean())
        assert psd_loss(f, doubled) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("alpha", [2.0, 10.0])
    def test_scaling_homogeneity(self, alpha):
        rng = np.random.default_rng(2)
        f = make_field(100.0 * rng.standard_normal((16, 16)), 16, 16, 1.0, ["q"])
        scaled = f.with_values(alpha * f.values)
        expected = abs(2 * np.log(alpha)) * np.sqrt(psd_weights(16, 16).mean())
        assert psd_loss(f, scaled) == pytest.approx(expected, rel=1e-6)

    def test_symmetry(self):
        a = random_field(8, 8, seed=3)
        b = random_field(8, 8, seed=4)
        assert psd_loss(a, b) == pytest.approx(psd_loss(b, a), rel=1e-12)

    def test_translation_invariance(self):
        a = random_field(16, 16, seed=5)
        b = random_field(16, 16, seed=6)
        shift = (3, 5)
        a_shifted = a.with_values(np.roll(a.values, shift, axis=(-2, -1)))
        b_shifted = b.with_values(np.roll(b.values, shift, axis=(-2, -1)))
        assert psd_loss(a_shifted, b_shifted) == pytest.approx(psd_loss(a, b), rel=1e-10)

    def test_high_k_perturbation_costs_more(self):
        # same-amplitude bump at higher isotropic k never costs less
        h = w = 16
        truth = delta_truth(h, w)
        low = truth.with_values(truth.values + single_mode_perturbation(h, w, 1, 1))
        high = truth.with_values(truth.values + single_mode_perturbation(h, w, 5, 5))
        assert psd_loss(truth, high) > psd_loss(truth, low)

    def test_monotone_frequency_sensitivity(self):
        h = w = 16
        truth = delta_truth(h, w)
        losses = []
        for k in range(1, 8):
            pred = truth.with_values(truth.values + single_mode_perturbation(h, w, 0, k))
            losses.append(psd_loss(truth, pred))
        assert all(b >= a for a, b in zip(losses, losses[1:]))

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            psd_loss(random_field(8, 8), random_field(4, 4))


class TestPsdLossGrad:
    def test_degenerate_at_zero_loss(self):
        f = random_field(8, 8, seed=7)
        result = psd_loss_grad(f, f.with_values(f.values.copy()))
        assert result.degenerate
        assert result.loss == 0.0
        assert np.all(result.grad.values == 0.0)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_central_differences(self, seed):
        # spec-pinned oracle: eps=1e-8, relative step 1e-5, tolerance 1e-6
        rng = np.random.default_rng(30 + seed)
        truth = rng.standard_normal((8, 8))
        pred = rng.standard_normal((8, 8))
        eps = 1e-8
        result_loss, analytic, _ = _grad_of(truth, pred, eps)
        fd = central_difference(lambda p: psd_loss_values(truth, p, 1.0, eps), pred)
        scale = np.abs(fd).max()
        assert np.abs(analytic - fd).max() <= 1e-6 * scale

    def test_dc_shift_invariance(self):
        # weight(0,0)=0 makes the gradient blind to joint constant shifts
        rng = np.random.default_rng(40)
        truth = rng.standard_normal((8, 8))
        pred = rng.standard_normal((8, 8))
        _, g0, _ = _grad_of(truth, pred, 1e-8)
        _, g1, _ = _grad_of(truth + 5.0, pred + 5.0, 1e-8)
        np.testing.assert_allclose(g0, g1, rtol=1e-8, atol=1e-10 * np.abs(g0).max())


def _grad_of(truth, pred, eps):
    from spectradown.loss import psd_loss_grad_values

    return psd_loss_grad_values(truth, pred, 1.0, eps)


class TestTotalLoss:
    def test_lambda_zero_is_base_loss(self):
        truth = random_field(8, 8, seed=8, channels=("u", "v"))
        pred = random_field(8, 8, seed=9, channels=("u", "v"))
        cfg = LossConfig(psd_lambda=0.0, base_loss="l2")
        value, _ = total_loss(truth, pred, cfg)
        expected = sum(((pred.values[c] - truth.values[c]) ** 2).mean() for c in range(2))
        assert value == pytest.approx(expected, rel=1e-12)

    def test_identity_is_zero(self):
        f = random_field(8, 8, seed=10)
        value, grad = total_loss(f, f, LossConfig(psd_lambda=0.0, base_loss="l2"))
        assert value == 0.0
        assert np.all(grad.values == 0.0)

    @pytest.mark.parametrize("base", ["l1", "l2"])
    def test_composite_gradient_matches_fd(self, base):
        rng = np.random.default_rng(50)
        truth = rng.standard_normal((2, 8, 8))
        pred = rng.standard_normal((2, 8, 8))
        cfg = LossConfig(psd_lambda=0.3, epsilon=1e-8, base_loss=base)
        _, _, _, grad = total_loss_values(truth, pred, 1.0, cfg)

        def objective(p):
            total, _, _, _ = total_loss_values(truth, p, 1.0, cfg)
            return float(total)

        fd = central_difference(objective, pred)
        scale = np.abs(fd).max()
        assert np.abs(grad - fd).max() <= 1e-6 * scale

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            total_loss(random_field(8, 8), random_field(8, 4))
