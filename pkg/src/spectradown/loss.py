"""Wavenumber-weighted log-PSD loss, its analytic gradient, and the
composite training loss.

The spectral term for one channel is

    L = sqrt( (1/(H*W)) * sum_k w(k) * [log(PSD(q)(k)+eps) - log(PSD(q_hat)(k)+eps)]^2 )

with w(k) = (k/k_max)^2 on the signed-mapping isotropic index, so the DC
mode has weight 0 and the highest mode weight 1. The eps floor keeps the
logarithm finite at zero-power modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import SpectradownError
from .fields import GridField
from .spectral import _signed_index_grid
from .validation import check_channel, check_matching_grids

BASE_LOSSES = ("l1", "l2")


@dataclass(frozen=True)
class LossConfig:
    """Composite-loss settings: total = base + psd_lambda * spectral term."""

    psd_lambda: float = 0.1
    epsilon: float = 1e-12
    base_loss: str = "l2"

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise SpectradownError(f"epsilon must be positive, got {self.epsilon}")
        if self.psd_lambda < 0.0:
            raise SpectradownError(f"psd_lambda must be >= 0, got {self.psd_lambda}")
        if self.base_loss not in BASE_LOSSES:
            raise SpectradownError(
                f"base_loss must be one of {BASE_LOSSES}, got {self.base_loss!r}"
            )


@lru_cache(maxsize=64)
def _cached_weights(height: int, width: int) -> np.ndarray:
    k = _signed_index_grid(height, width)
    w = (k / k.max()) ** 2
    w.setflags(write=False)
    return w


def psd_weights(height: int, width: int) -> np.ndarray:
    """Quadratic wavenumber weights (k/k_max)^2; zero at DC, one at k_max."""
    return _cached_weights(int(height), int(width)).copy()


def _loss_core(truth_vals: np.ndarray, pred_vals: np.ndarray, dx: float, eps: float):
    """Shared forward pass over (..., H, W) stacks.

    Returns (loss per leading index, log-PSD difference d, pred coefficients,
    pred PSD) so the gradient can reuse the intermediates.
    """
    h, w = truth_vals.shape[-2:]
    norm = h * w * dx
    weights = _cached_weights(h, w)
    coeffs_t = np.fft.fft2(truth_vals, axes=(-2, -1))
    coeffs_p = np.fft.fft2(pred_vals, axes=(-2, -1))
    power_t = (coeffs_t.real**2 + coeffs_t.imag**2) / norm
    power_p = (coeffs_p.real**2 + coeffs_p.imag**2) / norm
    diff = np.log(power_t + eps) - np.log(power_p + eps)
    mean_sq = np.mean(weights * diff**2, axis=(-2, -1))
    return np.sqrt(mean_sq), diff, coeffs_p, power_p


def psd_loss_values(truth_vals: np.ndarray, pred_vals: np.ndarray, dx: float, eps: float):
    """Spectral loss for (..., H, W) stacks; returns losses shaped (...)."""
    return _loss_core(truth_vals, pred_vals, dx, eps)[0]


def psd_loss_grad_values(truth_vals: np.ndarray, pred_vals: np.ndarray, dx: float, eps: float):
    """Loss and its exact gradient with respect to the prediction.

    The chain rule runs through the outer square root, the weighted squared
    log difference, log(PSD+eps), |F|^2, and the DFT; the adjoint of the
    unnormalized forward transform is again a forward transform of the
    conjugated spectrum, which stays real because the integrand is Hermitian.
    At L = 0 the square root is not differentiable; the zero subgradient is
    returned and flagged.

    Returns (loss (...), grad (..., H, W), degenerate bool mask (...)).
    """
    h, w = truth_vals.shape[-2:]
    loss, diff, coeffs_p, power_p = _loss_core(truth_vals, pred_vals, dx, eps)
    weights = _cached_weights(h, w)
    degenerate = loss == 0.0
    safe_loss = np.where(degenerate, 1.0, loss)
    ring = weights * diff / (power_p + eps) * np.conj(coeffs_p)
    scale = -2.0 / (safe_loss * (h * w) ** 2 * dx)
    grad = np.fft.fft2(ring, axes=(-2, -1)).real * scale[..., None, None]
    if np.any(degenerate):
        grad = np.where(degenerate[..., None, None], 0.0, grad)
    return loss, grad, degenerate


class PsdLossGrad(NamedTuple):
    grad: GridField
    loss: float
    degenerate: bool


def psd_loss(truth: GridField, pred: GridField, channel=0, cfg: LossConfig = LossConfig()) -> float:
    """Weighted log-PSD loss between one channel of truth and prediction."""
    check_matching_grids(truth, pred, ("truth", "pred"))
    idx = check_channel(truth, channel)
    return float(
        psd_loss_values(truth.values[idx], pred.values[idx], truth.dx, cfg.epsilon)
    )


def psd_loss_grad(truth: GridField, pred: GridField, channel=0, cfg: LossConfig = LossConfig()) -> PsdLossGrad:
    """Spectral loss plus d(loss)/d(pred) for one channel.

    degenerate=True means the loss was exactly zero and the zero subgradient
    was substituted.
    """
    check_matching_grids(truth, pred, ("truth", "pred"))
    idx = check_channel(truth, channel)
    loss, grad, degenerate = psd_loss_grad_values(
        truth.values[idx], pred.values[idx], truth.dx, cfg.epsilon
    )
    name = truth.channel_names[idx]
    grad_field = GridField(
        values=_frozen(grad[np.newaxis]), dx=truth.dx, channel_names=(name,)
    )
    return PsdLossGrad(grad=grad_field, loss=float(loss), degenerate=bool(degenerate))


def base_loss_values(truth_vals: np.ndarray, pred_vals: np.ndarray, kind: str):
    """Mean-l1 or mean-l2 loss and gradient over (..., H, W) stacks."""
    h, w = truth_vals.shape[-2:]
    delta = pred_vals - truth_vals
    if kind == "l1":
        loss = np.mean(np.abs(delta), axis=(-2, -1))
        grad = np.sign(delta) / (h * w)
    elif kind == "l2":
        loss = np.mean(delta**2, axis=(-2, -1))
        grad = 2.0 * delta / (h * w)
    else:
        raise SpectradownError(f"base_loss must be one of {BASE_LOSSES}, got {kind!r}")
    return loss, grad


def total_loss_values(truth_vals: np.ndarray, pred_vals: np.ndarray, dx: float, cfg: LossConfig):
    """Composite loss and gradient over (..., C, H, W) stacks.

    Per-channel contributions (base + lambda * spectral) are summed over
    channels; leading axes are preserved. Returns (total (...), base (...),
    spectral (...), grad (..., C, H, W)).
    """
    base, grad = base_loss_values(truth_vals, pred_vals, cfg.base_loss)
    base = base.sum(axis=-1)
    if cfg.psd_lambda > 0.0:
        ploss, pgrad, _ = psd_loss_grad_values(truth_vals, pred_vals, dx, cfg.epsilon)
        grad = grad + cfg.psd_lambda * pgrad
        spectral = ploss.sum(axis=-1)
    else:
        spectral = np.zeros_like(base)
    return base + cfg.psd_lambda * spectral, base, spectral, grad


def total_loss(truth: GridField, pred: GridField, cfg: LossConfig = LossConfig()):
    """Composite loss over all channels of a field pair.

    Returns (scalar, gradient GridField of the same shape as pred).
    """
    check_matching_grids(truth, pred, ("truth", "pred"))
    total, _, _, grad = total_loss_values(truth.values, pred.values, truth.dx, cfg)
    grad_field = GridField(
        values=_frozen(grad), dx=truth.dx, channel_names=truth.channel_names
    )
    return float(total), grad_field


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr
