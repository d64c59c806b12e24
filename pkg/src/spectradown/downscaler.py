"""Toy learnable downscaler: nearest-neighbour upsampling followed by a
periodic convolution over all input channels, linear in its parameters.

The forward map is evaluated as a circular cross-correlation in Fourier
space, which keeps the exact-gradient bookkeeping small: the adjoint of a
correlation is another correlation. With an l2 base loss and zero spectral
weight the training objective is a convex quadratic in the parameters.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import (
    ChannelMismatchError,
    DivergenceDetectedError,
    EmptyDatasetError,
    EvenKernelError,
    ModelFormatError,
    ShapeMismatchError,
)
from .fields import FieldPair, GridField, make_field, upsample_nearest
from .loss import LossConfig, total_loss_values
from .metrics import MetricsReport, band_slices, spectral_gap_values
from .physics import DiagnosticsReport, VariableDiagnostics, diagnostic_variables
from .spectral import (
    binned_mean_half_stack,
    binned_mean_stack,
    default_bin_count,
    psd_from_values,
    radial_bin_values,
)
from .validation import as_float_array


@dataclass
class DownscalerParams:
    """Kernels (C_out, C_in, ks, ks), biases (C_out,) and the upsample factor."""

    kernels: np.ndarray
    biases: np.ndarray
    factor: int

    @property
    def kernel_size(self) -> int:
        return self.kernels.shape[-1]

    @property
    def n_channels_in(self) -> int:
        return self.kernels.shape[1]

    @property
    def n_channels_out(self) -> int:
        return self.kernels.shape[0]

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.kernels.ravel(), self.biases])

    def with_vector(self, vec: np.ndarray) -> "DownscalerParams":
        vec = np.asarray(vec, dtype=np.float64)
        n_kernel = self.kernels.size
        if vec.shape != (n_kernel + self.biases.size,):
            raise ShapeMismatchError(
                f"expected parameter vector of length {n_kernel + self.biases.size}, "
                f"got shape {vec.shape}"
            )
        return DownscalerParams(
            kernels=vec[:n_kernel].reshape(self.kernels.shape).copy(),
            biases=vec[n_kernel:].copy(),
            factor=self.factor,
        )


def init_params(
    n_channels: int,
    factor: int,
    kernel_size: int = 5,
    seed: int = 0,
    noise_std: float = 1e-2,
) -> DownscalerParams:
    """Scaled-identity initialization: centre tap 1 on the matching channel,
    small seeded noise everywhere, zero biases."""
    kernel_size = int(kernel_size)
    if kernel_size < 1 or kernel_size % 2 == 0:
        raise EvenKernelError(f"kernel size must be odd and >= 1, got {kernel_size}")
    kernels = np.zeros((n_channels, n_channels, kernel_size, kernel_size))
    centre = kernel_size // 2
    for c in range(n_channels):
        kernels[c, c, centre, centre] = 1.0
    if noise_std > 0.0:
        rng = np.random.default_rng(seed)
        kernels += noise_std * rng.standard_normal(kernels.shape)
    return DownscalerParams(kernels=kernels, biases=np.zeros(n_channels), factor=int(factor))


def _embedded_kernel_rfft(params: DownscalerParams, height: int, width: int) -> np.ndarray:
    """Half-spectrum FFT of the kernels laid out at their wrapped offsets."""
    ks = params.kernel_size
    if ks > min(height, width):
        raise ShapeMismatchError(f"kernel size {ks} exceeds grid {height}x{width}")
    centre = ks // 2
    offsets = np.arange(ks) - centre
    rows = np.mod(offsets, height)
    cols = np.mod(offsets, width)
    emb = np.zeros((params.n_channels_out, params.n_channels_in, height, width))
    emb[:, :, rows[:, None], cols[None, :]] = params.kernels
    return np.fft.rfft2(emb, axes=(-2, -1))


def upsampled_input_fft(params: DownscalerParams, inputs: np.ndarray) -> np.ndarray:
    """Half-spectrum FFT of the nearest-neighbour upsampled inputs.

    Real fields have Hermitian spectra, so the (H, W//2+1) half grid carries
    everything; cache this across a fit, the inputs never change.
    """
    up = upsample_nearest(inputs, params.factor)
    return np.fft.rfft2(up, axes=(-2, -1))


def _forward_fft(params: DownscalerParams, up_fft: np.ndarray, width: int) -> np.ndarray:
    """Output half-spectrum for upsampled-input half-spectra (..., C_in, H, W2).

    Biases live entirely in the DC coefficient (b scales to b*H*W there).
    """
    height = up_fft.shape[-2]
    kernel_fft = np.conj(_embedded_kernel_rfft(params, height, width))
    out_fft = np.empty(
        up_fft.shape[:-3] + (params.n_channels_out,) + up_fft.shape[-2:], dtype=complex
    )
    for o in range(params.n_channels_out):
        acc = kernel_fft[o, 0] * up_fft[..., 0, :, :]
        for i in range(1, params.n_channels_in):
            acc += kernel_fft[o, i] * up_fft[..., i, :, :]
        out_fft[..., o, :, :] = acc
    out_fft[..., 0, 0] += params.biases * (height * width)
    return out_fft


def forward_values(params: DownscalerParams, inputs: np.ndarray, up_fft=None) -> np.ndarray:
    """Apply the model to (..., C_in, h, w) inputs -> (..., C_out, H, W)."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.shape[-3] != params.n_channels_in:
        raise ChannelMismatchError(
            f"model expects {params.n_channels_in} input channels, "
            f"got {inputs.shape[-3]}"
        )
    if up_fft is None:
        up_fft = upsampled_input_fft(params, inputs)
    width = inputs.shape[-1] * params.factor
    out_fft = _forward_fft(params, up_fft, width)
    return np.fft.irfft2(out_fft, s=(inputs.shape[-2] * params.factor, width), axes=(-2, -1))


def forward(params: DownscalerParams, field: GridField) -> GridField:
    """Downscale one GridField; output keeps the channel names, dx shrinks."""
    values = forward_values(params, field.values)
    values.setflags(write=False)
    return GridField(values=values, dx=field.dx / params.factor, channel_names=field.channel_names)


def backward_values(
    params: DownscalerParams,
    inputs: np.ndarray,
    grad_output: np.ndarray,
    up_fft=None,
) -> DownscalerParams:
    """Exact parameter gradient of any scalar loss, given d(loss)/d(output).

    Kernel gradients are cross-correlations of the output gradient with the
    upsampled input; bias gradients are plain sums. Batch axes are summed.
    """
    grad_output = np.asarray(grad_output, dtype=np.float64)
    if up_fft is None:
        up_fft = upsampled_input_fft(params, np.asarray(inputs, dtype=np.float64))
    width = grad_output.shape[-1]
    if (
        grad_output.shape[:-3] != up_fft.shape[:-3]
        or grad_output.shape[-2] != up_fft.shape[-2]
        or width // 2 + 1 != up_fft.shape[-1]
        or grad_output.shape[-3] != params.n_channels_out
    ):
        raise ShapeMismatchError(
            f"gradient shape {grad_output.shape} does not match inputs "
            f"{up_fft.shape}"
        )
    grad_fft = np.fft.rfft2(grad_output, axes=(-2, -1))
    return _backward_fft(params, up_fft, grad_fft, width)


def _backward_fft(params: DownscalerParams, up_fft, grad_fft, width: int) -> DownscalerParams:
    """Parameter gradient from the output-gradient half-spectrum.

    The kernel gradient is the cross-correlation of the output gradient with
    the upsampled input, read off at the tap offsets; the correlation of two
    real fields is real, so half-spectra suffice. The bias gradient is the
    DC coefficient (sum over cells).
    """
    height = up_fft.shape[-2]
    c_out, c_in = params.n_channels_out, params.n_channels_in
    # flatten any batch axes so the channel contraction is explicit
    grad_flat = np.conj(grad_fft.reshape((-1, c_out) + grad_fft.shape[-2:]))
    up_flat = up_fft.reshape((-1, c_in) + up_fft.shape[-2:])
    prod = np.empty((c_out, c_in) + up_fft.shape[-2:], dtype=complex)
    for o in range(c_out):
        for i in range(c_in):
            prod[o, i] = np.einsum("nhw,nhw->hw", grad_flat[:, o], up_flat[:, i])
    corr = np.fft.irfft2(prod, s=(height, width), axes=(-2, -1))
    ks = params.kernel_size
    offsets = np.arange(ks) - ks // 2
    rows = np.mod(offsets, height)
    cols = np.mod(offsets, width)
    kernel_grad = corr[:, :, rows[:, None], cols[None, :]]
    bias_grad = grad_flat[:, :, 0, 0].real.sum(axis=0)
    return DownscalerParams(kernels=kernel_grad, biases=bias_grad, factor=params.factor)


@dataclass
class TrainHistory:
    """Per-epoch training record; arrays all share the epoch axis."""

    total_loss: list = dataclass_field(default_factory=list)
    base_loss: list = dataclass_field(default_factory=list)
    psd_loss: list = dataclass_field(default_factory=list)
    val_mae: list = dataclass_field(default_factory=list)
    val_gap: list = dataclass_field(default_factory=list)
    seed: int = 0
    batch_size: int = 0  # 0 means full batch

    CSV_HEADER = "epoch,total_loss,base_loss,psd_loss,val_mae,val_gap_top"

    def __len__(self) -> int:
        return len(self.total_loss)

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for e in range(len(self.total_loss)):
            lines.append(
                f"{e},{self.total_loss[e]!r},{self.base_loss[e]!r},"
                f"{self.psd_loss[e]!r},{self.val_mae[e]!r},{self.val_gap[e]!r}"
            )
        return "\n".join(lines) + "\n"


def pairs_to_arrays(pairs):
    """Stack FieldPairs into (inputs, targets, dx_fine); shapes must agree."""
    if not pairs:
        raise EmptyDatasetError("no field pairs given")
    inputs = np.stack([p.input.values for p in pairs])
    targets = np.stack([p.target.values for p in pairs])
    return inputs, targets, pairs[0].target.dx


class _TrainEngine:
    """Half-spectrum evaluation of the composite loss for the inner loop.

    The forward map already produces output spectra, so with an l2 base loss
    the whole loss/gradient pass needs no further large transforms: the base
    term follows from Parseval and the spectral term's gradient transform has
    the closed form -2/(L*H*W*dx) * w * d/(PSD+eps) * F(pred). Real fields
    have Hermitian spectra, so rfft2 half-grids suffice; Hermitian-partner
    columns carry weight 2 in mode sums. Values agree with
    loss.total_loss_values to roundoff (asserted in the test suite); the l1
    base loss falls back to a spatial round trip for its sign gradient.
    """

    def __init__(self, targets: np.ndarray, dx: float, cfg: LossConfig):
        from .loss import _cached_weights

        self.cfg = cfg
        self.dx = dx
        height, width = targets.shape[-2:]
        self.width = width
        self.hw = height * width
        self.norm = self.hw * dx
        self.targets = targets
        self.f_targets = np.fft.rfft2(targets, axes=(-2, -1))
        w2 = self.f_targets.shape[-1]
        col_weight = np.full(w2, 2.0)
        col_weight[0] = 1.0
        if width % 2 == 0:
            col_weight[-1] = 1.0
        self.col_weight = col_weight[None, :]
        self.weights = _cached_weights(height, width)[:, :w2].copy()
        if cfg.psd_lambda > 0.0:
            power_t = (self.f_targets.real**2 + self.f_targets.imag**2) / self.norm
            self.log_power_t = np.log(power_t + cfg.epsilon)

    def loss_grad_fft(self, out_fft: np.ndarray, batch):
        """(total, base, spectral) per sample plus the F(d loss/d pred)."""
        cfg = self.cfg
        delta_fft = out_fft - self.f_targets[batch]
        if cfg.base_loss == "l2":
            base = (
                self.col_weight * (delta_fft.real**2 + delta_fft.imag**2)
            ).sum(axis=(-2, -1)) / self.hw**2
            grad_fft = (2.0 / self.hw) * delta_fft
        else:  # l1 needs the spatial sign pattern
            height = out_fft.shape[-2]
            preds = np.fft.irfft2(out_fft, s=(height, self.width), axes=(-2, -1))
            delta = preds - self.targets[batch]
            base = np.abs(delta).mean(axis=(-2, -1))
            grad_fft = np.fft.rfft2(np.sign(delta) / self.hw, axes=(-2, -1))
        base = base.sum(axis=-1)

        if cfg.psd_lambda > 0.0:
            power_p = (out_fft.real**2 + out_fft.imag**2) / self.norm
            diff = self.log_power_t[batch] - np.log(power_p + cfg.epsilon)
            loss = np.sqrt(
                (self.col_weight * self.weights * diff**2).sum(axis=(-2, -1)) / self.hw
            )
            safe = np.where(loss == 0.0, 1.0, loss)
            ring = self.weights * diff / (power_p + cfg.epsilon)
            scale = -2.0 * cfg.psd_lambda / (safe * self.hw * self.dx)
            grad_fft = grad_fft + scale[..., None, None] * ring * out_fft
            spectral = loss.sum(axis=-1)
        else:
            spectral = np.zeros_like(base)
        return base + cfg.psd_lambda * spectral, base, spectral, grad_fft


def _validation_scores(params, val_targets, eps, val_up_fft, truth_binned, n_bins, dx):
    height, width = val_targets.shape[-2:]
    out_fft = _forward_fft(params, val_up_fft, width)
    preds = np.fft.irfft2(out_fft, s=(height, width), axes=(-2, -1))
    mae_val = float(np.mean(np.abs(preds - val_targets)))
    power = (out_fft.real**2 + out_fft.imag**2) / (height * width * dx)
    pred_binned = binned_mean_half_stack(power, width, n_bins)
    gap = np.abs(np.log(pred_binned + eps) - np.log(truth_binned + eps))
    top = gap[..., band_slices(n_bins)[-1]]
    finite = np.isfinite(top)
    gap_val = float(top[finite].mean()) if finite.any() else float("nan")
    return mae_val, gap_val


def train_downscaler(
    train_pairs,
    cfg: LossConfig = LossConfig(),
    epochs: int = 100,
    learning_rate: float = 0.1,
    momentum: float = 0.9,
    batch_size: int = 0,
    kernel_size: int = 5,
    seed: int = 0,
    init_noise: float = 1e-2,
    val_pairs=None,
):
    """Gradient-descent training of the linear downscaler.

    Full-batch by default; a positive batch_size enables seeded mini-batch
    order. Validation columns of the history use val_pairs when given, the
    training set otherwise. Raises DivergenceDetectedError (carrying the
    partial history) if the loss leaves the finite range.
    """
    inputs, targets, dx = pairs_to_arrays(train_pairs)
    factor = int(round(train_pairs[0].factor))
    n_samples, n_channels = inputs.shape[0], inputs.shape[1]
    params = init_params(n_channels, factor, kernel_size, seed=seed, noise_std=init_noise)
    history = TrainHistory(seed=seed, batch_size=int(batch_size))

    if val_pairs:
        val_inputs, val_targets, _ = pairs_to_arrays(val_pairs)
    else:
        val_inputs, val_targets = inputs, targets
    up_fft = upsampled_input_fft(params, inputs)
    val_up_fft = up_fft if val_inputs is inputs else upsampled_input_fft(params, val_inputs)
    width = targets.shape[-1]
    n_bins = default_bin_count(*targets.shape[-2:])
    val_truth_binned = binned_mean_stack(psd_from_values(val_targets, dx), n_bins)
    engine = _TrainEngine(targets, dx, cfg)

    rng = np.random.default_rng(seed)
    velocity = np.zeros(params.to_vector().size)
    for epoch in range(int(epochs)):
        if batch_size and batch_size < n_samples:
            order = rng.permutation(n_samples)
            batches = [order[i : i + batch_size] for i in range(0, n_samples, batch_size)]
        else:
            batches = [slice(None)]

        epoch_total = epoch_base = epoch_psd = 0.0
        # transient overflow is how divergence manifests; it is detected and
        # aborted below rather than warned about
        with np.errstate(over="ignore", invalid="ignore"):
            for batch in batches:
                batch_up = up_fft[batch]
                out_fft = _forward_fft(params, batch_up, width)
                total, base, spectral, grad_fft = engine.loss_grad_fft(out_fft, batch)
                n_batch = out_fft.shape[0]
                epoch_total += float(total.sum())
                epoch_base += float(base.sum())
                epoch_psd += float(spectral.sum())
                grads = _backward_fft(params, batch_up, grad_fft / n_batch, width)
                velocity = momentum * velocity + grads.to_vector()
                params = params.with_vector(params.to_vector() - learning_rate * velocity)

            mae_val, gap_val = _validation_scores(
                params, val_targets, cfg.epsilon, val_up_fft, val_truth_binned, n_bins, dx
            )
        finite = (
            np.isfinite(epoch_total)
            and np.isfinite(mae_val)
            and np.isfinite(params.to_vector()).all()
        )
        if not finite:
            # history keeps only completed finite epochs (its own invariant)
            raise DivergenceDetectedError(
                f"training loss became non-finite at epoch {epoch}", history=history
            )
        history.total_loss.append(epoch_total / n_samples)
        history.base_loss.append(epoch_base / n_samples)
        history.psd_loss.append(epoch_psd / n_samples)
        history.val_mae.append(mae_val)
        history.val_gap.append(gap_val)
    return params, history


@dataclass
class EvalReport:
    metrics: MetricsReport
    diagnostics: DiagnosticsReport


def evaluate_downscaler(params: DownscalerParams, pairs, eps: float = 1e-12, n_bins=None) -> EvalReport:
    """Scores and spectra for {u, v, t2m, Eh, div, vort} over a dataset.

    MAE/RMSE pool all cells and samples; CRPS equals MAE for this
    deterministic model. Spectral gaps are means over samples of per-sample
    band gaps; reported spectra are dataset means.
    """
    if not pairs:
        raise EmptyDatasetError("no field pairs to evaluate")
    h, w = pairs[0].target.height, pairs[0].target.width
    if n_bins is None:
        n_bins = default_bin_count(h, w)
    n_bins = int(n_bins)

    abs_err = {}
    sq_err = {}
    gap_sums = {}
    psd_truth_sums = {}
    psd_pred_sums = {}
    centers = None
    for pair in pairs:
        pred_field = forward(params, pair.input)
        truth_vars = diagnostic_variables(pair.target)
        pred_vars = diagnostic_variables(pred_field)
        dx = pair.target.dx
        for name, truth_values in truth_vars.items():
            pred_values = pred_vars[name]
            if name in pair.target.channel_names:
                abs_err.setdefault(name, []).append(np.mean(np.abs(pred_values - truth_values)))
                sq_err.setdefault(name, []).append(np.mean((pred_values - truth_values) ** 2))
            gap_sums.setdefault(name, []).append(
                spectral_gap_values(pred_values, truth_values, dx, n_bins, eps)
            )
            truth_spec = radial_bin_values(truth_values, dx, n_bins)
            pred_spec = radial_bin_values(pred_values, dx, n_bins)
            centers = truth_spec.bin_centers
            psd_truth_sums.setdefault(name, []).append(truth_spec.bin_power)
            psd_pred_sums.setdefault(name, []).append(pred_spec.bin_power)

    mae_scores = {name: float(np.mean(vals)) for name, vals in abs_err.items()}
    rmse_scores = {name: float(np.sqrt(np.mean(vals))) for name, vals in sq_err.items()}
    gaps = {name: np.mean(np.stack(vals), axis=0) for name, vals in gap_sums.items()}
    metrics = MetricsReport(
        mae=mae_scores,
        rmse=rmse_scores,
        crps=dict(mae_scores),  # deterministic single-member prediction
        gaps=gaps,
        n_samples=len(pairs),
    )
    diagnostics = DiagnosticsReport()
    for name in psd_truth_sums:
        p_truth = np.mean(np.stack(psd_truth_sums[name]), axis=0)
        p_pred = np.mean(np.stack(psd_pred_sums[name]), axis=0)
        diagnostics.variables[name] = VariableDiagnostics(
            bin_centers=centers,
            psd_truth=p_truth,
            psd_pred=p_pred,
            log_gap=np.log(p_truth + eps) - np.log(p_pred + eps),
        )
    return EvalReport(metrics=metrics, diagnostics=diagnostics)


MODEL_MAGIC = b"TDS1"


def save_model(path: str, params: DownscalerParams) -> None:
    """TDS1 file: magic, u32 factor/kernel size/C_in/C_out, f64 parameters."""
    from .grdio import atomic_write_bytes

    header = MODEL_MAGIC + struct.pack(
        "<IIII",
        params.factor,
        params.kernel_size,
        params.n_channels_in,
        params.n_channels_out,
    )
    atomic_write_bytes(path, header + params.to_vector().astype("<f8").tobytes())


def load_model(path: str) -> DownscalerParams:
    with open(path, "rb") as handle:
        data = handle.read()
    if data[:4] != MODEL_MAGIC:
        raise ModelFormatError(f"{path}: bad magic {data[:4]!r}, expected {MODEL_MAGIC!r}")
    try:
        factor, kernel_size, c_in, c_out = struct.unpack_from("<IIII", data, 4)
    except struct.error:
        raise ModelFormatError(f"{path}: truncated header") from None
    n_params = c_out * c_in * kernel_size * kernel_size + c_out
    payload = data[20:]
    if len(payload) != 8 * n_params:
        raise ModelFormatError(
            f"{path}: expected {8 * n_params} parameter bytes, got {len(payload)}"
        )
    vec = np.frombuffer(payload, dtype="<f8")
    template = DownscalerParams(
        kernels=np.zeros((c_out, c_in, kernel_size, kernel_size)),
        biases=np.zeros(c_out),
        factor=factor,
    )
    return template.with_vector(vec)


class ConvDownscaler(BaseEstimator):
    """sklearn-style estimator facade over the linear downscaler.

    fit(X, y) takes coarse inputs X of shape (n_samples, C, h, w) and fine
    targets y of shape (n_samples, C, H, W) with H = factor*h, W = factor*w.
    predict(X) returns arrays shaped like y. Hyperparameters follow the
    get_params/set_params contract, so the estimator composes with sklearn
    model-selection utilities.
    """

    def __init__(
        self,
        factor=4,
        kernel_size=5,
        psd_lambda=0.0,
        epsilon=1e-12,
        base_loss="l2",
        epochs=100,
        learning_rate=0.1,
        momentum=0.9,
        batch_size=0,
        init_noise=1e-2,
        dx=1.0,
        seed=0,
    ):
        self.factor = factor
        self.kernel_size = kernel_size
        self.psd_lambda = psd_lambda
        self.epsilon = epsilon
        self.base_loss = base_loss
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.batch_size = batch_size
        self.init_noise = init_noise
        self.dx = dx
        self.seed = seed

    def _check_arrays(self, X, y=None):
        X = as_float_array(X, "X")
        if X.ndim != 4:
            raise ShapeMismatchError(f"X must be (n_samples, C, h, w), got shape {X.shape}")
        if y is None:
            return X
        y = as_float_array(y, "y")
        if y.ndim != 4 or y.shape[0] != X.shape[0] or y.shape[1] != X.shape[1]:
            raise ShapeMismatchError(
                f"y must be (n_samples, C, H, W) matching X, got {y.shape} vs {X.shape}"
            )
        expected = (X.shape[2] * self.factor, X.shape[3] * self.factor)
        if y.shape[2:] != expected:
            raise ShapeMismatchError(
                f"targets must be {expected} for factor {self.factor}, got {y.shape[2:]}"
            )
        return X, y

    def fit(self, X, y):
        X, y = self._check_arrays(X, y)
        if X.shape[0] == 0:
            raise EmptyDatasetError("cannot fit on an empty dataset")
        names = tuple(f"c{i}" for i in range(X.shape[1]))
        coarse_dx = self.dx * self.factor
        pairs = [
            FieldPair(
                input=make_field(xi, xi.shape[1], xi.shape[2], coarse_dx, names),
                target=make_field(yi, yi.shape[1], yi.shape[2], self.dx, names),
                factor=float(self.factor),
            )
            for xi, yi in zip(X, y)
        ]
        cfg = LossConfig(psd_lambda=self.psd_lambda, epsilon=self.epsilon, base_loss=self.base_loss)
        self.params_, self.history_ = train_downscaler(
            pairs,
            cfg=cfg,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            batch_size=self.batch_size,
            kernel_size=self.kernel_size,
            seed=self.seed,
            init_noise=self.init_noise,
        )
        self.n_channels_ = X.shape[1]
        return self

    def predict(self, X):
        if not hasattr(self, "params_"):
            raise NotFittedError("this ConvDownscaler instance is not fitted yet")
        X = self._check_arrays(X)
        return forward_values(self.params_, X)
