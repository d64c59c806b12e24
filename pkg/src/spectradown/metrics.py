"""Verification metrics: MAE, RMSE, ensemble CRPS and spectral-gap summaries.

Scores pool all grid cells uniformly (no latitude weighting) and are
reported per channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError, FairEstimatorError
from .fields import GridField
from .spectral import _radial_bins, binned_mean, default_bin_count, psd_from_values
from .validation import check_matching_grids

N_GAP_BANDS = 4


@dataclass(frozen=True)
class Ensemble:
    """A set of member fields representing one probabilistic prediction."""

    members: tuple

    def __post_init__(self):
        if len(self.members) < 1:
            raise EmptyDatasetError("ensemble needs at least one member")
        first = self.members[0]
        for member in self.members[1:]:
            check_matching_grids(first, member, ("member 0", "another member"))
            if member.channel_names != first.channel_names:
                raise EmptyDatasetError(
                    f"members disagree on channels: {member.channel_names} "
                    f"vs {first.channel_names}"
                )

    @property
    def size(self) -> int:
        return len(self.members)

    def stacked(self) -> np.ndarray:
        return np.stack([m.values for m in self.members])  # (M, C, H, W)


def _per_channel(values: np.ndarray, names) -> dict:
    return {name: float(v) for name, v in zip(names, values)}


def mae(pred: GridField, truth: GridField) -> dict:
    """Mean absolute error over all cells, per channel."""
    check_matching_grids(pred, truth, ("pred", "truth"))
    err = np.mean(np.abs(pred.values - truth.values), axis=(1, 2))
    return _per_channel(err, truth.channel_names)


def rmse(pred: GridField, truth: GridField) -> dict:
    """Root mean squared error over all cells, per channel."""
    check_matching_grids(pred, truth, ("pred", "truth"))
    err = np.sqrt(np.mean((pred.values - truth.values) ** 2, axis=(1, 2)))
    return _per_channel(err, truth.channel_names)


def crps(ensemble: Ensemble, truth: GridField, estimator: str = "auto") -> dict:
    """Continuous ranked probability score from an ensemble, per channel.

    estimator "standard" uses the empirical-CDF form
        (1/M) sum_i |x_i - y| - (1/(2 M^2)) sum_ij |x_i - x_j|
    and "fair" replaces the second denominator by 2 M (M-1), the unbiased
    variant (needs M >= 2). "auto" picks fair for M >= 2 and standard for a
    single member, where CRPS reduces to MAE exactly.
    """
    check_matching_grids(ensemble.members[0], truth, ("ensemble", "truth"))
    m = ensemble.size
    if estimator == "auto":
        estimator = "fair" if m >= 2 else "standard"
    if estimator not in ("standard", "fair"):
        raise ValueError(f"estimator must be 'standard', 'fair' or 'auto', got {estimator!r}")
    if estimator == "fair" and m < 2:
        raise FairEstimatorError("fair CRPS needs at least two ensemble members")

    if m == 1:
        # single deterministic member: identical arithmetic to mae()
        return mae(ensemble.members[0], truth)

    stack = ensemble.stacked()  # (M, C, H, W)
    skill = np.mean(np.abs(stack - truth.values[np.newaxis]), axis=0)
    pair_sum = np.zeros_like(truth.values)
    for i in range(m):
        pair_sum += np.abs(stack[i, np.newaxis] - stack).sum(axis=0)
    denom = 2.0 * m * (m - 1) if estimator == "fair" else 2.0 * m * m
    per_cell = skill - pair_sum / denom
    return _per_channel(per_cell.mean(axis=(1, 2)), truth.channel_names)


def band_slices(n_bins: int, n_bands: int = N_GAP_BANDS) -> list:
    """Contiguous index quarters of the radial bins, lowest k first."""
    edges = np.linspace(0, n_bins, n_bands + 1).round().astype(int)
    return [slice(edges[i], edges[i + 1]) for i in range(n_bands)]


def spectral_gap_values(
    pred_values: np.ndarray,
    truth_values: np.ndarray,
    dx: float,
    n_bins=None,
    eps: float = 1e-12,
) -> np.ndarray:
    """Mean |log PSD(pred) - log PSD(truth)| per k-quartile band for one (H, W) pair."""
    h, w = truth_values.shape
    if n_bins is None:
        n_bins = default_bin_count(h, w)
    idx, mask, _, counts = _radial_bins(h, w, int(n_bins), "log")
    p_pred = binned_mean(psd_from_values(pred_values, dx), idx, mask, counts)
    p_truth = binned_mean(psd_from_values(truth_values, dx), idx, mask, counts)
    gap = np.abs(np.log(p_pred + eps) - np.log(p_truth + eps))
    bands = np.empty(N_GAP_BANDS)
    for b, sl in enumerate(band_slices(int(n_bins))):
        chunk = gap[sl]
        finite = np.isfinite(chunk)
        bands[b] = chunk[finite].mean() if finite.any() else np.nan
    return bands


def spectral_gap(pred: GridField, truth: GridField, n_bins=None, eps: float = 1e-12) -> dict:
    """Per-channel, per-band log-PSD gap; band 0 is the lowest-k quartile.

    Symmetric in its arguments, zero when the fields match.
    """
    check_matching_grids(pred, truth, ("pred", "truth"))
    return {
        name: spectral_gap_values(pred.values[i], truth.values[i], truth.dx, n_bins, eps)
        for i, name in enumerate(truth.channel_names)
    }


@dataclass
class MetricsReport:
    """Per-variable scores plus the pooled sample count."""

    mae: dict
    rmse: dict
    crps: dict
    gaps: dict  # variable -> ndarray of N_GAP_BANDS band gaps
    n_samples: int

    CSV_HEADER = "variable,mae,rmse,crps,gap_q1,gap_q2,gap_q3,gap_q4"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for name in self.mae:
            gaps = self.gaps.get(name, np.full(N_GAP_BANDS, np.nan))
            cells = [
                name,
                repr(self.mae[name]),
                repr(self.rmse[name]),
                repr(self.crps[name]),
                *[repr(float(g)) for g in gaps],
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
