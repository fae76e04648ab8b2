"""Figure rendering to files.

Masks are rendered fftshifted so low frequencies sit at the image
center, which is display-only: mask files on disk always store
unshifted indices. All output is written headlessly and is
byte-deterministic for identical inputs.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import EvalReport
from .patterns import SubsamplingPattern


def _display_mask(pattern: SubsamplingPattern) -> np.ndarray:
    mask = pattern.as_mask()
    if mask.ndim == 1:
        mask = mask.reshape(1, -1)
    return np.fft.fftshift(mask)


def save_mask_png(pattern: SubsamplingPattern, path) -> None:
    """One pixel per coefficient, sampled white on black, centered."""
    plt.imsave(path, _display_mask(pattern).astype(float), cmap="gray", vmin=0, vmax=1)


def save_image_png(arr, path) -> None:
    """Magnitude of a 2D array as a grayscale image."""
    mag = np.abs(np.asarray(arr))
    if mag.ndim == 1:
        mag = mag.reshape(1, -1)
    plt.imsave(path, mag, cmap="gray")


def save_recon_figure(reference, estimate, psnr_db: float, title: str, path) -> None:
    """Side-by-side reference and reconstruction magnitudes."""
    ref = np.abs(np.asarray(reference))
    est = np.abs(np.asarray(estimate)).reshape(ref.shape)
    if ref.ndim == 1:
        ref, est = ref.reshape(1, -1), est.reshape(1, -1)
    vmax = float(ref.max()) or 1.0
    fig, axes = plt.subplots(1, 2, figsize=(8, 4))
    axes[0].imshow(ref, cmap="gray", vmin=0, vmax=vmax)
    axes[0].set_title("reference")
    label = "exact" if math.isinf(psnr_db) else f"{psnr_db:.2f} dB"
    axes[1].imshow(est, cmap="gray", vmin=0, vmax=vmax)
    axes[1].set_title(f"reconstruction ({label})")
    for ax in axes:
        ax.set_axis_off()
    fig.suptitle(title)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)


def save_psnr_figure(report: EvalReport, path) -> None:
    """Per-slice PSNR with the finite-entry mean marked."""
    finite = [(i, v) for i, v in enumerate(report.psnr_db) if math.isfinite(v)]
    fig, ax = plt.subplots(figsize=(8, 4))
    if finite:
        xs, ys = zip(*finite)
        ax.plot(xs, ys, marker=".", linestyle="-", linewidth=0.8)
        ax.axhline(report.mean_psnr_db, color="firebrick", linewidth=0.8)
        ax.annotate(
            f"mean {report.mean_psnr_db:.2f} dB",
            xy=(0.99, report.mean_psnr_db),
            xycoords=("axes fraction", "data"),
            ha="right",
            va="bottom",
            fontsize=8,
            color="firebrick",
        )
    ax.set_xlabel("slice")
    ax.set_ylabel("PSNR [dB]")
    ax.set_title(
        f"pattern {report.pattern_id}, rate {report.rate}"
        + (f", {report.exact_count} exact excluded" if report.exact_count else "")
    )
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)
