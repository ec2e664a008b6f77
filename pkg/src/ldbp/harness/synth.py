"""Synthetic drifting-grating dataset, a stand-in for licensed face corpora.

Class ``c`` of ``n`` is a sinusoidal grating whose normal points at
``c * 180 / n`` degrees, drifting one pixel per frame along that normal.
Each subject has its own contrast, each sequence its own phase, and every
frame gets Gaussian noise before clamping to [0, 255].
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..classify import LABELS
from ..codecs import write_pgm
from .manifest import ManifestEntry, write_manifest

__all__ = ["render_grating", "synth_generate"]


def render_grating(size: int, frames: int, angle_deg: float, phase: float, contrast: float,
                   wavelength: float = 8.0, speed: float = 1.0) -> np.ndarray:
    """Noise-free grating volume, float array of shape ``(frames, size, size)``."""
    theta = np.deg2rad(angle_deg)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    along = x * np.cos(theta) + y * np.sin(theta)
    t = np.arange(frames, dtype=np.float64)[:, None, None]
    return 128.0 + 127.0 * contrast * np.sin(2 * np.pi * (along[None] - speed * t) / wavelength + phase)


def synth_generate(out_dir, class_count: int = 4, sequences_per_class: int = 20,
                   subjects_per_class: int = 5, frames: int = 12, size: int = 64,
                   seed: int = 0, noise: float = 4.0, contrast: tuple[float, float] = (0.5, 1.0),
                   wavelength: float = 8.0) -> Path:
    """Write PGM sequences plus ``manifest.csv`` under ``out_dir``; returns the manifest path.

    Classes use the first ``class_count`` expression labels. Sequence ``i``
    of each class belongs to subject ``i % subjects_per_class``, so every
    subject appears in every class.
    """
    if not 2 <= class_count <= len(LABELS):
        raise ValueError(f"class_count must lie in [2, {len(LABELS)}], got {class_count}")
    if size < 30 or frames < 5:
        raise ValueError(f"need size >= 30 and frames >= 5, got size={size}, frames={frames}")
    if sequences_per_class < 1 or not 1 <= subjects_per_class <= sequences_per_class:
        raise ValueError("need 1 <= subjects_per_class <= sequences_per_class")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc

    rng = np.random.default_rng(seed)
    subject_contrast = rng.uniform(contrast[0], contrast[1], size=subjects_per_class)
    entries = []
    for c in range(class_count):
        angle = c * 180.0 / class_count
        for i in range(sequences_per_class):
            s = i % subjects_per_class
            phase = rng.uniform(0.0, 2 * np.pi)
            vol = render_grating(size, frames, angle, phase, subject_contrast[s], wavelength)
            if noise > 0:
                vol = vol + rng.normal(0.0, noise, size=vol.shape)
            vol = np.clip(np.floor(vol + 0.5), 0, 255).astype(np.uint8)
            seq = out / f"c{c}_{LABELS[c].lower()}_{i:03d}"
            seq.mkdir(exist_ok=True)
            for t, frame in enumerate(vol):
                write_pgm(seq / f"frame_{t:03d}.pgm", frame)
            entries.append(ManifestEntry(seq, LABELS[c], f"S{s + 1:03d}"))
    return write_manifest(out / "manifest.csv", entries)
