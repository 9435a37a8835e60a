"""Synthetic landmark recordings with known ground-truth amplitude.

Each monitored landmark follows a sinusoid projected from centimetres into
pixels through the same camera geometry the analysis inverts, plus optional
linear drift (gross arm movement), an initial amplitude ramp (tremor
growing from rest), and Gaussian pixel noise (tracker jitter)::

    x(t) = offset + drift*t + r(t) * (A_px/2) * sin(2*pi*f*t + phase) + noise
    r(t) = min(t / ramp_s, 1)            (r = 1 when ramp_s is 0)

``amplitude_cm`` is the peak-to-trough distance, hence the half-amplitude
``A_px/2`` in the model. Noise comes from numpy's PCG64 generator seeded
per recording, so generation is a pure function of the spec: the same spec
serializes to byte-identical files on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .camera import CameraSpec, cm_to_pixels, default_camera
from .errors import ValidationError
from .landmarks import MONITORED_LANDMARKS, LandmarkTrack, Recording, RecordingMeta

AMPLITUDE_CATEGORIES = ("none", "small", "medium", "large", "very_large")

# Representative peak-to-trough amplitudes for the five severity categories.
DEFAULT_GRID_AMPLITUDES_CM = (0.0, 0.5, 2.0, 5.0, 10.0)
DEFAULT_GRID_DEPTHS_CM = (50.0, 75.0, 100.0)


def amplitude_category(amplitude_cm: float) -> str:
    """Severity label for a peak-to-trough amplitude."""
    if amplitude_cm <= 0:
        return "none"
    if amplitude_cm < 1.0:
        return "small"
    if amplitude_cm < 3.5:
        return "medium"
    if amplitude_cm < 7.5:
        return "large"
    return "very_large"


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic recording.

    The default frequency of 5 Hz sits mid-band for rest tremor and, at the
    default 60 fps, places every extremum of the phase-0 sinusoid exactly on
    a sampled frame, so the noise-free pipeline error is pure float noise.
    """

    amplitude_cm: float = 2.0
    freq_hz: float = 5.0
    phase_rad: float = 0.0
    duration_s: float = 12.0
    fps: float = 60.0
    depth_cm: float = 75.0
    camera: CameraSpec = field(default_factory=default_camera)
    drift_px_per_s: float = 0.0
    noise_px: float = 0.0
    ramp_s: float = 0.0
    seed: int = 0
    landmark_ids: tuple[int, ...] = MONITORED_LANDMARKS
    per_landmark_offset_px: Mapping[int, float] | None = None

    def __post_init__(self):
        if self.amplitude_cm < 0:
            raise ValidationError(f"amplitude_cm must be >= 0, got {self.amplitude_cm}")
        if self.freq_hz < 0:
            raise ValidationError(f"freq_hz must be >= 0, got {self.freq_hz}")
        if not (self.fps > 2 * self.freq_hz):
            raise ValidationError(
                f"fps must exceed twice the tremor frequency (sampling adequacy): "
                f"fps={self.fps}, freq_hz={self.freq_hz}"
            )
        if not (self.duration_s > 0):
            raise ValidationError(f"duration_s must be positive, got {self.duration_s}")
        if self.ramp_s < 0 or self.ramp_s >= self.duration_s:
            raise ValidationError(
                f"ramp_s must satisfy 0 <= ramp_s < duration_s, got {self.ramp_s}"
            )
        if self.noise_px < 0:
            raise ValidationError(f"noise_px must be >= 0, got {self.noise_px}")
        if not (self.depth_cm > 0):
            raise ValidationError(f"depth_cm must be positive, got {self.depth_cm}")
        if not self.landmark_ids:
            raise ValidationError("landmark_ids must be non-empty")


def _default_offsets(spec: SynthSpec, width_px: int) -> dict[int, float]:
    # Spread the landmarks around the frame centre like fingers of a hand.
    ids = sorted(spec.landmark_ids)
    centre = width_px / 2.0
    return {lid: centre + (i - (len(ids) - 1) / 2.0) * 40.0 for i, lid in enumerate(ids)}


def generate(spec: SynthSpec, extra_labels: Mapping[str, str] | None = None) -> Recording:
    """Generate one synthetic recording. Deterministic for a fixed spec."""
    n = int(round(spec.duration_s * spec.fps))
    if n < 1:
        raise ValidationError("duration_s * fps must round to at least one frame")
    width_px = spec.camera.res_h_px
    height_px = int(round(width_px / spec.camera.aspect_video))

    t = np.arange(n) / spec.fps
    frames = np.arange(n, dtype=np.int64)
    amplitude_px = cm_to_pixels(spec.amplitude_cm, spec.camera, spec.depth_cm)
    ramp = np.minimum(t / spec.ramp_s, 1.0) if spec.ramp_s > 0 else 1.0
    carrier = ramp * (amplitude_px / 2.0) * np.sin(2.0 * math.pi * spec.freq_hz * t + spec.phase_rad)
    drift = spec.drift_px_per_s * t

    offsets = (
        dict(spec.per_landmark_offset_px)
        if spec.per_landmark_offset_px is not None
        else _default_offsets(spec, width_px)
    )
    rng = np.random.default_rng(spec.seed)
    y_centre = height_px / 2.0

    tracks: dict[int, LandmarkTrack] = {}
    for i, lid in enumerate(sorted(spec.landmark_ids)):
        x = offsets.get(lid, width_px / 2.0) + drift + carrier + rng.normal(0.0, spec.noise_px, n)
        y = y_centre + 12.0 * i + rng.normal(0.0, spec.noise_px, n)
        tracks[lid] = LandmarkTrack(
            landmark_id=lid,
            frame_index=frames,
            t=t,
            x=x,
            y=y,
            confidence=np.ones(n),
        )

    labels = {
        "amplitude_category": amplitude_category(spec.amplitude_cm),
        "ground_truth_cm": f"{spec.amplitude_cm:g}",
        "seed": str(spec.seed),
    }
    if extra_labels:
        labels.update(extra_labels)
    meta = RecordingMeta(
        depth_cm=spec.depth_cm,
        fps=spec.fps,
        width_px=width_px,
        height_px=height_px,
        camera=spec.camera,
        labels=labels,
    )
    return Recording(tracks=tracks, meta=meta)


# Replicates cycle through the two-by-two design of the source experiment:
# two skin tones times two tremor types.
_REPLICATE_LABELS = (
    {"fitzpatrick": "II", "tremor_type": "rest"},
    {"fitzpatrick": "II", "tremor_type": "postural"},
    {"fitzpatrick": "VI", "tremor_type": "rest"},
    {"fitzpatrick": "VI", "tremor_type": "postural"},
)


def generate_grid(
    base: SynthSpec,
    amplitudes_cm: Sequence[float] = DEFAULT_GRID_AMPLITUDES_CM,
    depths_cm: Sequence[float] = DEFAULT_GRID_DEPTHS_CM,
    replicates: int = 4,
) -> list[tuple[Recording, float]]:
    """Cartesian amplitude x depth x replicate grid with derived seeds.

    Seeds are ``base.seed + k`` for the k-th cell, so the grid is
    reproducible and every recording differs. Labels carry the amplitude
    category, depth and replicate; replicates cycle through skin-tone and
    tremor-type labels to mirror a two-by-two subject design.
    """
    if not amplitudes_cm or not depths_cm or replicates < 1:
        raise ValidationError("amplitudes_cm, depths_cm and replicates must be non-empty")
    out: list[tuple[Recording, float]] = []
    k = 0
    for amp in amplitudes_cm:
        for depth in depths_cm:
            for rep in range(replicates):
                spec = replace(
                    base,
                    amplitude_cm=float(amp),
                    depth_cm=float(depth),
                    seed=base.seed + k,
                )
                labels = dict(_REPLICATE_LABELS[rep % len(_REPLICATE_LABELS)])
                labels["replicate"] = str(rep)
                labels["depth"] = f"{depth:g}"
                out.append((generate(spec, extra_labels=labels), float(amp)))
                k += 1
    return out
