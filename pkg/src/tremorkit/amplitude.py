"""Tremor amplitude from a landmark waveform.

The chain per landmark: confidence-filter and gap-fill the track, estimate
the gradient with forward differences, take the samples where the gradient
changes sign as peaks and troughs, measure the absolute difference between
adjacent extrema, and report the median of those instantaneous amplitudes.
The median makes the estimate robust to the ramp-up of tremor from rest and
to occasional spurious extremum pairs; using gradient sign changes rather
than absolute position makes low-frequency drift (gross arm movement) drop
out entirely. Amplitudes from the monitored landmarks are fused with a
second median.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .camera import pixels_to_cm
from .errors import (
    EmptyWaveformError,
    InsufficientDataError,
    MeasurementError,
    ValidationError,
)
from .landmarks import MONITORED_LANDMARKS, LandmarkTrack, Recording, select_monitored_tracks


@dataclass(frozen=True)
class MeasureConfig:
    """Knobs for the per-landmark pipeline.

    Defaults follow the measurement setup: horizontal axis (camera oriented
    so the principal tremor direction is horizontal), confidence 0.5,
    smoothing off, gaps over 0.5 s split the waveform instead of being
    interpolated.
    """

    axis: str = "x"
    min_confidence: float = 0.5
    smooth_window: int = 1
    max_gap_s: float = 0.5
    landmark_ids: tuple[int, ...] = MONITORED_LANDMARKS

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise ValidationError(f"axis must be 'x' or 'y', got {self.axis!r}")
        if self.smooth_window < 1 or self.smooth_window % 2 == 0:
            raise ValidationError(
                f"smooth_window must be an odd integer >= 1, got {self.smooth_window}"
            )
        if not (0.0 <= self.min_confidence <= 1.0):
            raise ValidationError("min_confidence must be in [0, 1]")
        if not (self.max_gap_s > 0):
            raise ValidationError("max_gap_s must be positive")
        if not self.landmark_ids:
            raise ValidationError("landmark_ids must be non-empty")


@dataclass
class Waveform:
    """A 1-D motion signal: strictly increasing times, finite positions."""

    t: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=np.float64)
        self.x = np.asarray(self.x, dtype=np.float64)
        if len(self.t) != len(self.x):
            raise ValidationError("t and x must have the same length")
        if len(self.t) < 1:
            raise ValidationError("waveform must contain at least one sample")
        if not np.all(np.isfinite(self.x)):
            raise ValidationError("x must be finite")
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0):
            raise ValidationError("t must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)


@dataclass
class ExtremaSeries:
    """Alternating peak/trough sample indices and their values."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if len(self.indices) != len(self.values):
            raise ValidationError("indices and values must have the same length")
        if len(self.indices) > 1 and not np.all(np.diff(self.indices) > 0):
            raise ValidationError("indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class LandmarkResult:
    """Per-landmark outcome; ``error`` is set when the landmark was unusable."""

    amplitude_px: float | None
    n_extrema: int = 0
    n_pairs: int = 0
    n_segments: int = 0
    error: str | None = None


@dataclass(frozen=True)
class TremorMeasurement:
    """Fused tremor amplitude with per-landmark detail."""

    amplitude_px: float
    amplitude_cm: float | None
    per_landmark: dict[int, LandmarkResult]
    axis: str
    config: MeasureConfig
    warnings: tuple[str, ...] = field(default_factory=tuple)


def _moving_average(x: np.ndarray, window: int) -> np.ndarray:
    # Centered moving average; the window is truncated at the edges so the
    # output has the same length and no padding bias.
    if window == 1 or len(x) == 1:
        return x
    half = window // 2
    csum = np.cumsum(np.concatenate(([0.0], x)))
    n = len(x)
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, n)
    return (csum[hi] - csum[lo]) / (hi - lo)


def preprocess(
    track: LandmarkTrack,
    axis: str = "x",
    min_confidence: float = 0.5,
    smooth_window: int = 1,
    max_gap_s: float = 0.5,
) -> list[Waveform]:
    """Turn a track into one or more clean waveform segments.

    Samples under the confidence threshold are dropped. Missing frames
    between surviving neighbours are filled by linear interpolation on the
    frame grid when the time gap is at most ``max_gap_s``; longer dropouts
    are not bridged (interpolating across them would fabricate motion) and
    split the waveform into separate segments. Smoothing, when enabled, is
    applied per segment.
    """
    if axis not in ("x", "y"):
        raise ValidationError(f"axis must be 'x' or 'y', got {axis!r}")
    if len(track) == 0:
        raise EmptyWaveformError(f"track {track.landmark_id} has no samples")
    keep = track.confidence >= min_confidence
    if not keep.any():
        raise EmptyWaveformError(
            f"track {track.landmark_id}: all {len(track)} samples below "
            f"confidence {min_confidence}"
        )
    frames = track.frame_index[keep]
    t = track.t[keep]
    v = (track.x if axis == "x" else track.y)[keep]

    gaps = np.diff(t) > max_gap_s
    boundaries = np.flatnonzero(gaps) + 1
    segments = []
    for lo, hi in zip(np.concatenate(([0], boundaries)), np.concatenate((boundaries, [len(t)]))):
        seg_t, seg_v = _fill_frame_gaps(frames[lo:hi], t[lo:hi], v[lo:hi])
        if smooth_window > 1:
            seg_v = _moving_average(seg_v, smooth_window)
        segments.append(Waveform(t=seg_t, x=seg_v))
    return segments


def _fill_frame_gaps(frames: np.ndarray, t: np.ndarray, v: np.ndarray):
    jumps = np.flatnonzero(np.diff(frames) > 1)
    if jumps.size == 0:
        return t, v
    t_out: list[np.ndarray] = []
    v_out: list[np.ndarray] = []
    prev = 0
    for j in jumps:
        t_out.append(t[prev : j + 1])
        v_out.append(v[prev : j + 1])
        n_missing = int(frames[j + 1] - frames[j]) - 1
        alpha = np.arange(1, n_missing + 1) / (n_missing + 1)
        t_out.append(t[j] + alpha * (t[j + 1] - t[j]))
        v_out.append(v[j] + alpha * (v[j + 1] - v[j]))
        prev = j + 1
    t_out.append(t[prev:])
    v_out.append(v[prev:])
    return np.concatenate(t_out), np.concatenate(v_out)


def find_extrema(w: Waveform) -> ExtremaSeries:
    """Locate peaks and troughs via sign changes of the forward difference.

    Zero-gradient runs (plateaus) inherit the preceding nonzero sign, and
    the extremum is placed on the first sample of the plateau that follows
    the sign change. Monotone waveforms yield no extrema; endpoints are
    never extrema.
    """
    if len(w) < 2:
        raise InsufficientDataError(f"waveform has {len(w)} samples, need at least 2")
    g = np.diff(w.x)
    nonzero = np.flatnonzero(g)
    if nonzero.size < 2:
        return ExtremaSeries(indices=np.empty(0, dtype=np.int64), values=np.empty(0))
    signs = np.sign(g[nonzero])
    changed = signs[1:] != signs[:-1]
    idx = nonzero[:-1][changed] + 1
    return ExtremaSeries(indices=idx, values=w.x[idx])


def instantaneous_amplitudes(e: ExtremaSeries) -> np.ndarray:
    """Absolute differences between adjacent extrema, in pixels."""
    if len(e) < 2:
        return np.empty(0)
    return np.abs(np.diff(e.values))


def median_amplitude(a) -> float:
    """Median with the no-tremor convention: an empty set has amplitude 0."""
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0:
        return 0.0
    return float(np.median(a))


def measure_track(track: LandmarkTrack, config: MeasureConfig) -> LandmarkResult:
    """Run the amplitude pipeline on a single track."""
    try:
        segments = preprocess(
            track,
            axis=config.axis,
            min_confidence=config.min_confidence,
            smooth_window=config.smooth_window,
            max_gap_s=config.max_gap_s,
        )
    except EmptyWaveformError as exc:
        return LandmarkResult(amplitude_px=None, error=str(exc))
    amps = []
    n_extrema = 0
    for seg in segments:
        if len(seg) < 2:
            continue
        extrema = find_extrema(seg)
        n_extrema += len(extrema)
        amps.append(instantaneous_amplitudes(extrema))
    pooled = np.concatenate(amps) if amps else np.empty(0)
    return LandmarkResult(
        amplitude_px=median_amplitude(pooled),
        n_extrema=n_extrema,
        n_pairs=int(pooled.size),
        n_segments=len(segments),
    )


def measure_tremor(
    rec: Recording,
    ids: set[int] | tuple[int, ...] | None = None,
    config: MeasureConfig = MeasureConfig(),
) -> TremorMeasurement:
    """Measure tremor amplitude over the monitored landmarks of a recording.

    Per-landmark amplitudes are fused with a median (even count: mean of the
    two middle values). Landmarks whose waveform cannot be built are
    recorded with an error and excluded from fusion; the measurement fails
    only if every landmark fails. ``amplitude_cm`` requires recording
    metadata (camera + depth) and is ``None`` without it.
    """
    if ids is None:
        ids = config.landmark_ids
    tracks = select_monitored_tracks(rec, ids)
    warnings = []
    missing = sorted(set(ids) - set(rec.tracks))
    if missing:
        warnings.append(f"requested landmark ids not in recording: {missing}")

    per: dict[int, LandmarkResult] = {}
    for track in tracks:
        result = measure_track(track, config)
        per[track.landmark_id] = result
        if result.error is not None:
            warnings.append(f"landmark {track.landmark_id} excluded: {result.error}")
        elif result.n_segments > 1:
            warnings.append(
                f"landmark {track.landmark_id}: waveform split into "
                f"{result.n_segments} segments by gaps > {config.max_gap_s} s"
            )

    usable = [r.amplitude_px for r in per.values() if r.error is None]
    if not usable:
        raise MeasurementError("all requested landmarks failed to produce a waveform")
    amplitude_px = median_amplitude(usable)
    amplitude_cm = None
    if rec.meta is not None:
        amplitude_cm = pixels_to_cm(amplitude_px, rec.meta.camera, rec.meta.depth_cm)
    return TremorMeasurement(
        amplitude_px=amplitude_px,
        amplitude_cm=amplitude_cm,
        per_landmark=per,
        axis=config.axis,
        config=config,
        warnings=tuple(warnings),
    )
