"""Landmark time-series file format and recording metadata.

This is the boundary between whatever produced the landmarks (a hand
tracker, the synthetic generator) and the analysis core. Two plain-text
formats are defined:

Landmark file (UTF-8, comma-separated, LF endings)::

    frame,t,landmark_id,x,y,confidence
    0,0.000000,4,512.250000,960.000000,1.000000
    ...

``frame`` and ``landmark_id`` are integers, everything else is decimal.
Coordinates are absolute pixels in the portrait video frame. Rows of a
canonical file are sorted by (frame, landmark_id); decimal fields carry six
digits after the point, which preserves coordinates to 5e-7 px and
timestamps to 5e-7 s on a round trip.

Metadata file (UTF-8, ``key = value`` lines, ``#`` comments)::

    depth_cm = 100.0
    fps = 60.0
    width_px = 1080
    height_px = 1920
    camera.f_mm = 2.87
    camera.fe_mm = 32.0
    camera.aspect_sensor = 0.75
    camera.aspect_video = 0.5625
    camera.res_h_px = 1080
    labels.subject = a
    labels.tremor_type = rest

``camera.sensor_width_override_mm`` is optional; ``labels.*`` keys are free
form. Parsers are strict: anything violating a declared invariant is
rejected, never repaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping

import numpy as np

from .camera import CameraSpec
from .errors import EmptySelectionError, ParseError, ValidationError

LANDMARK_HEADER = "frame,t,landmark_id,x,y,confidence"
MAX_LANDMARK_ID = 20

# Thumb MCP/IP/tip and index MCP/PIP/tip in the 21-point hand model.
MONITORED_LANDMARKS = (2, 3, 4, 5, 6, 8)


@dataclass(frozen=True)
class LandmarkSample:
    """One tracked point on one frame: pixel position, time, confidence."""

    frame_index: int
    t: float
    landmark_id: int
    x: float
    y: float
    confidence: float

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValidationError(f"frame_index must be non-negative, got {self.frame_index}")
        if not (0 <= self.landmark_id <= MAX_LANDMARK_ID):
            raise ValidationError(
                f"landmark_id must be in [0, {MAX_LANDMARK_ID}], got {self.landmark_id}"
            )
        for name in ("t", "x", "y"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite, got {getattr(self, name)}")
        if self.t < 0:
            raise ValidationError(f"t must be non-negative, got {self.t}")
        if not (0.0 <= self.confidence <= 1.0):
            raise ValidationError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass
class LandmarkTrack:
    """Time series of one landmark, stored as parallel read-only arrays."""

    landmark_id: int
    frame_index: np.ndarray
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    confidence: np.ndarray

    def __post_init__(self):
        self.frame_index = np.asarray(self.frame_index, dtype=np.int64)
        for name in ("t", "x", "y", "confidence"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        n = len(self.frame_index)
        for name in ("t", "x", "y", "confidence"):
            if len(getattr(self, name)) != n:
                raise ValidationError(f"track field {name} length mismatch")
        if not (0 <= self.landmark_id <= MAX_LANDMARK_ID):
            raise ValidationError(f"landmark_id must be in [0, {MAX_LANDMARK_ID}]")
        if np.any(self.frame_index < 0):
            raise ValidationError("frame_index must be non-negative")
        for name in ("t", "x", "y"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValidationError(f"track {self.landmark_id}: {name} must be finite")
        if np.any(self.t < 0):
            raise ValidationError(f"track {self.landmark_id}: t must be non-negative")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValidationError(
                f"track {self.landmark_id}: timestamps must be strictly increasing"
            )
        if np.any(self.confidence < 0) or np.any(self.confidence > 1):
            raise ValidationError(f"track {self.landmark_id}: confidence must be in [0, 1]")
        for name in ("frame_index", "t", "x", "y", "confidence"):
            getattr(self, name).flags.writeable = False

    def __len__(self) -> int:
        return len(self.t)

    @classmethod
    def from_samples(cls, landmark_id: int, samples: list[LandmarkSample]) -> "LandmarkTrack":
        for s in samples:
            if s.landmark_id != landmark_id:
                raise ValidationError(
                    f"sample landmark_id {s.landmark_id} does not match track {landmark_id}"
                )
        return cls(
            landmark_id=landmark_id,
            frame_index=np.array([s.frame_index for s in samples], dtype=np.int64),
            t=np.array([s.t for s in samples]),
            x=np.array([s.x for s in samples]),
            y=np.array([s.y for s in samples]),
            confidence=np.array([s.confidence for s in samples]),
        )

    def samples(self) -> Iterator[LandmarkSample]:
        for i in range(len(self)):
            yield LandmarkSample(
                frame_index=int(self.frame_index[i]),
                t=float(self.t[i]),
                landmark_id=self.landmark_id,
                x=float(self.x[i]),
                y=float(self.y[i]),
                confidence=float(self.confidence[i]),
            )


@dataclass(frozen=True)
class RecordingMeta:
    """Depth, frame rate, frame geometry, camera and free-form labels."""

    depth_cm: float
    fps: float
    width_px: int
    height_px: int
    camera: CameraSpec
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not (self.depth_cm > 0):
            raise ValidationError(f"depth_cm must be positive, got {self.depth_cm}")
        if not (self.fps > 0):
            raise ValidationError(f"fps must be positive, got {self.fps}")
        if self.width_px < 1 or self.height_px < 1:
            raise ValidationError("width_px and height_px must be positive")
        if self.width_px > self.height_px:
            raise ValidationError(
                "portrait orientation expected: width_px must not exceed height_px"
            )
        aspect = self.width_px / self.height_px
        if abs(aspect - self.camera.aspect_video) > 0.01 * self.camera.aspect_video:
            raise ValidationError(
                f"width_px/height_px = {aspect:.6f} inconsistent with "
                f"camera.aspect_video = {self.camera.aspect_video} (>1%)"
            )


@dataclass
class Recording:
    """A set of landmark tracks plus the metadata needed to interpret them."""

    tracks: dict[int, LandmarkTrack]
    meta: RecordingMeta | None = None

    def __post_init__(self):
        for lid, track in self.tracks.items():
            if lid != track.landmark_id:
                raise ValidationError(f"track key {lid} != track landmark_id {track.landmark_id}")
        if self.meta is not None:
            self.validate_against_meta()

    def validate_against_meta(self):
        """Timestamps must fit in the window implied by frame count and fps."""
        if self.meta is None:
            return
        if not self.tracks:
            return
        max_frame = max(int(t.frame_index.max()) for t in self.tracks.values() if len(t))
        t_limit = (max_frame + 1) / self.meta.fps
        for track in self.tracks.values():
            if len(track) and track.t.max() > t_limit + 1e-9:
                raise ValidationError(
                    f"track {track.landmark_id}: timestamp {track.t.max():.6f} outside "
                    f"[0, {t_limit:.6f}] implied by max frame {max_frame} at {self.meta.fps} fps"
                )

    def n_samples(self) -> int:
        return sum(len(t) for t in self.tracks.values())


def _parse_row(line_no: int, line: str) -> tuple[int, float, int, float, float, float]:
    parts = line.split(",")
    if len(parts) != 6:
        raise ParseError(f"expected 6 fields, got {len(parts)}", line=line_no)
    try:
        frame = int(parts[0])
        lid = int(parts[2])
    except ValueError as exc:
        raise ParseError(f"bad integer field: {exc}", line=line_no) from None
    try:
        t, x, y, conf = (float(parts[i]) for i in (1, 3, 4, 5))
    except ValueError as exc:
        raise ParseError(f"bad decimal field: {exc}", line=line_no) from None
    return frame, t, lid, x, y, conf


def parse_landmark_file(data: bytes, meta: RecordingMeta | None = None) -> Recording:
    """Parse a landmark file into a :class:`Recording`.

    Samples are grouped into per-landmark tracks in file order; each track's
    timestamps must already be strictly increasing (the canonical row order,
    sorted by frame, guarantees this). Raises :class:`ParseError` for
    structural problems and :class:`ValidationError` for invariant
    violations, both naming the offending line.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file: missing header", line=1)
    if lines[0] != LANDMARK_HEADER:
        raise ParseError(f"header must be exactly '{LANDMARK_HEADER}'", line=1)

    columns: dict[int, list[list[float]]] = {}
    for i, line in enumerate(lines[1:], start=2):
        frame, t, lid, x, y, conf = _parse_row(i, line)
        if frame < 0:
            raise ValidationError(f"line {i}: frame must be non-negative, got {frame}")
        if not (0 <= lid <= MAX_LANDMARK_ID):
            raise ValidationError(
                f"line {i}: unknown landmark_id {lid} (valid ids are 0..{MAX_LANDMARK_ID})"
            )
        for name, value in (("t", t), ("x", x), ("y", y)):
            if not math.isfinite(value):
                raise ValidationError(f"line {i}: {name} must be finite, got {value}")
        if t < 0:
            raise ValidationError(f"line {i}: t must be non-negative, got {t}")
        if not (0.0 <= conf <= 1.0):
            raise ValidationError(f"line {i}: confidence must be in [0, 1], got {conf}")
        track = columns.setdefault(lid, [[], [], [], [], []])
        if track[1] and t <= track[1][-1]:
            raise ValidationError(
                f"line {i}: non-increasing timestamp {t} within track {lid}"
            )
        track[0].append(frame)
        track[1].append(t)
        track[2].append(x)
        track[3].append(y)
        track[4].append(conf)

    tracks = {
        lid: LandmarkTrack(
            landmark_id=lid,
            frame_index=np.array(cols[0], dtype=np.int64),
            t=np.array(cols[1]),
            x=np.array(cols[2]),
            y=np.array(cols[3]),
            confidence=np.array(cols[4]),
        )
        for lid, cols in sorted(columns.items())
    }
    return Recording(tracks=tracks, meta=meta)


def serialize_landmark_file(rec: Recording) -> bytes:
    """Serialize a recording to the canonical landmark file format.

    Rows are sorted by (frame, landmark_id) and decimal fields use fixed
    six-digit formatting, so identical recordings yield byte-identical
    output.
    """
    rows = []
    for track in rec.tracks.values():
        lid = track.landmark_id
        for i in range(len(track)):
            rows.append((int(track.frame_index[i]), lid, i, track))
    rows.sort(key=lambda r: (r[0], r[1]))
    out = [LANDMARK_HEADER]
    for frame, lid, i, track in rows:
        out.append(
            f"{frame},{track.t[i]:.6f},{lid},{track.x[i]:.6f},{track.y[i]:.6f},"
            f"{track.confidence[i]:.6f}"
        )
    out.append("")
    return "\n".join(out).encode("utf-8")


def select_monitored_tracks(rec: Recording, ids: set[int] | tuple[int, ...]) -> list[LandmarkTrack]:
    """Tracks for the requested ids, ascending; error if none are present."""
    if not ids:
        raise ValueError("ids must be non-empty")
    present = [rec.tracks[i] for i in sorted(ids) if i in rec.tracks]
    if not present:
        raise EmptySelectionError(
            f"none of the requested landmark ids {sorted(ids)} are present "
            f"(recording has {sorted(rec.tracks)})"
        )
    return present


_META_REQUIRED = {
    "depth_cm": float,
    "fps": float,
    "width_px": int,
    "height_px": int,
    "camera.f_mm": float,
    "camera.fe_mm": float,
    "camera.aspect_sensor": float,
    "camera.aspect_video": float,
    "camera.res_h_px": int,
}
_META_OPTIONAL = {"camera.sensor_width_override_mm": float}


def parse_key_value_file(data: bytes) -> dict[str, str]:
    """Parse a generic ``key = value`` document into a string map."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}") from None
    values: dict[str, str] = {}
    for i, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", line=i)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ParseError("empty key", line=i)
        if key in values:
            raise ParseError(f"duplicate key '{key}'", line=i)
        values[key] = value
    return values


def parse_metadata_file(data: bytes) -> RecordingMeta:
    """Parse a recording metadata file; strict about keys and value types."""
    raw = parse_key_value_file(data)
    parsed: dict[str, float | int] = {}
    labels: dict[str, str] = {}
    for key, value in raw.items():
        if key.startswith("labels."):
            labels[key[len("labels."):]] = value
            continue
        conv = _META_REQUIRED.get(key) or _META_OPTIONAL.get(key)
        if conv is None:
            raise ParseError(f"unknown metadata key '{key}'")
        try:
            parsed[key] = conv(value)
        except ValueError:
            raise ParseError(f"metadata key '{key}': bad {conv.__name__} '{value}'") from None
    missing = sorted(set(_META_REQUIRED) - set(parsed))
    if missing:
        raise ParseError(f"missing metadata keys: {', '.join(missing)}")
    camera = CameraSpec(
        f_mm=parsed["camera.f_mm"],
        fe_mm=parsed["camera.fe_mm"],
        aspect_sensor=parsed["camera.aspect_sensor"],
        aspect_video=parsed["camera.aspect_video"],
        res_h_px=int(parsed["camera.res_h_px"]),
        sensor_width_override_mm=parsed.get("camera.sensor_width_override_mm"),
    )
    return RecordingMeta(
        depth_cm=parsed["depth_cm"],
        fps=parsed["fps"],
        width_px=int(parsed["width_px"]),
        height_px=int(parsed["height_px"]),
        camera=camera,
        labels=labels,
    )


def serialize_metadata_file(meta: RecordingMeta) -> bytes:
    """Serialize metadata to the key-value format (deterministic order)."""
    cam = meta.camera
    lines = [
        f"depth_cm = {meta.depth_cm!r}",
        f"fps = {meta.fps!r}",
        f"width_px = {meta.width_px}",
        f"height_px = {meta.height_px}",
        f"camera.f_mm = {cam.f_mm!r}",
        f"camera.fe_mm = {cam.fe_mm!r}",
        f"camera.aspect_sensor = {cam.aspect_sensor!r}",
        f"camera.aspect_video = {cam.aspect_video!r}",
        f"camera.res_h_px = {cam.res_h_px}",
    ]
    if cam.sensor_width_override_mm is not None:
        lines.append(f"camera.sensor_width_override_mm = {cam.sensor_width_override_mm!r}")
    for key in sorted(meta.labels):
        lines.append(f"labels.{key} = {meta.labels[key]}")
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def parse_camera_file(data: bytes) -> CameraSpec:
    """Parse a standalone camera spec file (bare keys, no ``camera.`` prefix)."""
    raw = parse_key_value_file(data)
    known = {
        "f_mm": float,
        "fe_mm": float,
        "aspect_sensor": float,
        "aspect_video": float,
        "res_h_px": int,
        "sensor_width_override_mm": float,
    }
    parsed: dict[str, float | int] = {}
    for key, value in raw.items():
        conv = known.get(key)
        if conv is None:
            raise ParseError(f"unknown camera key '{key}'")
        try:
            parsed[key] = conv(value)
        except ValueError:
            raise ParseError(f"camera key '{key}': bad {conv.__name__} '{value}'") from None
    required = {"f_mm", "fe_mm", "aspect_sensor", "aspect_video", "res_h_px"}
    missing = sorted(required - set(parsed))
    if missing:
        raise ParseError(f"missing camera keys: {', '.join(missing)}")
    return CameraSpec(
        f_mm=parsed["f_mm"],
        fe_mm=parsed["fe_mm"],
        aspect_sensor=parsed["aspect_sensor"],
        aspect_video=parsed["aspect_video"],
        res_h_px=int(parsed["res_h_px"]),
        sensor_width_override_mm=parsed.get("sensor_width_override_mm"),
    )


def with_labels(meta: RecordingMeta, extra: Mapping[str, str]) -> RecordingMeta:
    """Copy of ``meta`` with additional labels merged in."""
    merged = dict(meta.labels)
    merged.update(extra)
    return replace(meta, labels=merged)
