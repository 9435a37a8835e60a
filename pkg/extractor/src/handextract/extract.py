"""Run a detector over a video file and write landmark + metadata files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import cv2

from .detectors import make_detector
from .landmarks_io import CameraOptics, LandmarkRow, serialize_metadata, serialize_rows


class VideoError(ValueError):
    """The video cannot be opened or has unusable properties."""


class NoDetectionsError(RuntimeError):
    """No frame produced a usable hand detection."""


@dataclass
class ExtractionJob:
    video_path: Path
    out_landmarks: Path
    out_meta: Path
    depth_cm: float
    detector: str = "template"
    min_detection_confidence: float = 0.5
    optics: CameraOptics = field(default_factory=CameraOptics)
    labels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.depth_cm <= 0:
            raise ValueError(f"depth_cm must be positive, got {self.depth_cm}")
        if not (0.0 <= self.min_detection_confidence <= 1.0):
            raise ValueError("min_detection_confidence must be in [0, 1]")


@dataclass(frozen=True)
class ExtractionResult:
    frames_total: int
    frames_detected: int

    @property
    def coverage(self) -> float:
        return self.frames_detected / self.frames_total if self.frames_total else 0.0


def run_extraction(job: ExtractionJob) -> ExtractionResult:
    """Detect the hand on every frame; omit frames without a detection.

    Coordinates are absolute pixels in the (portrait) video frame and
    timestamps are frame index over fps. Output files are written only when
    at least one frame was detected; otherwise :class:`NoDetectionsError`
    is raised and nothing is left on disk.
    """
    capture = cv2.VideoCapture(str(job.video_path))
    if not capture.isOpened():
        raise VideoError(f"cannot decode video: {job.video_path}")
    try:
        fps = capture.get(cv2.CAP_PROP_FPS)
        if not fps or fps <= 0:
            raise VideoError(f"video reports no frame rate: {job.video_path}")
        detector = make_detector(job.detector, job.min_detection_confidence)

        rows: list[LandmarkRow] = []
        width = height = None
        frame_idx = 0
        detected = 0
        while True:
            ret, frame = capture.read()
            if not ret:
                break
            if width is None:
                height, width = frame.shape[:2]
                if width > height:
                    raise VideoError(
                        f"portrait video expected, got {width}x{height} "
                        f"(width must not exceed height)"
                    )
            detection = detector.detect(frame)
            if detection is not None and detection.confidence >= job.min_detection_confidence:
                t = frame_idx / fps
                for lid, (x, y) in enumerate(detection.landmarks):
                    rows.append(
                        LandmarkRow(
                            frame=frame_idx, t=t, landmark_id=lid,
                            x=float(x), y=float(y),
                            confidence=detection.confidence,
                        )
                    )
                detected += 1
            frame_idx += 1
    finally:
        capture.release()

    if frame_idx == 0:
        raise VideoError(f"video contains no frames: {job.video_path}")
    if detected == 0:
        raise NoDetectionsError(
            f"no hand detected in any of {frame_idx} frames: {job.video_path}"
        )

    labels = dict(job.labels)
    labels.setdefault("source_video", job.video_path.name)
    labels.setdefault("detector", job.detector)
    job.out_landmarks.parent.mkdir(parents=True, exist_ok=True)
    job.out_meta.parent.mkdir(parents=True, exist_ok=True)
    job.out_landmarks.write_bytes(serialize_rows(rows))
    job.out_meta.write_bytes(
        serialize_metadata(
            depth_cm=job.depth_cm, fps=float(fps), width_px=width, height_px=height,
            optics=job.optics, labels=labels,
        )
    )
    return ExtractionResult(frames_total=frame_idx, frames_detected=detected)
