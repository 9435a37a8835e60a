"""Offline video-to-landmarks adapter for the tremorkit analysis package."""

__version__ = "0.1.0"

from .detectors import HandDetection, MediapipeHandDetector, TemplateHandTracker
from .extract import ExtractionJob, ExtractionResult, NoDetectionsError, VideoError, run_extraction
from .landmarks_io import CameraOptics

__all__ = [
    "CameraOptics",
    "ExtractionJob",
    "ExtractionResult",
    "HandDetection",
    "MediapipeHandDetector",
    "NoDetectionsError",
    "TemplateHandTracker",
    "VideoError",
    "run_extraction",
]
