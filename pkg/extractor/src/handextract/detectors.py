"""Hand detectors producing 21-point landmark sets in absolute pixels.

Two implementations share one tiny interface (``detect(frame) ->
HandDetection | None``):

* :class:`TemplateHandTracker` — self-contained classical tracker: Otsu
  segmentation of the dominant high-contrast region, largest external
  contour as the hand, canonical 21-landmark template mapped into its
  bounding box. No ML runtime required; intended for controlled footage
  and as the offline fallback.
* :class:`MediapipeHandDetector` — thin wrapper around the Mediapipe hand
  tracker (``pip install mediapipe``); imported lazily so the package
  works without it.
"""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

N_LANDMARKS = 21

# Canonical landmark layout (x, y) normalized to the hand bounding box,
# fingers up, thumb on the left. Ordering: 0 wrist, 1-4 thumb, 5-8 index,
# 9-12 middle, 13-16 ring, 17-20 pinky (base -> tip).
HAND_TEMPLATE = np.array([
    (0.50, 0.97),
    (0.28, 0.84), (0.15, 0.68), (0.07, 0.54), (0.03, 0.42),
    (0.30, 0.45), (0.28, 0.27), (0.27, 0.15), (0.26, 0.04),
    (0.47, 0.42), (0.47, 0.23), (0.47, 0.11), (0.47, 0.02),
    (0.63, 0.45), (0.65, 0.27), (0.66, 0.16), (0.67, 0.06),
    (0.79, 0.52), (0.83, 0.38), (0.85, 0.28), (0.87, 0.19),
])


@dataclass
class HandDetection:
    """One detected hand: (21, 2) landmark array in pixels plus a score."""

    landmarks: np.ndarray
    confidence: float


class TemplateHandTracker:
    """Segment the dominant foreground blob and fit the landmark template.

    ``min_area_frac`` rejects blobs smaller than this fraction of the frame
    (sensor noise, specks); confidence is the blob's bounding-box solidity.
    """

    def __init__(self, min_area_frac: float = 0.005):
        self.min_area_frac = min_area_frac

    def detect(self, frame_bgr: np.ndarray) -> HandDetection | None:
        gray = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2GRAY)
        blurred = cv2.GaussianBlur(gray, (5, 5), 0)
        _, mask = cv2.threshold(blurred, 0, 255, cv2.THRESH_BINARY + cv2.THRESH_OTSU)
        # the hand is the minority region; flip the mask if Otsu put the
        # background in the foreground
        if np.count_nonzero(mask) > mask.size // 2:
            mask = cv2.bitwise_not(mask)
        contours, _ = cv2.findContours(mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
        if not contours:
            return None
        contour = max(contours, key=cv2.contourArea)
        area = cv2.contourArea(contour)
        if area < self.min_area_frac * mask.size:
            return None
        bx, by, bw, bh = cv2.boundingRect(contour)
        landmarks = HAND_TEMPLATE * np.array([bw, bh]) + np.array([bx, by])
        solidity = float(area) / float(bw * bh)
        return HandDetection(landmarks=landmarks, confidence=min(solidity, 1.0))


class MediapipeHandDetector:
    """Mediapipe hand tracker adapter (normalized coordinates scaled to the
    frame). Requires the optional ``mediapipe`` package."""

    def __init__(self, min_detection_confidence: float = 0.5,
                 min_tracking_confidence: float = 0.5):
        try:
            import mediapipe as mp
        except ImportError as exc:
            raise RuntimeError(
                "the 'mediapipe' detector needs the mediapipe package "
                "(pip install mediapipe); the bundled 'template' detector "
                "runs without it"
            ) from exc
        self._hands = mp.solutions.hands.Hands(
            static_image_mode=False,
            max_num_hands=1,
            min_detection_confidence=min_detection_confidence,
            min_tracking_confidence=min_tracking_confidence,
        )

    def detect(self, frame_bgr: np.ndarray) -> HandDetection | None:
        height, width = frame_bgr.shape[:2]
        rgb = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2RGB)
        result = self._hands.process(rgb)
        if not result.multi_hand_landmarks:
            return None
        hand = result.multi_hand_landmarks[0]
        landmarks = np.array([(lm.x * width, lm.y * height) for lm in hand.landmark])
        score = 1.0
        if result.multi_handedness:
            score = float(result.multi_handedness[0].classification[0].score)
        return HandDetection(landmarks=landmarks, confidence=score)


def make_detector(name: str, min_detection_confidence: float):
    if name == "template":
        return TemplateHandTracker()
    if name == "mediapipe":
        return MediapipeHandDetector(min_detection_confidence=min_detection_confidence)
    raise ValueError(f"unknown detector '{name}' (choose 'template' or 'mediapipe')")
