"""Template tracker behaviour on synthetic frames."""

import numpy as np
import pytest

from rendering import BG_GRAY, draw_hand
from handextract.detectors import N_LANDMARKS, TemplateHandTracker, make_detector


def blank_frame(width=270, height=480):
    return np.full((height, width, 3), BG_GRAY, np.uint8)


class TestTemplateHandTracker:
    def test_detects_hand_blob(self):
        frame = blank_frame()
        draw_hand(frame, cx=135, cy=240)
        detection = TemplateHandTracker().detect(frame)
        assert detection is not None
        assert detection.landmarks.shape == (N_LANDMARKS, 2)
        assert 0.0 < detection.confidence <= 1.0
        # all landmarks inside the frame and around the drawn hand
        assert np.all(detection.landmarks[:, 0] > 40)
        assert np.all(detection.landmarks[:, 0] < 230)
        assert np.all(detection.landmarks[:, 1] > 120)
        assert np.all(detection.landmarks[:, 1] < 360)

    def test_landmarks_translate_with_hand(self):
        a, b = blank_frame(), blank_frame()
        draw_hand(a, cx=110, cy=240)
        draw_hand(b, cx=160, cy=240)
        tracker = TemplateHandTracker()
        da, db = tracker.detect(a), tracker.detect(b)
        shift = db.landmarks[:, 0] - da.landmarks[:, 0]
        assert np.all(np.abs(shift - 50.0) < 2.0)

    def test_empty_frame_is_none(self):
        assert TemplateHandTracker().detect(blank_frame()) is None

    def test_small_speck_rejected(self):
        frame = blank_frame()
        frame[100:103, 100:103] = 255
        assert TemplateHandTracker().detect(frame) is None

    def test_deterministic(self):
        frame = blank_frame()
        draw_hand(frame, cx=140, cy=250)
        tracker = TemplateHandTracker()
        first, second = tracker.detect(frame), tracker.detect(frame)
        assert np.array_equal(first.landmarks, second.landmarks)
        assert first.confidence == second.confidence


class TestMakeDetector:
    def test_template(self):
        assert isinstance(make_detector("template", 0.5), TemplateHandTracker)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            make_detector("yolo", 0.5)

    def test_mediapipe_without_package_explains(self):
        try:
            import mediapipe  # noqa: F401
        except ImportError:
            with pytest.raises(RuntimeError, match="mediapipe"):
                make_detector("mediapipe", 0.5)
        else:
            pytest.skip("mediapipe installed; error path not reachable")
