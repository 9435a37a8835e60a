"""Pixel-to-distance conversion from camera intrinsics and measured depth.

A video shot in portrait uses a centered crop of the sensor: full sensor
height, width cropped to the video aspect ratio. The physical width of that
crop (``v_w``, mm) is derived from the 35mm-equivalent focal length via the
industry frame-diagonal convention (full-frame diagonal 43.2666 mm). Similar
triangles then give the scene width at depth ``d``::

    crop factor  c = fe_mm / f_mm
    diagonal     D = 43.2666 / c
    height       h = D / sqrt(1 + a_s^2)      (portrait: width = a_s * height)
    crop width   v_w = h * a_v
    scene width  w = v_w * d / f_mm           (d and w in the same unit)

One horizontal pixel therefore spans ``w / res_h_px`` at the hand's depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

FULL_FRAME_DIAGONAL_MM = 43.2666

# iPhone XR front-facing camera, the bundled default (data/default_camera.txt).
DEFAULT_F_MM = 2.87
DEFAULT_FE_MM = 32.0
DEFAULT_ASPECT_SENSOR = 0.75
DEFAULT_ASPECT_VIDEO = 0.5625
DEFAULT_RES_H_PX = 1080


@dataclass(frozen=True)
class CameraSpec:
    """Camera intrinsics and video-crop geometry (portrait orientation).

    ``sensor_width_override_mm`` bypasses the 35mm-equivalence derivation for
    users who have measured the effective sensor width directly.
    """

    f_mm: float
    fe_mm: float
    aspect_sensor: float
    aspect_video: float
    res_h_px: int
    sensor_width_override_mm: float | None = None

    def __post_init__(self):
        if not (self.f_mm > 0):
            raise ValidationError(f"f_mm must be positive, got {self.f_mm}")
        if self.fe_mm < self.f_mm:
            raise ValidationError(
                f"fe_mm must be >= f_mm, got fe_mm={self.fe_mm} f_mm={self.f_mm}"
            )
        if not (0 < self.aspect_video <= self.aspect_sensor <= 1):
            raise ValidationError(
                "portrait aspect ratios must satisfy 0 < aspect_video <= "
                f"aspect_sensor <= 1, got a_v={self.aspect_video} a_s={self.aspect_sensor}"
            )
        if self.res_h_px < 1:
            raise ValidationError(f"res_h_px must be >= 1, got {self.res_h_px}")
        if self.sensor_width_override_mm is not None and self.sensor_width_override_mm <= 0:
            raise ValidationError("sensor_width_override_mm must be positive")


def default_camera() -> CameraSpec:
    """The bundled default camera (iPhone XR front-facing, 1080p portrait)."""
    return CameraSpec(
        f_mm=DEFAULT_F_MM,
        fe_mm=DEFAULT_FE_MM,
        aspect_sensor=DEFAULT_ASPECT_SENSOR,
        aspect_video=DEFAULT_ASPECT_VIDEO,
        res_h_px=DEFAULT_RES_H_PX,
    )


@dataclass(frozen=True)
class SceneScale:
    """Horizontal scale of the scene at a given depth."""

    v_w_mm: float
    depth_cm: float
    view_width_mm: float
    mm_per_px: float

    def __post_init__(self):
        for name in ("v_w_mm", "depth_cm", "view_width_mm", "mm_per_px"):
            if not (getattr(self, name) > 0):
                raise ValidationError(f"SceneScale.{name} must be positive")


def effective_sensor_width(cam: CameraSpec) -> float:
    """Physical width in mm of the sensor region used by the video crop."""
    if cam.sensor_width_override_mm is not None:
        return cam.sensor_width_override_mm
    crop_factor = cam.fe_mm / cam.f_mm
    diagonal = FULL_FRAME_DIAGONAL_MM / crop_factor
    height = diagonal / math.sqrt(1.0 + cam.aspect_sensor**2)
    return height * cam.aspect_video


def scene_scale(cam: CameraSpec, depth_cm: float) -> SceneScale:
    """Scene width and pixel pitch at ``depth_cm`` from the camera."""
    if not (depth_cm > 0):
        raise ValueError(f"depth_cm must be positive, got {depth_cm}")
    v_w = effective_sensor_width(cam)
    view_width_mm = v_w * (depth_cm * 10.0) / cam.f_mm
    return SceneScale(
        v_w_mm=v_w,
        depth_cm=depth_cm,
        view_width_mm=view_width_mm,
        mm_per_px=view_width_mm / cam.res_h_px,
    )


def pixels_to_cm(pix: float, cam: CameraSpec, depth_cm: float) -> float:
    """Convert a horizontal pixel distance to centimetres at ``depth_cm``."""
    if pix < 0:
        raise ValueError(f"pixel distance must be non-negative, got {pix}")
    scale = scene_scale(cam, depth_cm)
    return pix * scale.mm_per_px / 10.0


def cm_to_pixels(dist_cm: float, cam: CameraSpec, depth_cm: float) -> float:
    """Inverse of :func:`pixels_to_cm`: project a cm distance onto pixels."""
    if dist_cm < 0:
        raise ValueError(f"distance must be non-negative, got {dist_cm}")
    scale = scene_scale(cam, depth_cm)
    return dist_cm * 10.0 / scale.mm_per_px


def propagate_depth_error(amplitude_cm: float, depth_cm: float, depth_err_cm: float) -> float:
    """First-order amplitude error induced by a depth-sensor error.

    The conversion is linear in depth, so a relative depth error of
    ``depth_err_cm / depth_cm`` carries through to the amplitude unchanged.
    """
    if not (depth_cm > 0):
        raise ValueError(f"depth_cm must be positive, got {depth_cm}")
    if depth_err_cm < 0:
        raise ValueError(f"depth_err_cm must be non-negative, got {depth_err_cm}")
    return amplitude_cm * (depth_err_cm / depth_cm)
