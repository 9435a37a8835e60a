"""Writers for the tremorkit landmark and metadata file formats.

The analysis package is the schema authority; this module reproduces the
documented formats exactly (UTF-8, LF endings, header
``frame,t,landmark_id,x,y,confidence``, six decimal places, rows sorted by
frame then landmark id) so the adapter stays decoupled from its internals.
"""

from __future__ import annotations

from dataclasses import dataclass

LANDMARK_HEADER = "frame,t,landmark_id,x,y,confidence"


@dataclass(frozen=True)
class LandmarkRow:
    frame: int
    t: float
    landmark_id: int
    x: float
    y: float
    confidence: float


@dataclass(frozen=True)
class CameraOptics:
    """Lens properties; video geometry is read from the video itself."""

    f_mm: float = 2.87
    fe_mm: float = 32.0
    aspect_sensor: float = 0.75
    sensor_width_override_mm: float | None = None


def serialize_rows(rows: list[LandmarkRow]) -> bytes:
    out = [LANDMARK_HEADER]
    for r in sorted(rows, key=lambda r: (r.frame, r.landmark_id)):
        out.append(
            f"{r.frame},{r.t:.6f},{r.landmark_id},{r.x:.6f},{r.y:.6f},{r.confidence:.6f}"
        )
    out.append("")
    return "\n".join(out).encode("utf-8")


def serialize_metadata(
    depth_cm: float,
    fps: float,
    width_px: int,
    height_px: int,
    optics: CameraOptics,
    labels: dict[str, str],
) -> bytes:
    aspect_video = width_px / height_px
    lines = [
        f"depth_cm = {depth_cm!r}",
        f"fps = {fps!r}",
        f"width_px = {width_px}",
        f"height_px = {height_px}",
        f"camera.f_mm = {optics.f_mm!r}",
        f"camera.fe_mm = {optics.fe_mm!r}",
        f"camera.aspect_sensor = {optics.aspect_sensor!r}",
        f"camera.aspect_video = {aspect_video!r}",
        f"camera.res_h_px = {width_px}",
    ]
    if optics.sensor_width_override_mm is not None:
        lines.append(f"camera.sensor_width_override_mm = {optics.sensor_width_override_mm!r}")
    for key in sorted(labels):
        lines.append(f"labels.{key} = {labels[key]}")
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def parse_camera_optics(data: bytes) -> CameraOptics:
    """Read lens keys from a camera spec file; geometry keys are ignored
    because they come from the video."""
    known = {"f_mm": float, "fe_mm": float, "aspect_sensor": float,
             "sensor_width_override_mm": float}
    ignored = {"aspect_video", "res_h_px"}
    values: dict[str, float] = {}
    for i, raw in enumerate(data.decode("utf-8").split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"camera file line {i}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in ignored:
            continue
        if key not in known:
            raise ValueError(f"camera file line {i}: unknown key '{key}'")
        values[key] = known[key](value.strip())
    return CameraOptics(
        f_mm=values.get("f_mm", 2.87),
        fe_mm=values.get("fe_mm", 32.0),
        aspect_sensor=values.get("aspect_sensor", 0.75),
        sensor_width_override_mm=values.get("sensor_width_override_mm"),
    )
