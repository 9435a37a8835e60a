"""Machine-readable analysis report (JSON, schema version 1).

Schema::

    {
      "report_version": 1,
      "recording": "<path>",
      "axis": "x",
      "amplitude_px": <float>,
      "amplitude_cm": <float|null>,
      "scene": {"v_w_mm": .., "depth_cm": .., "view_width_mm": .., "mm_per_px": ..} | null,
      "per_landmark": {"<id>": {"amplitude_px": <float|null>, "n_extrema": <int>,
                                "n_pairs": <int>, "n_segments": <int>, "error": <str|null>}},
      "config": {"axis": .., "min_confidence": .., "smooth_window": ..,
                 "max_gap_s": .., "landmark_ids": [..]},
      "warnings": ["..."]
    }

Reports round-trip exactly through :func:`report_to_json` /
:func:`report_from_json`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .amplitude import LandmarkResult, MeasureConfig, TremorMeasurement
from .camera import SceneScale
from .errors import ParseError

REPORT_VERSION = 1


@dataclass
class AnalysisReport:
    recording: str
    measurement: TremorMeasurement
    scene: SceneScale | None


def report_to_dict(report: AnalysisReport) -> dict:
    m = report.measurement
    scene = None
    if report.scene is not None:
        scene = {
            "v_w_mm": report.scene.v_w_mm,
            "depth_cm": report.scene.depth_cm,
            "view_width_mm": report.scene.view_width_mm,
            "mm_per_px": report.scene.mm_per_px,
        }
    return {
        "report_version": REPORT_VERSION,
        "recording": report.recording,
        "axis": m.axis,
        "amplitude_px": m.amplitude_px,
        "amplitude_cm": m.amplitude_cm,
        "scene": scene,
        "per_landmark": {
            str(lid): {
                "amplitude_px": r.amplitude_px,
                "n_extrema": r.n_extrema,
                "n_pairs": r.n_pairs,
                "n_segments": r.n_segments,
                "error": r.error,
            }
            for lid, r in sorted(m.per_landmark.items())
        },
        "config": {
            "axis": m.config.axis,
            "min_confidence": m.config.min_confidence,
            "smooth_window": m.config.smooth_window,
            "max_gap_s": m.config.max_gap_s,
            "landmark_ids": list(m.config.landmark_ids),
        },
        "warnings": list(m.warnings),
    }


def report_from_dict(d: dict) -> AnalysisReport:
    try:
        if d["report_version"] != REPORT_VERSION:
            raise ParseError(f"unsupported report_version {d['report_version']}")
        config = MeasureConfig(
            axis=d["config"]["axis"],
            min_confidence=d["config"]["min_confidence"],
            smooth_window=d["config"]["smooth_window"],
            max_gap_s=d["config"]["max_gap_s"],
            landmark_ids=tuple(d["config"]["landmark_ids"]),
        )
        per = {
            int(lid): LandmarkResult(
                amplitude_px=r["amplitude_px"],
                n_extrema=r["n_extrema"],
                n_pairs=r["n_pairs"],
                n_segments=r["n_segments"],
                error=r["error"],
            )
            for lid, r in d["per_landmark"].items()
        }
        measurement = TremorMeasurement(
            amplitude_px=d["amplitude_px"],
            amplitude_cm=d["amplitude_cm"],
            per_landmark=per,
            axis=d["axis"],
            config=config,
            warnings=tuple(d["warnings"]),
        )
        scene = None
        if d["scene"] is not None:
            scene = SceneScale(
                v_w_mm=d["scene"]["v_w_mm"],
                depth_cm=d["scene"]["depth_cm"],
                view_width_mm=d["scene"]["view_width_mm"],
                mm_per_px=d["scene"]["mm_per_px"],
            )
        return AnalysisReport(recording=d["recording"], measurement=measurement, scene=scene)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed report: {exc}") from None


def report_to_json(report: AnalysisReport) -> str:
    """Compact single-line JSON (suitable for JSON-lines batch output)."""
    return json.dumps(report_to_dict(report), separators=(",", ":"), sort_keys=True)


def report_from_json(text: str) -> AnalysisReport:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc}") from None
    return report_from_dict(data)
