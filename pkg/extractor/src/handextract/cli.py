"""Command line: video in, tremorkit landmark + metadata files out.

Exit codes: 0 success, 2 input error (unreadable video, bad flags), 3 zero
frames with a hand detection.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extract import ExtractionJob, NoDetectionsError, run_extraction
from .landmarks_io import CameraOptics, parse_camera_optics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="handextract",
        description="Extract hand landmarks from a video into the tremorkit file formats.",
    )
    parser.add_argument("--video", required=True, help="input video file (portrait)")
    parser.add_argument("--depth-cm", type=float, required=True,
                        help="camera-to-hand depth for this recording")
    parser.add_argument("--out-landmarks", required=True, help="landmark CSV output path")
    parser.add_argument("--out-meta", required=True, help="metadata output path")
    parser.add_argument("--camera", help="camera spec file for lens properties "
                                         "(default: iPhone XR front camera)")
    parser.add_argument("--detector", default="template", choices=("template", "mediapipe"))
    parser.add_argument("--min-detection-confidence", type=float, default=0.5)
    parser.add_argument("--label", action="append", default=[], metavar="KEY=VALUE",
                        help="extra metadata label (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        optics = CameraOptics()
        if args.camera is not None:
            optics = parse_camera_optics(Path(args.camera).read_bytes())
        labels = {}
        for item in args.label:
            key, sep, value = item.partition("=")
            if not sep or not key:
                print(f"error: bad --label '{item}', expected KEY=VALUE", file=sys.stderr)
                return 2
            labels[key] = value
        job = ExtractionJob(
            video_path=Path(args.video),
            out_landmarks=Path(args.out_landmarks),
            out_meta=Path(args.out_meta),
            depth_cm=args.depth_cm,
            detector=args.detector,
            min_detection_confidence=args.min_detection_confidence,
            optics=optics,
            labels=labels,
        )
        result = run_extraction(job)
    except NoDetectionsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"frames_total = {result.frames_total}")
    print(f"frames_detected = {result.frames_detected}")
    print(f"coverage = {result.coverage:.6f}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
