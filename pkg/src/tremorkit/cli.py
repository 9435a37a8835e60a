"""Command-line interface.

Subcommands mirror the workflow: ``synth`` generates ground-truth
recordings, ``analyze`` measures them, ``convert`` exposes the raw unit
conversion, and ``agree`` runs the methods-agreement statistics.

Exit codes: 0 success, 2 input error (unreadable/malformed files, invalid
values), 3 computation error (a measurement or statistic could not be
produced from otherwise valid input).

Values in an optional ``--config`` file override the corresponding flags.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import __version__
from .agreement import bland_altman, bland_altman_svg, parse_pairs_file, subgroup_compare
from .amplitude import MeasureConfig, measure_tremor
from .camera import CameraSpec, pixels_to_cm, scene_scale
from .errors import MeasurementError, ParseError
from .landmarks import (
    Recording,
    parse_camera_file,
    parse_key_value_file,
    parse_landmark_file,
    parse_metadata_file,
    serialize_landmark_file,
    serialize_metadata_file,
)
from .report import AnalysisReport, report_to_json
from .synth import (
    DEFAULT_GRID_AMPLITUDES_CM,
    DEFAULT_GRID_DEPTHS_CM,
    SynthSpec,
    amplitude_category,
    generate,
    generate_grid,
)

LANDMARKS_SUFFIX = ".landmarks.csv"
META_SUFFIX = ".meta.txt"


def meta_path_for(landmarks_path: Path) -> Path:
    """Companion metadata path: ``foo.landmarks.csv`` -> ``foo.meta.txt``."""
    name = landmarks_path.name
    if name.endswith(LANDMARKS_SUFFIX):
        return landmarks_path.with_name(name[: -len(LANDMARKS_SUFFIX)] + META_SUFFIX)
    return landmarks_path.with_suffix(META_SUFFIX)


def load_camera(path: str | None) -> CameraSpec:
    if path is None:
        data = resources.files("tremorkit.data").joinpath("default_camera.txt").read_bytes()
    else:
        data = Path(path).read_bytes()
    return parse_camera_file(data)


def _parse_id_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise ParseError(f"bad landmark id list '{text}'") from None


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise ParseError(f"bad number list '{text}'") from None


_CONFIG_KEYS = ("axis", "min_confidence", "smooth_window", "landmark_ids", "max_gap_s")


def build_measure_config(args: argparse.Namespace) -> MeasureConfig:
    config = MeasureConfig(
        axis=args.axis,
        min_confidence=args.min_confidence,
        smooth_window=args.smooth_window,
        max_gap_s=args.max_gap_s,
        landmark_ids=_parse_id_list(args.landmark_ids),
    )
    if args.config is None:
        return config
    values = parse_key_value_file(Path(args.config).read_bytes())
    unknown = sorted(set(values) - set(_CONFIG_KEYS))
    if unknown:
        raise ParseError(f"unknown config keys: {', '.join(unknown)}")
    try:
        if "axis" in values:
            config = replace(config, axis=values["axis"])
        if "min_confidence" in values:
            config = replace(config, min_confidence=float(values["min_confidence"]))
        if "smooth_window" in values:
            config = replace(config, smooth_window=int(values["smooth_window"]))
        if "max_gap_s" in values:
            config = replace(config, max_gap_s=float(values["max_gap_s"]))
        if "landmark_ids" in values:
            config = replace(config, landmark_ids=_parse_id_list(values["landmark_ids"]))
    except ValueError as exc:
        raise ParseError(f"bad config value: {exc}") from None
    return config


def _analyze_one(landmarks_path: Path, meta_path: Path, config: MeasureConfig) -> str:
    meta = parse_metadata_file(meta_path.read_bytes())
    rec = parse_landmark_file(landmarks_path.read_bytes(), meta=meta)
    measurement = measure_tremor(rec, config.landmark_ids, config)
    scene = scene_scale(meta.camera, meta.depth_cm)
    report = AnalysisReport(recording=str(landmarks_path), measurement=measurement, scene=scene)
    return report_to_json(report)


def cmd_analyze(args: argparse.Namespace) -> int:
    config = build_measure_config(args)
    if args.manifest is not None:
        manifest = Path(args.manifest)
        rows = _read_manifest(manifest)
        for rel_path in rows:
            landmarks_path = (manifest.parent / rel_path).resolve()
            print(_analyze_one(landmarks_path, meta_path_for(landmarks_path), config))
        return 0
    landmarks_path = Path(args.landmarks)
    meta_path = Path(args.meta) if args.meta else meta_path_for(landmarks_path)
    print(_analyze_one(landmarks_path, meta_path, config))
    return 0


def _read_manifest(path: Path) -> list[str]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ParseError("empty manifest", line=1)
    header = lines[0].split(",")
    if "path" not in header:
        raise ParseError("manifest header must contain a 'path' column", line=1)
    col = header.index("path")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", line=i)
        rows.append(fields[col])
    return rows


def cmd_convert(args: argparse.Namespace) -> int:
    camera = load_camera(args.camera)
    print(pixels_to_cm(args.pixels, camera, args.depth_cm))
    return 0


def cmd_agree(args: argparse.Namespace) -> int:
    pairs = parse_pairs_file(Path(args.pairs).read_bytes())
    result = bland_altman(pairs)
    print(f"n = {result.n}")
    print(f"bias_cm = {result.bias_cm:.4f}")
    print(f"sd_cm = {result.sd_cm:.4f}")
    print(f"loa_low_cm = {result.loa_low_cm:.4f}")
    print(f"loa_high_cm = {result.loa_high_cm:.4f}")
    if args.group_by is not None:
        comparison = subgroup_compare(pairs, args.group_by)
        for value, group in comparison.groups.items():
            print(
                f"group {args.group_by}={value}: n = {group.n}, bias_cm = {group.bias_cm:.4f}, "
                f"loa_low_cm = {group.loa_low_cm:.4f}, loa_high_cm = {group.loa_high_cm:.4f}"
            )
        if comparison.ttest is not None:
            print(f"t_stat = {comparison.ttest.t_stat:.4f}")
            print(f"df = {comparison.ttest.df:.4f}")
            print(f"p_two_sided = {comparison.ttest.p_two_sided:.4f}")
        else:
            print(comparison.skipped_reason, file=sys.stderr)
    if args.svg is not None:
        Path(args.svg).write_bytes(bland_altman_svg(pairs, result))
    return 0


_SPEC_KEYS = {
    "amplitude_cm": float,
    "freq_hz": float,
    "phase_rad": float,
    "duration_s": float,
    "fps": float,
    "depth_cm": float,
    "drift_px_per_s": float,
    "noise_px": float,
    "ramp_s": float,
    "seed": int,
    "landmark_ids": _parse_id_list,
}


def _spec_from_args(args: argparse.Namespace, camera: CameraSpec) -> SynthSpec:
    spec = SynthSpec(
        amplitude_cm=args.amplitude_cm,
        freq_hz=args.freq_hz,
        phase_rad=args.phase_rad,
        duration_s=args.duration_s,
        fps=args.fps,
        depth_cm=args.depth_cm,
        camera=camera,
        drift_px_per_s=args.drift_px_per_s,
        noise_px=args.noise_px,
        ramp_s=args.ramp_s,
        seed=args.seed,
        landmark_ids=_parse_id_list(args.landmark_ids),
    )
    if args.spec is None:
        return spec
    values = parse_key_value_file(Path(args.spec).read_bytes())
    unknown = sorted(set(values) - set(_SPEC_KEYS))
    if unknown:
        raise ParseError(f"unknown synth spec keys: {', '.join(unknown)}")
    fields = {}
    for key, value in values.items():
        try:
            fields[key] = _SPEC_KEYS[key](value)
        except ValueError:
            raise ParseError(f"synth spec key '{key}': bad value '{value}'") from None
    return replace(spec, **fields)


def _write_recording(rec: Recording, out_dir: Path, stem: str) -> Path:
    landmarks_path = out_dir / f"{stem}{LANDMARKS_SUFFIX}"
    landmarks_path.write_bytes(serialize_landmark_file(rec))
    meta_path_for(landmarks_path).write_bytes(serialize_metadata_file(rec.meta))
    return landmarks_path


def cmd_synth(args: argparse.Namespace) -> int:
    camera = load_camera(args.camera)
    base = _spec_from_args(args, camera)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not args.grid:
        path = _write_recording(generate(base), out_dir, "rec")
        print(path)
        return 0
    grid = generate_grid(
        base,
        amplitudes_cm=_parse_float_list(args.amplitudes),
        depths_cm=_parse_float_list(args.depths),
        replicates=args.replicates,
    )
    manifest_lines = ["path,ground_truth_cm,depth_cm,amplitude_category"]
    for i, (rec, truth_cm) in enumerate(grid):
        path = _write_recording(rec, out_dir, f"rec_{i:03d}")
        manifest_lines.append(
            f"{path.name},{truth_cm:g},{rec.meta.depth_cm:g},{amplitude_category(truth_cm)}"
        )
    manifest_path = out_dir / "manifest.csv"
    manifest_path.write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    print(manifest_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tremorkit",
        description="Measure hand-tremor amplitude from landmark time series.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="measure tremor amplitude of a recording")
    p.add_argument("landmarks", nargs="?", help="landmark CSV file")
    p.add_argument("meta", nargs="?", help="metadata file (default: derived from landmark path)")
    p.add_argument("--manifest", help="batch mode: manifest CSV with a 'path' column")
    p.add_argument("--config", help="key-value config file; overrides flags")
    p.add_argument("--axis", default="x", choices=("x", "y"))
    p.add_argument("--min-confidence", type=float, default=0.5)
    p.add_argument("--smooth-window", type=int, default=1)
    p.add_argument("--max-gap-s", type=float, default=0.5)
    p.add_argument("--landmark-ids", default="2,3,4,5,6,8")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("convert", help="convert a pixel distance to centimetres")
    p.add_argument("--pixels", type=float, required=True)
    p.add_argument("--depth-cm", type=float, required=True)
    p.add_argument("--camera", help="camera spec file (default: bundled iPhone XR front)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("agree", help="Bland-Altman agreement analysis on a pairs CSV")
    p.add_argument("pairs", help="CSV with header cv_cm,ref_cm[,label...]")
    p.add_argument("--group-by", help="label key for subgroup analysis")
    p.add_argument("--svg", help="write a Bland-Altman plot to this path")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("synth", help="generate synthetic recordings with known amplitude")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--spec", help="key-value synth spec file; overrides flags")
    p.add_argument("--grid", action="store_true", help="generate the full validation grid")
    p.add_argument("--amplitudes", default=",".join(f"{a:g}" for a in DEFAULT_GRID_AMPLITUDES_CM))
    p.add_argument("--depths", default=",".join(f"{d:g}" for d in DEFAULT_GRID_DEPTHS_CM))
    p.add_argument("--replicates", type=int, default=4)
    p.add_argument("--amplitude-cm", type=float, default=2.0)
    p.add_argument("--freq-hz", type=float, default=5.0)
    p.add_argument("--phase-rad", type=float, default=0.0)
    p.add_argument("--duration-s", type=float, default=12.0)
    p.add_argument("--fps", type=float, default=60.0)
    p.add_argument("--depth-cm", type=float, default=75.0)
    p.add_argument("--drift-px-per-s", type=float, default=0.0)
    p.add_argument("--noise-px", type=float, default=0.0)
    p.add_argument("--ramp-s", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--landmark-ids", default="2,3,4,5,6,8")
    p.add_argument("--camera", help="camera spec file (default: bundled iPhone XR front)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze" and (args.landmarks is None) == (args.manifest is None):
        print("analyze: provide either a landmarks file or --manifest", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except MeasurementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
