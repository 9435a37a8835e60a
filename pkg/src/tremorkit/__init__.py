"""Hand-tremor amplitude measurement from tracked hand landmarks.

The pipeline: parse a landmark time series (``landmarks``), extract a
peak-trough amplitude in pixels (``amplitude``), convert to centimetres
through the camera geometry and measured depth (``camera``), and validate
against ground truth with agreement statistics (``agreement``) over
synthetic recordings (``synth``).
"""

__version__ = "0.1.0"

from .agreement import (
    AgreementResult,
    MethodPair,
    SubgroupComparison,
    TTestResult,
    bland_altman,
    bland_altman_svg,
    subgroup_compare,
    welch_t_test,
)
from .amplitude import (
    ExtremaSeries,
    LandmarkResult,
    MeasureConfig,
    TremorMeasurement,
    Waveform,
    find_extrema,
    instantaneous_amplitudes,
    measure_tremor,
    median_amplitude,
    preprocess,
)
from .camera import (
    CameraSpec,
    SceneScale,
    cm_to_pixels,
    default_camera,
    effective_sensor_width,
    pixels_to_cm,
    propagate_depth_error,
    scene_scale,
)
from .errors import (
    DegenerateVarianceError,
    EmptySelectionError,
    EmptyWaveformError,
    InsufficientDataError,
    MeasurementError,
    ParseError,
    ValidationError,
)
from .landmarks import (
    MONITORED_LANDMARKS,
    LandmarkSample,
    LandmarkTrack,
    Recording,
    RecordingMeta,
    parse_camera_file,
    parse_landmark_file,
    parse_metadata_file,
    select_monitored_tracks,
    serialize_landmark_file,
    serialize_metadata_file,
)
from .report import AnalysisReport, report_from_json, report_to_json
from .synth import SynthSpec, amplitude_category, generate, generate_grid

__all__ = [
    "AgreementResult",
    "AnalysisReport",
    "CameraSpec",
    "DegenerateVarianceError",
    "EmptySelectionError",
    "EmptyWaveformError",
    "ExtremaSeries",
    "InsufficientDataError",
    "LandmarkResult",
    "LandmarkSample",
    "LandmarkTrack",
    "MONITORED_LANDMARKS",
    "MeasureConfig",
    "MeasurementError",
    "MethodPair",
    "ParseError",
    "Recording",
    "RecordingMeta",
    "SceneScale",
    "SubgroupComparison",
    "SynthSpec",
    "TTestResult",
    "TremorMeasurement",
    "ValidationError",
    "Waveform",
    "amplitude_category",
    "bland_altman",
    "bland_altman_svg",
    "cm_to_pixels",
    "default_camera",
    "effective_sensor_width",
    "find_extrema",
    "generate",
    "generate_grid",
    "instantaneous_amplitudes",
    "measure_tremor",
    "median_amplitude",
    "parse_camera_file",
    "parse_landmark_file",
    "parse_metadata_file",
    "pixels_to_cm",
    "preprocess",
    "propagate_depth_error",
    "report_from_json",
    "report_to_json",
    "scene_scale",
    "select_monitored_tracks",
    "serialize_landmark_file",
    "serialize_metadata_file",
    "subgroup_compare",
    "welch_t_test",
]
