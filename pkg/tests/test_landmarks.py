"""Landmark file parsing, canonical serialization, metadata handling."""

import numpy as np
import pytest

from helpers import make_random_recording
from tremorkit import (
    EmptySelectionError,
    LandmarkSample,
    LandmarkTrack,
    ParseError,
    Recording,
    ValidationError,
    default_camera,
    parse_camera_file,
    parse_landmark_file,
    parse_metadata_file,
    select_monitored_tracks,
    serialize_landmark_file,
    serialize_metadata_file,
)

HEADER = b"frame,t,landmark_id,x,y,confidence\n"


def assert_recordings_close(a: Recording, b: Recording, px_tol=1e-5, t_tol=1e-6):
    assert sorted(a.tracks) == sorted(b.tracks)
    for lid in a.tracks:
        ta, tb = a.tracks[lid], b.tracks[lid]
        assert np.array_equal(ta.frame_index, tb.frame_index)
        assert np.max(np.abs(ta.t - tb.t), initial=0) <= t_tol
        assert np.max(np.abs(ta.x - tb.x), initial=0) <= px_tol
        assert np.max(np.abs(ta.y - tb.y), initial=0) <= px_tol
        assert np.max(np.abs(ta.confidence - tb.confidence), initial=0) <= px_tol


class TestParse:
    def test_minimal_two_rows(self):
        data = HEADER + b"0,0.000000,4,10.500000,20.000000,1.000000\n" \
                        b"0,0.000000,8,11.000000,21.000000,0.900000\n"
        rec = parse_landmark_file(data)
        assert sorted(rec.tracks) == [4, 8]
        assert len(rec.tracks[4]) == 1
        assert rec.tracks[4].x[0] == pytest.approx(10.5)

    def test_nan_coordinate_rejected_with_line(self):
        data = HEADER + b"0,0.0,4,nan,20.0,1.0\n"
        with pytest.raises(ValidationError, match="line 2"):
            parse_landmark_file(data)

    def test_inf_coordinate_rejected(self):
        data = HEADER + b"0,0.0,4,1.0,inf,1.0\n"
        with pytest.raises(ValidationError, match="line 2"):
            parse_landmark_file(data)

    def test_bad_header_rejected(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_landmark_file(b"frame,time,id,x,y,conf\n")

    def test_empty_file_rejected(self):
        with pytest.raises(ParseError):
            parse_landmark_file(b"")

    def test_wrong_field_count(self):
        data = HEADER + b"0,0.0,4,1.0,2.0\n"
        with pytest.raises(ParseError, match="line 2"):
            parse_landmark_file(data)

    def test_non_numeric_field(self):
        data = HEADER + b"0,0.0,4,abc,2.0,1.0\n"
        with pytest.raises(ParseError, match="line 2"):
            parse_landmark_file(data)

    def test_unknown_landmark_id(self):
        data = HEADER + b"0,0.0,21,1.0,2.0,1.0\n"
        with pytest.raises(ValidationError, match="landmark_id"):
            parse_landmark_file(data)

    def test_confidence_out_of_range(self):
        data = HEADER + b"0,0.0,4,1.0,2.0,1.5\n"
        with pytest.raises(ValidationError, match="confidence"):
            parse_landmark_file(data)

    def test_non_increasing_timestamps_within_track(self):
        data = HEADER + b"0,0.100000,4,1.0,2.0,1.0\n" + b"1,0.100000,4,1.5,2.0,1.0\n"
        with pytest.raises(ValidationError, match="non-increasing"):
            parse_landmark_file(data)

    def test_interleaved_tracks_ok(self):
        # Non-increasing check applies per track, not across the file.
        data = HEADER + (
            b"0,0.000000,4,1.0,2.0,1.0\n"
            b"0,0.000000,8,1.0,2.0,1.0\n"
            b"1,0.016667,4,1.1,2.0,1.0\n"
            b"1,0.016667,8,1.1,2.0,1.0\n"
        )
        rec = parse_landmark_file(data)
        assert len(rec.tracks[4]) == 2
        assert len(rec.tracks[8]) == 2


class TestSerialize:
    def test_empty_recording_is_header_only(self):
        assert serialize_landmark_file(Recording(tracks={})) == HEADER

    def test_single_sample_row_format(self):
        track = LandmarkTrack.from_samples(
            4, [LandmarkSample(frame_index=3, t=0.05, landmark_id=4, x=12.25, y=7.5, confidence=1.0)]
        )
        data = serialize_landmark_file(Recording(tracks={4: track}))
        assert data == HEADER + b"3,0.050000,4,12.250000,7.500000,1.000000\n"

    def test_rows_sorted_by_frame_then_id(self):
        t8 = LandmarkTrack(landmark_id=8, frame_index=[0, 2], t=[0.0, 0.2],
                           x=[1.0, 2.0], y=[0.0, 0.0], confidence=[1.0, 1.0])
        t4 = LandmarkTrack(landmark_id=4, frame_index=[1, 2], t=[0.1, 0.2],
                           x=[5.0, 6.0], y=[0.0, 0.0], confidence=[1.0, 1.0])
        lines = serialize_landmark_file(Recording(tracks={8: t8, 4: t4})).decode().splitlines()
        keys = [(int(l.split(",")[0]), int(l.split(",")[2])) for l in lines[1:]]
        assert keys == [(0, 8), (1, 4), (2, 4), (2, 8)]

    def test_deterministic(self, rng):
        rec = make_random_recording(rng)
        assert serialize_landmark_file(rec) == serialize_landmark_file(rec)


class TestRoundTrip:
    def test_parse_serialize_identity(self, rng):
        for _ in range(50):
            rec = make_random_recording(rng, with_meta=False)
            rec2 = parse_landmark_file(serialize_landmark_file(rec))
            assert_recordings_close(rec, rec2)

    def test_reserialization_is_byte_identical(self, rng):
        # After one canonicalizing pass the bytes are a fixed point.
        for _ in range(10):
            rec = make_random_recording(rng, with_meta=False)
            data = serialize_landmark_file(rec)
            assert serialize_landmark_file(parse_landmark_file(data)) == data


class TestSelectMonitoredTracks:
    def _recording(self, ids):
        tracks = {
            lid: LandmarkTrack(landmark_id=lid, frame_index=[0], t=[0.0],
                               x=[1.0], y=[1.0], confidence=[1.0])
            for lid in ids
        }
        return Recording(tracks=tracks)

    def test_default_six_points(self):
        rec = self._recording(range(21))
        tracks = select_monitored_tracks(rec, {2, 3, 4, 5, 6, 8})
        assert [t.landmark_id for t in tracks] == [2, 3, 4, 5, 6, 8]

    def test_single_id(self):
        rec = self._recording([4, 7])
        tracks = select_monitored_tracks(rec, {4})
        assert [t.landmark_id for t in tracks] == [4]

    def test_none_present_raises(self):
        rec = self._recording([2, 3, 4])
        with pytest.raises(EmptySelectionError):
            select_monitored_tracks(rec, {9})

    def test_empty_ids_rejected(self):
        with pytest.raises(ValueError):
            select_monitored_tracks(self._recording([4]), set())


META_TEXT = b"""# recording metadata
depth_cm = 100.0
fps = 60.0
width_px = 1080
height_px = 1920
camera.f_mm = 2.87
camera.fe_mm = 32.0
camera.aspect_sensor = 0.75
camera.aspect_video = 0.5625
camera.res_h_px = 1080
labels.subject = a
labels.tremor_type = rest
"""


class TestMetadata:
    def test_parse(self):
        meta = parse_metadata_file(META_TEXT)
        assert meta.depth_cm == 100.0
        assert meta.fps == 60.0
        assert meta.camera.res_h_px == 1080
        assert meta.labels == {"subject": "a", "tremor_type": "rest"}

    def test_round_trip(self):
        meta = parse_metadata_file(META_TEXT)
        assert parse_metadata_file(serialize_metadata_file(meta)) == meta

    def test_missing_key_rejected(self):
        bad = META_TEXT.replace(b"fps = 60.0\n", b"")
        with pytest.raises(ParseError, match="fps"):
            parse_metadata_file(bad)

    def test_unknown_key_rejected(self):
        with pytest.raises(ParseError, match="unknown"):
            parse_metadata_file(META_TEXT + b"zoom = 2\n")

    def test_aspect_mismatch_rejected(self):
        bad = META_TEXT.replace(b"width_px = 1080", b"width_px = 1000")
        with pytest.raises(ValidationError, match="aspect_video"):
            parse_metadata_file(bad)

    def test_landscape_rejected(self):
        bad = META_TEXT.replace(b"width_px = 1080", b"width_px = 1920").replace(
            b"height_px = 1920", b"height_px = 1080"
        )
        with pytest.raises(ValidationError):
            parse_metadata_file(bad)

    def test_camera_file(self):
        data = b"f_mm = 2.87\nfe_mm = 32.0\naspect_sensor = 0.75\naspect_video = 0.5625\nres_h_px = 1080\n"
        cam = parse_camera_file(data)
        assert cam == default_camera()


class TestRecordingInvariants:
    def test_timestamp_outside_frame_window_rejected(self):
        meta = parse_metadata_file(META_TEXT)
        track = LandmarkTrack(landmark_id=4, frame_index=[0, 1], t=[0.0, 5.0],
                              x=[1.0, 2.0], y=[0.0, 0.0], confidence=[1.0, 1.0])
        with pytest.raises(ValidationError, match="outside"):
            Recording(tracks={4: track}, meta=meta)

    def test_track_key_mismatch_rejected(self):
        track = LandmarkTrack(landmark_id=4, frame_index=[0], t=[0.0],
                              x=[1.0], y=[0.0], confidence=[1.0])
        with pytest.raises(ValidationError):
            Recording(tracks={5: track})

    def test_sample_validation(self):
        with pytest.raises(ValidationError):
            LandmarkSample(frame_index=0, t=0.0, landmark_id=4, x=float("nan"), y=0.0, confidence=1.0)
        with pytest.raises(ValidationError):
            LandmarkSample(frame_index=-1, t=0.0, landmark_id=4, x=0.0, y=0.0, confidence=1.0)
