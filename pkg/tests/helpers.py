import numpy as np

from tremorkit import LandmarkTrack, Recording, RecordingMeta, default_camera


def make_random_recording(rng: np.random.Generator, with_meta: bool = True) -> Recording:
    """A small random but valid recording, gaps and dropped samples included."""
    n_tracks = int(rng.integers(1, 4))
    ids = sorted(rng.choice(21, size=n_tracks, replace=False).tolist())
    fps = float(rng.choice([30.0, 60.0]))
    n_frames = int(rng.integers(1, 60))
    tracks = {}
    for lid in ids:
        keep = rng.random(n_frames) > 0.15
        if not keep.any():
            keep[0] = True
        frames = np.flatnonzero(keep)
        t = frames / fps
        x = rng.uniform(-50.0, 1100.0, size=len(frames))
        y = rng.uniform(0.0, 1900.0, size=len(frames))
        conf = np.round(rng.uniform(0.0, 1.0, size=len(frames)), 3)
        tracks[lid] = LandmarkTrack(
            landmark_id=lid, frame_index=frames, t=t, x=x, y=y, confidence=conf
        )
    meta = None
    if with_meta:
        meta = RecordingMeta(
            depth_cm=float(rng.uniform(20.0, 200.0)),
            fps=fps,
            width_px=1080,
            height_px=1920,
            camera=default_camera(),
            labels={"subject": "s" + str(int(rng.integers(10)))},
        )
    return Recording(tracks=tracks, meta=meta)
