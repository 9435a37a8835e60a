import pytest

from rendering import render_hand_video


@pytest.fixture
def hand_video(tmp_path):
    path = tmp_path / "hand.avi"
    render_hand_video(path)
    return path
