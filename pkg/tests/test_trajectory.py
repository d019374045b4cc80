import json

import pytest

from terrasuite.trajectory import (
    TrajectoryFormatError,
    read_trajectory,
    rollout_records,
    write_trajectory,
)


def test_roundtrip(tmp_path):
    path = tmp_path / "t.jsonl"
    summary = write_trajectory(path, "PD_Biped2D_Walk-Flat-v0", 3, 25, "random")
    assert summary.steps == 25
    header, records = read_trajectory(path)
    assert header["env"] == "PD_Biped2D_Walk-Flat-v0"
    assert header["seed"] == 3
    assert header["policy"] == "random"
    assert len(records) == 25
    assert records[0].step == 0


def test_steps_restart_per_episode():
    records = list(rollout_records("Torque_Biped2D_Walk-Flat-v0", 1, 120, "zero"))
    episodes = {}
    for r in records:
        episodes.setdefault(r.episode, []).append(r)
    assert len(episodes) >= 2  # passive biped falls well before 120 steps
    for eps in episodes.values():
        assert [r.step for r in eps] == list(range(len(eps)))
        # done only terminal within an episode
        assert all(not r.done for r in eps[:-1])


def test_records_json_lines_sorted_keys(tmp_path):
    path = tmp_path / "t.jsonl"
    write_trajectory(path, "PD_Biped2D_Walk-Flat-v0", 0, 3, "zero")
    for line in path.read_text().splitlines():
        d = json.loads(line)
        assert list(d.keys()) == sorted(d.keys())


def test_reject_foreign_file(tmp_path):
    path = tmp_path / "x.jsonl"
    path.write_text('{"format": "csv"}\n')
    with pytest.raises(TrajectoryFormatError):
        read_trajectory(path)


def test_reject_empty(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(TrajectoryFormatError):
        read_trajectory(path)
