"""Smoke tests for the python bindings: one end-to-end pass over each of the
main operation groups."""

import math

import numpy as np
import pytest

import cinetraj as ct


def standing_subject(frames=30):
    model = ct.SubjectMotionModel()
    model.kind = ct.SubjectMotionModel.Kind.STATIONARY
    model.seed = 3
    return ct.generate_subject_motion(model, frames)


def person_boxes():
    vbox = ct.BoundingBox()
    vbox.center = np.array([0.0, 0.0, 0.85])
    vbox.half_extents = np.array([0.25, 0.175, 0.85])
    abox = ct.BoundingBox()
    abox.center = np.array([0.0, 0.0, 1.575])
    abox.half_extents = np.array([0.11, 0.13, 0.125])
    return abox, vbox


def test_scd_round_trip():
    line = (
        "shot=CU angle=eye_level side=front frame=center; "
        "move=orbit ease=ease_in_out dur=30 -> "
        "shot=LS angle=high side=left frame=middle_left"
    )
    scd = ct.parse_scd(line)
    assert scd.init.shot == ct.ShotType.CU
    assert scd.movement.kind == ct.MovementKind.ORBIT
    assert ct.format_scd(scd) == line
    assert ct.parse_scd(ct.format_scd(scd)) == scd
    with pytest.raises(ValueError):
        ct.parse_scd("shot=XXL angle=low side=back frame=top_right; move=static")


def test_enumerator_counts():
    opts = ct.EnumerateOptions()
    opts.kinds = [ct.MovementKind.ORBIT]
    opts.easings = [ct.EasingKind.LINEAR]
    enum = ct.ScdEnumerator(opts)
    assert len(enum) == 2880
    assert ct.parse_scd(ct.format_scd(enum[0])) == enum[0]


def test_pose_discrepancy_values():
    pose = ct.CameraPose(np.array([1.0, 2.0, 3.0]), np.array([0.1, 0.2, 0.3]), 0.8)
    assert ct.pose_discrepancy(pose, pose) == 0.0
    verbatim = ct.pose_discrepancy(pose, pose, epsilon=1.0, normalized=False)
    assert abs(verbatim - 3.0 * math.tan(math.pi / 5.0)) < 1e-12


def test_compile_and_simulate():
    scd = ct.parse_scd(
        "shot=FS angle=eye_level side=front frame=center; move=orbit dur=30 -> "
        "shot=FS angle=eye_level side=left frame=center"
    )
    subject = standing_subject()
    abox, vbox = person_boxes()
    instr = ct.compile_scd(scd, subject, abox, vbox)
    assert instr.frames == 30
    assert instr.interpolation == ct.InterpolationMode.SUBJECT_AWARE
    traj = ct.simulate(instr, subject)
    assert len(traj) == 30
    radius = instr.constraints.distance_radius
    for frame, state in zip(traj.frames, subject.frames):
        r = np.linalg.norm(np.asarray(frame.position) - np.asarray(state.center))
        assert abs(r - radius) <= 1e-3


def test_losses_worked_example():
    assert ct.total_loss(1.0, 1.0, 1.0, 1.0, 1.0) == 84.0
    assert ct.schedule_value(0.1, 0.8, 100, 0) == pytest.approx(0.1)
    assert ct.schedule_value(0.1, 0.8, 100, 99) == pytest.approx(0.8)


def test_metrics_identities():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(200, 8))
    assert ct.fid(x, x) < 1e-6
    assert ct.precision(x, x, k=5) == 1.0
    assert ct.recall(x, x, k=5) == 1.0
    assert ct.coverage(x, x, k=5) == 1.0
    assert ct.clip_score(x, x) == pytest.approx(100.0)


def test_alignment_ops():
    abox, vbox = person_boxes()
    params = ct.shot_params(ct.ShotType.ELS)
    assert params.interp_factor == 1.0 and params.scale == 3.0
    roi = ct.roi_from_boxes(abox, vbox, ct.shot_params(ct.ShotType.FS))
    assert np.allclose(np.asarray(roi.half_extents), [0.25, 0.175, 0.85])

    subject = standing_subject(1).frames[0]
    angle = ct.CameraAngleSpec()
    angle.elevation = ct.Elevation.EYE_LEVEL
    angle.side = ct.Side.FRONT
    macro = ct.macro_align(angle, roi, subject, math.radians(45.0))
    r = np.linalg.norm(np.asarray(macro.position) - np.asarray(roi.center))
    assert abs(r - 0.85 / math.tan(math.radians(22.5))) < 1e-9

    framed = ct.micro_align(macro, roi, ct.FramingCell.MIDDLE_LEFT)
    again = ct.micro_align(framed, roi, ct.FramingCell.MIDDLE_LEFT)
    assert np.linalg.norm(np.asarray(framed.position) - np.asarray(again.position)) < 1e-6

    cs = ct.constraints_for_movement(ct.MovementKind.ORBIT)
    assert cs.static_distance and cs.visibility and not cs.static_location


def test_window_sample():
    model = ct.SubjectMotionModel()
    model.kind = ct.SubjectMotionModel.Kind.LINE_WALK
    subject = ct.generate_subject_motion(model, 59)
    camera = ct.CameraTrajectory()
    camera.frames = [ct.CameraPose(np.array([float(i), 0, 0]), np.zeros(3), 0.8)
                     for i in range(59)]
    cam30, sub30 = ct.window_sample(camera, subject, 30)
    assert len(cam30) == 30 and len(sub30) == 30
    assert cam30.frames[0].position[0] == 0.0
    assert cam30.frames[-1].position[0] == 58.0
    with pytest.raises(ValueError):
        ct.window_sample(cam30, sub30, 40)


def test_corruption_is_seeded():
    subject = standing_subject()
    abox, vbox = person_boxes()
    scd = ct.parse_scd("shot=MS angle=eye_level side=front frame=center; move=static")
    instr = ct.compile_scd(scd, subject, abox, vbox)
    traj = ct.simulate(instr, subject)
    corrupted_a, mask_a = ct.corrupt_trajectory(traj, 0.5, 0.5, 0.1, seed=9)
    corrupted_b, mask_b = ct.corrupt_trajectory(traj, 0.5, 0.5, 0.1, seed=9)
    assert mask_a == mask_b
    assert sum(mask_a) == 15
    for pa, pb in zip(corrupted_a.frames, corrupted_b.frames):
        assert pa == pb
