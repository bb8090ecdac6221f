from __future__ import absolute_import, division, print_function

import unittest

import numpy as np
from shapely import affinity
from shapely.geometry import Point, Polygon

from slotbench.scenegen.geometry import place_vertices
from slotbench.scenegen.roster import BlockSpec, entity_names, mask_names, roster
from slotbench.scenegen.trajectory import rollout_expert
from slotbench.scenegen.world import (
    EFFECTOR_RADIUS,
    MAX_STEP,
    OverDenseSceneError,
    block_hulls,
    clamp_action,
    is_success,
    sample_scene,
    step,
)


class RosterTest(unittest.TestCase):
    def test_roster_sizes(self):
        for n in (1, 3, 4, 8):
            assert len(roster(n)) == n
        with self.assertRaises(ValueError):
            roster(5)

    def test_names(self):
        blocks = roster(3)
        assert entity_names(blocks) == ["red_moon", "blue_cube", "green_star", "effector"]
        assert mask_names(blocks)[:2] == ["background", "pole"]
        assert mask_names(blocks)[-1] == "effector"

    def test_bad_specs(self):
        with self.assertRaises(ValueError):
            BlockSpec("sphere", "red")
        with self.assertRaises(ValueError):
            BlockSpec("cube", "purple")
        with self.assertRaises(ValueError):
            BlockSpec("cube", "red", 0.5)

    def test_hull_is_convex_and_ccw(self):
        for spec in roster(4):
            hull = Polygon(spec.hull_vertices())
            assert hull.is_valid
            assert hull.exterior.is_ccw
            assert abs(hull.area - hull.convex_hull.area) < 1e-12


class SampleSceneTest(unittest.TestCase):
    def test_deterministic(self):
        a = sample_scene(11, 8)
        b = sample_scene(11, 8)
        assert a == b
        assert sample_scene(12, 8) != a

    def test_no_overlaps(self):
        for seed in range(100):
            state = sample_scene(seed, 8)
            hulls = [Polygon(h) for h in block_hulls(state)]
            for i in range(len(hulls)):
                for j in range(i + 1, len(hulls)):
                    assert not hulls[i].intersects(hulls[j])
            disk = Point(state.effector_pos).buffer(EFFECTOR_RADIUS, 16)
            assert not any(disk.intersects(h) for h in hulls)

    def test_positions_in_table(self):
        state = sample_scene(3, 4)
        assert state.block_poses.shape == (4, 3)
        assert np.all(state.positions() >= 0) and np.all(state.positions() <= 1)

    def test_single_block_inside_table(self):
        for seed in range(10):
            state = sample_scene(seed, 1)
            assert state.block_poses.shape == (1, 3)
            assert np.all(state.positions() >= 0) and np.all(state.positions() <= 1)
            assert np.all(state.pole_pos >= 0) and np.all(state.pole_pos <= 1)

    def test_over_dense(self):
        with self.assertRaises(OverDenseSceneError):
            sample_scene(0, 8, max_attempts=0)


class StepTest(unittest.TestCase):
    def test_clamp(self):
        assert np.allclose(clamp_action([0.003, 0.004]), [0.003, 0.004])
        clamped = clamp_action([3.0, 4.0])
        assert abs(np.linalg.norm(clamped) - MAX_STEP) < 1e-12
        assert np.allclose(clamped, [0.012, 0.016])
        assert np.all(clamp_action([np.nan, 1.0]) == 0)

    def test_free_move(self):
        state = sample_scene(5, 1)
        state.block_poses[0, :2] = (0.8, 0.8)
        state.effector_pos[:] = (0.2, 0.2)
        nxt = step(state, [0.01, 0.0])
        assert np.allclose(nxt.effector_pos, [0.21, 0.2])
        assert np.allclose(nxt.block_poses, state.block_poses)
        # the input state is left untouched
        assert np.allclose(state.effector_pos, [0.2, 0.2])

    def test_push_moves_block_keeps_rotation(self):
        state = sample_scene(5, 1)
        r = state.blocks[0].circumradius
        state.block_poses[0] = (0.5, 0.5, 0.3)
        state.effector_pos[:] = (0.5 - r - EFFECTOR_RADIUS - 0.001, 0.5)
        before = state.block_poses.copy()
        for _ in range(5):
            state = step(state, [MAX_STEP, 0.0])
        assert state.block_poses[0, 0] > before[0, 0]
        assert state.block_poses[0, 2] == before[0, 2]

    def test_face_on_push_matches_translation_oracle(self):
        state = sample_scene(5, 1)
        state.block_poses[0] = (0.5, 0.5, 0.0)
        cube = Polygon(place_vertices(state.blocks[0].hull_vertices(), state.block_poses[0]))
        # effector disk just touching the cube's left face
        state.effector_pos[:] = (cube.bounds[0] - EFFECTOR_RADIUS, 0.5)
        nxt = step(state, [0.01, 0.0])
        displacement = nxt.block_poses[0, :2] - state.block_poses[0, :2]
        expected = translation_oracle(nxt.effector_pos, EFFECTOR_RADIUS, cube)
        assert np.allclose(expected, [0.01, 0.0], atol=1e-6)
        assert np.allclose(displacement, expected, atol=1e-6)
        assert np.allclose(displacement, [0.01, 0.0], atol=1e-9)

    def test_effector_clipped_to_table(self):
        state = sample_scene(5, 1)
        state.block_poses[0, :2] = (0.8, 0.8)
        state.effector_pos[:] = (0.005, 0.5)
        nxt = step(state, [-MAX_STEP, 0.0])
        assert nxt.effector_pos[0] == 0.0

    def test_boundary_clamp(self):
        state = sample_scene(5, 1)
        state.block_poses[0, :2] = (0.2, 0.2)
        state.effector_pos[:] = (0.99, 0.5)
        nxt = step(state, [0.05, 0.0])
        assert np.allclose(nxt.effector_pos, [1.0, 0.5])

    def test_success(self):
        state = sample_scene(5, 1)
        state.block_poses[0, :2] = state.pole_pos + (0.03, 0.0)
        assert is_success(state, 0)
        state.block_poses[0, :2] = state.pole_pos + (0.2, 0.0)
        assert not is_success(state, 0)


def translation_oracle(center, radius, polygon, directions=360):
    """
    Shortest translation that moves ``polygon`` clear of the disk, found by
    bisection along evenly spaced directions.
    """
    point = Point(center)
    best, best_length = None, np.inf
    for angle in np.linspace(0.0, 2 * np.pi, directions, endpoint=False):
        u = np.array([np.cos(angle), np.sin(angle)])
        lo, hi = 0.0, radius + polygon.length
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if affinity.translate(polygon, *(u * mid)).distance(point) >= radius:
                hi = mid
            else:
                lo = mid
        if hi < best_length:
            best, best_length = u * hi, hi
    return best


class StepInvariantsTest(unittest.TestCase):
    """Containment and bounded block motion over random and expert steps."""

    def check(self, before, after):
        positions = after.positions()
        assert np.all(positions >= 0) and np.all(positions <= 1)
        effector = np.linalg.norm(after.effector_pos - before.effector_pos)
        blocks = np.linalg.norm(after.block_poses[:, :2] - before.block_poses[:, :2], axis=1)
        assert np.all(blocks <= effector + 2 * MAX_STEP)
        assert np.array_equal(after.block_poses[:, 2], before.block_poses[:, 2])

    def test_random_actions(self):
        rng = np.random.default_rng(0)
        for seed in range(3):
            state = sample_scene(seed, 8)
            for _ in range(100):
                nxt = step(state, rng.uniform(-MAX_STEP, MAX_STEP, size=2))
                self.check(state, nxt)
                state = nxt

    def test_expert_pushes(self):
        for seed in range(3):
            frames = rollout_expert(seed, 8, max_steps=120).frames
            for a, b in zip(frames[:-1], frames[1:]):
                self.check(a.state, b.state)
