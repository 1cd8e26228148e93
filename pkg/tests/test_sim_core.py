import math

import pytest

from rewardforge import geometry as geo
from rewardforge.rng import substream
from rewardforge.sim import (
    AgentState,
    MalformedActionError,
    ScenarioGenerationError,
    Status,
    WorkspaceConfig,
    classify_frame,
    generate_scenario,
    predict_humans,
    run_episode,
    scenario_for_index,
    step_robot,
)
from rewardforge.sim.controllers import straight, stop_in_place


def make_cfg(**overrides):
    base = dict(human_count=0, randomize=False, seed=7)
    base.update(overrides)
    return WorkspaceConfig(**base)


def robot_at(pos, goal=(10.0, 6.0), vel=(0.0, 0.0), radius=0.3, pref_speed=1.0):
    return AgentState(pos=pos, vel=vel, radius=radius, goal=goal, pref_speed=pref_speed)


class TestStepRobot:
    def test_direct_kinematics(self):
        cfg = make_cfg()
        out = step_robot(robot_at((0.0, 0.0)), (1.0, 0.0), cfg)
        assert out.pos == (0.25, 0.0)
        assert out.vel == (1.0, 0.0)

    def test_zero_action_fixed_point(self):
        cfg = make_cfg()
        out = step_robot(robot_at((1.0, 1.0)), (0.0, 0.0), cfg)
        assert out.pos == (1.0, 1.0)

    def test_overspeed_action_clamped_radially(self):
        # (3, 4) has norm 5; clamped to the unit vector (0.6, 0.8), then
        # integrated over dt = 0.25 -> displacement (0.15, 0.2).
        cfg = make_cfg()
        out = step_robot(robot_at((0.0, 0.0)), (3.0, 4.0), cfg)
        assert out.pos[0] == pytest.approx(0.15, abs=1e-12)
        assert out.pos[1] == pytest.approx(0.20, abs=1e-12)

    def test_non_finite_action_rejected(self):
        cfg = make_cfg()
        with pytest.raises(MalformedActionError):
            step_robot(robot_at((0.0, 0.0)), (float("nan"), 0.0), cfg)
        with pytest.raises(MalformedActionError):
            step_robot(robot_at((0.0, 0.0)), (float("inf"), 1.0), cfg)


class TestClassifyFrame:
    def test_collision_threshold(self):
        cfg = make_cfg()
        human = AgentState(pos=(0.5, 0.0), vel=(0.0, 0.0), radius=0.3, goal=(0.0, 0.0), pref_speed=1.0)
        status = classify_frame(robot_at((0.0, 0.0)), [human], (10.0, 6.0), 5, cfg)
        assert status is Status.COLLISION

    def test_success_within_tolerance(self):
        cfg = make_cfg()
        status = classify_frame(robot_at((0.0, 0.0)), [], (0.1, 0.0), 5, cfg)
        assert status is Status.SUCCESS

    def test_timeout_at_horizon_boundary(self):
        cfg = make_cfg()
        status = classify_frame(robot_at((0.0, 0.0)), [], (10.0, 0.0), cfg.horizon - 1, cfg)
        assert status is Status.TIMEOUT

    def test_running_otherwise(self):
        cfg = make_cfg()
        status = classify_frame(robot_at((0.0, 0.0)), [], (10.0, 0.0), 3, cfg)
        assert status is Status.RUNNING

    def test_collision_beats_success(self):
        cfg = make_cfg()
        human = AgentState(pos=(0.4, 0.0), vel=(0.0, 0.0), radius=0.3, goal=(0.0, 0.0), pref_speed=1.0)
        status = classify_frame(robot_at((0.0, 0.0)), [human], (0.05, 0.0), 2, cfg)
        assert status is Status.COLLISION


class TestPredictHumans:
    def test_constant_velocity_rows(self):
        h = AgentState(pos=(0.0, 0.0), vel=(1.0, 0.0), radius=0.3, goal=(5.0, 0.0), pref_speed=1.0)
        grid = predict_humans([h], 2, 0.25)
        assert grid == (((0.25, 0.0), (0.5, 0.0)),)

    def test_zero_velocity_stays_put(self):
        h = AgentState(pos=(2.0, 3.0), vel=(0.0, 0.0), radius=0.3, goal=(5.0, 0.0), pref_speed=1.0)
        grid = predict_humans([h], 4, 0.25)
        assert all(p == (2.0, 3.0) for p in grid[0])

    def test_two_humans_elementwise(self):
        dt = 0.25
        humans = [
            AgentState(pos=(0.0, 0.0), vel=(1.0, -2.0), radius=0.3, goal=(0.0, 0.0), pref_speed=1.0),
            AgentState(pos=(1.0, 1.0), vel=(-0.5, 0.5), radius=0.3, goal=(0.0, 0.0), pref_speed=1.0),
        ]
        grid = predict_humans(humans, 3, dt)
        for row, h in zip(grid, humans):
            for k, p in enumerate(row, start=1):
                assert p[0] == pytest.approx(h.pos[0] + k * dt * h.vel[0], abs=1e-12)
                assert p[1] == pytest.approx(h.pos[1] + k * dt * h.vel[1], abs=1e-12)


class TestGenerateScenario:
    def test_determinism_field_for_field(self):
        cfg = make_cfg(human_count=5, randomize=True)
        a = generate_scenario(cfg, substream(42, "scenario", 0), "s0")
        b = generate_scenario(cfg, substream(42, "scenario", 0), "s0")
        assert a == b

    def test_without_randomization_traits_are_midpoints(self):
        cfg = make_cfg(human_count=5, randomize=False)
        s = generate_scenario(cfg, substream(1, "scenario", 0))
        assert all(h.radius == pytest.approx(0.4) for h in s.human_inits)
        assert all(h.pref_speed == pytest.approx(1.0) for h in s.human_inits)
        assert s.goal_switches == ()

    def test_no_initial_overlap_across_many_scenarios(self):
        cfg = make_cfg(human_count=5, randomize=True)
        for i in range(1000):
            s = scenario_for_index(cfg, 99, i)
            agents = [(s.robot_start, cfg.robot_radius)] + [
                (h.pos, h.radius) for h in s.human_inits
            ]
            for a in range(len(agents)):
                for b in range(a + 1, len(agents)):
                    assert geo.dist(agents[a][0], agents[b][0]) > agents[a][1] + agents[b][1]

    def test_start_differs_from_goal_and_inside_workspace(self):
        cfg = make_cfg(human_count=8, randomize=True)
        for i in range(50):
            s = scenario_for_index(cfg, 3, i)
            assert geo.dist(s.robot_start, s.robot_goal) > 1e-6
            for p in [s.robot_start, s.robot_goal] + [h.pos for h in s.human_inits]:
                assert 0.0 <= p[0] <= cfg.width and 0.0 <= p[1] <= cfg.height

    def test_impossible_placement_raises(self):
        # 20 humans of max radius on a radius-4 circle cannot all fit.
        cfg = make_cfg(human_count=20, randomize=False, human_radius_range=(2.0, 2.0))
        with pytest.raises(ScenarioGenerationError):
            generate_scenario(cfg, substream(5, "scenario", 0), "impossible")


class TestRunEpisode:
    def test_straight_line_success_step_and_path_length(self):
        # Tolerance below one step displacement (0.25 m) forces exact
        # arrival: 8 m at 0.25 m/step -> success at step 32, path 8.0.
        cfg = make_cfg(goal_tolerance=0.1)
        from rewardforge.sim.types import Scenario

        scenario = Scenario(
            id="line",
            robot_start=(2.0, 6.0),
            robot_goal=(10.0, 6.0),
            human_inits=(),
        )
        ep = run_episode(scenario, straight(cfg), cfg)
        assert ep.outcome is Status.SUCCESS
        assert ep.success_step == 32
        assert ep.path_length == pytest.approx(8.0, abs=1e-9)

    def test_zero_action_times_out_with_zero_path(self):
        cfg = make_cfg()
        from rewardforge.sim.types import Scenario

        scenario = Scenario(
            id="idle", robot_start=(2.0, 6.0), robot_goal=(10.0, 6.0), human_inits=()
        )
        ep = run_episode(scenario, stop_in_place(cfg), cfg)
        assert ep.outcome is Status.TIMEOUT
        assert ep.path_length == 0.0
        assert len(ep.frames) == cfg.horizon

    def test_same_seed_gives_identical_frame_sequences(self):
        cfg = make_cfg(human_count=4, randomize=True)
        scenario = scenario_for_index(cfg, 11, 0)
        a = run_episode(scenario, straight(cfg), cfg)
        b = run_episode(scenario, straight(cfg), cfg)
        assert a == b

    def test_malformed_action_recorded_as_collision_equivalent(self):
        cfg = make_cfg()
        from rewardforge.sim.types import Scenario

        scenario = Scenario(
            id="bad", robot_start=(2.0, 6.0), robot_goal=(10.0, 6.0), human_inits=()
        )

        def broken(frame):
            return (float("nan"), 0.0)

        ep = run_episode(scenario, broken, cfg)
        assert ep.outcome is Status.COLLISION
        assert ep.fault is not None

    def test_collision_soundness_and_speed_caps(self):
        cfg = make_cfg(human_count=6, randomize=True)
        for i in range(5):
            scenario = scenario_for_index(cfg, 21, i)
            ep = run_episode(scenario, straight(cfg), cfg)
            for frame in ep.frames:
                if frame.status is Status.RUNNING:
                    for h in frame.all_humans:
                        assert geo.dist(frame.robot.pos, h.pos) > frame.robot.radius + h.radius
                for h in frame.all_humans:
                    assert geo.norm(h.vel) <= h.pref_speed + 1e-9
            for j in range(len(ep.frames) - 1):
                step = geo.dist(ep.frames[j].robot.pos, ep.frames[j + 1].robot.pos)
                assert step <= cfg.v_max * cfg.dt + 1e-9

    def test_outcome_exclusivity(self):
        cfg = make_cfg(human_count=5, randomize=True)
        for i in range(10):
            scenario = scenario_for_index(cfg, 32, i)
            ep = run_episode(scenario, straight(cfg), cfg)
            assert ep.outcome in (Status.SUCCESS, Status.COLLISION, Status.TIMEOUT)
            assert ep.frames[-1].status is ep.outcome
            assert (ep.success_step is not None) + (ep.collision_step is not None) <= 1

    def test_humans_beyond_sense_range_hidden_but_simulated(self):
        cfg = make_cfg(human_count=0)
        far_human = AgentState(
            pos=(2.0, 0.5), vel=(0.0, 0.0), radius=0.3, goal=(2.0, 11.5), pref_speed=1.0
        )
        from rewardforge.sim.types import Scenario

        scenario = Scenario(
            id="hidden",
            robot_start=(2.0, 6.0),
            robot_goal=(10.0, 6.0),
            human_inits=(far_human,),
        )
        ep = run_episode(scenario, stop_in_place(cfg), cfg)
        first = ep.frames[0]
        assert len(first.all_humans) == 1
        assert len(first.humans) == 0  # 5.5 m away > 5 m sensing range
        moved = any(f.all_humans[0].pos != far_human.pos for f in ep.frames[1:])
        assert moved
