import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rewardforge.dsl import Limits, ProgramParseError, parse_program, pretty
from rewardforge.dsl.parser import Call, If, Let, Num, count_nodes


class TestParseBasics:
    def test_smallest_program(self):
        program = parse_program("goal_dist()")
        assert program.node_count == 1
        assert isinstance(program.ast, Call)

    def test_let_and_conditional(self):
        program = parse_program("let d = goal_dist(); if reached_goal() then 10 else -d")
        assert isinstance(program.ast, Let)
        assert isinstance(program.ast.body, If)

    def test_full_surface_parses(self):
        source = """
        # a dense shaped reward
        let progress = goal_dist(robot_prev_pos()) - goal_dist(robot_pos());
        let danger = min_over_humans(h: dist(robot_pos(), h_pos(h)) - h_radius(h));
        let crowd = count_within(2.0) + sum_over_humans(h: exp(-norm(sub(h_pos(h), robot_pos()))));
        if reached_goal() then 10
        elif collided() then -20
        elif danger < 0.5 and not timed_out() then -1 * clamp(div(1, danger), 0, 5)
        else 2 * progress + 0.1 * tanh(crowd) - pow(danger, 2) / horizon()
        """
        program = parse_program(source)
        assert program.node_count > 20

    def test_comments_and_scientific_notation(self):
        program = parse_program("1e-3 + 2.5E2  # trailing comment")
        assert program.node_count == 3

    def test_predicted_accessor(self):
        parse_program("min_over_humans(h: dist(robot_pos(), predicted(h, 3)))")


class TestParseErrors:
    def test_nested_aggregation_exceeds_depth_limit(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("min_over_humans(h: min_over_humans(g: 1))")
        assert any(i.category == "limit exceeded" for i in exc.value.issues)

    def test_node_limit(self):
        source = " + ".join(["1"] * 40)
        with pytest.raises(ProgramParseError) as exc:
            parse_program(source, limits=Limits(max_nodes=16))
        assert any(i.category == "limit exceeded" for i in exc.value.issues)

    def test_unknown_identifier_carries_position(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("1 +\n  mystery")
        issue = exc.value.issues[0]
        assert issue.category == "unknown identifier"
        assert issue.line == 2
        assert issue.col == 3

    def test_unknown_function(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("teleport(1)")
        assert any(i.category == "unknown identifier" for i in exc.value.issues)

    def test_type_mismatch_vec_plus_scalar(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("robot_pos() + 1")
        assert any(i.category == "type mismatch" for i in exc.value.issues)

    def test_program_must_be_scalar(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("robot_pos()")
        assert any("scalar" in i.message for i in exc.value.issues)

    def test_condition_must_be_bool(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("if 1 then 2 else 3")
        assert any(i.category == "type mismatch" for i in exc.value.issues)

    def test_branches_must_agree(self):
        with pytest.raises(ProgramParseError):
            parse_program("if collided() then robot_pos() else 3")

    def test_pow_exponent_bounds(self):
        parse_program("pow(goal_dist(), 8)")
        with pytest.raises(ProgramParseError):
            parse_program("pow(goal_dist(), 9)")
        with pytest.raises(ProgramParseError):
            parse_program("pow(goal_dist(), 2.5)")

    def test_predicted_step_must_be_positive_literal(self):
        with pytest.raises(ProgramParseError):
            parse_program("min_over_humans(h: dist(robot_pos(), predicted(h, 0)))")

    def test_syntax_error_has_location(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("1 + ")
        assert exc.value.issues[0].category == "syntax"

    def test_cannot_rebind_builtin(self):
        with pytest.raises(ProgramParseError):
            parse_program("let exp = 1; exp")

    def test_human_accessor_outside_aggregation(self):
        with pytest.raises(ProgramParseError):
            parse_program("h_radius(h)")

    def test_errors_render_for_retry_feedback(self):
        with pytest.raises(ProgramParseError) as exc:
            parse_program("mystery + robot_pos()")
        text = str(exc.value)
        assert "line 1" in text and "mystery" in text


class TestRoundTrip:
    SAMPLES = [
        "goal_dist()",
        "1 + 2 * 3 - 4 / 5",
        "-(1 + 2)",
        "2 * -5",
        "let d = goal_dist(); if reached_goal() then 10 else -d",
        "if collided() then -20 elif timed_out() then -5 else 0.5",
        "min_over_humans(h: dist(robot_pos(), h_pos(h)) - h_radius(h))",
        "if not (goal_dist() < 1) and (collided() or timed_out()) then 1 else 0",
        "norm(sub(goal(), start())) + dot(robot_vel(), robot_vel())",
        "clamp(div(1, goal_dist()), 0, 5) + pow(tanh(step_index()), 3)",
        "(if reached_goal() then 1 else 2) * 3",
        "let a = 1; let b = a + 2; b * b",
    ]

    @pytest.mark.parametrize("source", SAMPLES)
    def test_pretty_reparses_to_identical_ast(self, source):
        first = parse_program(source)
        printed = pretty(first)
        second = parse_program(printed)
        assert first.ast == second.ast
        # printing is a fixed point after one round
        assert pretty(second) == printed


# --- randomized program generation (shared with evaluator tests) ---------

_num_lit = st.integers(-50, 50).map(str)
_leaf = st.one_of(
    _num_lit,
    st.sampled_from(
        [
            "goal_dist()",
            "robot_radius()",
            "step_index()",
            "horizon()",
            "norm(robot_vel())",
            "dist(robot_pos(), goal())",
            "dist(start(), robot_prev_pos())",
            "count_within(3)",
        ]
    ),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(
            lambda t: f"({t[0]} {t[1]} {t[2]})"
        ),
        st.tuples(children, children).map(lambda t: f"div({t[0]}, {t[1]})"),
        st.tuples(children, children).map(lambda t: f"min({t[0]}, {t[1]})"),
        st.tuples(children, children).map(lambda t: f"max({t[0]}, {t[1]})"),
        children.map(lambda a: f"tanh({a})"),
        children.map(lambda a: f"exp({a})"),
        children.map(lambda a: f"log({a})"),
        children.map(lambda a: f"sqrt({a})"),
        children.map(lambda a: f"abs({a})"),
        children.map(lambda a: f"pow({a}, 2)"),
        st.tuples(children, children, children).map(
            lambda t: f"(if {t[0]} < {t[1]} then {t[2]} else {t[0]})"
        ),
        st.tuples(children, children).map(
            lambda t: f"(if reached_goal() then {t[0]} elif collided() then {t[1]} else 0)"
        ),
    )


_scalar_no_agg = st.recursive(_leaf, _extend, max_leaves=10)
_human_body = st.sampled_from(
    [
        "dist(robot_pos(), h_pos(h))",
        "h_radius(h)",
        "norm(h_vel(h))",
        "dist(robot_pos(), predicted(h, 2))",
        "dist(robot_pos(), h_pos(h)) - h_radius(h) - robot_radius()",
    ]
)
_aggregate = st.tuples(st.sampled_from(["min_over_humans", "sum_over_humans"]), _human_body).map(
    lambda t: f"{t[0]}(h: {t[1]})"
)

random_program_sources = st.one_of(
    _scalar_no_agg,
    _aggregate,
    st.tuples(_scalar_no_agg, _aggregate).map(lambda t: f"({t[0]} + {t[1]})"),
    st.tuples(_scalar_no_agg, _scalar_no_agg).map(lambda t: f"let a = {t[0]}; (a + {t[1]})"),
)


@given(source=random_program_sources)
@settings(max_examples=200, deadline=None)
def test_random_programs_round_trip(source):
    first = parse_program(source)
    second = parse_program(pretty(first))
    assert first.ast == second.ast


@given(source=random_program_sources)
@settings(max_examples=100, deadline=None)
def test_node_count_positive_and_bounded(source):
    program = parse_program(source)
    assert 1 <= program.node_count <= program.limits.max_nodes
    assert count_nodes(program.ast) == program.node_count


def test_negative_literals_fold():
    program = parse_program("-5")
    assert isinstance(program.ast, Num)
    assert program.ast.value == -5.0
