"""Published grammar reference, embedded verbatim in generation prompts."""

GRAMMAR_REFERENCE = """\
REWARD EXPRESSION LANGUAGE
==========================

A program is a single expression (optionally preceded by let-bindings)
that evaluates to one scalar reward for the current frame.

Grammar (EBNF):

    program    = { "let" IDENT "=" expr ";" } expr
    expr       = ifexpr | orexpr
    ifexpr     = "if" expr "then" expr { "elif" expr "then" expr } "else" expr
    orexpr     = andexpr { "or" andexpr }
    andexpr    = notexpr { "and" notexpr }
    notexpr    = "not" notexpr | comparison
    comparison = additive [ ("<"|"<="|">"|">="|"=="|"!=") additive ]
    additive   = term { ("+"|"-") term }
    term       = factor { ("*"|"/") factor }
    factor     = "-" factor | primary
    primary    = NUMBER | IDENT "(" [ expr { "," expr } ] ")"
               | ("min_over_humans"|"sum_over_humans") "(" IDENT ":" expr ")"
               | IDENT | "(" expr ")"

"#" starts a comment to end of line.  Types: scalar, vec2, bool.
Both branches of a conditional must have the same type; the whole
program must be a scalar.

Scalar builtins:
    min(a,b)  max(a,b)  abs(x)  clamp(x,lo,hi)  exp(x)  log(x)
    sqrt(x)  tanh(x)  pow(x,n)  div(a,b)
  pow's n must be an integer literal in [0, 8].  div/log/sqrt/exp are
  guarded (never divide by zero, never produce non-finite values).

Vector builtins (vec2 -> scalar unless noted):
    dist(a,b)  norm(v)  dot(a,b)  sub(a,b) -> vec2   (a - b also works)

Frame accessors:
    robot_pos() robot_prev_pos() robot_vel() -> vec2
    robot_radius() -> scalar
    start() goal() -> vec2
    goal_dist() -> scalar            # distance from robot to goal
    goal_dist(p) -> scalar           # distance from point p to goal
    step_index() horizon() -> scalar
    reached_goal() collided() timed_out() -> bool

Humans (only those within sensing range are visible):
    count_within(r) -> scalar        # visible humans within distance r
    min_over_humans(h: body)         # min of body over visible humans;
                                     # the sensing range when none visible
    sum_over_humans(h: body)         # sum; 0 when none visible
  Inside an aggregation body, with h the bound variable:
    h_pos(h) h_vel(h) -> vec2   h_radius(h) -> scalar
    predicted(h, k) -> vec2     # k-step constant-velocity forecast,
                                # k an integer literal >= 1
  Aggregations cannot be nested.

Limits: at most 512 nodes.  No loops, no recursion, no state.

Example (terminal bonus, collision penalty, progress shaping):

    if reached_goal() then 10
    elif collided() then -20
    else 2 * (goal_dist(robot_prev_pos()) - goal_dist(robot_pos()))
"""
