import math

import numpy as np
import pytest

from src.backend.expr import (Binary, BinaryOp, Const, OutOfDomain, Unary, UnaryOp, Var, evaluate, evaluate_array,
                              expr_depth, parse, print_canonical, substitute)
from src.common import config, messages
from src.common.errors import ExprSyntaxError, InvalidInputError, UnknownIdentifierError


# ---------- 解析 ----------
def test_parse_division():
    assert parse("x/2") == Binary(BinaryOp.DIV, Var(), Const(2.0))


def test_parse_exp():
    assert parse("exp(1/x)") == Unary(UnaryOp.EXP, Binary(BinaryOp.DIV, Const(1.0), Var()))


def test_unbalanced_parenthesis_reports_offset():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("ln(x")
    assert exc.value.position == 4


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as exc:
        parse("sin(x)")
    assert exc.value.name == "sin"
    assert exc.value.position == 0


@pytest.mark.parametrize("text", ["", "   ", None])
def test_empty_expression(text):
    with pytest.raises(InvalidInputError):
        parse(text)


def test_unexpected_character():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("x $ 2")
    assert exc.value.position == 2


@pytest.mark.parametrize("text", ["1e999", "2*1e400", "-1e309"])
def test_non_finite_literal_rejected(text):
    with pytest.raises(ExprSyntaxError) as exc:
        parse(text)
    assert exc.value.position == text.index("1e")


@pytest.mark.parametrize("text", [
    "-" * 5000 + "1",
    "(" * 3000 + "x" + ")" * 3000,
    "exp(" * 2000 + "x" + ")" * 2000,
    "x^" * 2000 + "2",
])
def test_deep_nesting_is_a_syntax_error(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_long_flat_chain_is_bounded_by_tree_depth():
    ok = "+".join(["x"] * config.MAX_EXPR_DEPTH)
    assert expr_depth(parse(ok)) == config.MAX_EXPR_DEPTH
    assert evaluate(parse(ok), 1.0) == config.MAX_EXPR_DEPTH
    with pytest.raises(ExprSyntaxError) as exc:
        parse(ok + "+x")
    assert exc.value.position == 0


def test_deepest_accepted_tree_survives_canonical_roundtrip():
    e = Var()
    for i in range(config.MAX_EXPR_DEPTH - 1):
        e = Unary(UnaryOp.NEG, e) if i % 2 else Binary(BinaryOp.POW, Const(1.0), e)
    assert expr_depth(e) == config.MAX_EXPR_DEPTH
    assert parse(print_canonical(e)) == e


def test_hand_built_deep_tree_is_rejected_not_crashed():
    e = Var()
    for _ in range(5000):
        e = Unary(UnaryOp.NEG, e)
    with pytest.raises(InvalidInputError):
        evaluate(e, 1.0)
    with pytest.raises(InvalidInputError):
        print_canonical(e)
    with pytest.raises(InvalidInputError):
        substitute(e, Var())
    with pytest.raises(InvalidInputError):
        evaluate_array(e, np.ones(3))


@pytest.mark.parametrize("text, expected", [
    ("1+2*3", 7.0),
    ("2^3^2", 512.0),
    ("-2^2", -4.0),
    ("(1+2)*3", 9.0),
    ("8/4/2", 1.0),
    ("1e-3*1000", 1.0),
])
def test_precedence(text, expected):
    assert evaluate(parse(text), 0.0) == pytest.approx(expected)


# ---------- 求值 ----------
def test_evaluate_examples():
    assert evaluate(parse("x/2"), 5) == 2.5
    assert evaluate(parse("exp(1/x)"), 1) == pytest.approx(math.e)


def test_ln_of_zero_is_signaled():
    v = evaluate(parse("ln(x)"), 0)
    assert isinstance(v, OutOfDomain)
    assert v.reason == messages.ERR_REASON_LN_DOMAIN
    assert v.x == 0


def test_division_by_zero_carries_subexpression():
    v = evaluate(parse("1 + 1/x"), 0)
    assert isinstance(v, OutOfDomain)
    assert v.node == parse("1/x")
    assert "(1 / x)" in v.describe()


def test_overflow_is_infinite_not_out_of_domain():
    assert evaluate(parse("exp(x)"), 1000.0) == math.inf
    assert evaluate(parse("exp(1/x)"), 1e-5) == math.inf


def test_fractional_power_of_negative_is_signaled():
    assert isinstance(evaluate(parse("x^0.5"), -1.0), OutOfDomain)
    assert evaluate(parse("x^3"), -2.0) == -8.0


@pytest.mark.parametrize("text", ["ln(x)", "1/x", "x^0.5", "(x-1)^0.5", "exp(1/x)", "x^-1", "ln(ln(x))"])
def test_array_matches_scalar(text):
    e = parse(text)
    xs = np.array([-2.0, -1.0, 0.0, 1e-3, 0.5, 1.0, 2.0, 5.0])
    values, ok = evaluate_array(e, xs)
    for x, v, good in zip(xs, values, ok):
        scalar = evaluate(e, float(x))
        if isinstance(scalar, OutOfDomain):
            assert not good
            assert math.isnan(v)
        else:
            assert good
            assert v == pytest.approx(scalar, rel=1e-14)


# ---------- 规范打印 ----------
def test_print_canonical_examples():
    assert print_canonical(Binary(BinaryOp.DIV, Var(), Const(2.0))) == "(x / 2)"
    assert print_canonical(Unary(UnaryOp.EXP, Binary(BinaryOp.DIV, Const(1.0), Var()))) == "exp((1 / x))"
    assert print_canonical(Const(0.0)) == "0"


@pytest.mark.parametrize("text", ["x/2", "exp(1/x)", "-x^0.5", "1e-05*x", "2^3^2", "ln(x+1)-(x*3)", "--x"])
def test_roundtrip_of_parsed_text(text):
    e = parse(text)
    assert parse(print_canonical(e)) == e


def _random_tree(rng: np.random.Generator, depth: int):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Var()
        return Const(float(rng.choice([0.0, 1.0, 2.5, float(rng.uniform(0, 100)), float(rng.uniform(0, 1e-6))])))
    if rng.random() < 0.3:
        op = list(UnaryOp)[int(rng.integers(len(UnaryOp)))]
        return Unary(op, _random_tree(rng, depth - 1))
    op = list(BinaryOp)[int(rng.integers(len(BinaryOp)))]
    return Binary(op, _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))


def test_roundtrip_of_generated_trees():
    rng = np.random.default_rng(2024)
    for _ in range(300):
        e = _random_tree(rng, 5)
        assert parse(print_canonical(e)) == e


# ---------- 替换 ----------
def test_substitute_builds_composition():
    assert substitute(parse("exp(x)"), parse("x/2")) == parse("exp(x/2)")
    assert substitute(parse("3"), parse("x")) == parse("3")
