import pytest
from hypothesis import given, strategies as st

from sigmaforge import ParseError, Permutation
from sigmaforge.cli import parse_group_file
from sigmaforge.perm import format_group_text, parse_group_text


def perms(degree):
    return st.permutations(list(range(degree))).map(Permutation)


def test_composition_convention():
    p = Permutation.parse("(0 1)", 3)
    q = Permutation.parse("(1 2)", 3)
    # (p*q)[i] = p[q[i]]
    assert (p * q).images == tuple(p[q[i]] for i in range(3))
    assert str(p * q) == "(0 1 2)"


def test_cycles_and_order():
    x = Permutation.parse("(0 1 2)(3 4)", 5)
    assert x.order == 6
    assert x.cycles() == [(0, 1, 2), (3, 4)]
    assert str(Permutation.identity(4)) == "()"


def test_not_a_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


@given(perms(6), perms(6), perms(6))
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(perms(7))
def test_inverse_and_power(a):
    assert (a * a.inverse()).is_identity()
    assert (a ** a.order).is_identity()
    assert a ** -1 == a.inverse()


@given(perms(6))
def test_str_round_trip(a):
    assert Permutation.parse(str(a), 6) == a


def test_group_file_examples():
    assert parse_group_file("degree 3\n(0 1 2)\n(0 1)").order == 6
    assert parse_group_file("degree 1\n()").order == 1


def test_comments_blank_lines():
    g = parse_group_file("# S3\n\ndegree 3\n(0 1 2)  # rotation\n(0 1)\n")
    assert g.order == 6


@pytest.mark.parametrize("text, line, col", [
    ("degree 3\n(0 0 1)", 2, 4),
    ("degree 3\n(0 1 5)", 2, 6),
    ("degree 3\n(0 1", 2, 1),
    ("degree x\n(0 1)", 1, 8),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_group_text(text)
    assert info.value.line == line
    assert info.value.column == col


@given(st.lists(perms(5), min_size=1, max_size=3))
def test_format_parse_round_trip(gens):
    degree, back = parse_group_text(format_group_text(5, gens))
    assert degree == 5 and back == gens
