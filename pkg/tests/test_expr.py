from fractions import Fraction

import pytest
from hypothesis import given, settings

from fellcheck.ck.algebra import PRESETS, CKAlgebra
from fellcheck.ck.expr import format_element, format_scalar, parse_expression
from fellcheck.errors import ExpressionSyntaxError, InvalidGeneratorError
from fellcheck.groups import FreeWord

from conftest import ck_elements, combination


def test_unit(allones2):
    assert parse_expression("1", allones2) == allones2.unit()


def test_projection_via_rewrite(allones2):
    assert parse_expression("s1 s1*", allones2) == allones2.projection(1)


def test_range_projection_atom(allones2):
    assert parse_expression("e(g1 g2)", allones2) == allones2.range_projection(FreeWord((1, 2), 2))


def test_scalars_and_signs(allones2):
    x = parse_expression("-(1/2 + i) s1 + 2 s1", allones2)
    assert x == allones2.generator(1) * allones2.scalar((Fraction(3, 2), -1))


def test_adjoint_binds_to_factor(allones2):
    assert parse_expression("(s1 s2)*", allones2) == parse_expression("s2* s1*", allones2)


def test_syntax_error_position(allones2):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("s1 + q", allones2)
    assert info.value.position == 5


@pytest.mark.parametrize("text", ["s1 +", "(s1", "s1 )", "", "*"])
def test_syntax_errors(allones2, text):
    with pytest.raises(ExpressionSyntaxError):
        parse_expression(text, allones2)


def test_bad_index(allones2):
    with pytest.raises(InvalidGeneratorError):
        parse_expression("s3", allones2)


def test_zero_prints_as_zero(allones2):
    assert format_element(allones2.zero()) == "0"
    assert parse_expression("0", allones2).is_zero


def test_format_scalar_parses_as_factor(allones2):
    from sympy.polys.domains import QQ_I

    for c in (QQ_I(-1, 0), QQ_I(0, -1), QQ_I(2, -3), QQ_I(1, 1)):
        x = allones2.unit() * allones2.scalar((c.x, c.y))
        assert parse_expression(f"{format_scalar(c)} 1", allones2) == x


@pytest.mark.parametrize("name", sorted(PRESETS))
@settings(max_examples=150, deadline=None)
@given(terms=ck_elements(3, 3, 4))
def test_roundtrip(name, terms):
    alg = CKAlgebra.of(PRESETS[name])
    if alg.n < 3:
        terms = [(c, tuple(x for x in w if abs(x) <= alg.n)) for c, w in terms]
    x, _ = combination(alg, terms)
    text = format_element(x)
    y = parse_expression(text, alg)
    assert y == x
    assert format_element(y) == text
