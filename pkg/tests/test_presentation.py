"""Tests for presentations and their parser."""

from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.exceptions import InvalidParameter, PresentationSyntaxError, UnknownGenerator
from charvar.presentation import (
    GroupClass,
    Presentation,
    Word,
    abelianization_matrix,
    bordered_surface_group,
    central_ext_surface_group,
    detect_classes,
    direct_product,
    format_presentation,
    free_abelian_group,
    free_group,
    free_product,
    is_exponent_canceling,
    parse_group_spec,
    parse_presentation,
    raag,
    standard_group,
    surface_group,
)
from charvar.zmodule import FgAbelianGroup, cokernel

GENUS_TWO = """
# the genus-2 surface group
gens a1 b1 a2 b2;
rel [a1,b1][a2,b2];
"""


def test_parse_surface() -> None:
    assert parse_presentation(GENUS_TWO) == surface_group(2)


def test_parse_powers_and_groups() -> None:
    presentation = parse_presentation("gens a b; rel a^3, (a b)^-2 b^ 2, 1;")
    a, b = Word.generator(0), Word.generator(1)
    assert presentation.relators == (
        a.power(3),
        (a * b).power(-2) * b.power(2),
        Word(),
    )


def test_free_reduction() -> None:
    a = Word.generator(0)
    assert a * a.inverse() == Word()
    assert len(Word.commutator(0, 1)) == 4
    assert Word.commutator(0, 0) == Word()


def test_invalid_letter() -> None:
    with pytest.raises(ValueError):
        Word(((0, 2),))


def test_syntax_error_position() -> None:
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation("gens a b;\nrel a b\n")
    assert info.value.line == 3
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation("gens a;\nrel a $;")
    assert (info.value.line, info.value.column) == (2, 7)


def test_unknown_generator() -> None:
    with pytest.raises(UnknownGenerator) as info:
        parse_presentation("gens a;\nrel a c;")
    assert info.value.name == "c"
    assert (info.value.line, info.value.column) == (2, 7)


def test_duplicate_generator() -> None:
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens a a;")


def test_missing_gens() -> None:
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("rel a;")


def test_invalid_names() -> None:
    with pytest.raises(InvalidParameter):
        Presentation(("gens",))
    with pytest.raises(InvalidParameter):
        Presentation(("a", "a"))
    with pytest.raises(InvalidParameter):
        Presentation(("a",), (Word.generator(1),))


@pytest.mark.parametrize(
    "presentation",
    [
        free_group(0),
        free_group(3),
        free_abelian_group(4),
        surface_group(3),
        central_ext_surface_group(2, with_center=True),
        parse_presentation("gens x; rel x^5;"),
    ],
)
def test_format_round_trip(presentation: Presentation) -> None:
    assert parse_presentation(format_presentation(presentation)) == presentation


letters = st.tuples(st.integers(0, 2), st.sampled_from((1, -1)))


@settings(max_examples=50)
@given(st.lists(st.lists(letters, max_size=8), max_size=3))
def test_format_round_trip_random(relators) -> None:
    presentation = Presentation(("x", "y", "z"), tuple(Word(tuple(r)) for r in relators))
    assert parse_presentation(format_presentation(presentation)) == presentation


def test_exponent_canceling() -> None:
    assert is_exponent_canceling(surface_group(2)) == (True, 4)
    assert is_exponent_canceling(central_ext_surface_group(2)) == (True, 4)
    assert is_exponent_canceling(central_ext_surface_group(2, with_center=True)) == (False, None)
    assert is_exponent_canceling(parse_presentation("gens a; rel a^2;")) == (False, None)


def test_closure_under_products() -> None:
    left, right = surface_group(1), free_abelian_group(2)
    assert is_exponent_canceling(free_product(left, right))[0]
    assert is_exponent_canceling(direct_product(left, right))[0]


def test_direct_product_renames() -> None:
    product = direct_product(free_group(1), free_group(1))
    assert product.generator_names == ("a", "a_2")
    assert GroupClass(GroupClass.FREE_ABELIAN, 2) in detect_classes(product)


def test_abelianization() -> None:
    assert cokernel(abelianization_matrix(surface_group(2))) == FgAbelianGroup(4)
    klein = parse_presentation("gens a b; rel a b a^-1 b;")
    assert cokernel(abelianization_matrix(klein)) == FgAbelianGroup(1, (2,))


def test_detect_classes() -> None:
    assert detect_classes(free_group(3)) == {GroupClass(GroupClass.FREE, 3)}
    assert detect_classes(free_abelian_group(2)) == {
        GroupClass(GroupClass.FREE_ABELIAN, 2),
        GroupClass(GroupClass.SURFACE, 1),
    }
    assert detect_classes(surface_group(2)) == {GroupClass(GroupClass.SURFACE, 2)}
    rotated = parse_presentation("gens a1 b1 a2 b2; rel b2^-1 a1 b1 a1^-1 b1^-1 a2 b2 a2^-1;")
    assert GroupClass(GroupClass.SURFACE, 2) in detect_classes(rotated)
    assert detect_classes(central_ext_surface_group(2)) == frozenset()


def test_bordered_surface() -> None:
    assert bordered_surface_group(1, 2) == free_group(3)
    with pytest.raises(InvalidParameter):
        bordered_surface_group(1, 0)


def test_raag() -> None:
    path = raag([("x", "y"), ("y", "z")])
    assert path.generator_names == ("x", "y", "z")
    assert len(path.relators) == 2
    assert is_exponent_canceling(path)[0]
    triangle = raag(nx.complete_graph(["x", "y", "z"]))
    assert GroupClass(GroupClass.FREE_ABELIAN, 3) in detect_classes(triangle)
    with pytest.raises(InvalidParameter):
        raag([("x", "x")])
    with pytest.raises(InvalidParameter):
        raag(nx.DiGraph([("x", "y")]))


def test_standard_group() -> None:
    assert standard_group("surface", 2) == surface_group(2)
    assert standard_group("raag", graph=nx.path_graph(["p", "q"])).generator_names == ("p", "q")
    with pytest.raises(InvalidParameter):
        standard_group("lens", 3)
    with pytest.raises(InvalidParameter):
        standard_group("surface")
    with pytest.raises(InvalidParameter):
        surface_group(0)


def test_parse_group_spec() -> None:
    presentation, tag = parse_group_spec("surface 2")
    assert presentation == surface_group(2)
    assert tag == GroupClass(GroupClass.SURFACE, 2)
    _, tag = parse_group_spec("raag x-y,y-z")
    assert tag == GroupClass(GroupClass.OTHER)
    _, tag = parse_group_spec("bordered_surface 1 1")
    assert tag == GroupClass(GroupClass.FREE, 2)
    with pytest.raises(InvalidParameter):
        parse_group_spec("free two")


def test_group_class_parse() -> None:
    assert GroupClass.parse("free_abelian 3") == GroupClass(GroupClass.FREE_ABELIAN, 3)
    assert str(GroupClass.parse("other")) == "other"
    with pytest.raises(InvalidParameter):
        GroupClass.parse("surface")
    with pytest.raises(InvalidParameter):
        GroupClass.parse("lens 3")


def test_many_generators_get_indexed_names() -> None:
    assert free_group(27).generator_names[-1] == "x27"
