"""Tests for reductive group descriptors."""

from __future__ import annotations

from fractions import Fraction

import pytest
import yaml
from conftest import gcd_of_minors_factors
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from charvar.const import FIELD_COMPACT, FIELD_COMPLEX
from charvar.exceptions import ConfigError, DescriptorInvalid, InvalidParameter
from charvar.liegroup import (
    CentralElement,
    ReductiveDescriptor,
    SimpleType,
    descriptor_corpus,
    descriptor_from_dict,
    is_orthogonal_free,
    load_descriptor,
    named_group,
    pi1,
    pi1_derived,
    pi1_is_torsion_free,
    pi1_relations,
    product,
    resolve_group,
    structure_summary,
    unitary_type,
)
from charvar.zmodule import FgAbelianGroup, IntMatrix

Z = FgAbelianGroup.of(1)


def cyclic(order: int) -> FgAbelianGroup:
    return FgAbelianGroup.of(0, order)


@pytest.mark.parametrize("n", range(1, 7))
def test_unitary_and_projective(n: int) -> None:
    assert pi1(named_group(f"U {n}")) == Z
    assert pi1(named_group(f"PSU {n}")) == cyclic(n)
    assert pi1(named_group(f"SU {n}")).is_trivial
    assert pi1(named_group(f"GL {n}")) == Z
    assert pi1(named_group(f"PGL {n}")) == cyclic(n)


@pytest.mark.parametrize("group", descriptor_corpus(), ids=str)
def test_pi1_against_minors(group: ReductiveDescriptor) -> None:
    """pi1 agrees with the determinantal divisors of its relation matrix."""
    relations = pi1_relations(group)
    factors = gcd_of_minors_factors(relations)
    fundamental = pi1(group)
    assert fundamental.torsion == tuple(d for d in factors if d > 1)
    assert fundamental.free_rank == relations.cols - len(factors)


@pytest.mark.parametrize("n", range(2, 7))
def test_pi1_relations_of_unitary_and_projective(n: int) -> None:
    assert pi1_relations(named_group(f"U {n}")) == IntMatrix.from_rows([[-1, n]])
    assert pi1_relations(named_group(f"PSU {n}")) == IntMatrix.from_rows([[n]])


def test_corpus_derived_matches_torsion() -> None:
    corpus = descriptor_corpus()
    assert len(corpus) >= 50
    for group in corpus:
        assert pi1_derived(group) == pi1(group).torsion_subgroup(), str(group)


@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("SO 2", Z),
        ("SO 3", cyclic(2)),
        ("SO 4", cyclic(2)),
        ("SO 5", cyclic(2)),
        ("SO 6", cyclic(2)),
        ("SO 8", cyclic(2)),
        ("Spin 7", FgAbelianGroup.trivial()),
        ("Sp 3", FgAbelianGroup.trivial()),
        ("E6", FgAbelianGroup.trivial()),
        ("SU 2 x torus 2", FgAbelianGroup.of(2)),
        ("U 2 × U 3", FgAbelianGroup.of(2)),
        ("PSU 2 * PSU 4", FgAbelianGroup.of(0, 2, 4)),
    ],
)
def test_named_groups(name: str, expected: FgAbelianGroup) -> None:
    assert pi1(named_group(name)) == expected


def test_so3_is_psu2() -> None:
    assert named_group("SO 3") == named_group("PSU 2")


def test_fields() -> None:
    assert named_group("PGL 3").field == FIELD_COMPLEX
    assert named_group("torus 2").field == FIELD_COMPACT
    assert named_group("GL 2 x torus 1").field == FIELD_COMPLEX
    with pytest.raises(InvalidParameter):
        named_group("U 2 x GL 2")


@pytest.mark.parametrize("name", ["", "XYZ 3", "U", "Spin 2", "E 9", "torus"])
def test_bad_names(name: str) -> None:
    with pytest.raises(InvalidParameter):
        named_group(name)


def test_unitary_type() -> None:
    assert unitary_type(named_group("U 3")) == ("U", 3)
    assert unitary_type(named_group("GL 2")) == ("U", 2)
    assert unitary_type(named_group("SU 4")) == ("SU", 4)
    assert unitary_type(named_group("U 1")) == ("U", 1)
    assert unitary_type(named_group("PSU 2")) is None
    assert unitary_type(named_group("SO 5")) is None
    assert unitary_type(named_group("U 2 x U 2")) is None


def test_orthogonal_free() -> None:
    assert is_orthogonal_free(named_group("SU 2 x Sp 2 x torus 1"))
    assert is_orthogonal_free(named_group("U 3"))
    assert not is_orthogonal_free(named_group("Spin 5"))
    assert not is_orthogonal_free(named_group("PSU 2"))
    assert pi1_is_torsion_free(named_group("U 3"))
    assert not pi1_is_torsion_free(named_group("PSU 3 x torus 1"))


def test_simple_types() -> None:
    assert SimpleType.parse("E6") == SimpleType("E", 6)
    assert SimpleType.parse("a 2") == SimpleType("A", 2)
    assert SimpleType("D", 5).center_orders == (4,)
    assert SimpleType("D", 4).center_orders == (2, 2)
    assert SimpleType("G", 2).center_group().is_trivial
    for family, rank in (("D", 2), ("E", 9), ("A", 0), ("Q", 1)):
        with pytest.raises(DescriptorInvalid):
            SimpleType(family, rank)


def test_descriptor_validation() -> None:
    a1 = SimpleType("A", 1)
    with pytest.raises(DescriptorInvalid):
        ReductiveDescriptor(FIELD_COMPACT, 0, (a1,), ((CentralElement((), ((1,),)), 3),))
    twice = (CentralElement((), ((1,),)), 2)
    with pytest.raises(DescriptorInvalid):
        ReductiveDescriptor(FIELD_COMPACT, 0, (a1,), (twice, twice))
    with pytest.raises(DescriptorInvalid):
        ReductiveDescriptor("real", 0)
    with pytest.raises(DescriptorInvalid):
        ReductiveDescriptor(FIELD_COMPACT, 1, (), ((CentralElement((), ()), 1),))


def test_half_torus_quotient() -> None:
    """(T^1 x SU(2)) / diagonal Z/2 is U(2)."""
    element = CentralElement((Fraction(1, 2),), ((1,),))
    group = ReductiveDescriptor(FIELD_COMPACT, 1, (SimpleType("A", 1),), ((element, 2),))
    assert group == named_group("U 2")
    assert pi1_derived(group).is_trivial


def test_descriptor_file(tmp_path) -> None:
    path = tmp_path / "so8.yaml"
    path.write_text(
        yaml.safe_dump(
            {"field": "compact", "factors": ["D 4"], "central_generators": [
                {"factors": ["v"], "order": 2}
            ]}
        ),
        encoding="utf-8",
    )
    group = load_descriptor(path)
    assert group == named_group("SO 8")
    assert resolve_group(str(path)) == group


def test_diagonal_quotient_file(tmp_path) -> None:
    path = tmp_path / "diag.yml"
    path.write_text(
        "field: complex\n"
        "factors: [A 1, A 1]\n"
        "central_generators:\n"
        "  - {factors: [1, 1], order: 2}\n",
        encoding="utf-8",
    )
    assert pi1(load_descriptor(path)) == cyclic(2)


def test_descriptor_errors(tmp_path) -> None:
    with pytest.raises(ConfigError):
        descriptor_from_dict({"field": "compact", "torus_rank": -1})
    with pytest.raises(ConfigError):
        descriptor_from_dict({"factors": []})
    with pytest.raises(ConfigError):
        load_descriptor(tmp_path / "missing.yaml")
    with pytest.raises(DescriptorInvalid):
        descriptor_from_dict(
            {"field": "compact", "factors": ["A 1"], "central_generators": [
                {"factors": ["x"], "order": 2}
            ]}
        )


def test_as_dict_round_trip() -> None:
    for group in descriptor_corpus():
        assert descriptor_from_dict(group.as_dict()) == group


def test_structure_summary() -> None:
    summary = structure_summary(named_group("U 2"))
    assert summary["pi1"]["text"] == "Z"
    assert summary["pi1_torsion_free"]
    assert summary["unitary_type"] == "U 2"
    assert summary["universal_cover"] == {
        "torus_rank": 1,
        "factors": ["A 1"],
        "kernel": Z.as_dict(),
    }


CORPUS = descriptor_corpus()


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CORPUS), st.sampled_from(CORPUS))
def test_pi1_of_product(left: ReductiveDescriptor, right: ReductiveDescriptor) -> None:
    assume(left.field == right.field)
    group = product(left, right)
    assert pi1(group) == pi1(left).direct_sum(pi1(right))
    assert pi1_derived(group) == pi1_derived(left).direct_sum(pi1_derived(right))
