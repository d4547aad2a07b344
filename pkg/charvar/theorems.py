"""Theorem dispatch for representation spaces and character varieties.

Every answer is gated on checked hypotheses. A field whose hypotheses fail
is reported as unknown together with the failed hypothesis, never guessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cache
from pathlib import Path
from typing import Any

from .const import (
    FIELD_COMPACT,
    FIELD_COMPLEX,
    LOGGER,
    STATUS_KNOWN,
    STATUS_UNKNOWN,
)
from .exceptions import ClassMismatch, HypothesisNotMet, InvalidParameter
from .liegroup import (
    ReductiveDescriptor,
    is_orthogonal_free,
    pi1,
    pi1_derived,
    pi1_is_torsion_free,
    unitary_type,
)
from .presentation import (
    GroupClass,
    Presentation,
    abelianization_matrix,
    detect_classes,
    format_presentation,
    is_exponent_canceling,
)
from .zmodule import FgAbelianGroup, cokernel, hom_group

CITATIONS_FILE = Path(__file__).with_name("citations.json")

STABLE_TARGETS = ("SU", "U", "GL")

_CLASS_PRIORITY = (GroupClass.FREE, GroupClass.FREE_ABELIAN, GroupClass.SURFACE)


@cache
def citation_table() -> dict[str, dict[str, str]]:
    """Return the bundled citation table keyed by citation key."""
    return json.loads(CITATIONS_FILE.read_text(encoding="utf-8"))


def citation(key: str) -> dict[str, str]:
    """Return {key, label, anchor} for a citation key."""
    try:
        entry = citation_table()[key]
    except KeyError as exception:
        raise InvalidParameter(f"Unknown citation key '{key}'") from exception
    return {"key": key, "label": entry["label"], "anchor": entry["anchor"]}


@dataclass(frozen=True)
class FieldResult:
    """One report field: a known value with citations, or unknown with a reason."""

    status: str
    value: Any = None
    citations: tuple[str, ...] = ()
    note: str | None = None

    def __post_init__(self) -> None:
        """Known fields need a citation and unknown fields need a reason."""
        object.__setattr__(self, "citations", tuple(self.citations))
        if self.status == STATUS_KNOWN and not self.citations:
            raise ValueError("A known field must carry a citation")
        if self.status == STATUS_UNKNOWN and not self.note:
            raise ValueError("An unknown field must name the failed hypothesis")
        for key in self.citations:
            citation(key)

    @classmethod
    def known(cls, value: Any, *citations: str, note: str | None = None) -> FieldResult:
        return cls(STATUS_KNOWN, value, citations, note)

    @classmethod
    def unknown(cls, note: str, *citations: str) -> FieldResult:
        return cls(STATUS_UNKNOWN, None, citations, note)

    @property
    def is_known(self) -> bool:
        return self.status == STATUS_KNOWN

    def as_dict(self) -> dict[str, Any]:
        value = self.value
        if isinstance(value, FgAbelianGroup):
            value = value.as_dict()
        return {
            "status": self.status,
            "value": value,
            "citations": list(self.citations),
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FieldResult:
        value = data.get("value")
        if isinstance(value, dict) and {"free_rank", "torsion"} <= value.keys():
            value = FgAbelianGroup.from_dict(value)
        return cls(data["status"], value, tuple(data["citations"]), data.get("note"))


def resolve_class(presentation: Presentation, tag: GroupClass | None) -> GroupClass:
    """Check a caller's class tag against the presentation, or detect one."""
    detected = detect_classes(presentation)
    if tag is None:
        for kind in _CLASS_PRIORITY:
            for candidate in sorted(detected, key=str):
                if candidate.kind == kind:
                    return candidate
        return GroupClass(GroupClass.OTHER)
    if tag.kind != GroupClass.OTHER and tag not in detected:
        found = ", ".join(sorted(map(str, detected))) or "none"
        raise ClassMismatch(
            f"Presentation does not have the standard '{tag}' shape (detected: {found})"
        )
    return tag


def covering_structure_group(
    presentation: Presentation,
    cover_kernel: FgAbelianGroup,
    group: ReductiveDescriptor,
) -> tuple[FgAbelianGroup, bool]:
    """Return (deck group, surjective) for Hom(Gamma, H) -> Hom(Gamma, G).

    H is the cover of G with kernel ``cover_kernel``, a subgroup of pi1(G).
    The deck group is Hom(Gamma^ab, ker) and the map is onto when the
    presentation is exponent-canceling.
    """
    fundamental = pi1(group)
    if fundamental.torsion:
        raise HypothesisNotMet(
            f"pi1(G) = {fundamental} has torsion; the covering of representation "
            "spaces can fail",
            "torsion_counterexample",
        )
    if cover_kernel.torsion or cover_kernel.free_rank > fundamental.free_rank:
        raise InvalidParameter(
            f"Cover kernel {cover_kernel} is not a subgroup of pi1(G) = {fundamental}"
        )
    abelian = cokernel(abelianization_matrix(presentation))
    deck = hom_group(abelian, cover_kernel)
    surjective, _ = is_exponent_canceling(presentation)
    LOGGER.debug("Deck group %s, surjective %s", deck, surjective)
    return deck, surjective


def _torsion_unknown(group: ReductiveDescriptor) -> FieldResult:
    return FieldResult.unknown(
        f"pi1(G) = {pi1(group)} is not torsion-free", "torsion_counterexample"
    )


def _free_abelian_pi1(rank: int, group: ReductiveDescriptor) -> FieldResult:
    fundamental = pi1(group)
    if rank >= 3:
        if is_orthogonal_free(group):
            return FieldResult.known(
                fundamental.power(rank), "free_abelian_orthogonal_free"
            )
        return FieldResult.unknown(
            "DG is not orthogonal-free (needs simply connected factors of type A or C)",
            "free_abelian_orthogonal_free",
        )
    if not pi1_is_torsion_free(group):
        return _torsion_unknown(group)
    citations = ["free_abelian_torsion_free"]
    if rank == 2 and group.field == FIELD_COMPACT and unitary_type(group) == ("SU", 2):
        citations.append("torus_sphere")
    return FieldResult.known(fundamental.power(rank), *citations)


def pi1_moduli(
    presentation: Presentation,
    tag: GroupClass | None,
    group: ReductiveDescriptor,
) -> FieldResult:
    """Return pi1 of the character variety when a theorem covers the input."""
    tag = resolve_class(presentation, tag)
    fundamental = pi1(group)
    torsion_free = not fundamental.torsion
    if tag.kind in (GroupClass.FREE, GroupClass.FREE_ABELIAN) and tag.param == 0:
        return FieldResult.known(
            FgAbelianGroup.trivial(),
            "free_group_hom",
            note="The trivial group has a one-point character variety",
        )
    if tag.kind == GroupClass.FREE:
        if torsion_free:
            return FieldResult.known(fundamental.power(tag.param), "free_pi1")
        return _torsion_unknown(group)
    if tag.kind == GroupClass.FREE_ABELIAN:
        return _free_abelian_pi1(tag.param, group)
    if tag.kind == GroupClass.SURFACE:
        genus = tag.param
        if genus == 1:
            return _free_abelian_pi1(2, group)
        if group.field == FIELD_COMPLEX:
            if not torsion_free:
                return _torsion_unknown(group)
            citations = ["surface_reductive_pi1"]
            if group.factors and group.torus_rank == 0 and not group.central_generators:
                citations.append("surface_simply_connected")
            return FieldResult.known(fundamental.power(2 * genus), *citations)
        unitary = unitary_type(group)
        if unitary is not None:
            key = "surface_unitary_u_pi1" if unitary[0] == "U" else "surface_unitary_pi1"
            return FieldResult.known(fundamental.power(2 * genus), key)
        if torsion_free:
            return FieldResult.unknown(
                "Only U(n) and SU(n) are settled among compact groups; pi1 of the "
                f"moduli space maps onto {fundamental.power(2 * genus)}",
                "surface_compact_extension",
            )
        return _torsion_unknown(group)
    return FieldResult.unknown(
        "No theorem covers this group class; tag it as free, free_abelian or surface"
    )


def pi0_surface_rep_space(genus: int, group: ReductiveDescriptor) -> FieldResult:
    """Return the number of components of Hom(surface group, G)."""
    if isinstance(genus, bool) or not isinstance(genus, int) or genus < 1:
        raise InvalidParameter(f"Genus must be an integer >= 1, got {genus!r}")
    count = pi1_derived(group).order
    if group.field == FIELD_COMPACT:
        return FieldResult.known(count, "surface_components")
    if genus >= 2:
        return FieldResult.known(count, "reductive_components")
    return FieldResult.unknown(
        "Components for complex G at genus 1 are only settled under the "
        "free abelian hypotheses"
    )


def stable_moduli_facts(target: str, genus: int) -> FieldResult:
    """Return the homotopy of the stable moduli space of a genus-g surface group."""
    if target not in STABLE_TARGETS:
        raise InvalidParameter(f"Stable target must be one of {STABLE_TARGETS}, got {target!r}")
    if isinstance(genus, bool) or not isinstance(genus, int) or genus < 1:
        raise InvalidParameter(f"Genus must be an integer >= 1, got {genus!r}")
    lattice = FgAbelianGroup.of(2 * genus).as_dict()
    integers = FgAbelianGroup.of(1).as_dict()
    if target == "SU":
        value = {
            "homotopy_type": "CP^inf = K(Z, 2)",
            "pi_1": FgAbelianGroup.trivial().as_dict(),
            "pi_2": integers,
            "higher_vanish": True,
        }
        return FieldResult.known(value, "stable_special_unitary")
    if target == "U":
        value = {
            "homotopy_type": f"(S^1)^{2 * genus} x CP^inf",
            "pi_1": lattice,
            "pi_2": integers,
            "higher_vanish": True,
        }
        return FieldResult.known(value, "stable_unitary")
    value = {"homotopy_type": None, "pi_1": lattice, "pi_2": None, "higher_vanish": None}
    return FieldResult.known(
        value, "stable_general_linear", note="Higher homotopy groups are not determined"
    )


@dataclass(frozen=True)
class InvariantReport:
    """Computed pi0, pi1 and covering data for one (Gamma, G) query."""

    group: dict[str, Any]
    target: dict[str, Any]
    pi0_hom: FieldResult
    pi0_moduli: FieldResult
    pi1_moduli: FieldResult
    covering: FieldResult
    higher_homotopy: FieldResult
    real_reductive_extension: bool = False
    hypothesis_not_met: bool = False
    stable: FieldResult | None = None

    FIELDS = ("pi0_hom", "pi0_moduli", "pi1_moduli", "covering", "higher_homotopy", "stable")

    @property
    def group_class(self) -> GroupClass:
        return GroupClass.parse(self.group["class"])

    @property
    def citations(self) -> list[str]:
        """Return the citation keys used anywhere in the report, in order."""
        keys: list[str] = []
        for name in self.FIELDS:
            result = getattr(self, name)
            if result is not None:
                keys.extend(key for key in result.citations if key not in keys)
        if self.real_reductive_extension:
            extension = (
                "free_real_reductive"
                if self.group_class.kind == GroupClass.FREE
                else "free_abelian_real_reductive"
            )
            keys.append(extension)
        return keys

    def as_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"group": self.group, "target": self.target}
        for name in self.FIELDS:
            result = getattr(self, name)
            data[name] = None if result is None else result.as_dict()
        data["real_reductive_extension"] = self.real_reductive_extension
        data["hypothesis_not_met"] = self.hypothesis_not_met
        data["citations"] = [citation(key) for key in self.citations]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> InvariantReport:
        fields = {
            name: None if data.get(name) is None else FieldResult.from_dict(data[name])
            for name in cls.FIELDS
        }
        return cls(
            group=data["group"],
            target=data["target"],
            real_reductive_extension=data["real_reductive_extension"],
            hypothesis_not_met=data["hypothesis_not_met"],
            **fields,
        )


def _components(
    tag: GroupClass, group: ReductiveDescriptor
) -> tuple[FieldResult, FieldResult]:
    """Return (pi0 of Hom, pi0 of the moduli space)."""
    if tag.kind == GroupClass.FREE or (
        tag.kind == GroupClass.FREE_ABELIAN and tag.param <= 1
    ):
        connected = FieldResult.known(1, "free_group_hom")
        return connected, connected
    if tag.kind == GroupClass.SURFACE and tag.param >= 2:
        hom = pi0_surface_rep_space(tag.param, group)
        if group.field == FIELD_COMPACT or (hom.is_known and hom.value == 1):
            return hom, hom
        return hom, FieldResult.unknown(
            "Components of the moduli space are not settled for complex G; "
            "it has at most as many as Hom"
        )
    if tag.kind in (GroupClass.FREE_ABELIAN, GroupClass.SURFACE):
        rank = 2 if tag.kind == GroupClass.SURFACE else tag.param
        if rank == 2 and group.field == FIELD_COMPACT:
            hom = pi0_surface_rep_space(1, group)
            return hom, hom
        gate = _free_abelian_pi1(rank, group)
        if gate.is_known:
            connected = FieldResult.known(1, gate.citations[0], "free_abelian_connected")
            return connected, connected
        return gate, gate
    other = FieldResult.unknown("No theorem covers this group class")
    return other, other


def _stable(tag: GroupClass, group: ReductiveDescriptor) -> FieldResult | None:
    if tag.kind == GroupClass.SURFACE:
        genus = tag.param
    elif tag.kind == GroupClass.FREE_ABELIAN and tag.param == 2:
        genus = 1
    else:
        return None
    unitary = unitary_type(group)
    if unitary is None:
        return None
    if group.field == FIELD_COMPLEX:
        return stable_moduli_facts("GL", genus) if unitary[0] == "U" else None
    return stable_moduli_facts(unitary[0], genus)


def analyze(
    presentation: Presentation,
    tag: GroupClass | None,
    group: ReductiveDescriptor,
) -> InvariantReport:
    """Build the full invariant report for Gamma and G."""
    tag = resolve_class(presentation, tag)
    pi1_field = pi1_moduli(presentation, tag, group)
    refused = False
    fundamental = pi1(group)
    try:
        deck, surjective = covering_structure_group(presentation, fundamental, group)
    except HypothesisNotMet as exception:
        LOGGER.warning("Covering refused for %s: %s", group, exception)
        covering = FieldResult.unknown(str(exception), exception.citation)
        refused = True
    else:
        citations = ["covering_structure", "deck_group"]
        if surjective:
            citations.append("exponent_canceling_surjective")
        covering = FieldResult.known(
            {"kernel": fundamental.as_dict(), "deck": deck.as_dict(), "surjective": surjective},
            *citations,
            note=None if surjective else "Presentation is not exponent-canceling; "
            "surjectivity is not established",
        )
    if refused:
        higher = FieldResult.unknown(
            "pi1(G) has torsion, so the covering is not available", "torsion_counterexample"
        )
    else:
        higher = FieldResult.known(
            "pi_k of the moduli space equals pi_k for the universal cover, k >= 2",
            "higher_homotopy",
        )
    pi0_hom, pi0_moduli = _components(tag, group)
    real_reductive = (
        group.field == FIELD_COMPACT
        and pi1_field.is_known
        and tag.kind in (GroupClass.FREE, GroupClass.FREE_ABELIAN)
    )
    report = InvariantReport(
        group={
            "class": str(tag),
            "generators": list(presentation.generator_names),
            "presentation": format_presentation(presentation),
        },
        target={"text": str(group), "descriptor": group.as_dict()},
        pi0_hom=pi0_hom,
        pi0_moduli=pi0_moduli,
        pi1_moduli=pi1_field,
        covering=covering,
        higher_homotopy=higher,
        real_reductive_extension=real_reductive,
        hypothesis_not_met=refused or not pi1_field.is_known,
        stable=_stable(tag, group),
    )
    LOGGER.info(
        "Analyzed %s into %s: pi1 %s", tag, group, pi1_field.value or pi1_field.status
    )
    return report
