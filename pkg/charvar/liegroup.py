"""Compact and complex reductive groups as (T^k x G1 x ... x Gl) / Z.

Each Gi is simply connected and simple, T^k is a torus (or its
complexification) and Z is a finite central subgroup given by independent
generators. Compact groups and their complexifications share all fundamental
group data, so both fields run through the same code.

Center conventions: every center is written as a sum of cyclic groups and a
center element as one residue per summand. A_n, B_n, C_n, D_n with n odd,
E6 and E7 have cyclic centers whose label is the residue itself; for D_n
with n odd the residue 2 is the vector class. For D_n with n even the
center is (Z/2)^2 with labels ``0``, ``s`` = (1, 0), ``c`` = (0, 1) and
``v`` = (1, 1), the vector class.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from pathlib import Path
from typing import Any

from .config import DESCRIPTOR_SCHEMA, load_yaml, validate
from .const import FIELD_COMPACT, FIELD_COMPLEX, LOGGER
from .exceptions import DescriptorInvalid, InvalidParameter
from .zmodule import FgAbelianGroup, IntMatrix, cokernel, integer_kernel

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")
EXCEPTIONAL_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

D_EVEN_LABELS = {"0": (0, 0), "s": (1, 0), "c": (0, 1), "v": (1, 1)}


@dataclass(frozen=True, order=True)
class SimpleType:
    """A simply connected simple Lie group given by its Cartan type."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        """Check that the rank is valid for the family."""
        if self.family not in FAMILIES:
            raise DescriptorInvalid(f"Unknown Cartan family '{self.family}'")
        if isinstance(self.rank, bool) or not isinstance(self.rank, int):
            raise DescriptorInvalid(f"Rank must be an integer, got {self.rank!r}")
        if self.family in EXCEPTIONAL_RANKS:
            if self.rank not in EXCEPTIONAL_RANKS[self.family]:
                raise DescriptorInvalid(f"No simple type {self.family}{self.rank}")
        elif self.rank < (3 if self.family == "D" else 1):
            raise DescriptorInvalid(f"Rank too small for type {self.family}{self.rank}")

    @classmethod
    def parse(cls, text: str) -> SimpleType:
        """Parse 'A 2', 'A2' or 'E6'."""
        match = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", text)
        if match is None:
            raise DescriptorInvalid(f"Malformed simple type '{text}'")
        return cls(match.group(1).upper(), int(match.group(2)))

    def __str__(self) -> str:
        return f"{self.family} {self.rank}"

    @property
    def center_orders(self) -> tuple[int, ...]:
        """Orders of the cyclic summands of the center."""
        if self.family == "A":
            return (self.rank + 1,)
        if self.family in ("B", "C"):
            return (2,)
        if self.family == "D":
            return (4,) if self.rank % 2 else (2, 2)
        return {6: (3,), 7: (2,)}.get(self.rank, ()) if self.family == "E" else ()

    def center_group(self) -> FgAbelianGroup:
        """Return the center of the simply connected group."""
        return FgAbelianGroup.of(0, *self.center_orders)

    def parse_center_label(self, label: Any) -> tuple[int, ...]:
        """Convert a center label into residues, one per cyclic summand."""
        orders = self.center_orders
        if isinstance(label, list | tuple):
            values = tuple(label)
        elif self.family == "D" and len(orders) == 2 and str(label) in D_EVEN_LABELS:
            values = D_EVEN_LABELS[str(label)]
        else:
            try:
                values = (int(str(label)),) if orders else ()
            except ValueError as exception:
                msg = f"Invalid center label {label!r} for type {self}"
                raise DescriptorInvalid(msg) from exception
            if not orders and int(str(label)) != 0:
                raise DescriptorInvalid(f"Type {self} has trivial center")
        if len(values) != len(orders):
            raise DescriptorInvalid(f"Invalid center label {label!r} for type {self}")
        return tuple(int(v) % order for v, order in zip(values, orders))

    def center_label(self, values: Sequence[int]) -> Any:
        """Inverse of parse_center_label."""
        if self.family == "D" and len(self.center_orders) == 2:
            return next(k for k, v in D_EVEN_LABELS.items() if v == tuple(values))
        return values[0] if values else 0


def _residue_order(value: int, modulus: int) -> int:
    return modulus // gcd(value, modulus)


@dataclass(frozen=True)
class CentralElement:
    """An element of (Q/Z)^k x center(G1) x ... x center(Gl)."""

    torus_part: tuple[Fraction, ...] = ()
    factor_parts: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        """Reduce torus entries into [0, 1)."""
        object.__setattr__(
            self, "torus_part", tuple(Fraction(t) % 1 for t in self.torus_part)
        )
        object.__setattr__(
            self, "factor_parts", tuple(tuple(p) for p in self.factor_parts)
        )

    def order(self, factors: Sequence[SimpleType]) -> int:
        """Return the order of the element."""
        orders = [t.denominator for t in self.torus_part]
        for simple, part in zip(factors, self.factor_parts):
            orders.extend(map(_residue_order, part, simple.center_orders))
        return lcm(1, *orders)


@dataclass(frozen=True)
class ReductiveDescriptor:
    """A connected reductive group (T^k x G1 x ... x Gl) / Z.

    ``central_generators`` lists (element, order) pairs generating Z as a
    direct sum of cyclic groups.
    """

    field: str
    torus_rank: int = 0
    factors: tuple[SimpleType, ...] = ()
    central_generators: tuple[tuple[CentralElement, int], ...] = ()

    def __post_init__(self) -> None:
        """Normalize residues and check the order and independence invariants."""
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.field not in (FIELD_COMPACT, FIELD_COMPLEX):
            raise DescriptorInvalid(f"Unknown field '{self.field}'")
        if isinstance(self.torus_rank, bool) or self.torus_rank < 0:
            raise DescriptorInvalid("Torus rank must be a nonnegative integer")
        generators = []
        for element, order in self.central_generators:
            if len(element.torus_part) != self.torus_rank:
                raise DescriptorInvalid(
                    f"Torus part {element.torus_part} does not have length {self.torus_rank}"
                )
            if len(element.factor_parts) != len(self.factors):
                raise DescriptorInvalid("One center element is needed per simple factor")
            parts = []
            for simple, part in zip(self.factors, element.factor_parts):
                if len(part) != len(simple.center_orders):
                    raise DescriptorInvalid(f"Invalid center element {part} for {simple}")
                parts.append(
                    tuple(v % m for v, m in zip(part, simple.center_orders))
                )
            element = CentralElement(element.torus_part, tuple(parts))
            actual = element.order(self.factors)
            if actual != order:
                raise DescriptorInvalid(
                    f"Central generator has order {actual}, declared {order}"
                )
            generators.append((element, order))
        object.__setattr__(self, "central_generators", tuple(generators))
        self._check_independent()

    def _ambient(self) -> tuple[list[int], list[list[int]]]:
        """Return cyclic moduli and integer coordinates of the generators.

        The generators live in the finite group (Z/N)^k x prod center(Gi), N
        being the common denominator of the torus parts.
        """
        common = lcm(
            1,
            *(t.denominator for e, _ in self.central_generators for t in e.torus_part),
        )
        moduli = [common] * self.torus_rank
        for simple in self.factors:
            moduli.extend(simple.center_orders)
        rows = []
        for element, _ in self.central_generators:
            row = [int(t * common) for t in element.torus_part]
            for part in element.factor_parts:
                row.extend(part)
            rows.append(row)
        return moduli, rows

    def _check_independent(self) -> None:
        moduli, rows = self._ambient()
        for i, modulus in enumerate(moduli):
            rows.append([modulus if i == j else 0 for j in range(len(moduli))])
        relations = IntMatrix.from_rows(rows, len(moduli))
        generated = prod(moduli) // cokernel(relations).order
        declared = prod(order for _, order in self.central_generators)
        if generated != declared:
            raise DescriptorInvalid(
                f"Central generators are not independent: they generate a subgroup "
                f"of order {generated}, product of orders is {declared}"
            )

    @property
    def center_subgroup(self) -> FgAbelianGroup:
        """Return Z as an abstract group."""
        return FgAbelianGroup.of(0, *(order for _, order in self.central_generators))

    def __str__(self) -> str:
        parts = [f"T^{self.torus_rank}"] if self.torus_rank else []
        parts.extend(str(simple) for simple in self.factors)
        text = " x ".join(parts) or "1"
        if self.central_generators:
            text = f"({text}) / {self.center_subgroup}"
        return f"{text} [{self.field}]"

    def as_dict(self) -> dict[str, Any]:
        """Return the descriptor file representation."""
        return {
            "field": self.field,
            "torus_rank": self.torus_rank,
            "factors": [str(simple) for simple in self.factors],
            "central_generators": [
                {
                    "torus": [str(t) for t in element.torus_part],
                    "factors": [
                        simple.center_label(part)
                        for simple, part in zip(self.factors, element.factor_parts)
                    ],
                    "order": order,
                }
                for element, order in self.central_generators
            ],
        }


def descriptor_from_dict(data: Any, source: str = "descriptor") -> ReductiveDescriptor:
    """Build a descriptor from its file representation."""
    data = validate(DESCRIPTOR_SCHEMA, data, source)
    factors = tuple(SimpleType.parse(text) for text in data["factors"])
    generators = []
    for item in data["central_generators"]:
        if len(item["factors"]) != len(factors):
            raise DescriptorInvalid(
                f"{source}: expected {len(factors)} center labels, got {len(item['factors'])}"
            )
        parts = tuple(
            simple.parse_center_label(label)
            for simple, label in zip(factors, item["factors"])
        )
        generators.append((CentralElement(tuple(item["torus"]), parts), item["order"]))
    return ReductiveDescriptor(
        data["field"], data["torus_rank"], factors, tuple(generators)
    )


def load_descriptor(path: str | Path) -> ReductiveDescriptor:
    """Read a descriptor YAML file."""
    return descriptor_from_dict(load_yaml(path), str(path))


def pi1_relations(group: ReductiveDescriptor) -> IntMatrix:
    """Return the relation matrix whose cokernel is pi1.

    Generators are the torus lattice e_1..e_k and lifts z_j of the central
    generators, subject to n_j z_j = sum_i (n_j v_j)_i e_i.
    """
    k = group.torus_rank
    rows = []
    for j, (element, order) in enumerate(group.central_generators):
        row = [-int(order * t) for t in element.torus_part]
        row.extend(order if i == j else 0 for i in range(len(group.central_generators)))
        rows.append(row)
    return IntMatrix.from_rows(rows, k + len(group.central_generators))


def pi1(group: ReductiveDescriptor) -> FgAbelianGroup:
    """Return the fundamental group, the preimage of Z in R^k x G1 x ... x Gl."""
    result = cokernel(pi1_relations(group))
    LOGGER.debug("pi1(%s) = %s", group, result)
    return result


def pi1_derived(group: ReductiveDescriptor) -> FgAbelianGroup:
    """Return the fundamental group of the derived subgroup.

    This is the subgroup of Z with trivial torus part. Coefficient vectors
    a with sum_j a_j v_j integral form a lattice L containing the relation
    lattice generated by n_j e_j; the answer is their quotient.
    """
    m = len(group.central_generators)
    if not m:
        return FgAbelianGroup.trivial()
    common = lcm(
        1, *(t.denominator for e, _ in group.central_generators for t in e.torus_part)
    )
    k = group.torus_rank
    rows = []
    for i in range(k):
        row = [int(e.torus_part[i] * common) for e, _ in group.central_generators]
        row.extend(-common if i == j else 0 for j in range(k))
        rows.append(row)
    kernel = integer_kernel(IntMatrix.from_rows(rows, m + k))
    inverse = kernel.to_sympy()[:, :m].inv()
    orders = [order for _, order in group.central_generators]
    relations = []
    for j, order in enumerate(orders):
        values = [order * v for v in inverse.row(j)]
        if not all(v.is_integer for v in values):
            raise DescriptorInvalid("Relation lattice is not contained in L")
        relations.append([int(v) for v in values])
    result = cokernel(IntMatrix.from_rows(relations, m))
    if result != pi1(group).torsion_subgroup():
        raise DescriptorInvalid(
            f"pi1 of the derived subgroup {result} disagrees with torsion of pi1"
        )
    return result


def pi1_is_torsion_free(group: ReductiveDescriptor) -> bool:
    """Return True if pi1 has no torsion, i.e. the derived subgroup is simply connected."""
    return pi1_derived(group).is_trivial


def is_orthogonal_free(group: ReductiveDescriptor) -> bool:
    """Return True if the derived subgroup is a product of simply connected A and C factors."""
    if any(simple.family not in ("A", "C") for simple in group.factors):
        return False
    return pi1_derived(group).is_trivial


def universal_cover(
    group: ReductiveDescriptor,
) -> tuple[int, tuple[SimpleType, ...], FgAbelianGroup]:
    """Return (k, factors, kernel) for the covering F^k x G1 x ... x Gl -> G."""
    return group.torus_rank, group.factors, pi1(group)


def unitary_type(group: ReductiveDescriptor) -> tuple[str, int] | None:
    """Recognize U(n) and SU(n) (and their complexifications) structurally."""
    k, factors, generators = group.torus_rank, group.factors, group.central_generators
    if not factors:
        if k == 0 and not generators:
            return ("SU", 1)
        if k == 1 and not generators:
            return ("U", 1)
        return None
    if len(factors) != 1 or factors[0].family != "A":
        return None
    n = factors[0].rank + 1
    if k == 0 and not generators:
        return ("SU", n)
    if k != 1 or len(generators) != 1:
        return None
    element, order = generators[0]
    torus, residue = element.torus_part[0], element.factor_parts[0][0]
    if order != n or torus.denominator != n:
        return None
    j = torus.numerator
    if residue in ((j % n), (-j) % n):
        return ("U", n)
    return None


def product(*groups: ReductiveDescriptor) -> ReductiveDescriptor:
    """Return the direct product descriptor."""
    fields = {group.field for group in groups}
    if len(fields) > 1:
        raise InvalidParameter("Cannot multiply compact and complex groups")
    field = fields.pop() if fields else FIELD_COMPACT
    torus_rank = sum(group.torus_rank for group in groups)
    factors = tuple(simple for group in groups for simple in group.factors)
    generators = []
    torus_offset = factor_offset = 0
    for group in groups:
        for element, order in group.central_generators:
            torus = [Fraction(0)] * torus_rank
            torus[torus_offset : torus_offset + group.torus_rank] = element.torus_part
            parts = [tuple(0 for _ in simple.center_orders) for simple in factors]
            parts[factor_offset : factor_offset + len(group.factors)] = element.factor_parts
            generators.append((CentralElement(tuple(torus), tuple(parts)), order))
        torus_offset += group.torus_rank
        factor_offset += len(group.factors)
    return ReductiveDescriptor(field, torus_rank, factors, tuple(generators))


def _torus(k: int, field: str) -> ReductiveDescriptor:
    return ReductiveDescriptor(field, k)


def _special(n: int, field: str) -> ReductiveDescriptor:
    if n == 1:
        return ReductiveDescriptor(field)
    return ReductiveDescriptor(field, 0, (SimpleType("A", n - 1),))


def _unitary(n: int, field: str) -> ReductiveDescriptor:
    if n == 1:
        return ReductiveDescriptor(field, 1)
    element = CentralElement((Fraction(1, n),), ((n - 1,),))
    return ReductiveDescriptor(field, 1, (SimpleType("A", n - 1),), ((element, n),))


def _projective(n: int, field: str) -> ReductiveDescriptor:
    if n == 1:
        return ReductiveDescriptor(field)
    element = CentralElement((), ((1,),))
    return ReductiveDescriptor(field, 0, (SimpleType("A", n - 1),), ((element, n),))


def _spin_type(n: int) -> tuple[SimpleType, ...]:
    if n == 3:
        return (SimpleType("A", 1),)
    if n == 4:
        return (SimpleType("A", 1), SimpleType("A", 1))
    if n % 2:
        return (SimpleType("B", (n - 1) // 2),)
    return (SimpleType("D", n // 2),)


def _spin(n: int, field: str) -> ReductiveDescriptor:
    if n < 3:
        raise InvalidParameter(f"Spin n needs n >= 3, got {n}")
    return ReductiveDescriptor(field, 0, _spin_type(n))


def _orthogonal(n: int, field: str) -> ReductiveDescriptor:
    if n == 2:
        return ReductiveDescriptor(field, 1)
    if n < 2:
        raise InvalidParameter(f"SO n needs n >= 2, got {n}")
    factors = _spin_type(n)
    # The vector class: diagonal in A1 x A1, 2 in Z/4 for D odd, v for D even.
    if n == 4:
        vector = ((1,), (1,))
    elif n % 2:
        vector = ((1,),)
    elif (n // 2) % 2:
        vector = ((2,),)
    else:
        vector = (D_EVEN_LABELS["v"],)
    element = CentralElement((), vector)
    return ReductiveDescriptor(field, 0, factors, ((element, 2),))


def _symplectic(n: int, field: str) -> ReductiveDescriptor:
    return ReductiveDescriptor(field, 0, (SimpleType("C", n),))


_CONSTRUCTORS = {
    "U": (_unitary, FIELD_COMPACT),
    "SU": (_special, FIELD_COMPACT),
    "PSU": (_projective, FIELD_COMPACT),
    "PU": (_projective, FIELD_COMPACT),
    "GL": (_unitary, FIELD_COMPLEX),
    "SL": (_special, FIELD_COMPLEX),
    "PGL": (_projective, FIELD_COMPLEX),
    "Sp": (_symplectic, FIELD_COMPACT),
    "Spin": (_spin, FIELD_COMPACT),
    "SO": (_orthogonal, FIELD_COMPACT),
}

_SEPARATOR_RE = re.compile(r"\s*(?:×|\*|\bx\b)\s*")


def _named_factor(text: str) -> tuple[ReductiveDescriptor | None, int | None]:
    """Return (descriptor, torus rank); exactly one is set."""
    match = re.fullmatch(r"\s*([A-Za-z]+)\s*(\d+)?\s*", text)
    if match is None:
        raise InvalidParameter(f"Malformed group name '{text}'")
    name, number = match.group(1), match.group(2)
    if name.lower() == "torus":
        if number is None:
            raise InvalidParameter("torus needs a rank")
        return None, int(number)
    if name in ("E", "F", "G") and number is not None:
        try:
            return ReductiveDescriptor(FIELD_COMPACT, 0, (SimpleType(name, int(number)),)), None
        except DescriptorInvalid as exception:
            raise InvalidParameter(str(exception)) from exception
    if name not in _CONSTRUCTORS or number is None:
        raise InvalidParameter(f"Unknown group name '{text.strip()}'")
    n = int(number)
    if n < 1:
        raise InvalidParameter(f"Group size must be >= 1, got {n}")
    constructor, field = _CONSTRUCTORS[name]
    return constructor(n, field), None


def named_group(name: str) -> ReductiveDescriptor:
    """Return the descriptor of a named group such as 'U 3', 'PGL 2' or 'SU 2 x torus 2'.

    Tori take the field of the other factors and are compact on their own.
    """
    pieces = [piece for piece in _SEPARATOR_RE.split(name.strip()) if piece]
    if not pieces:
        raise InvalidParameter("Empty group name")
    groups: list[ReductiveDescriptor | int] = []
    for piece in pieces:
        descriptor, torus_rank = _named_factor(piece)
        groups.append(descriptor if descriptor is not None else torus_rank)
    fields = {g.field for g in groups if isinstance(g, ReductiveDescriptor)}
    if len(fields) > 1:
        raise InvalidParameter(f"'{name}' mixes compact and complex groups")
    field = fields.pop() if fields else FIELD_COMPACT
    return product(
        *(g if isinstance(g, ReductiveDescriptor) else _torus(g, field) for g in groups)
    )


def resolve_group(text: str) -> ReductiveDescriptor:
    """Return a descriptor from a group name or a path to a descriptor file."""
    path = Path(text)
    if path.suffix in (".yaml", ".yml") or path.is_file():
        return load_descriptor(path)
    return named_group(text)


def structure_summary(group: ReductiveDescriptor) -> dict[str, Any]:
    """Return the structure data reported by ``lie info``."""
    k, factors, kernel = universal_cover(group)
    unitary = unitary_type(group)
    return {
        "descriptor": group.as_dict(),
        "text": str(group),
        "pi1": kernel.as_dict(),
        "pi1_derived": pi1_derived(group).as_dict(),
        "pi1_torsion_free": pi1_is_torsion_free(group),
        "orthogonal_free": is_orthogonal_free(group),
        "universal_cover": {
            "torus_rank": k,
            "factors": [str(simple) for simple in factors],
            "kernel": kernel.as_dict(),
        },
        "unitary_type": None if unitary is None else f"{unitary[0]} {unitary[1]}",
    }


def descriptor_corpus(
    tori: Iterable[int] = range(3), sizes: Iterable[int] = range(2, 5)
) -> list[ReductiveDescriptor]:
    """Return a corpus of products of named groups for structural checks."""
    sizes = list(sizes)
    corpus = []
    for k in tori:
        for n in sizes:
            for name in ("U", "SU", "PSU", "GL", "PGL", "Sp", "SO", "Spin"):
                if name in ("SO", "Spin") and n < 3:
                    continue
                base = _named_factor(f"{name} {n}")[0]
                corpus.append(product(base, _torus(k, base.field)))
            corpus.append(product(_unitary(n, FIELD_COMPACT), _projective(n, FIELD_COMPACT)))
    return corpus
