"""Exact integer-matrix algebra and finitely generated abelian groups.

Relation matrices follow one convention throughout the package: columns
index generators and rows index relations, so ``cokernel(M)`` is ``Z^cols``
modulo the row span of ``M``.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import gcd, prod
from typing import Any

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .const import LOGGER


def _as_int(value: Any) -> int:
    """Return value as a Python int, rejecting floats and other non-integers."""
    if isinstance(value, bool):
        raise TypeError("Boolean entries are not integers")
    try:
        return operator.index(value)
    except TypeError as exception:
        msg = f"Matrix entries must be integers, got {type(value).__name__}"
        raise TypeError(msg) from exception


@dataclass(frozen=True)
class IntMatrix:
    """A dense integer matrix stored row-major as nested tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        """Validate the grid."""
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise ValueError(f"Expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError(f"Expected {self.cols} columns, got {len(row)}")
            for value in row:
                _as_int(value)

    @classmethod
    def from_rows(
        cls, rows: Iterable[Iterable[Any]], cols: int | None = None
    ) -> IntMatrix:
        """Build a matrix from nested iterables.

        ``cols`` is only needed for matrices without rows.
        """
        data = tuple(tuple(_as_int(value) for value in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, size: int) -> IntMatrix:
        """Return the size x size identity."""
        return cls.from_rows(
            ([1 if i == j else 0 for j in range(size)] for i in range(size)), size
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        """Return the rows x cols zero matrix."""
        return cls.from_rows(([0] * cols for _ in range(rows)), cols)

    @classmethod
    def diagonal_matrix(cls, values: Sequence[int], rows: int, cols: int) -> IntMatrix:
        """Return a rows x cols matrix with ``values`` on the main diagonal."""
        return cls.from_rows(
            (
                [values[i] if i == j and i < len(values) else 0 for j in range(cols)]
                for i in range(rows)
            ),
            cols,
        )

    def __getitem__(self, index: tuple[int, int]) -> int:
        row, col = index
        return self.entries[row][col]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            msg = f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            raise ValueError(msg)
        columns = other.transpose().entries
        return IntMatrix.from_rows(
            (
                [sum(a * b for a, b in zip(row, col, strict=True)) for col in columns]
                for row in self.entries
            ),
            other.cols,
        )

    def transpose(self) -> IntMatrix:
        """Return the transpose."""
        return IntMatrix.from_rows(
            ([self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)),
            self.rows,
        )

    def append_rows(self, rows: Iterable[Iterable[int]]) -> IntMatrix:
        """Return a copy with extra rows appended."""
        return IntMatrix.from_rows([*self.entries, *rows], self.cols)

    def is_zero(self) -> bool:
        """Return True if every entry is zero."""
        return all(value == 0 for row in self.entries for value in row)

    def diagonal(self) -> tuple[int, ...]:
        """Return the main diagonal."""
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def to_lists(self) -> list[list[int]]:
        """Return the entries as nested lists."""
        return [list(row) for row in self.entries]

    def select_rows(self, indices: Iterable[int]) -> IntMatrix:
        """Return the matrix made of the given rows, in order."""
        return IntMatrix.from_rows((self.entries[i] for i in indices), self.cols)

    def to_sympy(self) -> Matrix:
        """Return the entries as a sympy Matrix."""
        return Matrix(self.rows, self.cols, [value for row in self.entries for value in row])

    @classmethod
    def from_sympy(cls, matrix: Matrix) -> IntMatrix:
        """Build from a sympy Matrix whose entries are integers."""
        return cls.from_rows(
            ([int(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)),
            matrix.cols,
        )


def _decompose(matrix: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V, V^-1) with matrix = U * D * V and D nonnegative."""
    if not matrix.rows or not matrix.cols:
        identity = IntMatrix.identity(matrix.cols)
        return IntMatrix.identity(matrix.rows), matrix, identity, identity
    diagonal, left, right = smith_normal_decomp(matrix.to_sympy(), domain=ZZ)
    # diagonal = left * matrix * right with left and right unimodular.
    diagonal, u, v = diagonal.as_mutable(), left.inv().as_mutable(), right.inv()
    for i in range(min(matrix.rows, matrix.cols)):
        if diagonal[i, i] < 0:
            diagonal[i, i] = -diagonal[i, i]
            u[:, i] = -u[:, i]
    LOGGER.debug(
        "Smith form of %dx%d matrix has diagonal %s",
        matrix.rows,
        matrix.cols,
        [int(diagonal[i, i]) for i in range(min(matrix.rows, matrix.cols))],
    )
    return (
        IntMatrix.from_sympy(u),
        IntMatrix.from_sympy(diagonal),
        IntMatrix.from_sympy(v),
        IntMatrix.from_sympy(right),
    )


def smith_normal_form(matrix: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with matrix = U * D * V.

    U and V are unimodular and D is diagonal with nonnegative entries
    d1 | d2 | ... along the main diagonal.
    """
    u, diagonal, v, _ = _decompose(matrix)
    return u, diagonal, v


def integer_kernel(matrix: IntMatrix) -> IntMatrix:
    """Return a matrix whose rows form a Z-basis of {x : matrix * x = 0}."""
    _, diagonal, _, v_inv = _decompose(matrix)
    rank = sum(1 for value in diagonal.diagonal() if value)
    # Columns of V^-1 beyond the rank span the kernel.
    return v_inv.transpose().select_rows(range(rank, matrix.cols))


def _invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Merge cyclic orders into a divisibility chain, dropping trivial factors."""
    values = sorted(order for order in orders if order > 1)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            common = gcd(values[i], values[j])
            values[i], values[j] = common, values[i] * values[j] // common
    return tuple(value for value in values if value > 1)


@dataclass(frozen=True)
class FgAbelianGroup:
    """A finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dt.

    The torsion coefficients form a divisibility chain d1 | d2 | ... with
    every di >= 2, so two groups are isomorphic exactly when they are equal.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        """Reject non-canonical data; use ``of`` to canonicalize."""
        if self.free_rank < 0:
            raise ValueError("Free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"Torsion coefficients must be >= 2: {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"Torsion coefficients must form a chain: {self.torsion}")

    @classmethod
    def of(cls, free_rank: int = 0, *orders: int) -> FgAbelianGroup:
        """Return the group Z^free_rank plus cyclic groups of the given orders.

        An order of 0 stands for an infinite cyclic summand.
        """
        orders = tuple(abs(_as_int(order)) for order in orders)
        extra_free = sum(1 for order in orders if order == 0)
        return cls(free_rank + extra_free, _invariant_factors(orders))

    @classmethod
    def trivial(cls) -> FgAbelianGroup:
        """Return the trivial group."""
        return cls()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Return the cardinality, or None for infinite groups."""
        return prod(self.torsion) if self.is_finite else None

    def torsion_subgroup(self) -> FgAbelianGroup:
        """Return the torsion subgroup."""
        return FgAbelianGroup(0, self.torsion)

    def direct_sum(self, other: FgAbelianGroup) -> FgAbelianGroup:
        """Return self + other."""
        return FgAbelianGroup.of(
            self.free_rank + other.free_rank, *self.torsion, *other.torsion
        )

    def power(self, copies: int) -> FgAbelianGroup:
        """Return the direct sum of ``copies`` copies of self."""
        if copies < 0:
            raise ValueError("Number of copies must be nonnegative")
        return FgAbelianGroup.of(self.free_rank * copies, *(self.torsion * copies))

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        index = 0
        while index < len(self.torsion):
            order = self.torsion[index]
            count = self.torsion.count(order)
            parts.append(f"Z/{order}" if count == 1 else f"(Z/{order})^{count}")
            index += count
        return " + ".join(parts)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "text": str(self),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FgAbelianGroup:
        """Inverse of as_dict."""
        return cls(int(data["free_rank"]), tuple(int(d) for d in data["torsion"]))


def cokernel(matrix: IntMatrix) -> FgAbelianGroup:
    """Return Z^cols modulo the row span of matrix in invariant-factor form."""
    _, diagonal_form, _ = smith_normal_form(matrix)
    nonzero = [value for value in diagonal_form.diagonal() if value]
    return FgAbelianGroup.of(matrix.cols - len(nonzero), *nonzero)


def hom_group(source: FgAbelianGroup, target: FgAbelianGroup) -> FgAbelianGroup:
    """Return Hom(source, target).

    Hom(Z, B) = B, Hom(Z/d, Z) = 0 and Hom(Z/d, Z/e) = Z/gcd(d, e).
    """
    orders = list(target.torsion) * source.free_rank
    for d in source.torsion:
        orders.extend(gcd(d, e) for e in target.torsion)
    return FgAbelianGroup.of(source.free_rank * target.free_rank, *orders)
