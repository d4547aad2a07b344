"""Shared fixtures and exact oracles."""

from __future__ import annotations

import json
from itertools import combinations, permutations, product
from math import gcd, prod
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from charvar.zmodule import IntMatrix


def leibniz_determinant(rows: list[list[int]]) -> int:
    """Determinant by the permutation expansion."""
    size = len(rows)
    total = 0
    for perm in permutations(range(size)):
        inversions = sum(1 for i, j in combinations(range(size), 2) if perm[i] > perm[j])
        total += (-1) ** inversions * prod(rows[i][perm[i]] for i in range(size))
    return total


def gcd_of_minors_factors(matrix: IntMatrix) -> list[int]:
    """Nonzero invariant factors from the determinantal divisors d_k / d_(k-1)."""
    entries = matrix.to_lists()
    factors = []
    previous = 1
    for k in range(1, min(matrix.rows, matrix.cols) + 1):
        divisor = 0
        for rows in combinations(range(matrix.rows), k):
            for cols in combinations(range(matrix.cols), k):
                minor = [[entries[i][j] for j in cols] for i in rows]
                divisor = gcd(divisor, leibniz_determinant(minor))
        if divisor == 0:
            break
        factors.append(divisor // previous)
        previous = divisor
    return factors


def brute_force_hom_count(source: tuple[int, ...], target: tuple[int, ...]) -> int:
    """Count homomorphisms between sums of cyclic groups; 0 in source means Z.

    Each source generator of order d goes to a target element x with d x = 0.
    """
    elements = list(product(*(range(order) for order in target)))
    count = 1
    for order in source:
        count *= sum(
            1
            for element in elements
            if all((order * x) % modulus == 0 for x, modulus in zip(element, target))
        )
    return count


@st.composite
def int_matrices(draw, max_size: int = 4, bound: int = 20) -> IntMatrix:
    rows = draw(st.integers(0, max_size))
    cols = draw(st.integers(0, max_size))
    entries = draw(
        st.lists(
            st.lists(st.integers(-bound, bound), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return IntMatrix.from_rows(entries, cols)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def write_json(tmp_path: Path):
    """Return a helper writing data as JSON into tmp_path."""

    def _write(name: str, data) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
