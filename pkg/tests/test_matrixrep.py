"""Tests for numerical representations."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from charvar.exceptions import (
    InvalidParameter,
    NotAHomomorphism,
    NotARepresentation,
    NotCommuting,
    NotDetOne,
    NotExponentCanceling,
    NotUnitary,
    ShapeMismatch,
)
from charvar.matrixrep import (
    PAULI_X,
    PAULI_Y,
    LiftedRep,
    MatrixRep,
    TargetGroup,
    check_representation,
    deck_act,
    haar_unitary,
    lift_to_universal_cover,
    load_matrix_rep,
    match_spectra,
    obstruction_class,
    pi_rotation_fixture,
    random_commuting_tuple,
    random_free_rep,
    random_so3_commuting_pair,
    random_surface_rep,
    rotation_to_unitary,
    simultaneous_eigenvalues,
    su2_commuting_invariant,
)
from charvar.presentation import (
    Presentation,
    Word,
    free_abelian_group,
    free_group,
    surface_group,
)


def test_target_parse() -> None:
    assert TargetGroup.parse("SU3") == TargetGroup("SU", 3)
    assert str(TargetGroup.parse(" PU 2 ")) == "PU 2"
    with pytest.raises(InvalidParameter):
        TargetGroup.parse("GL 2")
    with pytest.raises(InvalidParameter):
        TargetGroup("U", 0)


def test_matrix_rep_validation() -> None:
    with pytest.raises(NotUnitary):
        MatrixRep("U 1", ("a",), [[[2.0]]])
    with pytest.raises(NotDetOne):
        MatrixRep("SU 2", ("a",), [1j * np.eye(2)])
    with pytest.raises(ShapeMismatch):
        MatrixRep("U 2", ("a", "b"), [np.eye(2)])
    rep = MatrixRep("U 2", ("a",), [np.eye(2)])
    with pytest.raises(ValueError):
        rep.matrices[0, 0, 0] = 2


def test_commuting_tuples() -> None:
    reps = random_commuting_tuple(3, 3, seed=7, samples=4)
    again = random_commuting_tuple(3, 3, seed=7, samples=4)
    for rep, other in zip(reps, again):
        assert np.array_equal(rep.matrices, other.matrices)
        assert check_representation(rep, free_abelian_group(3)).passed
        for i in range(3):
            for j in range(3):
                a, b = rep.matrices[i], rep.matrices[j]
                assert np.linalg.norm(a @ b - b @ a) <= 1e-12
    special = random_commuting_tuple(2, 2, "SU", seed=1)[0]
    assert_allclose(np.linalg.det(special.matrices), 1, atol=1e-12)
    with pytest.raises(InvalidParameter):
        random_commuting_tuple(2, 2, "PU")


def test_check_representation_fails_on_noncommuting() -> None:
    rep = MatrixRep("U 2", ("a", "b"), [PAULI_X, PAULI_Y])
    check = check_representation(rep, free_abelian_group(2))
    assert not check.passed
    assert check.max_residual > 1
    with pytest.raises(ShapeMismatch):
        check_representation(rep, free_abelian_group(3))


def test_pu_relators_hold_up_to_scalars() -> None:
    assert check_representation(pi_rotation_fixture(), surface_group(1)).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lift_round_trip(n: int, rng) -> None:
    cases = [
        (free_group(2), random_free_rep(n, 2, rng)),
        (free_abelian_group(2), random_surface_rep(n, 1, rng).with_target(f"U {n}")),
        (surface_group(2), random_surface_rep(n, 2, rng)),
    ]
    for presentation, rep in cases:
        if rep.generators != presentation.generator_names:
            rep = MatrixRep(rep.target, presentation.generator_names, rep.matrices)
        lifted = lift_to_universal_cover(rep, presentation)
        real, su = lifted.relator_residuals(presentation)
        assert real.max(initial=0.0) <= 1e-10
        assert su.max(initial=0.0) <= 1e-10
        assert np.abs(lifted.project().matrices - rep.matrices).max() <= 1e-12
        assert_allclose(np.linalg.det(lifted.su_parts), 1, atol=1e-12)


def test_principal_branch() -> None:
    rep = MatrixRep("U 1", ("a",), [[[-1.0]]])
    lifted = lift_to_universal_cover(rep, free_group(1))
    assert lifted.real_parts[0] == pytest.approx(np.pi)


def test_lift_errors() -> None:
    with pytest.raises(InvalidParameter):
        lift_to_universal_cover(pi_rotation_fixture(), surface_group(1))
    torsion = Presentation(("a",), (Word.generator(0).power(2),))
    reflection = MatrixRep("U 2", ("a",), [np.diag([1.0, -1.0])])
    assert check_representation(reflection, torsion).passed
    with pytest.raises(NotExponentCanceling):
        lift_to_universal_cover(reflection, torsion)
    broken = MatrixRep("U 2", ("a", "b"), [PAULI_X, PAULI_Y])
    with pytest.raises(NotARepresentation):
        lift_to_universal_cover(broken, free_abelian_group(2))


def test_deck_action(rng) -> None:
    presentation = free_abelian_group(2)
    rep = random_commuting_tuple(3, 2, seed=rng)[0]
    lifted = lift_to_universal_cover(rep, presentation)
    moved = deck_act((2, -1), lifted, presentation)
    assert np.array_equal(moved.project().matrices, lifted.project().matrices)
    assert np.abs(moved.project_numerically() - rep.matrices).max() <= 1e-12
    assert_allclose(moved.real_parts - lifted.real_parts, [4 * np.pi / 3, -2 * np.pi / 3])
    composed = deck_act((1, 1), deck_act((1, -2), lifted, presentation), presentation)
    assert np.array_equal(composed.su_parts, moved.su_parts)
    assert np.array_equal(composed.real_parts, moved.real_parts)
    with pytest.raises(ShapeMismatch):
        deck_act((1,), lifted, presentation)


def test_deck_action_must_respect_relators() -> None:
    torsion = Presentation(("a",), (Word.generator(0).power(2),))
    lifted = LiftedRep("U 1", ("a",), [0.0], [[[1.0]]])
    with pytest.raises(NotAHomomorphism):
        deck_act((1,), lifted, torsion)
    assert deck_act((0,), lifted, torsion).windings[0] == 0


def test_serialization(write_json, rng) -> None:
    rep = random_free_rep(2, 2, rng)
    path = write_json("rep.json", rep.as_dict())
    loaded = load_matrix_rep(path)
    assert loaded.generators == rep.generators
    assert_allclose(loaded.matrices, rep.matrices, atol=1e-15)
    data = rep.as_dict()
    data["n"] = 3
    with pytest.raises(ShapeMismatch):
        MatrixRep.from_dict(data)
    lifted = lift_to_universal_cover(rep, free_group(2))
    moved = deck_act((1, 0), lifted, free_group(2))
    restored = LiftedRep.from_dict(moved.as_dict())
    assert_allclose(restored.real_parts, moved.real_parts)
    assert_allclose(restored.project().matrices, rep.matrices, atol=1e-12)


def test_obstruction_fixtures(rng) -> None:
    assert obstruction_class(pi_rotation_fixture(), 1) == 1
    assert obstruction_class(random_so3_commuting_pair(rng, perpendicular=False), 1) == 0
    assert obstruction_class(random_so3_commuting_pair(rng, perpendicular=True), 1) == 1
    special = random_commuting_tuple(2, 2, "SU", seed=3)[0]
    assert obstruction_class(special, 1) == 0


def test_obstruction_invariance(rng) -> None:
    rep = random_so3_commuting_pair(rng, perpendicular=True)
    for _ in range(10):
        assert obstruction_class(rep.conjugate(haar_unitary(2, rng)), 1) == 1
    assert obstruction_class(rep, 1, branches=[1, 0]) == 1


def test_obstruction_in_pu3() -> None:
    omega = np.exp(2j * np.pi / 3)
    clock = np.diag([1, omega, omega**2])
    shift = np.roll(np.eye(3), 1, axis=0)
    rep = MatrixRep("PU 3", ("a1", "b1"), [clock, shift])
    assert obstruction_class(rep, 1) == 1


def test_obstruction_errors(rng) -> None:
    pair = MatrixRep("PU 2", ("a1", "b1"), [haar_unitary(2, rng), haar_unitary(2, rng)])
    with pytest.raises(NotARepresentation):
        obstruction_class(pair, 1)
    with pytest.raises(ShapeMismatch):
        obstruction_class(pair, 2)


def test_rotation_to_unitary() -> None:
    identity = rotation_to_unitary(np.eye(3))
    assert_allclose(np.abs(np.trace(identity)), 2)
    flip = rotation_to_unitary(np.diag([1.0, -1.0, -1.0]))
    assert_allclose(np.abs(flip), np.abs(PAULI_X), atol=1e-12)


def test_simultaneous_eigenvalues(rng) -> None:
    degenerate = simultaneous_eigenvalues(np.eye(2), np.diag([1, -1]))
    assert match_spectra(degenerate, np.array([[1, 1], [1, -1]])) <= 1e-12
    rep = random_commuting_tuple(3, 2, seed=rng)[0]
    a, b = rep.matrices
    spectrum = simultaneous_eigenvalues(a, b)
    q = haar_unitary(3, rng)
    moved = simultaneous_eigenvalues(q @ a @ q.conj().T, q @ b @ q.conj().T)
    assert match_spectra(spectrum, moved) <= 1e-8
    assert_allclose(np.abs(spectrum), 1)
    with pytest.raises(NotCommuting):
        simultaneous_eigenvalues(PAULI_X, PAULI_Y)
    with pytest.raises(ShapeMismatch):
        simultaneous_eigenvalues(np.eye(2), np.eye(3))


def test_su2_invariant() -> None:
    assert su2_commuting_invariant(np.eye(2), np.eye(2)) == pytest.approx((2, 2, 2, 0))
    for a in np.linspace(0, 2 * np.pi, 7):
        for b in np.linspace(0, 2 * np.pi, 7):
            first = np.diag([np.exp(1j * a), np.exp(-1j * a)])
            second = np.diag([np.exp(1j * b), np.exp(-1j * b)])
            *_, kappa = su2_commuting_invariant(first, second)
            assert abs(kappa) <= 1e-12
    *_, kappa = su2_commuting_invariant(-1j * PAULI_X, -1j * PAULI_Y)
    assert kappa == pytest.approx(-4)
    with pytest.raises(NotDetOne):
        su2_commuting_invariant(1j * np.eye(2), np.eye(2))
    with pytest.raises(NotUnitary):
        su2_commuting_invariant(2 * np.eye(2), np.eye(2))
