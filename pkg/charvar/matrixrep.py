"""Numerical representations into U(n), SU(n) and PU(n).

Matrices of one representation are stored as a read-only complex stack of
shape (generators, n, n). PU(n) elements are unitary representatives, and
relators are checked against scalar matrices instead of the identity.
"""

from __future__ import annotations

import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import schur
from scipy.optimize import linear_sum_assignment
from scipy.spatial.transform import Rotation
from scipy.stats import unitary_group

from .config import LIFTED_REP_SCHEMA, MATRIX_REP_SCHEMA, load_json, validate
from .const import DEFAULT_TOLERANCE, EIGEN_CLUSTER_TOL, LOGGER
from .exceptions import (
    AmbiguousClass,
    IllConditioned,
    InvalidParameter,
    NotAHomomorphism,
    NotARepresentation,
    NotCommuting,
    NotDetOne,
    NotExponentCanceling,
    NotUnitary,
    ShapeMismatch,
)
from .presentation import (
    Presentation,
    Word,
    free_abelian_group,
    free_group,
    is_exponent_canceling,
    surface_group,
)

TWO_PI = 2 * math.pi

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

TARGET_KINDS = ("U", "SU", "PU")


@dataclass(frozen=True)
class TargetGroup:
    """One of U(n), SU(n) or PU(n)."""

    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in TARGET_KINDS:
            raise InvalidParameter(f"Target must be one of {TARGET_KINDS}, got '{self.kind}'")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InvalidParameter(f"Matrix size must be >= 1, got {self.n!r}")

    @classmethod
    def parse(cls, text: str | TargetGroup) -> TargetGroup:
        """Parse 'U 2', 'SU3' or 'PU 2'."""
        if isinstance(text, TargetGroup):
            return text
        match = re.fullmatch(r"\s*(U|SU|PU)\s*(\d+)\s*", text)
        if match is None:
            raise InvalidParameter(f"Malformed matrix target '{text}'")
        return cls(match.group(1), int(match.group(2)))

    def __str__(self) -> str:
        return f"{self.kind} {self.n}"


def _frozen(array: ArrayLike, dtype: Any = complex) -> NDArray:
    result = np.array(array, dtype=dtype)
    result.setflags(write=False)
    return result


def _dagger(matrices: NDArray) -> NDArray:
    return np.conj(np.swapaxes(matrices, -1, -2))


def unitarity_residual(matrices: NDArray) -> NDArray:
    """Return ||M* M - I||_F for each matrix of a stack."""
    n = matrices.shape[-1]
    return np.linalg.norm(_dagger(matrices) @ matrices - np.eye(n), axis=(-2, -1))


def scalar_residual(matrices: NDArray) -> NDArray:
    """Return the Frobenius distance of each matrix to the nearest unit scalar."""
    n = matrices.shape[-1]
    trace = np.trace(matrices, axis1=-2, axis2=-1)
    magnitude = np.abs(trace)
    phase = np.where(magnitude > 0, trace / np.where(magnitude > 0, magnitude, 1), 1)
    return np.linalg.norm(matrices - phase[..., None, None] * np.eye(n), axis=(-2, -1))


def evaluate_word(word: Word, matrices: NDArray) -> NDArray:
    """Evaluate a word on a (..., generators, n, n) stack."""
    n = matrices.shape[-1]
    result = np.broadcast_to(np.eye(n, dtype=complex), matrices.shape[:-3] + (n, n))
    result = result.copy()
    for generator, exponent in word.letters:
        factor = matrices[..., generator, :, :]
        result = result @ (factor if exponent == 1 else _dagger(factor))
    return result


@dataclass(frozen=True, eq=False)
class MatrixRep:
    """Matrices assigned to the generators of a presentation."""

    target: TargetGroup
    generators: tuple[str, ...]
    matrices: NDArray
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        """Check shapes, unitarity and determinants."""
        target = TargetGroup.parse(self.target)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "generators", tuple(self.generators))
        n = target.n
        expected = (len(self.generators), n, n)
        matrices = np.array(self.matrices, dtype=complex)
        if matrices.size == 0 and not self.generators:
            matrices = matrices.reshape(expected)
        if matrices.shape != expected:
            raise ShapeMismatch(
                f"Expected {len(self.generators)} matrices of size {n}x{n}, "
                f"got shape {matrices.shape}"
            )
        object.__setattr__(self, "matrices", _frozen(matrices))
        if not self.tolerance > 0:
            raise InvalidParameter(f"Tolerance must be positive, got {self.tolerance}")
        residuals = unitarity_residual(matrices)
        if np.any(residuals > self.tolerance * n):
            index = int(np.argmax(residuals))
            raise NotUnitary(
                f"Matrix for '{self.generators[index]}' is not unitary "
                f"(residual {residuals[index]:.3e})"
            )
        if target.kind == "SU" and len(matrices):
            errors = np.abs(np.linalg.det(matrices) - 1)
            if np.any(errors > self.tolerance):
                index = int(np.argmax(errors))
                raise NotDetOne(
                    f"Matrix for '{self.generators[index]}' has |det - 1| = {errors[index]:.3e}"
                )

    @property
    def n(self) -> int:
        """Return the matrix size."""
        return self.target.n

    def conjugate(self, unitary: ArrayLike) -> MatrixRep:
        """Return the representation Q M Q* for every generator."""
        q = np.asarray(unitary, dtype=complex)
        return MatrixRep(self.target, self.generators, q @ self.matrices @ q.conj().T, self.tolerance)

    def with_target(self, target: TargetGroup | str) -> MatrixRep:
        """Return the same matrices read in another target group."""
        return MatrixRep(target, self.generators, self.matrices, self.tolerance)

    def as_dict(self) -> dict[str, Any]:
        """Return the matrix file representation."""
        return {
            "target": str(self.target),
            "n": self.n,
            "tolerance": self.tolerance,
            "generators": list(self.generators),
            "matrices": _encode_stack(self.matrices),
        }

    @classmethod
    def from_dict(cls, data: Any, source: str = "matrices") -> MatrixRep:
        """Validate and build a representation from its JSON form."""
        data = validate(MATRIX_REP_SCHEMA, data, source)
        target = _checked_target(data, source)
        return cls(
            target,
            tuple(data["generators"]),
            _decode_stack(data["matrices"], len(data["generators"]), target.n, source),
            data.get("tolerance", DEFAULT_TOLERANCE),
        )


def _encode_stack(stack: NDArray) -> list:
    return [
        [[[float(z.real), float(z.imag)] for z in row] for row in matrix]
        for matrix in stack
    ]


def _decode_stack(data: list, count: int, n: int, source: str) -> NDArray:
    if len(data) != count or any(
        len(matrix) != n or any(len(row) != n for row in matrix) for matrix in data
    ):
        raise ShapeMismatch(f"{source}: expected {count} matrices of size {n}x{n}")
    return np.array(
        [[[complex(re_, im) for re_, im in row] for row in matrix] for matrix in data],
        dtype=complex,
    ).reshape((count, n, n))


def _checked_target(data: dict[str, Any], source: str) -> TargetGroup:
    target = TargetGroup.parse(data["target"])
    if data.get("n", target.n) != target.n:
        raise ShapeMismatch(f"{source}: n = {data['n']} does not match target {target}")
    return target


def load_matrix_rep(path: str | Path) -> MatrixRep:
    """Read a matrix JSON file."""
    return MatrixRep.from_dict(load_json(path), str(path))


@dataclass(frozen=True)
class RelatorCheck:
    """Outcome of evaluating every relator on a representation."""

    passed: bool
    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def _check_count(rep: MatrixRep, presentation: Presentation) -> None:
    if len(rep.generators) != presentation.num_generators:
        raise ShapeMismatch(
            f"{len(rep.generators)} matrices for {presentation.num_generators} generators"
        )


def relator_residuals(rep: MatrixRep, presentation: Presentation) -> NDArray:
    """Return the Frobenius distance of each relator to I (to a scalar for PU)."""
    _check_count(rep, presentation)
    values = [evaluate_word(word, rep.matrices) for word in presentation.relators]
    if not values:
        return np.zeros(0)
    stack = np.array(values)
    if rep.target.kind == "PU":
        return scalar_residual(stack)
    return np.linalg.norm(stack - np.eye(rep.n), axis=(-2, -1))


def check_representation(rep: MatrixRep, presentation: Presentation) -> RelatorCheck:
    """Evaluate every relator within the representation's tolerance."""
    residuals = relator_residuals(rep, presentation)
    passed = bool(np.all(residuals <= rep.tolerance))
    LOGGER.debug(
        "Relator check on %s: passed=%s max residual %.3e",
        rep.target,
        passed,
        float(residuals.max(initial=0.0)),
    )
    return RelatorCheck(passed, tuple(float(r) for r in residuals))


@dataclass(frozen=True, eq=False)
class LiftedRep:
    """A representation into R x SU(n), the universal cover of U(n).

    The deck group Z acts through integer windings w: the generator with
    winding w sits at (x + 2 pi w / n, exp(-2 pi i w / n) h). Windings are
    kept as integers so the action composes exactly.
    """

    target: TargetGroup
    generators: tuple[str, ...]
    base_real: NDArray
    base_su: NDArray
    windings: NDArray | None = None
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        target = TargetGroup.parse(self.target)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "generators", tuple(self.generators))
        count, n = len(self.generators), target.n
        base_real = np.array(self.base_real, dtype=float)
        base_su = np.array(self.base_su, dtype=complex)
        windings = np.zeros(count, dtype=np.int64) if self.windings is None else np.array(
            self.windings, dtype=np.int64
        )
        if base_real.shape != (count,) or windings.shape != (count,):
            raise ShapeMismatch(f"Expected {count} real parts and windings")
        if base_su.shape != (count, n, n):
            raise ShapeMismatch(f"Expected {count} SU({n}) matrices, got shape {base_su.shape}")
        object.__setattr__(self, "base_real", _frozen(base_real, float))
        object.__setattr__(self, "base_su", _frozen(base_su))
        object.__setattr__(self, "windings", _frozen(windings, np.int64))

    @property
    def n(self) -> int:
        """Return the matrix size."""
        return self.target.n

    @property
    def real_parts(self) -> NDArray:
        return self.base_real + TWO_PI * self.windings / self.n

    @property
    def su_parts(self) -> NDArray:
        phases = np.exp(-2j * np.pi * self.windings / self.n)
        return phases[:, None, None] * self.base_su

    def project(self) -> MatrixRep:
        """Return q(x, h) = exp(ix) h; the winding phases cancel exactly."""
        matrices = np.exp(1j * self.base_real)[:, None, None] * self.base_su
        return MatrixRep(TargetGroup("U", self.n), self.generators, matrices, self.tolerance)

    def project_numerically(self) -> NDArray:
        """Return exp(ix) h computed from the shifted parts."""
        return np.exp(1j * self.real_parts)[:, None, None] * self.su_parts

    def relator_residuals(self, presentation: Presentation) -> tuple[NDArray, NDArray]:
        """Return (|real sum|, ||SU product - I||_F) per relator."""
        if len(self.generators) != presentation.num_generators:
            raise ShapeMismatch(
                f"{len(self.generators)} lifts for {presentation.num_generators} generators"
            )
        real_parts = self.real_parts
        su_parts = self.su_parts
        real = np.array(
            [
                abs(math.fsum(e * real_parts[g] for g, e in word.letters))
                for word in presentation.relators
            ]
        )
        su = np.array(
            [
                np.linalg.norm(evaluate_word(word, su_parts) - np.eye(self.n))
                for word in presentation.relators
            ]
        )
        return real, su

    def as_dict(self) -> dict[str, Any]:
        return {
            "target": str(self.target),
            "n": self.n,
            "tolerance": self.tolerance,
            "generators": list(self.generators),
            "real_parts": [float(x) for x in self.real_parts],
            "su_parts": _encode_stack(self.su_parts),
        }

    @classmethod
    def from_dict(cls, data: Any, source: str = "lift") -> LiftedRep:
        """Read a lift; the stored parts become the base with zero windings."""
        data = validate(LIFTED_REP_SCHEMA, data, source)
        target = _checked_target(data, source)
        count = len(data["generators"])
        return cls(
            target,
            tuple(data["generators"]),
            np.array(data["real_parts"], dtype=float),
            _decode_stack(data["su_parts"], count, target.n, source),
            None,
            data.get("tolerance", DEFAULT_TOLERANCE),
        )


def principal_lift_parts(matrices: NDArray) -> tuple[NDArray, NDArray]:
    """Return (x, h) with x = Arg(det g) / n, Arg in (-pi, pi], and h = exp(-ix) g."""
    n = matrices.shape[-1]
    angles = np.angle(np.linalg.det(matrices))
    angles = np.where(angles <= -np.pi, np.pi, angles)
    real = angles / n
    return real, np.exp(-1j * real)[..., None, None] * matrices


def lift_to_universal_cover(rep: MatrixRep, presentation: Presentation) -> LiftedRep:
    """Lift a U(n) representation of an exponent-canceling group to R x SU(n)."""
    if rep.target.kind == "PU":
        raise InvalidParameter("Lifting needs a U(n) or SU(n) representation")
    canceling, _ = is_exponent_canceling(presentation)
    if not canceling:
        raise NotExponentCanceling("Presentation has a relator with nonzero exponent sum")
    check = check_representation(rep, presentation)
    if not check.passed:
        raise NotARepresentation(
            f"Relators fail beyond tolerance (max residual {check.max_residual:.3e})"
        )
    real, su = principal_lift_parts(rep.matrices)
    lifted = LiftedRep(TargetGroup("U", rep.n), rep.generators, real, su, None, rep.tolerance)
    real_residuals, su_residuals = lifted.relator_residuals(presentation)
    LOGGER.debug(
        "Lifted %d generators into R x SU(%d): real residual %.3e, SU residual %.3e",
        len(rep.generators),
        rep.n,
        float(real_residuals.max(initial=0.0)),
        float(su_residuals.max(initial=0.0)),
    )
    if np.any(real_residuals > rep.tolerance) or np.any(su_residuals > rep.tolerance):
        raise NotARepresentation(
            f"Lift violates a relator (real {real_residuals.max():.3e}, "
            f"SU {su_residuals.max():.3e})"
        )
    return lifted


def deck_act(
    assignment: Sequence[int], lifted: LiftedRep, presentation: Presentation
) -> LiftedRep:
    """Act by the deck transformation sending generator i to (2 pi j_i / n, exp(-2 pi i j_i / n) I)."""
    values = [int(j) for j in assignment]
    if len(values) != presentation.num_generators or len(values) != len(lifted.generators):
        raise ShapeMismatch(
            f"{len(values)} deck values for {presentation.num_generators} generators"
        )
    for index, word in enumerate(presentation.relators):
        total = sum(e * values[g] for g, e in word.letters)
        if total:
            raise NotAHomomorphism(f"Relator {index + 1} has deck sum {total}, not 0")
    return LiftedRep(
        lifted.target,
        lifted.generators,
        lifted.base_real,
        lifted.base_su,
        lifted.windings + np.array(values, dtype=np.int64),
        lifted.tolerance,
    )


def obstruction_classes(
    stack: ArrayLike,
    branches: ArrayLike | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> NDArray:
    """Return the class in Z/n of each surface representation in a stack.

    ``stack`` has shape (..., 2g, n, n) ordered a1, b1, ..., ag, bg.
    ``branches`` picks the n-th root of each determinant used for lifting to
    SU(n); the class does not depend on it.
    """
    stack = np.asarray(stack, dtype=complex)
    n = stack.shape[-1]
    if stack.ndim < 3 or stack.shape[-3] % 2 or stack.shape[-2] != n:
        raise ShapeMismatch(f"Expected a (..., 2g, n, n) stack, got shape {stack.shape}")
    if n < 2:
        raise InvalidParameter("Obstruction classes need n >= 2")
    roots = np.exp(1j * np.angle(np.linalg.det(stack)) / n)
    if branches is not None:
        roots = roots * np.exp(2j * np.pi * np.asarray(branches) / n)
    lifted = stack / roots[..., None, None]
    product = np.broadcast_to(np.eye(n, dtype=complex), stack.shape[:-3] + (n, n)).copy()
    for i in range(0, stack.shape[-3], 2):
        a, b = lifted[..., i, :, :], lifted[..., i + 1, :, :]
        product = product @ a @ b @ _dagger(a) @ _dagger(b)
    scalar = scalar_residual(product)
    if np.any(scalar > tolerance):
        raise NotARepresentation(
            f"Commutator product is not scalar (residual {scalar.max():.3e})"
        )
    angles = np.angle(np.trace(product, axis1=-2, axis2=-1))
    classes = np.mod(np.rint(angles * n / TWO_PI).astype(np.int64), n)
    roots_of_unity = np.exp(2j * np.pi * classes / n)
    distance = np.linalg.norm(
        product - roots_of_unity[..., None, None] * np.eye(n), axis=(-2, -1)
    )
    if np.any(distance > tolerance):
        raise AmbiguousClass(
            f"Commutator product is {distance.max():.3e} away from every root of unity"
        )
    return classes


def obstruction_class(
    rep: MatrixRep, genus: int, branches: ArrayLike | None = None
) -> int:
    """Return the component class in Z/n of a genus-g surface representation."""
    if len(rep.generators) != 2 * genus:
        raise ShapeMismatch(f"{len(rep.generators)} matrices for genus {genus}")
    return int(obstruction_classes(rep.matrices, branches, rep.tolerance))


def _angles(values: NDArray) -> NDArray:
    return np.mod(np.angle(values), TWO_PI)


def _clusters(angles: NDArray, tolerance: float) -> list[list[int]]:
    """Group indices whose angles agree within tolerance on the circle."""
    order = np.argsort(angles)
    clusters: list[list[int]] = []
    for index in order:
        if clusters and angles[index] - angles[clusters[-1][-1]] <= tolerance:
            clusters[-1].append(int(index))
        else:
            clusters.append([int(index)])
    if len(clusters) > 1 and angles[clusters[0][0]] + TWO_PI - angles[clusters[-1][-1]] <= tolerance:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


def _offdiagonal(matrix: NDArray) -> float:
    return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def _joint_basis(a: NDArray, b: NDArray) -> NDArray:
    """Diagonalize a, then b on each eigenspace of a."""
    t, z = schur(a, output="complex")
    basis = np.zeros_like(z)
    for cluster in _clusters(_angles(np.diag(t)), EIGEN_CLUSTER_TOL):
        block = z[:, cluster]
        if len(cluster) > 1:
            _, inner = schur(block.conj().T @ b @ block, output="complex")
            block = block @ inner
        basis[:, cluster] = block
    return basis


def simultaneous_eigenvalues(
    a: ArrayLike, b: ArrayLike, tolerance: float = DEFAULT_TOLERANCE
) -> NDArray:
    """Return the joint eigenvalue pairs of two commuting unitaries.

    The result has shape (n, 2), unit-modulus entries and rows sorted by
    (angle of alpha, angle of beta) with angles in [0, 2 pi).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ShapeMismatch(f"Expected two square matrices of one size, got {a.shape}, {b.shape}")
    n = a.shape[0]
    commutator = float(np.linalg.norm(a @ b - b @ a))
    if commutator > tolerance:
        raise NotCommuting(f"Matrices do not commute (residual {commutator:.3e})")
    limit = max(100 * tolerance, 10 * EIGEN_CLUSTER_TOL) * n

    def residual(q: NDArray) -> float:
        return max(_offdiagonal(q.conj().T @ a @ q), _offdiagonal(q.conj().T @ b @ q))

    basis = _joint_basis(a, b)
    if residual(basis) > limit:
        LOGGER.debug("Joint basis residual %.3e, trying a random combination", residual(basis))
        weight = np.exp(1j * np.random.default_rng(n).uniform(0, TWO_PI))
        _, basis = schur(a + np.pi * weight * b, output="complex")
        if residual(basis) > limit:
            raise IllConditioned(
                f"No joint eigenbasis found (residual {residual(basis):.3e})"
            )
    alpha = np.diag(basis.conj().T @ a @ basis)
    beta = np.diag(basis.conj().T @ b @ basis)
    pairs = np.stack([alpha / np.abs(alpha), beta / np.abs(beta)], axis=1)
    order = np.lexsort((_angles(pairs[:, 1]), _angles(pairs[:, 0])))
    return pairs[order]


def match_spectra(first: ArrayLike, second: ArrayLike) -> float:
    """Return the largest pair distance under the optimal matching of two spectra."""
    first = np.asarray(first)
    second = np.asarray(second)
    if first.shape != second.shape:
        raise ShapeMismatch(f"Spectra have shapes {first.shape} and {second.shape}")
    if not len(first):
        return 0.0
    cost = np.maximum(
        np.abs(first[:, None, 0] - second[None, :, 0]),
        np.abs(first[:, None, 1] - second[None, :, 1]),
    )
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def su2_commuting_invariant(
    a: ArrayLike, b: ArrayLike, tolerance: float = DEFAULT_TOLERANCE
) -> tuple[float, float, float, float]:
    """Return (tr A, tr B, tr AB, x^2 + y^2 + z^2 - xyz - 4) for A, B in SU(2).

    The last value vanishes exactly on commuting pairs.
    """
    stack = np.array([a, b], dtype=complex)
    if stack.shape != (2, 2, 2):
        raise ShapeMismatch(f"Expected two 2x2 matrices, got shape {stack.shape}")
    residuals = unitarity_residual(stack)
    if np.any(residuals > 2 * tolerance):
        raise NotUnitary(f"Input is not unitary (residual {residuals.max():.3e})")
    errors = np.abs(np.linalg.det(stack) - 1)
    if np.any(errors > tolerance):
        raise NotDetOne(f"Input has |det - 1| = {errors.max():.3e}")
    traces = np.array([np.trace(stack[0]), np.trace(stack[1]), np.trace(stack[0] @ stack[1])])
    if np.any(np.abs(traces.imag) > 10 * tolerance + 1e-12):
        raise NotUnitary(f"SU(2) traces are not real (imaginary part {np.abs(traces.imag).max():.3e})")
    x, y, z = (float(t) for t in traces.real)
    return x, y, z, x * x + y * y + z * z - x * y * z - 4


def haar_unitary(n: int, rng: np.random.Generator) -> NDArray:
    """Return a Haar-random n x n unitary."""
    if n == 1:
        return np.exp(1j * rng.uniform(0, TWO_PI, size=(1, 1)))
    return unitary_group.rvs(n, random_state=rng)


def random_phases(n: int, rng: np.random.Generator, special: bool = False) -> NDArray:
    """Return unit-modulus diagonal entries, with product 1 when special."""
    angles = rng.uniform(0, TWO_PI, size=n)
    if special:
        angles[-1] = -angles[:-1].sum()
    return np.exp(1j * angles)


def random_commuting_sample(
    n: int, count: int, rng: np.random.Generator, special: bool = False
) -> tuple[NDArray, NDArray]:
    """Return (Q, phases) with phases of shape (count, n); the tuple is Q diag Q*."""
    q = haar_unitary(n, rng)
    phases = np.array([random_phases(n, rng, special) for _ in range(count)])
    return q, phases


def _commuting_matrices(q: NDArray, phases: NDArray) -> NDArray:
    return np.array([(q * row) @ q.conj().T for row in phases])


def _target_kind(target: str | TargetGroup, n: int) -> str:
    if isinstance(target, TargetGroup):
        if target.n != n:
            raise InvalidParameter(f"Target {target} does not match n = {n}")
        target = target.kind
    if target not in ("U", "SU"):
        raise InvalidParameter(f"Sampling target must be U or SU, got '{target}'")
    return target


def random_commuting_tuple(
    n: int,
    count: int,
    target: str | TargetGroup = "U",
    seed: int | np.random.Generator = 0,
    samples: int = 1,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[MatrixRep]:
    """Return representations of Z^count built as Q D_i Q* with shared Haar Q."""
    if n < 1 or count < 1 or samples < 1:
        raise InvalidParameter("n, count and samples must be >= 1")
    kind = _target_kind(target, n)
    rng = np.random.default_rng(seed)
    names = free_abelian_group(count).generator_names
    reps = []
    for _ in range(samples):
        q, phases = random_commuting_sample(n, count, rng, kind == "SU")
        reps.append(MatrixRep(TargetGroup(kind, n), names, _commuting_matrices(q, phases), tolerance))
    return reps


def random_free_rep(
    n: int, rank: int, rng: np.random.Generator, tolerance: float = DEFAULT_TOLERANCE
) -> MatrixRep:
    """Return Haar-random U(n) matrices for a free group."""
    names = free_group(rank).generator_names
    matrices = np.array([haar_unitary(n, rng) for _ in range(rank)]).reshape((rank, n, n))
    return MatrixRep(TargetGroup("U", n), names, matrices, tolerance)


def random_surface_rep(
    n: int, genus: int, rng: np.random.Generator, tolerance: float = DEFAULT_TOLERANCE
) -> MatrixRep:
    """Return a U(n) representation of a surface group.

    Genus 1 gives a random commuting pair. For higher genus every b_i is I
    and the a_i are Haar-random, which satisfies the relator trivially.
    """
    names = surface_group(genus).generator_names
    if genus == 1:
        q, phases = random_commuting_sample(n, 2, rng)
        matrices = _commuting_matrices(q, phases)
    else:
        matrices = np.array(
            [haar_unitary(n, rng) if i % 2 == 0 else np.eye(n) for i in range(2 * genus)]
        )
    return MatrixRep(TargetGroup("U", n), names, matrices, tolerance)


def rotation_to_unitary(matrix: ArrayLike) -> NDArray:
    """Return an SU(2) matrix covering a rotation in SO(3)."""
    x, y, z, w = Rotation.from_matrix(np.asarray(matrix, dtype=float)).as_quat()
    return w * np.eye(2) - 1j * (x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def random_so3_commuting_pair(
    rng: np.random.Generator, perpendicular: bool, tolerance: float = DEFAULT_TOLERANCE
) -> MatrixRep:
    """Return a commuting pair in SO(3) = PU(2) as a genus-1 PU(2) representation.

    Rotations about a shared axis have class 0; pi-rotations about two
    perpendicular axes have class 1.
    """
    frame = Rotation.random(None, rng).as_matrix()
    if perpendicular:
        rotations = [
            Rotation.from_rotvec(np.pi * frame[:, 0]),
            Rotation.from_rotvec(np.pi * frame[:, 1]),
        ]
    else:
        angles = rng.uniform(0, TWO_PI, size=2)
        rotations = [Rotation.from_rotvec(angle * frame[:, 2]) for angle in angles]
    matrices = np.array([rotation_to_unitary(r.as_matrix()) for r in rotations])
    return MatrixRep(TargetGroup("PU", 2), surface_group(1).generator_names, matrices, tolerance)


def pi_rotation_fixture(tolerance: float = DEFAULT_TOLERANCE) -> MatrixRep:
    """Return pi-rotations about the x and y axes as a PU(2) pair."""
    matrices = np.array(
        [
            rotation_to_unitary(Rotation.from_rotvec([np.pi, 0, 0]).as_matrix()),
            rotation_to_unitary(Rotation.from_rotvec([0, np.pi, 0]).as_matrix()),
        ]
    )
    return MatrixRep(TargetGroup("PU", 2), surface_group(1).generator_names, matrices, tolerance)
