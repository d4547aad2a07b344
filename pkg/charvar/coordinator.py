"""Coordinator for the Monte-Carlo verification suites."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .const import (
    DECK_RANGE,
    DEFAULT_BATCH_SIZE,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_WORKERS,
    KAPPA_SEPARATED_FRACTION,
    KAPPA_SEPARATION,
    LIFT_RELATOR_TOL,
    LOGGER,
    OBSTRUCTION_BRANCHES,
    OBSTRUCTION_CONJUGATIONS,
    ROUND_TRIP_TOL,
    SPECTRUM_TOL,
    SUITE_CANONICAL_FORM,
    SUITE_COUNTS,
    SUITE_DECK,
    SUITE_LIFTING,
    SUITE_OBSTRUCTION,
    SUITE_TRACE_INVARIANT,
)
from .data import SuiteResult
from .exceptions import CharvarError, InvalidParameter
from .matrixrep import (
    deck_act,
    haar_unitary,
    lift_to_universal_cover,
    match_spectra,
    obstruction_class,
    obstruction_classes,
    pi_rotation_fixture,
    random_commuting_sample,
    random_free_rep,
    random_so3_commuting_pair,
    random_surface_rep,
    simultaneous_eigenvalues,
    su2_commuting_invariant,
)
from .presentation import free_abelian_group, free_group, surface_group

BatchRunner = Callable[[np.random.Generator, int, float, SuiteResult], None]


def _obstruction_batch(
    rng: np.random.Generator, size: int, tolerance: float, result: SuiteResult
) -> None:
    for _ in range(size):
        result.samples += 1
        perpendicular = bool(rng.random() < 0.5)
        rep = random_so3_commuting_pair(rng, perpendicular, tolerance)
        expected = int(perpendicular)
        try:
            base = obstruction_class(rep, 1)
            conjugators = np.array(
                [haar_unitary(2, rng) for _ in range(OBSTRUCTION_CONJUGATIONS)]
            )
            conjugated = (
                conjugators[:, None] @ rep.matrices @ np.conj(conjugators.swapaxes(-1, -2))[:, None]
            )
            by_conjugation = obstruction_classes(conjugated, tolerance=tolerance)
            branches = rng.integers(0, 2, size=(OBSTRUCTION_BRANCHES, 2))
            by_branch = obstruction_classes(
                np.broadcast_to(rep.matrices, (OBSTRUCTION_BRANCHES, 2, 2, 2)),
                branches,
                tolerance,
            )
        except CharvarError as exception:
            LOGGER.error("Obstruction sample failed: %s", exception)
            result.fail(str(exception))
            continue
        result.count(f"class_{base}")
        if base != expected:
            result.fail(f"Class {base} for a pair of expected class {expected}")
        elif np.any(by_conjugation != base) or np.any(by_branch != base):
            result.fail(f"Class of a class-{base} pair changed under conjugation or branch")


def _obstruction_fixtures(tolerance: float, result: SuiteResult) -> None:
    fixture = obstruction_class(pi_rotation_fixture(tolerance), 1)
    result.statistics["pi_rotation_class"] = fixture
    if fixture != 1:
        result.fail(f"Pi-rotation fixture has class {fixture}, expected 1")
    if not result.statistics.get("class_0") or not result.statistics.get("class_1"):
        result.fail("Both obstruction classes must be realized")


def _lifting_batch(
    rng: np.random.Generator, size: int, tolerance: float, result: SuiteResult
) -> None:
    for _ in range(size):
        for n in (2, 3):
            cases = (
                ("free", free_group(2), random_free_rep(n, 2, rng, tolerance)),
                ("free_abelian", free_abelian_group(2), random_surface_rep(n, 1, rng, tolerance)),
                ("surface", surface_group(2), random_surface_rep(n, 2, rng, tolerance)),
            )
            for label, presentation, rep in cases:
                result.samples += 1
                try:
                    lifted = lift_to_universal_cover(rep, presentation)
                except CharvarError as exception:
                    LOGGER.error("Lift of a %s sample into U(%d) failed: %s", label, n, exception)
                    result.fail(str(exception))
                    continue
                real, su = lifted.relator_residuals(presentation)
                relator = float(max(real.max(initial=0.0), su.max(initial=0.0)))
                round_trip = float(np.abs(lifted.project().matrices - rep.matrices).max())
                result.record("relator", relator)
                result.record("round_trip", round_trip)
                if relator > LIFT_RELATOR_TOL or round_trip > ROUND_TRIP_TOL:
                    result.fail(
                        f"{label} U({n}): relator {relator:.3e}, round trip {round_trip:.3e}"
                    )


def _deck_batch(
    rng: np.random.Generator, size: int, tolerance: float, result: SuiteResult
) -> None:
    presentation = free_abelian_group(2)
    span = range(-DECK_RANGE, DECK_RANGE + 1)
    for index in range(size):
        n = 2 + index % 2
        result.samples += 1
        rep = random_surface_rep(n, 1, rng, tolerance)
        try:
            lifted = lift_to_universal_cover(rep, presentation)
        except CharvarError as exception:
            LOGGER.error("Deck sample failed: %s", exception)
            result.fail(str(exception))
            continue
        projection = lifted.project().matrices
        for phi in ((i, j) for i in span for j in span):
            moved = deck_act(phi, lifted, presentation)
            if not np.array_equal(moved.project().matrices, projection):
                result.fail(f"Deck vector {phi} changed the projection")
            result.record(
                "projection", float(np.abs(moved.project_numerically() - projection).max())
            )
            if any(phi) and np.allclose(moved.real_parts, lifted.real_parts):
                result.fail(f"Deck vector {phi} fixed the real parts")
            psi = tuple(int(v) for v in rng.integers(-DECK_RANGE, DECK_RANGE + 1, size=2))
            combined = deck_act([a + b for a, b in zip(phi, psi)], lifted, presentation)
            composed = deck_act(phi, deck_act(psi, lifted, presentation), presentation)
            if not (
                np.array_equal(combined.real_parts, composed.real_parts)
                and np.array_equal(combined.su_parts, composed.su_parts)
            ):
                result.fail(f"Deck action of {phi} + {psi} is not a composition")
    if result.max_residuals.get("projection", 0.0) > ROUND_TRIP_TOL:
        result.fail(f"Projection drift {result.max_residuals['projection']:.3e}")


def _canonical_batch(
    rng: np.random.Generator, size: int, tolerance: float, result: SuiteResult
) -> None:
    for _ in range(size):
        result.samples += 1
        q, phases = random_commuting_sample(3, 2, rng)
        a, b = ((q * row) @ q.conj().T for row in phases)
        other = haar_unitary(3, rng)
        try:
            spectrum = simultaneous_eigenvalues(a, b, tolerance)
            moved = simultaneous_eigenvalues(
                other @ a @ other.conj().T, other @ b @ other.conj().T, tolerance
            )
        except CharvarError as exception:
            LOGGER.error("Canonical form sample failed: %s", exception)
            result.fail(str(exception))
            continue
        construction = match_spectra(spectrum, phases.T)
        conjugation = match_spectra(spectrum, moved)
        result.record("construction", construction)
        result.record("conjugation", conjugation)
        if max(construction, conjugation) > SPECTRUM_TOL:
            result.fail(
                f"Spectrum mismatch: construction {construction:.3e}, "
                f"conjugation {conjugation:.3e}"
            )


def _canonical_fixtures(tolerance: float, result: SuiteResult) -> None:
    a = np.eye(2, dtype=complex)
    b = np.diag([1, -1]).astype(complex)
    expected = np.array([[1, 1], [1, -1]], dtype=complex)
    degenerate = match_spectra(simultaneous_eigenvalues(a, b, tolerance), expected)
    result.record("degenerate_fixture", degenerate)
    if degenerate > SPECTRUM_TOL:
        result.fail(f"Degenerate fixture mismatch {degenerate:.3e}")


def _trace_batch(
    rng: np.random.Generator, size: int, tolerance: float, result: SuiteResult
) -> None:
    for _ in range(size):
        result.samples += 1
        q, phases = random_commuting_sample(2, 2, rng, special=True)
        a, b = ((q * row) @ q.conj().T for row in phases)
        haar = np.array([haar_unitary(2, rng) for _ in range(2)])
        haar = haar / np.sqrt(np.linalg.det(haar))[:, None, None]
        try:
            *_, kappa = su2_commuting_invariant(a, b, tolerance)
            *_, separated = su2_commuting_invariant(haar[0], haar[1], tolerance)
        except CharvarError as exception:
            LOGGER.error("Trace invariant sample failed: %s", exception)
            result.fail(str(exception))
            continue
        result.record("kappa", abs(kappa))
        if abs(kappa) > tolerance:
            result.fail(f"kappa = {kappa:.3e} on a commuting pair")
        result.count("haar_pairs")
        if abs(separated) > KAPPA_SEPARATION:
            result.count("haar_separated")


def _trace_fixtures(tolerance: float, result: SuiteResult) -> None:
    total = result.statistics.get("haar_pairs", 0)
    fraction = result.statistics.get("haar_separated", 0) / total if total else 0.0
    result.statistics["haar_separated_fraction"] = fraction
    if fraction < KAPPA_SEPARATED_FRACTION:
        result.fail(f"Only {fraction:.1%} of Haar pairs have |kappa| > {KAPPA_SEPARATION}")


@dataclass(frozen=True)
class Suite:
    """A suite: a batch runner plus checks that run once on the merged result."""

    name: str
    batch: BatchRunner
    finish: Callable[[float, SuiteResult], None] | None = None


SUITES = {
    suite.name: suite
    for suite in (
        Suite(SUITE_OBSTRUCTION, _obstruction_batch, _obstruction_fixtures),
        Suite(SUITE_LIFTING, _lifting_batch),
        Suite(SUITE_DECK, _deck_batch),
        Suite(SUITE_CANONICAL_FORM, _canonical_batch, _canonical_fixtures),
        Suite(SUITE_TRACE_INVARIANT, _trace_batch, _trace_fixtures),
    )
}


class SampleCoordinator:
    """Run suites in seeded batches on a thread pool.

    Batch i of a suite draws from the i-th child of
    SeedSequence(seed, spawn_key=(suite index,)) and results are merged in
    batch order, so output does not depend on scheduling.
    """

    def __init__(
        self,
        tolerance: float = DEFAULT_TOLERANCE,
        seed: int = DEFAULT_SEED,
        workers: int = DEFAULT_WORKERS,
        batch_size: int = DEFAULT_BATCH_SIZE,
    ) -> None:
        """Initialize."""
        if workers < 1 or batch_size < 1:
            raise InvalidParameter("workers and batch_size must be >= 1")
        self.tolerance = tolerance
        self.seed = seed
        self.workers = workers
        self.batch_size = batch_size

    def _batch(self, suite: Suite, seed: np.random.SeedSequence, size: int) -> SuiteResult:
        result = SuiteResult(suite.name)
        suite.batch(np.random.default_rng(seed), size, self.tolerance, result)
        LOGGER.debug("Batch of %d for %s: %d failures", size, suite.name, result.failures)
        return result

    def run_suite(self, name: str, count: int | None = None) -> SuiteResult:
        """Run one suite with count samples (its default count when None)."""
        if name not in SUITES:
            raise InvalidParameter(f"Unknown suite '{name}'; choose from {sorted(SUITES)}")
        suite = SUITES[name]
        total = SUITE_COUNTS[name] if count is None else count
        if total < 1:
            raise InvalidParameter(f"Sample count must be >= 1, got {total}")
        sizes = [self.batch_size] * (total // self.batch_size)
        if total % self.batch_size:
            sizes.append(total % self.batch_size)
        root = np.random.SeedSequence(self.seed, spawn_key=(list(SUITES).index(name),))
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            futures = [
                pool.submit(self._batch, suite, child, size)
                for child, size in zip(root.spawn(len(sizes)), sizes)
            ]
            partials = [future.result() for future in futures]
        result = SuiteResult(name)
        for partial in partials:
            result.merge(partial)
        if suite.finish is not None:
            try:
                suite.finish(self.tolerance, result)
            except CharvarError as exception:
                LOGGER.error("Fixture check for %s failed: %s", name, exception)
                result.fail(str(exception))
        LOGGER.info(
            "Suite %s: %d samples, %d failures", name, result.samples, result.failures
        )
        return result

    def run(self, names: Iterable[str], count: int | None = None) -> list[SuiteResult]:
        """Run several suites in order."""
        return [self.run_suite(name, count) for name in names]
