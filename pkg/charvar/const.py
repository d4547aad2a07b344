"""Constants for charvar."""

from logging import Logger, getLogger

LOGGER: Logger = getLogger(__package__)

DOMAIN = "charvar"

# Config keys
CONF_TOLERANCE = "tolerance"
CONF_SEED = "seed"
CONF_COUNT = "count"
CONF_WORKERS = "workers"
CONF_FORMAT = "format"
CONF_LOGGER = "logger"
CONF_DEFAULT = "default"
CONF_LOGS = "logs"

# Environment override for the default tolerance
ENV_TOLERANCE = "CHARVAR_TOL"

DEFAULT_TOLERANCE = 1e-9
DEFAULT_SEED = 0
DEFAULT_WORKERS = 4
DEFAULT_BATCH_SIZE = 50

FORMAT_JSON = "json"
FORMAT_TEXT = "text"
DEFAULT_FORMAT = FORMAT_JSON

FIELD_COMPACT = "compact"
FIELD_COMPLEX = "complex"

STATUS_KNOWN = "known"
STATUS_UNKNOWN = "unknown"

# Eigenvalue clustering threshold on angles (radians)
EIGEN_CLUSTER_TOL = 1e-7

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_HYPOTHESIS_NOT_MET = 2
EXIT_CHECK_FAILED = 3

# Monte-Carlo suites and their default sample counts
SUITE_OBSTRUCTION = "obstruction"
SUITE_LIFTING = "lifting"
SUITE_DECK = "deck"
SUITE_CANONICAL_FORM = "canonical_form"
SUITE_TRACE_INVARIANT = "trace_invariant"
SUITE_COUNTS = {
    SUITE_OBSTRUCTION: 1000,
    SUITE_LIFTING: 100,
    SUITE_DECK: 100,
    SUITE_CANONICAL_FORM: 500,
    SUITE_TRACE_INVARIANT: 1000,
}

OBSTRUCTION_CONJUGATIONS = 100
OBSTRUCTION_BRANCHES = 1000
LIFT_RELATOR_TOL = 1e-10
ROUND_TRIP_TOL = 1e-12
SPECTRUM_TOL = 1e-8
DECK_RANGE = 3
KAPPA_SEPARATION = 1e-3
KAPPA_SEPARATED_FRACTION = 0.99
