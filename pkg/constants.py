VERSION = "0.1.0"

# Floating-point slack only; every identity checked here is exact algebra.
NORM_TOLERANCE = 1e-12
MATRIX_TOLERANCE = 1e-12
EIGEN_TOLERANCE = 1e-10

JACOBI_OFF_DIAGONAL_LIMIT = 1e-13
JACOBI_MAX_SWEEPS = 50

MAX_TOTAL_DIMENSION = 16

VIOLATION_TOLERANCE = 1e-9
CONSTRAINT_TOLERANCE = 1e-9
ENSEMBLE_TOLERANCE = 1e-9

INPUT_NORM_SLACK = 1e-6  # accepted drift of user-typed amplitudes
REFINE_BASIN = 0.1
SWEEP_MAX_POINTS = 10_000_000
SWEEP_BLOCK_POINTS = 20_000

TOLERANCE_ENV_VAR = "NOGO_TOL"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATE = 3
