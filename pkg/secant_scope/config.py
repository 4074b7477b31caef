"""
Application Configuration
Centralized tolerances, budgets and caps for the numerical layers
"""


class Config:
    """Base configuration class"""

    # Binary forms
    SUBRESULTANT_ZERO_THRESHOLD = 1e-8
    SUBRESULTANT_AMBIGUITY_BAND = 1e2  # values in [tau, band * tau) are ambiguous
    POINT_DEDUP_TOLERANCE = 1e-8
    ROOT_POLISH_RESIDUAL = 1e-12
    ROOT_CLUSTER_RADIUS = 1e-5
    ROOT_MAX_ITERATIONS = 500
    ROOT_RETRY_BUDGET = 3
    COMMON_ROOT_TOLERANCE = 1e-6

    # Solver kernel
    NEWTON_RESIDUAL = 1e-10
    NEWTON_MAX_ITERATIONS = 30
    SOLUTION_DEDUP_TOLERANCE = 1e-8
    TRACKER_INITIAL_STEP = 0.05
    TRACKER_MIN_STEP = 1e-12
    TRACKER_MAX_STEP = 0.1
    TRACKER_MAX_STEPS = 4000
    TRACKER_CORRECTOR_ITERATIONS = 3
    TRACKER_CORRECTOR_TOLERANCE = 1e-9
    DIVERGENCE_NORM = 1e8
    PATH_FAILURE_CAP = 0.1
    GAMMA_RETRIES = 2
    NON_FINITE_RATIO = 0.2
    SINGULAR_CONDITION = 1e-9
    MULTISTART_STARTS = 10000
    MULTISTART_MAX_ITERATIONS = 80
    MULTISTART_BATCH = 2000

    # Monodromy completion
    MONODROMY_MAX_LOOPS = 60
    MONODROMY_STALL_LOOPS = 4

    # Numerical rank
    RANK_CUTOFF = 1e-7
    RANK_GAP = 1e3

    # Curve checks and constructions
    RESIDUAL_TOLERANCE = 1e-8
    CONSTRUCTION_RETRY_BUDGET = 20
    SMOOTHNESS_DEGREE_CAP = 9
    SMOOTHNESS_SAMPLE_POINTS = 10000
    IMMERSION_SAMPLE_POINTS = 16

    # Theorem layer
    HYPOTHESIS_MODES = ('gonality', 'clifford')


class TestingConfig(Config):
    """Testing configuration with smaller runtime budgets"""

    MULTISTART_STARTS = 2000
    SMOOTHNESS_SAMPLE_POINTS = 1000
    CONSTRUCTION_RETRY_BUDGET = 10


# Configuration mapping
config = {
    'default': Config,
    'testing': TestingConfig,
}
