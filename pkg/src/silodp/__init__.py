"""Record-level differentially private federated convex optimization.

Simulates cross-silo federated training where every message a silo sends is
privatized with the Gaussian mechanism, using localized regularized-ERM
solvers (accelerated minibatch SGD, minibatch subgradient, and smoothing
variants) with exact communication and gradient accounting.
"""

from silodp.core import (
    CompositionError,
    ContractViolation,
    Domain,
    InfeasibleDomain,
    IntersectionDomain,
    PrivacyEntry,
    ProjectionError,
    RunLedger,
    project,
    project_intersection,
    record_round,
)
from silodp.losses import LossOracle, make_loss
from silodp.privacy import (
    PrivacyBudget,
    NoisePlan,
    calibrate_sigma2,
    gaussian_noise,
    ledger_compose,
    poisson_batch,
)
from silodp.problems import (
    FederatedProblem,
    SiloDataset,
    gen_binary_heterolabel,
    gen_heterogeneous_quadratic,
    gen_partitioned_quadratic,
    load_problem_csv,
    population_risk,
    test_error,
)
from silodp.smoothing import (
    ConvSmoother,
    MoreauOracle,
    choose_beta_nesterov,
    choose_s_conv,
    conv_smooth_grad_estimate,
    sample_uniform_ball,
)
from silodp.fedsim import Federation, FederationConfig, one_pass_baseline, sample_available
from silodp.subsolvers import (
    AccelState,
    SolverConfig,
    StageSchedule,
    acsa_conv_round,
    acsa_round,
    mb_subgradient_solve,
    multistage_solve,
    plan_stages,
)
from silodp.schedules import (
    PhaseSchedule,
    ScheduleError,
    build_schedule_conv,
    build_schedule_smooth,
    build_schedule_subgrad,
)
from silodp.drivers import (
    reference_comm_lower_bound,
    run_localized,
    run_nesterov_smoothed,
)

__version__ = "0.1.0"
