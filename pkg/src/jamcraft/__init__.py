"""Jamming covariance design for MIMO Gaussian links.

Closed-form spectral solvers, a convergent iterative solver, a closed-form
suboptimal fallback, four multi-target extensions, and a reproducible
Monte Carlo sweep harness.  Rates are in nats throughout.
"""

from .errors import (
    ConfigError,
    DegenerateChannelError,
    DomainError,
    FeasibilityError,
    InvalidInputError,
)
from .harness import (
    ExperimentConfig,
    SweepResult,
    parse_config,
    random_channel,
    random_scenario,
    run_example1,
    run_example2,
    run_example3,
    run_experiment,
    substream,
)
from .linalg import (
    Eigensystem,
    evd,
    hermitian_part,
    is_psd,
    log_det,
    psd_trace_projection,
    svd,
)
from .multi_target import (
    BcScenario,
    IcScenario,
    MacScenario,
    TdmScenario,
    TdmSolution,
    bc_rate,
    bc_solve,
    ic_rate,
    ic_solve,
    mac_reduce,
    tdm_rate,
    tdm_solve_grid,
    tdm_solve_joint,
)
from .scenario import (
    EffectiveDecomposition,
    JammerSolution,
    JammingScenario,
    SolveDiagnostics,
    assemble_qz,
    effective_quantities,
    rate_single,
    reduced_rate,
    waterfilling,
)
from .spca import SpcaOptions, SpcaTrace, kkt_residual, spca_iterate, \
    subproblem_solve
from .spectral import (
    ClosedFormOutcome,
    closed_form_pd,
    closed_form_psd,
    identity_channel_solution,
    lemma1_minimize,
    solve_single,
)
from .suboptimal import EpsilonLambda, epsilon_lambda_search, suboptimal_pd, \
    suboptimal_psd
from .validate import validate_suite

__version__ = "0.1.0"
