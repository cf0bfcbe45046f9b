"""Noisy variational quantum time evolution: exact simulation and error bounds."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    BoundValidityError,
    DeltaTooLargeError,
    build_bound_report,
    elementwise_caps,
    higham_bound,
    loose_theorem1_bound,
    pascal_coefficients,
    theorem1_bound,
    theorem1_pmax,
    theorem2_relative_error,
)
from .circuits import (
    Ansatz,
    GateSpec,
    derivative_decomposition,
    five_parameter_ansatz,
    gate_unitary,
    load_ansatz,
    nine_parameter_ansatz,
    parse_ansatz,
    random_ansatz,
    run_circuit,
)
from .evolution import (
    EvolutionAborted,
    EvolutionConfig,
    EvolutionTrace,
    exact_imaginary_evolution,
    run,
    step,
    uhlmann_fidelity,
)
from .linalg import (
    condition_number,
    frobenius_norm,
    hermitian_exp,
    matrix_norm,
    solve_regularized,
    spectral_norm,
)
from .mky import (
    InternalConsistencyError,
    MYSystem,
    chain_with_insertion,
    compute_M,
    compute_system,
    compute_V,
    compute_Y,
    derivative_chains,
    gram_oracle_M,
)
from .states import (
    DensityOperator,
    Hamiltonian,
    NoiseChannel,
    OperatorState,
    PauliString,
    apply_channel,
    check_contractivity,
    ground_energy,
    h2_hamiltonian,
)
