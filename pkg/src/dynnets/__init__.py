"""Covering/packing machinery for dynamical quantum processes.

Finite metric nets, unitary-group and projector coverings, certified
Trotter evolution, and log-domain bound evaluators showing how the
resources needed to reach generic targets scale with system size.
"""

from .circuits import (
    Circuit,
    Gate,
    QuditRegister,
    circuit_covering_log_bound,
    circuit_from_json,
    circuit_to_json,
    circuit_unitary,
    conjugate_observable,
    discretize_circuit,
    topology_count_log,
)
from .grassmann import (
    Projector,
    ProjectorCoveringBounds,
    Subspace,
    empirical_grassmann_packing,
    kato_unitary,
    principal_angles,
    product_covering_check,
    projector_covering_bounds,
    projector_distance,
    projector_from_subspace,
    quotient_covering_check,
    quotient_distance_bounds,
    random_subspace,
)
from .linalg import (
    SkewHermitian,
    Spectrum,
    UnitaryMatrix,
    check_exp_lipschitz,
    haar_unitary,
    matrix_exp,
    operator_norm,
    principal_log,
    random_skew_in_ball,
    skew_basis,
    spectral_width,
)
from .logdomain import LogBound
from .metric import (
    FiniteMetricSpace,
    NetResult,
    ball_covering_bounds,
    brute_force_covering_number,
    brute_force_packing_number,
    greedy_maximal_packing,
    product_space,
    verify_covering,
    verify_packing,
)
from .reports import (
    CrossoverReport,
    CrossoverRow,
    SpectrumProfile,
    coarse_grain_hermitian,
    coarse_grain_spectrum,
    crossover_analysis,
    degeneracy_profile_extensive_z,
    emit_report,
)
from .trotter import (
    CertificateViolation,
    ConstantEnvelope,
    CosineEnvelope,
    HamiltonianTerm,
    PiecewiseLinearEnvelope,
    TimeDependentHamiltonian,
    TrotterCertificate,
    certify_trotter,
    commutation_degree,
    envelope_from_json,
    evolution_covering_log_bound,
    exact_propagator,
    hamiltonian_from_json,
    hamiltonian_to_json,
    term_norm_sup,
    trotter_propagator,
)
from .unitary_nets import (
    ImplicitGridNet,
    UnitaryCoveringBounds,
    UnitaryNet,
    build_unitary_net,
    circle_covering_number,
    empirical_covering_check,
    empirical_packing_lower_bound,
    load_net,
    save_net,
    unitary_covering_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "Gate",
    "QuditRegister",
    "circuit_covering_log_bound",
    "circuit_from_json",
    "circuit_to_json",
    "circuit_unitary",
    "conjugate_observable",
    "discretize_circuit",
    "topology_count_log",
    "Projector",
    "ProjectorCoveringBounds",
    "Subspace",
    "empirical_grassmann_packing",
    "kato_unitary",
    "principal_angles",
    "product_covering_check",
    "projector_covering_bounds",
    "projector_distance",
    "projector_from_subspace",
    "quotient_covering_check",
    "quotient_distance_bounds",
    "random_subspace",
    "SkewHermitian",
    "Spectrum",
    "UnitaryMatrix",
    "check_exp_lipschitz",
    "haar_unitary",
    "matrix_exp",
    "operator_norm",
    "principal_log",
    "random_skew_in_ball",
    "skew_basis",
    "spectral_width",
    "LogBound",
    "FiniteMetricSpace",
    "NetResult",
    "ball_covering_bounds",
    "brute_force_covering_number",
    "brute_force_packing_number",
    "greedy_maximal_packing",
    "product_space",
    "verify_covering",
    "verify_packing",
    "CrossoverReport",
    "CrossoverRow",
    "SpectrumProfile",
    "coarse_grain_hermitian",
    "coarse_grain_spectrum",
    "crossover_analysis",
    "degeneracy_profile_extensive_z",
    "emit_report",
    "CertificateViolation",
    "ConstantEnvelope",
    "CosineEnvelope",
    "HamiltonianTerm",
    "PiecewiseLinearEnvelope",
    "TimeDependentHamiltonian",
    "TrotterCertificate",
    "certify_trotter",
    "commutation_degree",
    "envelope_from_json",
    "evolution_covering_log_bound",
    "exact_propagator",
    "hamiltonian_from_json",
    "hamiltonian_to_json",
    "term_norm_sup",
    "trotter_propagator",
    "ImplicitGridNet",
    "UnitaryCoveringBounds",
    "UnitaryNet",
    "build_unitary_net",
    "circle_covering_number",
    "empirical_covering_check",
    "empirical_packing_lower_bound",
    "load_net",
    "save_net",
    "unitary_covering_bounds",
    "__version__",
]
