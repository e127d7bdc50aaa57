"""Superposition machines for orthogonal qubit states."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateBasis,
    DegenerateCoefficient,
    DegenerateOverlap,
    DegenerateTarget,
    DimensionMismatch,
    NotNormalized,
    NotOrthogonal,
    OrthosupError,
    ZeroVector,
)
from .qcore import (  # noqa: E402
    BlochAngles,
    BlochVector,
    Convention,
    QubitState,
    bloch_pair,
    bloch_to_state,
    orthogonal_complement,
)
from .machines import (  # noqa: E402
    GeneralMachineSpec,
    MachineCoeffs,
    MachineKind,
    build_pure_machine,
    duality_map,
    general_success_probability,
    orthogonal_qubit_probability,
    pure_success_probability,
    superpose_pure,
)
from .circuit import (  # noqa: E402
    build_circuit,
    run_circuit_enumerate,
    sample_circuit,
    table_one,
    verify_completeness,
)
from .analysis import (  # noqa: E402
    Branch,
    IntegrationSpec,
    Method,
    average_general_orthogonal,
    average_pure_machine,
    clone_delete_demo,
    nonorthogonal_residual,
    solve_kraus,
)
