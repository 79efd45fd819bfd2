"""Coherent information, Holevo quantities and privacy lower bounds for
finite-dimensional quantum channels."""

from .channels import (
    QuantumChannel,
    amplitude_damping,
    apply,
    choi_matrix,
    complementary_apply,
    dephasing,
    depolarizing,
    erasure,
    identity,
    joint_output,
    make_channel,
    random_channel,
    remix_kraus,
    split_environment,
    stinespring,
)
from .optimize import (
    OptimizerConfig,
    maximize_coherent_information,
    maximize_privacy_bound,
    sweep,
)
from .quantities import (
    AnalysisReport,
    PrivacyEstimate,
    accessible_information,
    analyze,
    coherent_information,
    entropy_exchange,
    holevo_environment,
    holevo_eve_subsystem,
    holevo_output,
    privacy,
    privacy_bound,
    verify_identity,
)
from .states import DensityOperator, Ensemble, Povm, PureState, average_state, purify

__version__ = "0.1.0"
