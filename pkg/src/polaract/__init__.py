"""Polar-code construction over amplitude/phase channel models.

Modules:

* :mod:`polaract.channels`  channel models, capacities, fidelity
* :mod:`polaract.kernel`    polar transform, generator matrix, exponent
* :mod:`polaract.evolution` reliability evolution and index selection
* :mod:`polaract.privacy`   codeword-set partitions and private rates
* :mod:`polaract.decoder`   successive-cancellation decoding, Monte Carlo
* :mod:`polaract.sweeps`    experiment sweeps behind the ``polaract`` CLI
"""

from ._kernels import BACKEND
from .channels import (
    BEC,
    BSC,
    CapacityBounds,
    CQBinary,
    DensityMatrix2,
    DomainError,
    Erasure,
    PauliSub,
    channel_capacity,
    channel_reliability_seed,
    csym_bounds,
    erasure_capacities,
    fidelity,
    holevo_symmetric,
    pauli_apply,
    pauli_subchannel_fidelities,
    pauli_to_sub,
)
from .decoder import (
    ChannelObservation,
    PolarCode,
    SimReport,
    lr_combine_bad,
    lr_combine_good,
    sc_decode,
    simulate_bler,
)
from .evolution import (
    IndexSelection,
    ReliabilityProfile,
    SynthesizedChannelTable,
    chain_rule_check,
    evolve,
    select_indices,
    synthesize_exact,
)
from .kernel import (
    bit_reversal,
    generator_matrix,
    partial_distances,
    polar_encode,
    polarization_exponent,
)
from .privacy import (
    IndexPartition,
    PolaractivationStatus,
    WiretapSets,
    degradedness,
    inclusion_exclusion_rate,
    partition,
    polaractivation_check,
    private_rate,
    wiretap_sets,
)
from .sweeps import SweepConfig, run_sweep

__version__ = "0.1.0"
