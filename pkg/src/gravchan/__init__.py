"""gravchan: gravimeter phase readout through an entangled-atom channel.

A probe atom picks up the gravitational phase k*g*T^2 in a pi/2 - pi - pi/2
interferometer; sharing an internal-state entangled channel with remote
atoms lets the phase be read out far from the instrument, at half the fringe
amplitude but with suppressed phase noise.  The package provides the state
engine, the interferometer maps, channel preparation, the transfer protocol,
noise analysis, channel optimization, a REST service, and a batch CLI.
"""

__version__ = "1.0.0"

from .channel import (
    CavityState,
    ChannelKind,
    ChannelSpec,
    admit_atom,
    bell_preparation,
    cavity_with_atom,
    jc_exchange,
    make_channel,
    prepare_bell,
    release_cavity,
)
from .errors import (
    BasisMismatchError,
    GravchanError,
    IllConditionedError,
    InternalInvariantError,
    InvalidSpecError,
    MultimodalError,
    PhaseOutOfRangeError,
    ResidualPhotonError,
    UncoveredBasisVectorError,
    ZeroNormError,
)
from .interferometer import (
    CompositeCoefficients,
    GravityModel,
    InterferometerParams,
    LaserPhases,
    PulseKind,
    PulseTiming,
    apply_composite,
    composite_coefficients,
    ground_probability,
    pulse,
    run_pulse_sequence,
    total_phase,
)
from .noise import (
    NoiseParams,
    NoiseReport,
    mc_phase_noise,
    mc_shot_noise,
    phase_noise_closed_form,
    shot_noise_closed_form,
    snr_report,
)
from .optimize import (
    OptimizationResult,
    fringe_averaged_entropy,
    optimize_entropy,
    outcome_entropy,
    png_ratio,
    png_ratio_extremum,
)
from .protocol import (
    TransferOutcome,
    direct_measurement,
    estimate_phase,
    fringe_scan,
    run_transfer,
)
from .states import (
    BasisOperator,
    BasisVector,
    Ensemble,
    PureState,
    Spin,
    apply,
    check_unitary,
    fidelity,
    identity_operator,
    ket,
    measure_spin,
    normalize,
    project,
    single_atom_operator,
)
