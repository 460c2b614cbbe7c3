"""Hybrid qutrit/qudit channel families, their information quantities,
SDP capacity bounds, and a spin-alignment search harness."""

__version__ = "0.1.0"

from .channels import (  # noqa: F401
    ChannelPair,
    Ensemble,
    Isometry,
    apply,
    choi,
    complement_pair,
    kraus_ops,
    make_md,
    make_ns,
    make_o,
    make_v,
    make_w,
    parse_channel_spec,
    pbit_witness,
    restrict_input,
    tensor_pair,
)
from .entropic import (  # noqa: F401
    Spectrum,
    ci_gradient,
    coherent_information,
    ensemble_holevo,
    ensemble_private_value,
    majorizes,
    mutual_information_ea,
    renyi_entropy,
    vn_entropy,
)
from .optimize import (  # noqa: F401
    OptimConfig,
    OptimResult,
    SwarmConfig,
    density_ascent,
    golden_max,
    particle_swarm,
    sphere_min,
)
from .sdp import (  # noqa: F401
    LmiProgram,
    SdpNumericalError,
    SdpProblem,
    SdpSettings,
    SdpSolution,
    embed_complex,
    solve,
    verify_solution,
)
from .capacity import (  # noqa: F401
    CapacityReport,
    beta_bound,
    ea_capacity,
    full_report,
    gamma_bound,
    holevo_info,
    log_singularity_probe,
    private_info,
    private_upper_bound,
    q1,
    q1_multiletter,
    renyi_q1_reduced,
    subchannel_ordering,
    transposition_bound,
    verify_certificates,
)
from .spinalign import (  # noqa: F401
    AlignmentInstance,
    aligned_assignment,
    assemble_state,
    conjectured_value,
    n1_solution,
    renyi2_alignment_check,
    search_minimum,
    tripartite_lemma_check,
)
from .degrade import (  # noqa: F401
    DegradabilityReport,
    GramMatrix,
    dg_adg,
    pcubed_degradable,
    pcubed_gram,
)
