"""Measurement-free quantum feedback control with a cloner in the loop."""

from ._backend import BACKEND
from .channels import (
    AffineBlochMap,
    KrausChannel,
    amplitude_damping,
    apply_channel,
    buzek_hillery_clone,
    channel_to_affine,
    cloner_affine,
)
from .dynamics import EmissionParams, gamma_from_time, lindblad_evolve, to_interaction_picture
from .feedback import (
    ControlAnalysis,
    LoopConfig,
    LoopSolution,
    controllability,
    gate_mix_affine,
    loop_map,
    observability,
    solve_steady_state,
)
from .qmath import (
    bloch_to_density,
    conjugate_by,
    controlled_u,
    density_to_bloch,
    partial_trace_first,
    tensor_product,
)

__version__ = "0.1.0"
