"""Statistical robust CRT reconstruction of multiple numbers from noisy,
unordered residue sets."""

from .clustering_map import (
    ShiftedResidues,
    cluster_score,
    map_clustering,
    reconstruct_algo1,
    shift_residues,
)
from .iterative import (
    IterationState,
    iterate,
    match_step,
    reconstruct_algo2,
    update_step,
)
from .modular import (
    Clustering,
    ModulusSet,
    ObservationMatrix,
    ValidationError,
    crt_reconstruct,
    project_common,
    wrapped_distance,
)
from .noise import (
    GroundTruth,
    InstanceSpec,
    assumption1_holds,
    default_modulus_set,
    sample_instance,
    separation_bound,
    separation_probability,
)
from .single import (
    ClusterResidues,
    Reconstruction,
    estimate_common_residue,
    reconstruct_single,
)
from .voting import (
    DecodeResult,
    DegenerateVoteError,
    VotingConfig,
    decode_with_errors,
    regroup_moduli,
    vote_reconstruct,
)

__all__ = [
    "Clustering",
    "ClusterResidues",
    "DecodeResult",
    "DegenerateVoteError",
    "GroundTruth",
    "InstanceSpec",
    "IterationState",
    "ModulusSet",
    "ObservationMatrix",
    "Reconstruction",
    "ShiftedResidues",
    "ValidationError",
    "VotingConfig",
    "assumption1_holds",
    "cluster_score",
    "crt_reconstruct",
    "decode_with_errors",
    "estimate_common_residue",
    "iterate",
    "map_clustering",
    "match_step",
    "default_modulus_set",
    "project_common",
    "reconstruct_algo1",
    "reconstruct_algo2",
    "reconstruct_single",
    "regroup_moduli",
    "sample_instance",
    "separation_bound",
    "separation_probability",
    "shift_residues",
    "update_step",
    "vote_reconstruct",
    "wrapped_distance",
]

__version__ = "0.1.0"
