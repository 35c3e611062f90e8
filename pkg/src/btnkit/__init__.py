"""Boolean threshold network encoders and autoencoders, with exact verification."""

from .autoencoders import build_auto3, build_auto5_log, build_auto5_sqrt, build_auto7, build_step_auto
from .data import Dataset, random_dataset, read_dataset, write_dataset
from .encoders import (
    build_binary_index_encoder,
    build_gmap_layer,
    build_log_encoder_4layer,
    build_sqrt_encoder,
    build_step_encoder,
)
from .errors import BTNError
from .hardness import build_hard_encoder, certify_no_2layer_decoder, gen_hard_set
from .keys import SeparatingKey, find_separating_vector, make_key
from .network import Layer, LayeredNetwork, ThresholdGate, dumps, loads, network_stats
from .probabilistic import (
    build_lookup_codec,
    build_parity_encoder,
    build_random_sign_encoder,
    central_binomial_check,
    parity_to_threshold,
)
from .separability import check_linearly_separable
from .verify import BooleanNetwork, exhaustive_equiv, is_perfect_autoencoder, is_perfect_encoder

__version__ = "0.1.0"

__all__ = [
    "BooleanNetwork",
    "BTNError",
    "build_auto3",
    "build_auto5_log",
    "build_auto5_sqrt",
    "build_auto7",
    "build_binary_index_encoder",
    "build_gmap_layer",
    "build_hard_encoder",
    "build_log_encoder_4layer",
    "build_lookup_codec",
    "build_parity_encoder",
    "build_random_sign_encoder",
    "build_sqrt_encoder",
    "build_step_auto",
    "build_step_encoder",
    "central_binomial_check",
    "certify_no_2layer_decoder",
    "check_linearly_separable",
    "Dataset",
    "dumps",
    "exhaustive_equiv",
    "find_separating_vector",
    "gen_hard_set",
    "is_perfect_autoencoder",
    "is_perfect_encoder",
    "Layer",
    "LayeredNetwork",
    "loads",
    "make_key",
    "network_stats",
    "parity_to_threshold",
    "random_dataset",
    "read_dataset",
    "SeparatingKey",
    "ThresholdGate",
    "write_dataset",
]
