"""BoostHD: boosted hyperdimensional computing with reliability analyses."""

from .boost import (
    BoostConfig,
    BoostHDModel,
    fit_boost,
    fit_online,
    partition_dimensions,
    predict_boost,
    predict_boost_batch,
)
from .data import Dataset, RawRecording, macro_accuracy, synth_blobs
from .encoder import EncoderParams, encode, encode_batch, init_encoder
from .hdvec import bind, bundle, cosine_similarity, permute
from .model_io import load_model, save_model
from .onlinehd import OnlineHDModel, TrainConfig, fit, predict
from .perturb import PerturbConfig, bitflip_model, mad
from .spectral import (
    MPParams,
    empirical_spectrum,
    limit_terms,
    mp_bounds,
    mp_mean_approx,
    mp_moments_numeric,
    mp_variance_approx,
    span_utilization,
)

__version__ = "0.1.0"

__all__ = [
    "BoostConfig",
    "BoostHDModel",
    "Dataset",
    "EncoderParams",
    "MPParams",
    "OnlineHDModel",
    "PerturbConfig",
    "RawRecording",
    "TrainConfig",
    "bind",
    "bitflip_model",
    "bundle",
    "cosine_similarity",
    "empirical_spectrum",
    "encode",
    "encode_batch",
    "fit",
    "fit_boost",
    "fit_online",
    "init_encoder",
    "limit_terms",
    "load_model",
    "macro_accuracy",
    "mad",
    "mp_bounds",
    "mp_mean_approx",
    "mp_moments_numeric",
    "mp_variance_approx",
    "partition_dimensions",
    "permute",
    "predict",
    "predict_boost",
    "predict_boost_batch",
    "save_model",
    "span_utilization",
    "synth_blobs",
]
