"""Wavelet-packet speech denoising.

Overlap-add framing, wavelet-packet decomposition/reconstruction,
shrinkage and band thresholding driven by coefficient-histogram
statistics (KL divergence, entropy), plus WAV I/O, synthetic signals
and SNR metrics.
"""

from ._version import __version__
from .framing import ColaError, FrameSet, make_frames, overlap_add, window_values
from .pipeline import (
    EnhanceConfig,
    NoiseProfile,
    SubbandNoise,
    classify_vuv,
    enhance,
    estimate_noise_profile,
)
from .report import Report, report_schema, validate_report_dict
from .signal_io import (
    SignalBuffer,
    WavFormatError,
    WavTruncatedError,
    mix_at_snr,
    read_wav,
    sine_wave,
    snr_db,
    white_noise,
    write_wav,
)
from .stats import (
    Histogram,
    ProbabilityVector,
    bin_count,
    build_histogram,
    entropy,
    kl_divergence,
    ratio_profile,
    shared_edges,
    symmetric_divergence,
    to_probability,
)
from .thresholding import (
    ThresholdSpec,
    band_hard_threshold,
    estimate_sigma,
    hard_threshold,
    select_band,
    semisoft_threshold,
    soft_threshold,
    universal_threshold,
)
from .wavelet import (
    CoefficientTree,
    FilterBank,
    analysis_step,
    filter_bank,
    synthesis_step,
    wp_decompose,
    wp_reconstruct,
)

__all__ = [
    "__version__",
    "ColaError",
    "FrameSet",
    "make_frames",
    "overlap_add",
    "window_values",
    "EnhanceConfig",
    "NoiseProfile",
    "SubbandNoise",
    "classify_vuv",
    "enhance",
    "estimate_noise_profile",
    "Report",
    "report_schema",
    "validate_report_dict",
    "SignalBuffer",
    "WavFormatError",
    "WavTruncatedError",
    "mix_at_snr",
    "read_wav",
    "sine_wave",
    "snr_db",
    "white_noise",
    "write_wav",
    "Histogram",
    "ProbabilityVector",
    "bin_count",
    "build_histogram",
    "entropy",
    "kl_divergence",
    "ratio_profile",
    "shared_edges",
    "symmetric_divergence",
    "to_probability",
    "ThresholdSpec",
    "band_hard_threshold",
    "estimate_sigma",
    "hard_threshold",
    "select_band",
    "semisoft_threshold",
    "soft_threshold",
    "universal_threshold",
    "CoefficientTree",
    "FilterBank",
    "analysis_step",
    "filter_bank",
    "synthesis_step",
    "wp_decompose",
    "wp_reconstruct",
]
