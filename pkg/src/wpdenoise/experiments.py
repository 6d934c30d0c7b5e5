"""Reproducible synthetic experiments.

The "sine-0db" preset mixes a 440 Hz tone (silent for the first quarter
second so the default leading-silence noise estimation sees noise-only
material) with seeded white noise at 0 dB overall SNR, 16 kHz, 5 s.
"""

from __future__ import annotations

from dataclasses import replace

from .pipeline import EnhanceConfig, enhance
from .signal_io import SignalBuffer, mix_at_snr, sine_wave, white_noise

PRESETS = ("sine-0db",)

_RATE = 16000
_DURATION_S = 5.0
_LEAD_SILENCE_S = 0.25
_FREQ_HZ = 440.0
_AMPLITUDE = 0.5
_TARGET_SNR_DB = 0.0


def sine_0db_material(seed: int) -> tuple:
    """Build (clean, noisy) for the sine-0db preset."""
    tone = sine_wave(_FREQ_HZ, _AMPLITUDE, _DURATION_S, _RATE)
    samples = tone.samples.copy()
    samples[: int(_LEAD_SILENCE_S * _RATE)] = 0.0
    clean = SignalBuffer(samples, _RATE)
    noise = white_noise(1.0, _DURATION_S, _RATE, seed)
    noisy = mix_at_snr(clean, noise, _TARGET_SNR_DB)
    return clean, noisy


def run_preset(
    name: str,
    method: str = "universal-hard",
    seed: int = 0,
    config: EnhanceConfig | None = None,
) -> tuple:
    """Run a named preset; returns (clean, noisy, enhanced, report).

    The report's mode is "experiment" and carries input/output SNR
    against the clean signal.
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r} (expected one of {PRESETS})")
    clean, noisy = sine_0db_material(seed)
    if config is None:
        config = EnhanceConfig(method=method, seed=seed)
    enhanced, report = enhance(noisy, config, reference=clean)
    report = replace(report, mode="experiment")
    return clean, noisy, enhanced, report
