"""Command-line surface: denoise, analyze, synth, experiment.

Exit statuses: 0 success, 1 usage error, 2 I/O error, 3 processing
error; every failure prints a one-line diagnostic on stderr. Successful
runs stay quiet unless --verbose is given (the experiment subcommand's
SNR lines are its output, not diagnostics). The environment variable
WAVEDENOISE_SEED overrides --seed everywhere.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict

import numpy as np

from ._version import __version__
from .experiments import PRESETS, run_preset
from .framing import ColaError
from .pipeline import METHODS, NOISE_MODES, EnhanceConfig, enhance
from .report import HistogramPair, Report
from .signal_io import (
    WavFormatError,
    mix_at_snr,
    read_wav,
    sine_wave,
    white_noise,
    write_wav,
)
from .stats import (
    build_histogram,
    ratio_profile,
    shared_edges,
    symmetric_divergence,
    to_probability,
)
from .wavelet import filter_bank, wp_decompose
from .framing import make_frames

SEED_ENV_VAR = "WAVEDENOISE_SEED"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PROCESSING = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_config_flags(parser) -> None:
    group = parser.add_argument_group("pipeline configuration")
    group.add_argument("--frame-len", type=int, default=512)
    group.add_argument("--hop", type=int, default=256)
    group.add_argument("--window", choices=("rectangular", "hann"), default="hann")
    group.add_argument("--wavelet", choices=("haar", "db4"), default="db4")
    group.add_argument("--depth", type=int, default=4)
    group.add_argument(
        "--noise-estimation", choices=NOISE_MODES, default="leading_silence"
    )
    group.add_argument("--silence-ms", type=float, default=100.0)
    group.add_argument("--band-tolerance", type=float, default=1e-3)
    group.add_argument("--epsilon", type=float, default=1e-12)
    group.add_argument(
        "--vuv", action=argparse.BooleanOptionalAction, default=True,
        help="entropy-based voiced/unvoiced threshold adaptation",
    )
    group.add_argument("--entropy-threshold", type=float, default=None)
    group.add_argument("--unvoiced-scale", type=float, default=0.5)


def _config_from_args(args, method: str | None = None, seed=None) -> EnhanceConfig:
    return EnhanceConfig(
        frame_len=args.frame_len,
        hop=args.hop,
        window=args.window,
        wavelet=args.wavelet,
        depth=args.depth,
        method=method if method is not None else "universal-hard",
        vuv_enabled=args.vuv,
        entropy_threshold=args.entropy_threshold,
        unvoiced_scale=args.unvoiced_scale,
        noise_estimation=args.noise_estimation,
        silence_ms=args.silence_ms,
        band_tolerance=args.band_tolerance,
        epsilon=args.epsilon,
        seed=seed,
    )


def _resolve_seed(args) -> int | None:
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return getattr(args, "seed", None)


def _cmd_denoise(args) -> int:
    seed = _resolve_seed(args)
    config = _config_from_args(args, method=args.method, seed=seed)
    noisy = read_wav(args.infile)
    reference = read_wav(args.ref) if args.ref else None
    enhanced, report = enhance(noisy, config, reference=reference)
    write_wav(args.out, enhanced)
    if args.report:
        report.write(args.report)
    if args.verbose:
        print(f"wrote {args.out}", file=sys.stderr)
        if args.report:
            print(f"wrote {args.report}", file=sys.stderr)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    seed = _resolve_seed(args)
    config = _config_from_args(args, seed=seed)
    config.validate()
    noisy = read_wav(args.infile)
    noise = read_wav(args.noise)
    if noisy.sample_rate_hz != noise.sample_rate_hz:
        raise ValueError("noisy and noise files must share a sample rate")

    fb = filter_bank(config.wavelet)
    n_sub = config.n_subbands

    def pooled_leaves(signal):
        per_leaf = [[] for _ in range(n_sub)]
        frames = make_frames(signal, config.frame_len, config.hop, config.window)
        for frame in frames.frames:
            tree = wp_decompose(frame, fb, config.depth)
            for i, leaf in enumerate(tree.leaves):
                per_leaf[i].append(leaf)
        return [np.concatenate(c) for c in per_leaf]

    noisy_leaves = pooled_leaves(noisy)
    noise_leaves = pooled_leaves(noise)

    divergences = []
    histograms = []
    for i in range(n_sub):
        edges = shared_edges(noisy_leaves[i], noise_leaves[i])
        h_ns = build_histogram(noisy_leaves[i], edges=edges)
        h_n = build_histogram(noise_leaves[i], edges=edges)
        div = symmetric_divergence(
            to_probability(h_ns, config.epsilon), to_probability(h_n, config.epsilon)
        )
        divergences.append(div)
        histograms.append(
            HistogramPair(
                subband=i,
                divergence=div,
                noisy_edges=[float(e) for e in h_ns.bin_edges],
                noisy_counts=[int(c) for c in h_ns.counts],
                noise_edges=[float(e) for e in h_n.bin_edges],
                noise_counts=[int(c) for c in h_n.counts],
            )
        )

    pooled_ns = np.concatenate(noisy_leaves)
    pooled_n = np.concatenate(noise_leaves)
    edges = shared_edges(pooled_ns, pooled_n)
    ratios = ratio_profile(
        to_probability(build_histogram(pooled_ns, edges=edges), config.epsilon),
        to_probability(build_histogram(pooled_n, edges=edges), config.epsilon),
    )

    report = Report(
        tool_version=__version__,
        mode="analyze",
        config=asdict(config),
        seed=seed,
        frames=[],
        subband_divergence=divergences,
        near_zero_ratios=ratios,
        histograms=histograms,
    )
    report.write(args.report)
    if args.verbose:
        print(f"wrote {args.report}", file=sys.stderr)
    return EXIT_OK


def _cmd_synth(args) -> int:
    seed = _resolve_seed(args)
    if seed is None:
        seed = 0
    if args.kind == "sine":
        signal = sine_wave(args.freq, args.amplitude, args.duration, args.rate)
    elif args.kind == "noise":
        signal = white_noise(args.std, args.duration, args.rate, seed)
    else:  # mix
        clean = sine_wave(args.freq, args.amplitude, args.duration, args.rate)
        noise = white_noise(args.std, args.duration, args.rate, seed)
        signal = mix_at_snr(clean, noise, args.snr_db)
    write_wav(args.out, signal)
    if args.verbose:
        print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    seed = _resolve_seed(args)
    if seed is None:
        seed = 0
    config = _config_from_args(args, method=args.method, seed=seed)
    clean, noisy, enhanced, report = run_preset(
        args.preset, method=args.method, seed=seed, config=config
    )
    print(f"input_snr_db {report.input_snr_db:.6f}")
    print(f"output_snr_db {report.output_snr_db:.6f}")
    if args.out:
        write_wav(args.out, enhanced)
    if args.report:
        report.write(args.report)
    if args.verbose and args.report:
        print(f"wrote {args.report}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wpdenoise", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="denoise a WAV file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ref", default=None, help="clean reference for SNR reporting")
    p.add_argument("--method", choices=METHODS, default="universal-hard")
    p.add_argument("--report", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_denoise)

    p = sub.add_parser("analyze", help="histogram/divergence analysis, no audio out")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--noise", required=True, help="estimated-noise WAV")
    p.add_argument("--report", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("synth", help="generate deterministic test material")
    p.add_argument("--kind", choices=("sine", "noise", "mix"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--freq", type=float, default=440.0)
    p.add_argument("--amplitude", type=float, default=0.5)
    p.add_argument("--std", type=float, default=1.0)
    p.add_argument("--snr-db", type=float, default=0.0, help="mix target SNR")
    p.add_argument("--duration", type=float, default=5.0)
    p.add_argument("--rate", type=int, default=16000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("experiment", help="run a reproducible preset end to end")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("--method", choices=METHODS, default="universal-hard")
    p.add_argument("--out", default=None)
    p.add_argument("--report", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_experiment)

    return parser


def run(argv=None) -> int:
    """Parse arguments and dispatch; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (WavFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ColaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROCESSING


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
