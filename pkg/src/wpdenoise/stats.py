"""Coefficient histograms, probability estimates, entropy and divergences.

Bin count follows the square-root rule B = max(1, floor(sqrt(N)/2)).
Divergences use natural logs; probability vectors carry a smoothing
floor so log-ratios stay finite even for empty bins. Distributions are
only comparable bin-by-bin, so cross-distribution operations insist on
shared bin edges; build histograms with an explicit `edges` argument
(out-of-range values are clamped into the end bins) to put two samples
on common support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Half-width used to un-degenerate a single-valued sample range.
_DEGENERATE_HALF_SPAN = 1e-9


def bin_count(n_samples: int) -> int:
    """max(1, floor(sqrt(n)/2)) via exact integer arithmetic."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    return max(1, math.isqrt(int(n_samples)) // 2)


@dataclass
class Histogram:
    """Binned counts over strictly increasing edges.

    Bins are right-open, except the last bin which also includes its
    right edge; counts always sum to the number of values binned.
    """

    bin_edges: np.ndarray  # length B + 1
    counts: np.ndarray  # length B, non-negative ints

    def __post_init__(self):
        self.bin_edges = np.asarray(self.bin_edges, dtype=np.float64)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.bin_edges) != len(self.counts) + 1:
            raise ValueError("need exactly len(counts) + 1 edges")
        if np.any(np.diff(self.bin_edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(np.sum(self.counts))

    @property
    def n_bins(self) -> int:
        return len(self.counts)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def build_histogram(values, edges=None) -> Histogram:
    """Histogram a sample, choosing bins by the square-root rule.

    Without `edges`, B = max(1, floor(sqrt(N)/2)) uniform bins span
    [min, max] (a degenerate span is widened by +-1e-9). With `edges`,
    the given support is reused and out-of-range values are clamped into
    the end bins, so two samples can share one support.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if len(x) == 0:
        raise ValueError("cannot histogram an empty sample")
    if edges is None:
        lo = float(np.min(x))
        hi = float(np.max(x))
        if lo == hi:
            lo -= _DEGENERATE_HALF_SPAN
            hi += _DEGENERATE_HALF_SPAN
        edges = np.linspace(lo, hi, bin_count(len(x)) + 1)
    else:
        edges = np.asarray(edges, dtype=np.float64)
        if len(edges) < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing, length >= 2")
        x = np.clip(x, edges[0], edges[-1])
    counts, _ = np.histogram(x, bins=edges)
    return Histogram(bin_edges=edges, counts=counts)


@dataclass
class ProbabilityVector:
    """Normalised distribution estimate with an epsilon floor.

    Every entry is >= epsilon > 0 and the entries sum to 1 (within
    1e-12), so log-ratios against another vector on the same edges are
    always finite.
    """

    probs: np.ndarray
    bin_edges: np.ndarray
    epsilon: float

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        self.bin_edges = np.asarray(self.bin_edges, dtype=np.float64)
        if len(self.bin_edges) != len(self.probs) + 1:
            raise ValueError("need exactly len(probs) + 1 edges")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if np.any(self.probs < self.epsilon):
            raise ValueError("all probabilities must be >= epsilon")
        if abs(float(np.sum(self.probs)) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")

    @property
    def n_bins(self) -> int:
        return len(self.probs)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def to_probability(h: Histogram, epsilon: float) -> ProbabilityVector:
    """Estimate bin probabilities with an epsilon floor.

    Raw frequencies are floored at epsilon and the above-floor mass is
    rescaled so the result sums to exactly 1; requires
    0 < epsilon < 1/B.
    """
    b = h.n_bins
    if not 0.0 < epsilon < 1.0 / b:
        raise ValueError(f"epsilon must be in (0, {1.0 / b}) for {b} bins")
    total = h.total
    if total == 0:
        raise ValueError("histogram has zero total count")
    raw = h.counts / total
    floored = np.maximum(raw, epsilon)
    above = floored - epsilon
    scale = (1.0 - b * epsilon) / float(np.sum(above))
    probs = epsilon + above * scale
    return ProbabilityVector(probs=probs, bin_edges=h.bin_edges, epsilon=epsilon)


def _check_compatible(p: ProbabilityVector, q: ProbabilityVector) -> None:
    if p.n_bins != q.n_bins or not np.array_equal(p.bin_edges, q.bin_edges):
        raise ValueError("distributions must share identical bin edges")


def kl_divergence(p: ProbabilityVector, q: ProbabilityVector) -> float:
    """sum_i p_i * ln(p_i / q_i) in nats; >= 0, 0 iff p == q."""
    _check_compatible(p, q)
    return float(np.sum(p.probs * np.log(p.probs / q.probs)))


def symmetric_divergence(p_ns: ProbabilityVector, p_n: ProbabilityVector) -> float:
    """Two-way divergence D(p||q) + D(q||p); symmetric in its arguments."""
    return kl_divergence(p_ns, p_n) + kl_divergence(p_n, p_ns)


def entropy(p: ProbabilityVector) -> float:
    """-sum_i p_i * ln(p_i), in [0, ln B]."""
    return float(-np.sum(p.probs * np.log(p.probs)))


def zero_bin_index(edges: np.ndarray) -> int:
    """Index of the bin containing 0; raises if the support misses 0."""
    edges = np.asarray(edges, dtype=np.float64)
    if edges[0] > 0 or edges[-1] < 0:
        raise ValueError("bin support does not cover 0")
    return min(int(np.searchsorted(edges, 0.0, side="right")) - 1, len(edges) - 2)


def ratio_profile(p_ns: ProbabilityVector, p_n: ProbabilityVector) -> list:
    """Per-bin probability ratios, nearest-to-zero bins first.

    Returns (bin_center, p_ns_i / p_n_i) pairs sorted by |bin_center|
    ascending, so the first entries show how the two distributions agree
    around zero. The edges must straddle 0.
    """
    _check_compatible(p_ns, p_n)
    zero_bin_index(p_ns.bin_edges)  # validates the support
    centers = p_ns.bin_centers
    ratios = p_ns.probs / p_n.probs
    order = np.argsort(np.abs(centers), kind="stable")
    return [(float(centers[i]), float(ratios[i])) for i in order]


def shared_edges(values_a, values_b) -> np.ndarray:
    """Common uniform edges spanning the pooled range of two samples.

    The bin count follows the square-root rule applied to the smaller
    sample, so both histograms populate the shared bins.
    """
    a = np.asarray(values_a, dtype=np.float64).ravel()
    b = np.asarray(values_b, dtype=np.float64).ravel()
    if len(a) == 0 or len(b) == 0:
        raise ValueError("cannot derive edges from an empty sample")
    lo = min(float(np.min(a)), float(np.min(b)))
    hi = max(float(np.max(a)), float(np.max(b)))
    if lo == hi:
        lo -= _DEGENERATE_HALF_SPAN
        hi += _DEGENERATE_HALF_SPAN
    return np.linspace(lo, hi, bin_count(min(len(a), len(b))) + 1)
