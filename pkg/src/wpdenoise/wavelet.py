"""Wavelet-packet decomposition and perfect reconstruction of a frame.

Filtering is periodic (circular), so for an orthonormal filter pair the
frame transform is an orthogonal matrix: reconstruction is exact and
coefficient energy equals sample energy. Both the approximation and the
detail branch are split recursively down to the requested depth, giving
2^depth uniform subbands per frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Daubechies length-8 scaling coefficients (4 vanishing moments), sum
# sqrt(2), unit energy. Rounded to float64 from a 60-digit spectral
# factorization, so orthonormality holds to machine precision.
_DB4_LOWPASS = (
    -0.010597401785069032,
    0.0328830116668852,
    0.030841381835560764,
    -0.18703481171909309,
    -0.027983769416859854,
    0.6308807679298589,
    0.7148465705529157,
    0.2303778133088965,
)

FILTERS = ("haar", "db4")


@dataclass
class FilterBank:
    """Orthonormal two-channel analysis pair.

    The highpass is the quadrature mirror of the lowpass:
    highpass[k] = (-1)^k * lowpass[L-1-k].
    """

    name: str
    lowpass: np.ndarray
    highpass: np.ndarray

    def __post_init__(self):
        self.lowpass = np.asarray(self.lowpass, dtype=np.float64)
        self.highpass = np.asarray(self.highpass, dtype=np.float64)
        if self.lowpass.shape != self.highpass.shape or self.lowpass.ndim != 1:
            raise ValueError("lowpass/highpass must be equal-length vectors")
        for taps in (self.lowpass, self.highpass):
            if abs(float(np.sum(taps**2)) - 1.0) > 1e-12:
                raise ValueError(f"filter {self.name!r} is not orthonormal")
        signs = (-1.0) ** np.arange(len(self.lowpass))
        if not np.allclose(self.highpass, signs * self.lowpass[::-1], atol=1e-15):
            raise ValueError(f"filter {self.name!r} violates the mirror relation")

    def __len__(self) -> int:
        return len(self.lowpass)


def filter_bank(name: str) -> FilterBank:
    """Build a named filter bank ("haar" or "db4")."""
    if name == "haar":
        lowpass = np.array([1.0, 1.0]) / np.sqrt(2.0)
    elif name == "db4":
        lowpass = np.array(_DB4_LOWPASS)
    else:
        raise ValueError(f"unknown filter {name!r} (expected one of {FILTERS})")
    signs = (-1.0) ** np.arange(len(lowpass))
    return FilterBank(name=name, lowpass=lowpass, highpass=signs * lowpass[::-1])


@lru_cache(maxsize=256)
def _gather_indices(n: int, taps: int) -> np.ndarray:
    """Row k holds the circular sample positions (2m + k) mod n."""
    starts = 2 * np.arange(n // 2)
    idx = np.stack([(starts + k) % n for k in range(taps)])
    idx.flags.writeable = False
    return idx


def analysis_step(input_vec, fb: FilterBank):
    """One circular filter-and-decimate split.

    approx[m] = sum_k lowpass[k] * x[(2m+k) mod n], likewise for detail
    with the highpass. Each output has half the input length.
    """
    x = np.asarray(input_vec, dtype=np.float64)
    n = len(x)
    if n % 2:
        raise ValueError(f"input length {n} must be even")
    if n < len(fb):
        raise ValueError(f"input length {n} shorter than filter length {len(fb)}")
    seg = x[_gather_indices(n, len(fb))]  # (taps, n//2)
    return fb.lowpass @ seg, fb.highpass @ seg


def synthesis_step(approx, detail, fb: FilterBank) -> np.ndarray:
    """Exact inverse of analysis_step (transpose of the orthogonal split)."""
    a = np.asarray(approx, dtype=np.float64)
    d = np.asarray(detail, dtype=np.float64)
    if a.shape != d.shape:
        raise ValueError(f"length mismatch: {len(a)} vs {len(d)}")
    n = 2 * len(a)
    idx = _gather_indices(n, len(fb))
    out = np.zeros(n)
    for k in range(len(fb)):
        # row indices are distinct for a fixed tap, so += is safe
        out[idx[k]] += fb.lowpass[k] * a + fb.highpass[k] * d
    return out


@dataclass
class CoefficientTree:
    """Complete packet tree for one frame.

    Node (level, index) holds frame_len / 2**level coefficients; level 0
    is the frame itself and level `depth` holds the 2**depth leaf
    subbands. Treat instances as immutable; derive modified trees with
    with_leaves().
    """

    depth: int
    frame_len: int
    filter: FilterBank
    nodes: dict

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        for level in range(self.depth + 1):
            width = self.frame_len >> level
            for index in range(1 << level):
                node = self.nodes.get((level, index))
                if node is None or len(node) != width:
                    raise ValueError(f"malformed tree: bad node {(level, index)}")

    @property
    def leaves(self) -> list:
        """Leaf subband vectors, ordered by leaf index."""
        return [self.nodes[(self.depth, i)] for i in range(1 << self.depth)]

    def node(self, level: int, index: int) -> np.ndarray:
        return self.nodes[(level, index)]

    def with_leaves(self, new_leaves) -> "CoefficientTree":
        """Rebuild a consistent tree from replacement leaf vectors."""
        if len(new_leaves) != 1 << self.depth:
            raise ValueError(f"expected {1 << self.depth} leaves")
        nodes = {}
        for i, leaf in enumerate(new_leaves):
            leaf = np.asarray(leaf, dtype=np.float64)
            if len(leaf) != self.frame_len >> self.depth:
                raise ValueError(f"leaf {i} has wrong length {len(leaf)}")
            nodes[(self.depth, i)] = leaf
        for level in range(self.depth - 1, -1, -1):
            for i in range(1 << level):
                nodes[(level, i)] = synthesis_step(
                    nodes[(level + 1, 2 * i)],
                    nodes[(level + 1, 2 * i + 1)],
                    self.filter,
                )
        return CoefficientTree(self.depth, self.frame_len, self.filter, nodes)


def wp_decompose(frame, fb: FilterBank, depth: int) -> CoefficientTree:
    """Full packet expansion of a frame down to `depth` levels."""
    x = np.asarray(frame, dtype=np.float64)
    n = len(x)
    if n <= 0 or n & (n - 1):
        raise ValueError(f"frame length {n} must be a power of two")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if n >> depth == 0 or n >> depth < len(fb):
        raise ValueError(
            f"frame length {n} too short for depth {depth} with "
            f"{len(fb)}-tap filter"
        )
    nodes = {(0, 0): x.copy()}
    for level in range(depth):
        for i in range(1 << level):
            approx, detail = analysis_step(nodes[(level, i)], fb)
            nodes[(level + 1, 2 * i)] = approx
            nodes[(level + 1, 2 * i + 1)] = detail
    return CoefficientTree(depth=depth, frame_len=n, filter=fb, nodes=nodes)


def wp_reconstruct(tree: CoefficientTree) -> np.ndarray:
    """Invert wp_decompose from the leaf subbands."""
    current = [np.asarray(leaf, dtype=np.float64) for leaf in tree.leaves]
    for _ in range(tree.depth):
        current = [
            synthesis_step(current[2 * i], current[2 * i + 1], tree.filter)
            for i in range(len(current) // 2)
        ]
    return current[0]
