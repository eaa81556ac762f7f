"""Haar-distributed unitaries, a theta-deformed ensemble, and histogram
total-variation estimates between ensembles.

Sampling convention: a complex Gaussian matrix has independent N(0,1) real and
imaginary parts per entry (beta=2); the real ensemble (beta=1) drops the
imaginary part.  QR with the positive-diagonal convention maps Gaussian
matrices to Haar unitaries; the deformed ensemble applies the same QR to the
pencil ``(1-theta) X + theta I``, so theta=0 is Haar and theta=1 is the
identity, with total variation growing linearly in theta for small theta.

Distribution comparisons are scalar-statistic histograms (default: pooled
eigenvalue angles) with TVD = 0.5 * sum |p1 - p2| and a sampling-noise bound
of 3 * sqrt(bins / draws).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import UnitaryMatrix, qr_stack_positive_diagonal, standard_qr

RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_BINS = 20


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def stream_rng(seed: int, stream_index: int) -> np.random.Generator:
    """Independent stream derived from (seed, stream_index)."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream_index,))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class GaussianSpec:
    """Shape of a Gaussian matrix draw: dimension, ensemble, seed."""

    n: int
    beta: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"dimension must be positive, got {self.n}")
        if self.beta not in (1, 2):
            raise ValidationError(f"beta must be 1 (real) or 2 (complex), got {self.beta}")


def _gaussian_stack(n: int, beta: int, count: int, rng) -> np.ndarray:
    if beta == 1:
        return rng.standard_normal((count, n, n))
    # interleave real/imaginary blocks per draw so a batched draw consumes the
    # stream exactly like repeated single draws
    x = rng.standard_normal((count, 2, n, n))
    return x[:, 0] + 1j * x[:, 1]


def sample_gaussian(spec: GaussianSpec, rng=None) -> np.ndarray:
    """One Gaussian matrix; deterministic from spec.seed when rng is omitted."""
    if rng is None:
        rng = make_rng(spec.seed)
    return _gaussian_stack(spec.n, spec.beta, 1, rng)[0]


def haar_unitary(n: int, beta: int = 2, rng=None) -> UnitaryMatrix:
    """QR of a Gaussian matrix under the positive-diagonal convention."""
    if rng is None:
        rng = make_rng(0)
    x = _gaussian_stack(n, beta, 1, rng)[0]
    q, _ = standard_qr(x)
    return q


def theta_deformed_unitary(n: int, theta: float, rng, beta: int = 2) -> UnitaryMatrix:
    """QR unitary of (1-theta) X + theta I; Haar at theta=0, identity at theta=1."""
    t = float(theta)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"theta={t} outside [0, 1]")
    x = _gaussian_stack(n, beta, 1, rng)[0]
    if t == 1.0:
        # the pencil is exactly the identity; skip the factorization
        return UnitaryMatrix(np.eye(n))
    q, _ = standard_qr((1.0 - t) * x + t * np.eye(n))
    return q


def haar_unitary_stack(n: int, count: int, rng, beta: int = 2) -> np.ndarray:
    """Batched Haar draws; same stream order as repeated single draws."""
    x = _gaussian_stack(n, beta, count, rng)
    q, _ = qr_stack_positive_diagonal(x)
    return q


def theta_deformed_stack(n: int, theta: float, count: int, rng, beta: int = 2) -> np.ndarray:
    t = float(theta)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"theta={t} outside [0, 1]")
    x = _gaussian_stack(n, beta, count, rng)
    pencil = (1.0 - t) * x + t * np.eye(n)
    q, _ = qr_stack_positive_diagonal(pencil)
    return q


def eigenangles(stack: np.ndarray) -> np.ndarray:
    """Pooled eigenvalue angles in (-pi, pi] of a stack of unitaries."""
    vals = np.linalg.eigvals(np.asarray(stack, dtype=complex))
    return np.angle(vals).ravel()


@dataclass(frozen=True)
class EnsembleHistogram:
    """Binned scalar statistic of an ensemble; comparable when bins match."""

    statistic_name: str
    bin_edges: tuple
    counts: tuple
    total: int

    def __post_init__(self):
        if len(self.bin_edges) != len(self.counts) + 1:
            raise ValidationError("bin_edges must be one longer than counts")
        if self.total < 1:
            raise ValidationError("histogram total must be positive")

    @property
    def probabilities(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / float(self.total)


def angle_histogram(
    values: np.ndarray, bins: int = DEFAULT_BINS, statistic_name: str = "eigenangles"
) -> EnsembleHistogram:
    counts, edges = np.histogram(values, bins=bins, range=(-np.pi, np.pi))
    return EnsembleHistogram(
        statistic_name=statistic_name,
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        total=int(np.size(values)),
    )


def tvd_estimate(h1: EnsembleHistogram, h2: EnsembleHistogram) -> float:
    """0.5 * L1 distance between normalized histograms."""
    if h1.statistic_name != h2.statistic_name:
        raise ValidationError(
            f"histograms track different statistics: "
            f"{h1.statistic_name!r} vs {h2.statistic_name!r}"
        )
    if h1.bin_edges != h2.bin_edges:
        raise ValidationError("histograms use different binning")
    return float(0.5 * np.sum(np.abs(h1.probabilities - h2.probabilities)))


def noise_bound(bins: int, draws: int) -> float:
    """Sampling-noise scale for a TVD estimate from `draws` matrix draws.

    Uses the draw count, not the pooled eigenangle count: angles within one
    matrix are correlated, so draws is the conservative sample size.
    """
    return 3.0 * float(np.sqrt(bins / draws))


def translation_invariance_check(
    n: int,
    v: UnitaryMatrix,
    samples: int,
    rng,
    bins: int = DEFAULT_BINS,
    beta: int = 2,
) -> float:
    """TVD between the eigenangle histograms of {U_i} and {V U_i}.

    Same draws on both sides, so V = identity gives exactly zero; for any
    fixed V the estimate stays below the sampling-noise bound because the
    Haar measure is left-translation invariant.
    """
    if v.dim != n:
        raise ValidationError("reference unitary dimension mismatch")
    stack = haar_unitary_stack(n, samples, rng, beta=beta)
    base = angle_histogram(eigenangles(stack), bins=bins)
    shifted = angle_histogram(eigenangles(v.matrix @ stack), bins=bins)
    return tvd_estimate(base, shifted)


def deformation_tvd_curve(
    n: int,
    thetas,
    samples: int,
    seed: int,
    bins: int = DEFAULT_BINS,
    beta: int = 2,
):
    """Estimated eigenangle TVD of the deformed ensemble against Haar.

    One independent Haar reference sample (stream 0); each theta uses its own
    stream so points are comparable run to run.  Returns a list of
    (theta, tvd, noise_bound) triples.
    """
    ref = angle_histogram(
        eigenangles(haar_unitary_stack(n, samples, stream_rng(seed, 0), beta=beta)),
        bins=bins,
    )
    out = []
    bound = noise_bound(bins, samples)
    for idx, theta in enumerate(thetas, start=1):
        stack = theta_deformed_stack(
            n, float(theta), samples, stream_rng(seed, idx), beta=beta
        )
        h = angle_histogram(eigenangles(stack), bins=bins)
        out.append((float(theta), tvd_estimate(ref, h), bound))
    return out
