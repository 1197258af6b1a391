"""Monte Carlo estimates of gap probabilities from the matrix models.

GUE: Hermitian H with density proportional to exp(-tr H^2), so eigenvalues
carry the weight e^{-x^2}.  JUE: A = X X^H and B = Y Y^H from complex
Gaussian N x M1 and N x M2 matrices; the eigenvalues lambda of A (A + B)^-1
are mapped by x = 1 - 2 lambda, giving the weight (1 - x)^(M1 - N)
(1 + x)^(M2 - N).

Streams are reproducible: batch k always draws from the k-th child of
SeedSequence(seed) on a Philox generator, independent of how batches are
distributed over workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .gapcore import GapGeometry
from .orthopoly import WeightSpec

BATCH = 10_000
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class Ensemble:
    """GUE (weight hermite) or JUE with integer alpha = M1 - N, beta = M2 - N."""
    weight: WeightSpec
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        if not self.weight.is_hermite:
            for p in (self.weight.alpha, self.weight.beta):
                if p != int(p) or p < 0:
                    raise PreconditionError("JUE sampling needs nonnegative integer alpha, beta")

    @classmethod
    def gue(cls, N: int) -> "Ensemble":
        return cls(WeightSpec.hermite(), N)

    @classmethod
    def jue(cls, N: int, M1: int, M2: int) -> "Ensemble":
        if M1 < N or M2 < N:
            raise PreconditionError("M1 and M2 must be at least N")
        return cls(WeightSpec.jacobi(M1 - N, M2 - N), N)

    @property
    def dims(self) -> tuple[int, int]:
        return self.N + int(self.weight.alpha), self.N + int(self.weight.beta)

    def label(self) -> str:
        if self.weight.is_hermite:
            return "gue"
        M1, M2 = self.dims
        return f"jue(M1={M1},M2={M2})"


@dataclass(frozen=True)
class SpectrumSample:
    eigenvalues: np.ndarray
    ensemble: Ensemble


@dataclass(frozen=True)
class EmpiricalEstimate:
    p_hat: float
    stderr: float
    n_samples: int
    seed: int


def _generator(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _complex_normal(rng, shape, sd):
    return sd * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _gue_batch(rng, n, N):
    Z = _complex_normal(rng, (n, N, N), math.sqrt(0.5))
    # diagonal N(0, 1/2); off-diagonal real and imaginary parts N(0, 1/4)
    H = 0.5 * (Z + np.conj(np.swapaxes(Z, -1, -2)))
    return np.linalg.eigvalsh(H, UPLO="L")


def _jue_batch(rng, n, N, M1, M2):
    X = _complex_normal(rng, (n, N, M1), math.sqrt(0.5))
    Y = _complex_normal(rng, (n, N, M2), math.sqrt(0.5))
    A = X @ np.conj(np.swapaxes(X, -1, -2))
    B = Y @ np.conj(np.swapaxes(Y, -1, -2))
    L = np.linalg.cholesky(A + B)
    Li = np.linalg.inv(L)
    lam = np.linalg.eigvalsh(Li @ A @ np.conj(np.swapaxes(Li, -1, -2)), UPLO="L")
    return np.sort(1.0 - 2.0 * lam, axis=-1)


def _batch(ens: Ensemble, rng, n) -> np.ndarray:
    if ens.weight.is_hermite:
        return _gue_batch(rng, n, ens.N)
    return _jue_batch(rng, n, ens.N, *ens.dims)


def sample_spectra(ens: Ensemble, n_samples: int, seed: int) -> np.ndarray:
    """(n_samples, N) array of sorted eigenvalues, reproducible for a seed."""
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    out = np.empty((n_samples, ens.N))
    for k, (lo, hi, child) in enumerate(_batches(n_samples, seed)):
        out[lo:hi] = _batch(ens, _generator(child), hi - lo)
    return out


def _batches(n_samples, seed):
    count = -(-n_samples // BATCH)
    children = np.random.SeedSequence(seed).spawn(count)
    return [(k * BATCH, min(n_samples, (k + 1) * BATCH), children[k]) for k in range(count)]


def sample_gue(N: int, seed: int) -> SpectrumSample:
    ens = Ensemble.gue(N)
    return SpectrumSample(sample_spectra(ens, 1, seed)[0], ens)


def sample_jue(N: int, M1: int, M2: int, seed: int) -> SpectrumSample:
    ens = Ensemble.jue(N, M1, M2)
    return SpectrumSample(sample_spectra(ens, 1, seed)[0], ens)


def hermitian_eigenvalues(matrix) -> np.ndarray:
    """Sorted eigenvalues of a Hermitian matrix (LAPACK tridiagonal reduction)."""
    M = np.asarray(matrix)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 1.0)
    if np.max(np.abs(M - np.conj(M.T)), initial=0.0) > HERMITIAN_TOL * scale:
        raise PreconditionError("matrix is not Hermitian")
    return np.linalg.eigvalsh(M)


def _workers() -> int:
    env = os.environ.get("RMT_GAPS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError("RMT_GAPS_THREADS must be an integer") from None
    return 1


def _count_gaps(ens, region, lo, hi, child) -> int:
    ev = _batch(ens, _generator(child), hi - lo)
    return int(np.count_nonzero(~region.contains(ev).any(axis=1)))


def empirical_gap(ensemble: Ensemble, geometry: GapGeometry, n_samples: int, seed: int,
                  workers: int | None = None) -> EmpiricalEstimate:
    """Fraction of sampled spectra with no eigenvalue in the gap region."""
    if n_samples < 1000:
        raise DomainError("n_samples must be at least 1000")
    region = geometry.region(ensemble.weight)
    jobs = _batches(n_samples, seed)
    workers = workers or _workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(lambda j: _count_gaps(ensemble, region, *j), jobs))
    else:
        counts = [_count_gaps(ensemble, region, *j) for j in jobs]
    p = sum(counts) / n_samples
    return EmpiricalEstimate(p, math.sqrt(p * (1 - p) / n_samples), n_samples, int(seed))


def dump_samples(path, ensemble: Ensemble, n_samples: int, seed: int) -> None:
    """One spectrum per line after a '# ensemble=... N=... seed=...' header."""
    ev = sample_spectra(ensemble, n_samples, seed)
    with open(path, "w") as fh:
        fh.write(f"# ensemble={ensemble.label()} N={ensemble.N} seed={seed}\n")
        for row in ev:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
