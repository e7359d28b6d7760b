"""Stochastic block models with contiguous blocks: population quantities,
limit spectra, and seeded sampling.

A model is M contiguous node blocks B_1..B_M, within-block edge probability
p_m for block m, and a single cross-block probability q with q <= p_m.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class SbmSpec:
    """Block sizes, within-block probabilities, and the cross probability."""

    block_sizes: tuple[int, ...]
    p: tuple[float, ...]
    q: float

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(s) for s in self.block_sizes))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        object.__setattr__(self, "q", float(self.q))
        if not self.block_sizes:
            raise ValueError("spec needs at least one block")
        if any(s < 1 for s in self.block_sizes):
            raise ValueError("block sizes must be positive")
        if len(self.p) != len(self.block_sizes):
            raise ValueError("one within-block probability per block is required")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q={self.q} outside [0, 1]")
        for m, pm in enumerate(self.p):
            if not self.q <= pm <= 1.0:
                raise ValueError(f"p[{m}]={pm} violates q <= p_m <= 1")

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    @property
    def M(self) -> int:
        return len(self.block_sizes)

    @property
    def is_balanced(self) -> bool:
        return len(set(self.block_sizes)) == 1 and len(set(self.p)) == 1

    def block_slices(self) -> list[slice]:
        """Row ranges of the blocks, in block order."""
        edges = np.concatenate([[0], np.cumsum(self.block_sizes)])
        return [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]


def balanced(n: int, M: int, p: float, q: float) -> SbmSpec:
    """Balanced model: M equal blocks, one within probability."""
    if n % M != 0:
        raise ValueError(f"n={n} is not divisible by M={M}")
    return SbmSpec(block_sizes=(n // M,) * M, p=(p,) * M, q=q)


def save_spec(spec: SbmSpec, path: str | Path) -> None:
    payload = {"n": spec.n, "block_sizes": list(spec.block_sizes), "p": list(spec.p), "q": spec.q}
    Path(path).write_text(json.dumps(payload, indent=1))


def load_spec(path: str | Path) -> SbmSpec:
    payload = json.loads(Path(path).read_text())
    spec = SbmSpec(block_sizes=tuple(payload["block_sizes"]), p=tuple(payload["p"]), q=float(payload["q"]))
    if "n" in payload and int(payload["n"]) != spec.n:
        raise ValueError(f"spec file {path}: n={payload['n']} does not match block sizes")
    return spec


def population_mean(spec: SbmSpec) -> np.ndarray:
    """Entrywise expectation P: p_m on B_m x B_m (diagonal included), q elsewhere."""
    P = np.full((spec.n, spec.n), spec.q)
    for pm, blk in zip(spec.p, spec.block_slices()):
        P[blk, blk] = pm
    return P


def expected_degrees(spec: SbmSpec) -> np.ndarray:
    """Expected degree per node: |B_m| p_m + (n - |B_m|) q, constant on blocks."""
    n = spec.n
    out = np.empty(n)
    for s, pm, blk in zip(spec.block_sizes, spec.p, spec.block_slices()):
        out[blk] = s * pm + (n - s) * spec.q
    return out


def expected_laplacian(spec: SbmSpec) -> np.ndarray:
    """Normalized Laplacian of the population mean.

    Computed as I - Dbar^{-1/2} P Dbar^{-1/2} with Dbar the expected degrees,
    so within-block off-diagonals are -p_m/dbar_m, cross entries are
    -q/sqrt(dbar_m dbar_m'), and the diagonal is 1 - p_m/dbar_m. For a
    balanced spec its eigenvalues equal limit_eigenvalues exactly.
    """
    d = expected_degrees(spec)
    if np.any(d <= 0):
        raise ValueError("expected degree is zero; normalized Laplacian undefined")
    P = population_mean(spec)
    lap = -P / np.sqrt(np.outer(d, d))
    lap[np.diag_indices_from(lap)] += 1.0
    return lap


def limit_eigenvalues(spec: SbmSpec) -> np.ndarray:
    """Large-n limit spectrum of a balanced model, ascending.

    One zero, M-1 copies of Mq/(p + (M-1)q), and n-M ones.
    """
    if not spec.is_balanced:
        raise ValueError("limit eigenvalues require a balanced spec")
    n, M = spec.n, spec.M
    p = spec.p[0]
    out = np.ones(n)
    out[0] = 0.0
    if M > 1:
        denom = p + (M - 1) * spec.q
        if denom == 0.0:
            raise ValueError("limit eigenvalues undefined for p = q = 0")
        out[1:M] = M * spec.q / denom
    return out


def _generator(seed) -> np.random.Generator:
    # Counter-based stream; tuple seeds give independent per-graph streams.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def sample(spec: SbmSpec, seed) -> np.ndarray:
    """One adjacency matrix: upper-triangle Bernoulli draws from P, symmetrized,
    zero diagonal."""
    n = spec.n
    P = population_mean(spec)
    rng = _generator(seed)
    u = rng.random((n, n))
    upper = np.triu(u < P, k=1)
    return (upper | upper.T).astype(float)


def sample_ensemble(spec: SbmSpec, T: int, seed: int) -> list[np.ndarray]:
    """T independent samples, one Philox stream per graph keyed (seed, index)."""
    if T < 1:
        raise ValueError(f"ensemble size must be positive, got {T}")
    return [sample(spec, (seed, t)) for t in range(T)]
