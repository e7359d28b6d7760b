"""Core graph matrix operations: degrees, normalized adjacency and Laplacian,
spectral pseudo-distance, permutations, and plain-text matrix I/O.

All matrices are dense numpy arrays of float64, nodes indexed by row 0..n-1.
"""

import json
from pathlib import Path

import numpy as np

SYMMETRY_RTOL = 1e-9


def check_adjacency(a: np.ndarray) -> np.ndarray:
    """Validate an adjacency matrix: square, finite, symmetric, nonnegative.

    Returns the input as a float64 array. Weighted entries and nonzero
    diagonals are allowed; symmetry is checked relative to the largest entry.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("adjacency matrix has non-finite entries")
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.T).max() > SYMMETRY_RTOL * scale:
        raise ValueError("adjacency matrix is not symmetric")
    if a.min() < 0:
        raise ValueError("adjacency matrix has negative entries")
    return a


def degrees(a: np.ndarray) -> np.ndarray:
    """Row sums of the adjacency matrix (the diagonal of the degree matrix)."""
    return np.asarray(a, dtype=float).sum(axis=1)


def normalized_adjacency(a: np.ndarray) -> np.ndarray:
    """a_ij / sqrt(d_i d_j), with rows and columns of zero-degree nodes left 0."""
    a = np.asarray(a, dtype=float)
    d = degrees(a)
    inv_sqrt = np.zeros_like(d)
    pos = d > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(d[pos])
    return a * np.outer(inv_sqrt, inv_sqrt)


def normalized_laplacian(a: np.ndarray) -> np.ndarray:
    """I minus the normalized adjacency; eigenvalues lie in [0, 2]."""
    ahat = normalized_adjacency(a)
    lap = -ahat
    lap[np.diag_indices_from(lap)] += 1.0
    return lap


def spectral_distance(la: np.ndarray, lb: np.ndarray) -> float:
    """L2 distance between two ascending eigenvalue vectors of equal length.

    This is a pseudo-distance: cospectral non-isomorphic graphs are at
    distance zero.
    """
    la = np.asarray(la, dtype=float)
    lb = np.asarray(lb, dtype=float)
    if la.shape != lb.shape:
        raise ValueError(f"spectra have different lengths: {la.shape} vs {lb.shape}")
    return float(np.linalg.norm(la - lb))


def permute(a: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Relabel nodes so node i moves to position perm[i].

    result[perm[i], perm[j]] == a[i, j].
    """
    a = np.asarray(a)
    perm = np.asarray(perm)
    n = a.shape[0]
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("perm is not a permutation of 0..n-1")
    out = np.empty_like(a)
    out[np.ix_(perm, perm)] = a
    return out


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    """Inverse permutation: invert_permutation(perm)[perm[i]] == i."""
    return np.argsort(np.asarray(perm))


def save_matrix(a: np.ndarray, path: str | Path) -> None:
    """Write a matrix as plain-text CSV, one row per line."""
    np.savetxt(path, np.asarray(a, dtype=float), delimiter=",", fmt="%.17g")


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a matrix written by save_matrix."""
    m = np.loadtxt(path, delimiter=",", ndmin=2)
    return np.asarray(m, dtype=float)


def write_matrix_manifest(path: str | Path, matrix_path: str, n: int, kind: str) -> None:
    """Write the JSON manifest describing a matrix CSV.

    kind is "adjacency" or "laplacian".
    """
    if kind not in ("adjacency", "laplacian"):
        raise ValueError(f"unknown matrix kind {kind!r}")
    Path(path).write_text(json.dumps({"n": int(n), "path": matrix_path, "kind": kind}, indent=1))


def read_matrix_manifest(path: str | Path) -> dict:
    manifest = json.loads(Path(path).read_text())
    if not {"n", "path", "kind"} <= manifest.keys():
        raise ValueError(f"matrix manifest {path} is missing required keys")
    return manifest
