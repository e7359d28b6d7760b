"""Soules bases: orthonormal bases built by recursive interval splitting.

The first vector is the constant unit vector. Every later vector comes from
splitting an interval [i0, i1] at position istar (indices are 1-based and
inclusive throughout this module): the vector is a positive constant on
[i0, istar], a negative constant on [istar+1, i1], and zero elsewhere, scaled
to unit norm and orthogonal to every earlier vector. The splits form a binary
tree over [1, n]; the leaves after M-1 splits are the recovered node blocks.

Partial sums of the rank-one projectors of such a basis are entrywise
nonnegative, which is what makes the basis usable for synthesizing symmetric
nonnegative matrices with a prescribed spectrum.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True)
class SoulesSplit:
    """One interval split: [i0, i1] divides into [i0, istar] and [istar+1, i1].

    level is the creation index; the split at level l defines basis vector
    l + 1 (the constant vector is vector 1 and has no split).
    """

    i0: int
    i1: int
    istar: int
    level: int

    def __post_init__(self):
        if not 1 <= self.i0 <= self.istar < self.i1:
            raise ValueError(f"invalid split ({self.i0}, {self.i1}) at {self.istar}")
        if self.level < 1:
            raise ValueError(f"split level must be >= 1, got {self.level}")


@dataclass(frozen=True)
class SoulesTree:
    """An ordered sequence of splits of [1, n]."""

    n: int
    splits: tuple[SoulesSplit, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "splits", tuple(self.splits))
        if self.n < 1:
            raise ValueError("tree needs n >= 1")
        # replay the splits to confirm each one divides a current leaf
        leaves = {(1, self.n)}
        for s in self.splits:
            if (s.i0, s.i1) not in leaves:
                raise ValueError(f"split ({s.i0}, {s.i1}) does not match a current leaf")
            leaves.remove((s.i0, s.i1))
            leaves.add((s.i0, s.istar))
            leaves.add((s.istar + 1, s.i1))

    def leaves(self, depth: int | None = None) -> list[tuple[int, int]]:
        """Interval partition of [1, n] after the first depth-1 splits.

        depth counts basis vectors (the constant vector included); the default
        applies every split. Leaves are returned sorted by left endpoint.
        """
        k = len(self.splits) if depth is None else depth - 1
        if not 0 <= k <= len(self.splits):
            raise ValueError(f"depth {depth} outside 1..{len(self.splits) + 1}")
        leaves = {(1, self.n)}
        for s in self.splits[:k]:
            leaves.remove((s.i0, s.i1))
            leaves.add((s.i0, s.istar))
            leaves.add((s.istar + 1, s.i1))
        return sorted(leaves)


@dataclass(frozen=True)
class SoulesBasis:
    """A tree together with the matrix of its basis vectors.

    vectors has shape (n, K); column 0 is the constant vector and column k is
    built from splits[k-1]. K = n means the basis is complete.
    """

    tree: SoulesTree
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def K(self) -> int:
        return self.vectors.shape[1]

    @property
    def is_complete(self) -> bool:
        return self.K == self.n


def constant_vector(n: int) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n))


def build_vector(n: int, split: SoulesSplit) -> np.ndarray:
    """The unit vector for one split: positive on [i0, istar], negative after."""
    if split.i1 > n:
        raise ValueError(f"split endpoint {split.i1} exceeds n={n}")
    L = split.i1 - split.i0 + 1
    r0 = split.istar - split.i0 + 1
    r1 = split.i1 - split.istar
    v = np.zeros(n)
    v[split.i0 - 1 : split.istar] = np.sqrt(r1 / r0) / np.sqrt(L)
    v[split.istar : split.i1] = -np.sqrt(r0 / r1) / np.sqrt(L)
    return v


def rank_one_projection(n: int, split: SoulesSplit) -> np.ndarray:
    """The outer product of the split vector with itself, in closed form.

    Inside [i0, i1] the matrix is constant on the four blocks induced by the
    split: r1/(L r0) on the top-left square, r0/(L r1) on the bottom-right,
    -1/L on the two cross blocks, and zero outside. Its trace is 1.
    """
    if split.i1 > n:
        raise ValueError(f"split endpoint {split.i1} exceeds n={n}")
    L = split.i1 - split.i0 + 1
    r0 = split.istar - split.i0 + 1
    r1 = split.i1 - split.istar
    lo = slice(split.i0 - 1, split.istar)
    hi = slice(split.istar, split.i1)
    out = np.zeros((n, n))
    out[lo, lo] = r1 / (L * r0)
    out[hi, hi] = r0 / (L * r1)
    out[lo, hi] = -1.0 / L
    out[hi, lo] = -1.0 / L
    return out


def materialize(tree: SoulesTree, depth: int | None = None) -> SoulesBasis:
    """Basis vectors for the first depth vectors of a tree (all by default)."""
    k = len(tree.splits) + 1 if depth is None else depth
    if not 1 <= k <= len(tree.splits) + 1:
        raise ValueError(f"depth {depth} outside 1..{len(tree.splits) + 1}")
    vecs = np.empty((tree.n, k))
    vecs[:, 0] = constant_vector(tree.n)
    for j, split in enumerate(tree.splits[: k - 1]):
        vecs[:, j + 1] = build_vector(tree.n, split)
    sub = SoulesTree(n=tree.n, splits=tree.splits[: k - 1])
    return SoulesBasis(tree=sub, vectors=vecs)


def cumulative_projector(basis: SoulesBasis, M: int) -> np.ndarray:
    """E_M, the sum of the first M rank-one projectors.

    Equals 1/|J| on each depth-M leaf block J and zero off those blocks; for a
    complete basis E_n is the identity.
    """
    if not 1 <= M <= basis.K:
        raise ValueError(f"M={M} outside 1..{basis.K}")
    V = basis.vectors[:, :M]
    return V @ V.T


def synthesize_symmetric(basis: SoulesBasis, values: np.ndarray) -> np.ndarray:
    """Psi diag(values) Psi^T for a complete basis and non-increasing values.

    With values non-increasing the off-diagonal entries are nonnegative; with
    values[n-1] >= 0 the whole matrix is. To synthesize a Laplacian-signed
    matrix from an ascending spectrum, pass the negated spectrum and negate
    the result.
    """
    values = np.asarray(values, dtype=float)
    if not basis.is_complete:
        raise ValueError(f"basis has {basis.K} of {basis.n} columns; completion required")
    if values.shape != (basis.n,):
        raise ValueError(f"expected {basis.n} eigenvalues, got shape {values.shape}")
    if np.any(np.diff(values) > 1e-12):
        raise ValueError("eigenvalues must be non-increasing")
    return (basis.vectors * values) @ basis.vectors.T


def inner_product_score(s: np.ndarray, split: SoulesSplit) -> float:
    """Squared Frobenius inner product of the split's projector with s.

    Uses the piecewise-constant structure: only the three distinct block sums
    of s over the split are formed, never the vector or the projector.
    """
    s = np.asarray(s, dtype=float)
    n = s.shape[0]
    if split.i1 > n:
        raise ValueError(f"split endpoint {split.i1} exceeds n={n}")
    lo = slice(split.i0 - 1, split.istar)
    hi = slice(split.istar, split.i1)
    L = split.i1 - split.i0 + 1
    r0 = split.istar - split.i0 + 1
    r1 = split.i1 - split.istar
    s00 = float(s[lo, lo].sum())
    s11 = float(s[hi, hi].sum())
    s01 = float(s[lo, hi].sum())
    val = (r1 / (L * r0)) * s00 + (r0 / (L * r1)) * s11 - (2.0 / L) * s01
    return val * val


def _check_square_symmetric(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    scale = max(1.0, float(np.abs(s).max()))
    if np.abs(s - s.T).max() > _SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    return s


def best_soules_basis(s: np.ndarray, depth: int) -> SoulesBasis:
    """Greedy tree search for the basis best aligned with a symmetric matrix.

    At each level every current leaf [i0, i1] and every cut position
    istar in [i0, i1-1] is scored by the squared inner product of the would-be
    projector with s; the best split wins and its vector joins the basis.
    Ties go to the smallest i0, then the smallest istar. The search stops once
    depth vectors exist (the constant vector counts as the first).

    Scores are read from a summed-area table of s, so each candidate costs
    O(1) after the O(n^2) table build.

    Args:
      s: square symmetric matrix, typically a sample mean adjacency.
      depth: number of basis vectors to select, between 1 and n.

    Returns:
      A SoulesBasis with depth columns and depth-1 recorded splits.
    """
    s = _check_square_symmetric(s)
    n = s.shape[0]
    if not 1 <= depth <= n:
        raise ValueError(f"depth {depth} outside 1..{n}")

    # sat[i, j] = sum of s[:i, :j]; 1-based block sums become 4-point lookups
    sat = np.zeros((n + 1, n + 1))
    np.cumsum(np.cumsum(s, axis=0), axis=1, out=sat[1:, 1:])

    # scores below the rounding noise of the table are treated as exact zeros,
    # otherwise accumulated-sum jitter would decide ties on structureless input
    mass = max(1.0, float(np.abs(s).sum()))
    noise_floor = (64.0 * np.finfo(float).eps * mass) ** 2

    def leaf_scores(a: int, b: int) -> np.ndarray:
        # scores for istar = a..b-1, vectorized over the whole leaf
        t = np.arange(a, b)
        L = b - a + 1
        r0 = t - a + 1.0
        r1 = b - t + 0.0
        s00 = sat[t, t] - sat[a - 1, t] - sat[t, a - 1] + sat[a - 1, a - 1]
        s0b = sat[t, b] - sat[a - 1, b] - sat[t, a - 1] + sat[a - 1, a - 1]
        stot = sat[b, b] - sat[a - 1, b] - sat[b, a - 1] + sat[a - 1, a - 1]
        s01 = s0b - s00
        s11 = stot - s00 - 2.0 * s01
        val = (r1 / (L * r0)) * s00 + (r0 / (L * r1)) * s11 - (2.0 / L) * s01
        scores = val * val
        scores[scores <= noise_floor] = 0.0
        return scores

    leaves = [(1, n)]
    splits: list[SoulesSplit] = []
    for level in range(1, depth):
        best_score = -1.0
        best = None
        for a, b in leaves:
            if b == a:
                continue
            scores = leaf_scores(a, b)
            k = int(np.argmax(scores))
            # strict comparison keeps the earliest (i0, istar) on ties
            if scores[k] > best_score:
                best_score = float(scores[k])
                best = (a, b, a + k)
        if best is None:
            raise ValueError(f"no splittable leaf left at depth {level + 1}")
        a, b, istar = best
        splits.append(SoulesSplit(i0=a, i1=b, istar=istar, level=level))
        ix = leaves.index((a, b))
        leaves[ix : ix + 1] = [(a, istar), (istar + 1, b)]

    return materialize(SoulesTree(n=n, splits=tuple(splits)))


def complete_basis(basis: SoulesBasis) -> SoulesBasis:
    """Extend a basis to n columns by splitting leaves left to right at their
    midpoints. Scores play no role past the greedy depth."""
    if basis.is_complete:
        return basis
    splits = list(basis.tree.splits)
    leaves = basis.tree.leaves()
    level = len(splits) + 1
    while True:
        target = next(((a, b) for a, b in leaves if b > a), None)
        if target is None:
            break
        a, b = target
        istar = (a + b - 1) // 2
        splits.append(SoulesSplit(i0=a, i1=b, istar=istar, level=level))
        level += 1
        ix = leaves.index((a, b))
        leaves[ix : ix + 1] = [(a, istar), (istar + 1, b)]
        leaves.sort()
    return materialize(SoulesTree(n=basis.n, splits=tuple(splits)))


def save_tree(tree: SoulesTree, path: str | Path) -> None:
    """Write the splits as a JSON list of {i0, i1, istar, level} records."""
    rows = [{"i0": s.i0, "i1": s.i1, "istar": s.istar, "level": s.level} for s in tree.splits]
    Path(path).write_text(json.dumps(rows, indent=1))


def load_tree(path: str | Path, n: int) -> SoulesTree:
    rows = json.loads(Path(path).read_text())
    splits = tuple(SoulesSplit(i0=r["i0"], i1=r["i1"], istar=r["istar"], level=r["level"]) for r in rows)
    return SoulesTree(n=n, splits=splits)
