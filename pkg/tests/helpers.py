"""Shared test utilities: random Soules trees and pipeline run helpers."""

import numpy as np

from specbary import barycentre, graph_core, sbm
from specbary.soules import SoulesSplit, SoulesTree


def random_tree(rng: np.random.Generator, n: int, n_splits: int | None = None) -> SoulesTree:
    """A SoulesTree built by splitting uniformly random leaves at random cuts."""
    if n_splits is None:
        n_splits = int(rng.integers(0, n))
    splits = []
    leaves = [(1, n)]
    for level in range(1, n_splits + 1):
        wide = [(a, b) for a, b in leaves if b > a]
        if not wide:
            break
        a, b = wide[rng.integers(len(wide))]
        istar = int(rng.integers(a, b))
        splits.append(SoulesSplit(i0=a, i1=b, istar=istar, level=level))
        leaves.remove((a, b))
        leaves += [(a, istar), (istar + 1, b)]
    return SoulesTree(n=n, splits=tuple(splits))


def random_complete_tree(rng: np.random.Generator, n: int) -> SoulesTree:
    return random_tree(rng, n, n_splits=n - 1)


def permuted_run_mse(spec: sbm.SbmSpec, key: tuple) -> float:
    """One survey run: sample, relabel randomly, reconstruct, score against P.

    The sample and the permutation get independent streams derived from key;
    the clustering seed is a third stream so runs are fully reproducible.
    """
    a = sbm.sample(spec, key)
    perm_rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((*key, 1))))
    perm = perm_rng.permutation(spec.n)
    shuffled = graph_core.permute(a, perm)
    result = barycentre.compute_barycentre([shuffled], M=spec.M, seed=(*key, 2))
    mu = graph_core.permute(result.mu_hat, graph_core.invert_permutation(perm))
    return barycentre.mse(sbm.population_mean(spec), mu)


def four_block_spec(c: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0)) -> sbm.SbmSpec:
    """The four-community reference model: n=512, uneven blocks, sparse scaling."""
    n = 512
    logn = np.log(n)
    p = tuple(ci * logn**2 / n for ci in c)
    return sbm.SbmSpec(block_sizes=(63, 147, 105, 197), p=p, q=2 * logn / n)
