"""Independent reference implementations and the runtime self-check suite.

The oracles here deliberately avoid the production code paths: the transform
check sums the defining series directly, the clique check enumerates every
vertex subset, and the rank-correlation check uses the closed d^2 formula.
The test suite reuses them, and `soundnet selftest` runs them at install time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import distfit, spectral
from .corpus import spearman
from .network import PitchGrid, SoundNetwork, grid_bin, largest_clique


def naive_dft(samples) -> np.ndarray:
    """Direct O(N^2) evaluation of y[k] = sum_n exp(-2*pi*i*k*n/N) * x[n]."""
    x = np.asarray(samples, dtype=np.complex128)
    n = x.size
    k = np.arange(n).reshape(-1, 1)
    j = np.arange(n).reshape(1, -1)
    return np.exp(-2j * np.pi * k * j / n) @ x


def max_clique_size_bruteforce(n_vertices: int, edges) -> int:
    """Maximum clique size by enumerating all 2^n vertex subsets (bitmasks)."""
    adj = [0] * n_vertices
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    best = 0
    for subset in range(1, 1 << n_vertices):
        size = subset.bit_count()
        if size <= best:
            continue
        ok = True
        rest = subset
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            # every other member must be a neighbor of v
            if subset & ~(adj[v] | (1 << v)):
                ok = False
                break
        if ok:
            best = size
    return best


def spearman_rank_formula(x, y) -> float:
    """1 - 6*sum(d^2)/(n*(n^2-1)); valid for tie-free vectors only."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    rx = np.empty(n)
    ry = np.empty(n)
    rx[np.argsort(x)] = np.arange(1, n + 1)
    ry[np.argsort(y)] = np.arange(1, n + 1)
    d = rx - ry
    return float(1.0 - 6.0 * np.sum(d * d) / (n * (n * n - 1.0)))


def random_network(n_vertices: int, edge_prob: float, rng: np.random.Generator) -> SoundNetwork:
    """Erdos-Renyi graph dressed up as a SoundNetwork (for clique checks)."""
    grid = PitchGrid()
    midis = list(range(60, 60 + n_vertices))
    edges = set()
    for i in range(n_vertices):
        for j in range(i + 1, n_vertices):
            if rng.random() < edge_prob:
                edges.add((midis[i], midis[j]))
    return SoundNetwork(
        grid=grid,
        nodes=tuple(grid_bin(m, grid) for m in midis),
        edges=frozenset(edges),
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def run_selftest(seed: int = 42) -> list:
    """Run the oracle suite; every check must pass on a healthy build."""
    rng = np.random.default_rng(seed)
    results = []

    worst = 0.0
    for n in (64, 256, 1024):
        for _ in range(4):
            x = rng.standard_normal(n)
            got = spectral.dft(x).bins
            want = naive_dft(x)
            worst = max(worst, float(np.max(np.abs(got - want)) / np.max(np.abs(want))))
    results.append(CheckResult("fft-vs-naive-dft", worst < 1e-9, f"max rel err {worst:.3e}"))

    mismatches = 0
    for _ in range(25):
        net = random_network(12, 0.5, rng)
        bk = len(largest_clique(net))
        index = {b.midi_lower: i for i, b in enumerate(net.nodes)}
        brute = max_clique_size_bruteforce(12, [(index[a], index[b]) for a, b in net.edges])
        mismatches += bk != brute
    results.append(CheckResult("clique-vs-bruteforce", mismatches == 0, f"{mismatches} mismatches in 25 graphs"))

    worst = 0.0
    for _ in range(25):
        x = rng.permutation(40).astype(float)
        y = rng.permutation(40).astype(float)
        worst = max(worst, abs(spearman(x, y) - spearman_rank_formula(x, y)))
    results.append(CheckResult("spearman-vs-rank-formula", worst < 1e-12, f"max abs diff {worst:.3e}"))

    draws = rng.exponential(scale=50.0, size=20_000)
    fit = distfit.fit_mle(distfit.DistFamily.EXPONENTIAL, draws)
    err_exp = abs(fit.scale - 50.0) / 50.0
    draws = rng.normal(loc=3.0, scale=7.0, size=20_000)
    fit = distfit.fit_mle(distfit.DistFamily.NORMAL, draws)
    err_norm = abs(fit.scale - 7.0) / 7.0
    ok = err_exp < 0.02 and err_norm < 0.02
    results.append(CheckResult("mle-parameter-recovery", ok, f"exp scale err {err_exp:.4f}, normal scale err {err_norm:.4f}"))

    return results
