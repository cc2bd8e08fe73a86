"""Cross-module invariant checks, run by ``quantum-roulette verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .channels import KrausSet, apply_channel, depolarizing_kraus
from .game import GameConfig, run_noiseless
from .linalg import random_density
from .permutations import _sn_array, classical_mix, enumerate_sn, random_strategy
from .spectral import bob_unitary, fourier_basis, mixing_matrix

KRAUS_RATES = (0.0, 0.3, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return self.skipped or self.residual <= self.tol


def _max(values) -> float:
    return max((float(v) for v in values), default=0.0)


def _perm_matrix_blocks(n, chunk=4096):
    """All permutation matrices of S_n as real (k, n, n) blocks, lexicographic order."""
    perms = _sn_array(n)
    cols = np.arange(n)
    for start in range(0, len(perms), chunk):
        block = perms[start:start + chunk]
        mats = np.zeros((len(block), n, n))
        mats[np.arange(len(block))[:, None], block, cols[None, :]] = 1.0
        yield mats


def check_sn_matrices(n, rng, trials):
    perms = _sn_array(n)
    bad = 0.0 if len(perms) == math.factorial(n) else 1.0
    bad = max(bad, 0.0 if enumerate_sn(n)[0].is_identity() else 1.0)
    bad = max(bad, 0.0 if len({row.tobytes() for row in perms}) == len(perms) else 1.0)
    for mats in _perm_matrix_blocks(n):
        one_per_line = np.all(mats.sum(axis=1) == 1) and np.all(mats.sum(axis=2) == 1)
        bad = max(bad, 0.0 if one_per_line else 1.0)
    return bad


def check_mixing_average(n, rng, trials):
    total = sum(mats.sum(axis=0) for mats in _perm_matrix_blocks(n))
    return float(np.max(np.abs(total / math.factorial(n) - mixing_matrix(n).mat)))


def check_commutation(n, rng, trials):
    d = mixing_matrix(n).mat.real
    return _max(np.max(np.abs(d @ mats - mats @ d)) for mats in _perm_matrix_blocks(n))


def check_unitarity(n, rng, trials):
    mats = [fourier_basis(n).f] + [bob_unitary(n, k).mat for k in range(1, n + 1)]
    return _max(linalg.unitarity_residual(m) for m in mats)


def check_diagonalization(n, rng, trials):
    f = fourier_basis(n).f
    target = np.zeros((n, n))
    target[0, 0] = 1.0
    return float(np.max(np.abs(f.conj().T @ mixing_matrix(n).mat @ f - target)))


def check_bob_similarity(n, rng, trials):
    d = mixing_matrix(n).mat
    worst = 0.0
    for k in range(1, n + 1):
        t = bob_unitary(n, k).mat
        worst = max(worst, np.max(np.abs(t.conj().T @ d @ t - linalg.basis_projector(n, k - 1))))
    return float(worst)


def check_classical_invariance(n, rng, trials):
    d = mixing_matrix(n)
    return _max(np.max(np.abs(classical_mix(d, random_strategy(n, rng)).mat - d.mat)) for _ in range(trials))


def check_kraus_completeness(n, rng, trials):
    return _max(KrausSet.completeness_residual(depolarizing_kraus(n, r).ops) for r in KRAUS_RATES)


def check_channel_trace(n, rng, trials):
    worst = 0.0
    for _ in range(trials):
        rho = random_density(n, rng)
        ks = depolarizing_kraus(n, float(rng.uniform()))
        worst = max(worst, abs(apply_channel(rho, ks).trace() - 1.0))
    return worst


def check_always_win(n, rng, trials):
    worst = 0.0
    strategies = [random_strategy(n, rng) for _ in range(trials)]
    for s in strategies:
        for initial in range(1, n + 1):
            for target in range(1, n + 1):
                tr = run_noiseless(GameConfig(n, initial, target, s))
                worst = max(worst, abs(1.0 - tr.win_probability))
    return worst


# (name, function, tolerance, needs d >= 2)
CHECKS: list[tuple[str, Callable, float, bool]] = [
    ("sn_matrix_set", check_sn_matrices, 0.0, False),
    ("mixing_average", check_mixing_average, 1e-12, False),
    ("mixing_commutes", check_commutation, 1e-12, False),
    ("fourier_unitary", check_unitarity, 1e-12, False),
    ("fourier_diagonalizes", check_diagonalization, 1e-12, False),
    ("bob_similarity", check_bob_similarity, 1e-12, False),
    ("classical_invariance", check_classical_invariance, 1e-13, False),
    ("kraus_completeness", check_kraus_completeness, 1e-12, True),
    ("channel_trace", check_channel_trace, 1e-11, True),
    ("noiseless_always_win", check_always_win, 1e-10, False),
]


def run_checks(n: int = 3, trials: int = 100, seed: int = 0) -> list[CheckResult]:
    """Run every check sequentially, each with its own generator derived from ``seed``."""
    results = []
    for idx, (name, fn, tol, needs_qudit) in enumerate(CHECKS):
        if needs_qudit and n < 2:
            results.append(CheckResult(name, 0.0, tol, skipped=True))
            continue
        rng = np.random.default_rng([seed, idx])
        results.append(CheckResult(name, float(fn(n, rng, trials)), tol))
    return results
