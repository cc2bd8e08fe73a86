"""The symmetric group S_N, its permutation matrices and Alice's mixed strategies.

Permutations are stored 0-based in one-line notation (``map[j] = pi(j)``).
User-facing keys are 1-based and space separated, e.g. ``"2 1 3"`` for the
transposition of the first two roulette states.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .errors import CapacityError, DimensionError, InvalidStrategyError
from .linalg import DensityMatrix

STRATEGY_TOL = 1e-12

# Rows per vectorised block in classical_mix; bounds peak memory at S_9.
_MIX_CHUNK = 8192


@dataclass(frozen=True, order=True)
class Permutation:
    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        if not m or sorted(m) != list(range(len(m))):
            raise InvalidStrategyError(f"{self.map!r} is not a bijection on {{0..{len(m) - 1}}}")
        object.__setattr__(self, "map", m)

    @property
    def n(self) -> int:
        return len(self.map)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_key(cls, key: str, n: int | None = None) -> "Permutation":
        """Parse a 1-based one-line key such as ``"3 1 2"``."""
        try:
            values = [int(tok) - 1 for tok in key.split()]
        except ValueError:
            raise InvalidStrategyError(f"malformed permutation key {key!r}") from None
        if n is not None and len(values) != n:
            raise InvalidStrategyError(f"permutation key {key!r} has length {len(values)}, expected {n}")
        return cls(tuple(values))

    def key(self) -> str:
        return " ".join(str(x + 1) for x in self.map)

    def is_identity(self) -> bool:
        return self.map == tuple(range(self.n))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, image in enumerate(self.map):
            inv[image] = j
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """self o other, i.e. j -> self(other(j))."""
        if other.n != self.n:
            raise DimensionError(f"cannot compose permutations of size {self.n} and {other.n}")
        return Permutation(tuple(self.map[j] for j in other.map))

    def __str__(self):
        return self.key()


def _check_cap(n: int) -> None:
    if not 1 <= n <= linalg.MAX_DIM:
        raise CapacityError(f"n={n} outside the supported range [1, {linalg.MAX_DIM}]")


@lru_cache(maxsize=None)
def _sn_array(n: int) -> np.ndarray:
    arr = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(math.factorial(n), n)
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def _sn_tuple(n: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(tuple(row)) for row in _sn_array(n).tolist())


def enumerate_sn(n: int) -> list[Permutation]:
    """All n! permutations in lexicographic one-line order; element 0 is the identity."""
    _check_cap(n)
    return list(_sn_tuple(n))


def perm_to_matrix(p: Permutation) -> np.ndarray:
    """Permutation matrix with x[i, j] = 1 iff pi(j) = i."""
    x = np.zeros((p.n, p.n), dtype=np.complex128)
    x[list(p.map), list(range(p.n))] = 1.0
    return linalg.as_matrix(x, "permutation matrix")


def conjugate_by_permutation(rho: DensityMatrix, p: Permutation) -> DensityMatrix:
    """X rho X^dag by re-indexing: result[pi(i), pi(j)] = rho[i, j]."""
    if p.n != rho.dim:
        raise DimensionError(f"permutation of size {p.n} applied to state of dimension {rho.dim}")
    inv = np.array(p.inverse().map, dtype=np.intp)
    return DensityMatrix(rho.mat[np.ix_(inv, inv)])


@dataclass(frozen=True)
class ClassicalStrategy:
    """Probabilities over non-identity permutations of S_n.

    The identity carries the remaining mass ``1 - sum(probs)``. Keys are kept
    in lexicographic order so that mixing sums are reproducible.
    """

    n: int
    probs: Mapping[Permutation, float] = field(default_factory=dict)

    def __post_init__(self):
        _check_cap(self.n)
        clean = {}
        for p, w in self.probs.items():
            if not isinstance(p, Permutation):
                p = Permutation.from_key(p, self.n) if isinstance(p, str) else Permutation(tuple(p))
            if p.n != self.n:
                raise InvalidStrategyError(f"permutation {p} does not act on {self.n} states")
            if p.is_identity():
                raise InvalidStrategyError("the identity carries the remainder mass and may not be keyed")
            if p in clean:
                raise InvalidStrategyError(f"duplicate permutation {p}")
            w = float(w)
            if not (0.0 <= w <= 1.0):
                raise InvalidStrategyError(f"probability {w!r} for {p} outside [0, 1]")
            clean[p] = w
        total = math.fsum(clean.values())
        if total > 1.0 + STRATEGY_TOL:
            raise InvalidStrategyError(f"probabilities sum to {total:.15g} > 1")
        object.__setattr__(self, "probs", MappingProxyType(dict(sorted(clean.items()))))

    @property
    def identity_mass(self) -> float:
        return max(0.0, 1.0 - math.fsum(self.probs.values()))

    def to_json(self) -> dict:
        return {"n": self.n, "probs": {p.key(): w for p, w in self.probs.items()}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "ClassicalStrategy":
        if not isinstance(obj, Mapping):
            raise InvalidStrategyError("strategy must be a JSON object")
        unknown = set(obj) - {"n", "probs"}
        if unknown:
            raise InvalidStrategyError(f"unknown strategy keys: {sorted(unknown)}")
        if "n" not in obj:
            raise InvalidStrategyError("strategy is missing 'n'")
        n = obj["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise InvalidStrategyError(f"'n' must be an integer, got {n!r}")
        probs = obj.get("probs", {})
        if not isinstance(probs, Mapping):
            raise InvalidStrategyError("'probs' must be an object")
        parsed = {}
        for key, w in probs.items():
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise InvalidStrategyError(f"probability for {key!r} must be a number")
            parsed[Permutation.from_key(key, n)] = w
        return cls(n, parsed)


def load_strategy(path) -> ClassicalStrategy:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidStrategyError(f"strategy file is not valid JSON: {exc}") from None
    return ClassicalStrategy.from_json(obj)


def classical_mix(rho: DensityMatrix, s: ClassicalStrategy) -> DensityMatrix:
    """Alice's move: (1 - sum p) rho + sum_i p_i X_i rho X_i^dag.

    Terms are accumulated in lexicographic permutation order, in fixed-size
    vectorised blocks, so identical inputs give bitwise-identical output.
    """
    if s.n != rho.dim:
        raise DimensionError(f"strategy over S_{s.n} applied to state of dimension {rho.dim}")
    acc = s.identity_mass * rho.mat
    if s.probs:
        # result[a, b] = rho[inv(a), inv(b)]
        inv = np.argsort(np.array([p.map for p in s.probs], dtype=np.intp), axis=1)
        weights = np.fromiter(s.probs.values(), dtype=np.float64, count=len(s.probs))
        for start in range(0, len(weights), _MIX_CHUNK):
            block = inv[start:start + _MIX_CHUNK]
            terms = rho.mat[block[:, :, None], block[:, None, :]]
            terms *= weights[start:start + _MIX_CHUNK, None, None]
            acc = acc + terms.sum(axis=0)
    return DensityMatrix(acc)


def mix_dense(rho: DensityMatrix, s: ClassicalStrategy) -> DensityMatrix:
    """Reference path for classical_mix using explicit matrix products."""
    acc = s.identity_mass * rho.mat
    for p, w in s.probs.items():
        x = perm_to_matrix(p)
        acc = acc + w * (x @ rho.mat @ x.conj().T)
    return DensityMatrix(acc)


def uniform_strategy(n: int) -> ClassicalStrategy:
    """Every permutation, including the identity, with probability 1/n!."""
    perms = enumerate_sn(n)
    w = 1.0 / len(perms)
    return ClassicalStrategy(n, {p: w for p in perms[1:]})


def random_strategy(n: int, rng: np.random.Generator, support: int | None = None) -> ClassicalStrategy:
    """Random strategy on ``support`` distinct non-identity permutations.

    With ``support=None`` a size between 1 and min(n! - 1, 8) is drawn. Weights,
    identity mass included, come from a flat Dirichlet distribution.
    """
    _check_cap(n)
    others = math.factorial(n) - 1
    if others == 0:
        return ClassicalStrategy(n)
    if support is None:
        support = int(rng.integers(1, min(others, 8) + 1))
    support = min(support, others)
    rows = rng.choice(others, size=support, replace=False) + 1
    weights = rng.dirichlet(np.ones(support + 1))[1:]
    arr = _sn_array(n)
    return ClassicalStrategy(n, {Permutation(tuple(arr[i])): float(w) for i, w in zip(rows, weights)})


def strategy_from_pairs(n: int, pairs: Iterable[tuple[str, float]]) -> ClassicalStrategy:
    return ClassicalStrategy(n, {Permutation.from_key(k, n): w for k, w in pairs})
