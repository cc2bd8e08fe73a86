import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_roulette import linalg
from quantum_roulette.errors import CapacityError, DimensionError, InvalidStrategyError
from quantum_roulette.linalg import DensityMatrix, conjugate_by
from quantum_roulette.permutations import (
    ClassicalStrategy,
    Permutation,
    classical_mix,
    conjugate_by_permutation,
    enumerate_sn,
    load_strategy,
    mix_dense,
    perm_to_matrix,
    random_strategy,
    uniform_strategy,
)
from quantum_roulette.spectral import mixing_matrix

from conftest import REF_X, REF_X_KEYS, dense_perm_matrix, projector


def test_enumerate_trivial():
    assert enumerate_sn(1) == [Permutation((0,))]


def test_enumerate_s3_matches_reference_set():
    mats = {perm_to_matrix(p).real.astype(int).tobytes() for p in enumerate_sn(3)}
    reference = {np.array(m).astype(int).tobytes() for m in REF_X.values()}
    assert mats == reference


def test_reference_labels_map_to_keys():
    for label, key in REF_X_KEYS.items():
        assert np.array_equal(perm_to_matrix(Permutation.from_key(key)), REF_X[label])


def test_enumerate_s4_brute_force():
    perms = enumerate_sn(4)
    assert len(perms) == 24
    assert perms[0].is_identity()
    assert len(set(perms)) == 24
    assert [p.map for p in perms] == sorted(itertools.permutations(range(4)))


@pytest.mark.parametrize("n", [0, linalg.MAX_DIM + 1])
def test_enumerate_cap(n):
    with pytest.raises(CapacityError, match=str(linalg.MAX_DIM)):
        enumerate_sn(n)


def test_perm_to_matrix_examples():
    assert np.array_equal(perm_to_matrix(Permutation.identity(3)), np.eye(3))
    assert np.array_equal(perm_to_matrix(Permutation.from_key("2 1 3")), REF_X[1])
    # 1 -> 2 -> 3 -> 1
    m = perm_to_matrix(Permutation.from_key("2 3 1"))
    basis = np.eye(3)
    for src, dst in ((0, 1), (1, 2), (2, 0)):
        assert np.array_equal(m @ basis[src], basis[dst])


def test_permutation_validation():
    with pytest.raises(InvalidStrategyError):
        Permutation((0, 0, 1))
    with pytest.raises(InvalidStrategyError):
        Permutation.from_key("1 2 x")
    with pytest.raises(InvalidStrategyError):
        Permutation.from_key("1 2", n=3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_homomorphism(n):
    perms = enumerate_sn(n)
    for p, q in itertools.product(perms, perms):
        assert np.array_equal(perm_to_matrix(p.compose(q)), perm_to_matrix(p) @ perm_to_matrix(q))


@pytest.mark.parametrize("n", range(1, 8))
def test_permutation_matrices_unitary(n):
    for p in enumerate_sn(n)[:200]:
        assert linalg.unitarity_residual(perm_to_matrix(p)) <= 1e-15


@pytest.mark.parametrize("n", range(1, 6))
def test_mixing_matrix_commutes(n):
    d = mixing_matrix(n).mat
    for p in enumerate_sn(n):
        x = perm_to_matrix(p)
        assert np.array_equal(d @ x, x @ d)


def test_conjugate_by_permutation_examples(rng):
    rho = linalg.random_density(4, rng)
    assert np.array_equal(conjugate_by_permutation(rho, Permutation.identity(4)).mat, rho.mat)
    d = mixing_matrix(4)
    for p in enumerate_sn(4):
        assert np.array_equal(conjugate_by_permutation(d, p).mat, d.mat)


def test_conjugate_by_permutation_matches_dense(rng):
    perms = enumerate_sn(5)
    for _ in range(20):
        rho = linalg.random_density(5, rng)
        p = perms[int(rng.integers(len(perms)))]
        x = dense_perm_matrix(p.map)
        assert np.max(np.abs(conjugate_by_permutation(rho, p).mat - x @ rho.mat @ x.T)) <= 1e-13
        assert np.max(np.abs(conjugate_by_permutation(rho, p).mat - conjugate_by(x, rho).mat)) <= 1e-13


def test_conjugate_by_permutation_dimension_mismatch():
    with pytest.raises(DimensionError):
        conjugate_by_permutation(DensityMatrix.basis(3, 0), Permutation.identity(4))


def test_conjugation_preserves_trace_and_norm(rng):
    for p in enumerate_sn(4):
        rho = linalg.random_density(4, rng)
        out = conjugate_by_permutation(rho, p)
        assert abs(out.trace() - rho.trace()) <= 1e-14
        # same entries, moved: the multiset and hence the Frobenius norm are exact
        assert sorted(out.mat.ravel().tolist(), key=lambda z: (z.real, z.imag)) == sorted(
            rho.mat.ravel().tolist(), key=lambda z: (z.real, z.imag)
        )
        assert math.fsum(np.abs(out.mat.ravel()) ** 2) == math.fsum(np.abs(rho.mat.ravel()) ** 2)


def test_classical_mix_examples(rng):
    rho = linalg.random_density(3, rng)
    assert np.array_equal(classical_mix(rho, ClassicalStrategy(3)).mat, rho.mat)
    one = DensityMatrix(projector(3, 1))
    swapped = classical_mix(one, ClassicalStrategy(3, {"2 1 3": 1.0}))
    x1 = np.array(REF_X[1])
    assert np.array_equal(swapped.mat, projector(3, 2))
    assert np.array_equal(x1 @ projector(3, 1) @ x1.T, projector(3, 2))


@pytest.mark.parametrize("n", range(1, 6))
def test_classical_mix_leaves_d_invariant(n, rng):
    d = mixing_matrix(n)
    for _ in range(100):
        assert np.max(np.abs(classical_mix(d, random_strategy(n, rng)).mat - d.mat)) <= 1e-13


def test_classical_mix_matches_dense_path(rng):
    for n in (2, 3, 4, 5):
        for _ in range(10):
            rho = linalg.random_density(n, rng)
            s = random_strategy(n, rng, support=min(10, math.factorial(n) - 1))
            fast = classical_mix(rho, s).mat
            assert np.max(np.abs(fast - mix_dense(rho, s).mat)) <= 1e-13
            assert abs(np.trace(fast) - 1) <= 1e-12


def test_classical_mix_deterministic(rng):
    rho = linalg.random_density(6, rng)
    s = random_strategy(6, rng, support=700)
    assert classical_mix(rho, s).mat.tobytes() == classical_mix(rho, s).mat.tobytes()


def test_uniform_strategy_fully_mixes_diagonal():
    out = classical_mix(DensityMatrix.basis(4, 2), uniform_strategy(4))
    np.testing.assert_allclose(out.mat, np.eye(4) / 4, atol=1e-15)


@pytest.mark.parametrize(
    "probs, message",
    [
        ({"2 1 3": 0.7, "3 2 1": 0.4}, "sum"),
        ({"2 1 3": -0.1}, "outside"),
        ({"1 2 3": 0.1}, "identity"),
        ({"2 1": 0.1}, "length"),
    ],
)
def test_strategy_validation(probs, message):
    with pytest.raises(InvalidStrategyError, match=message):
        ClassicalStrategy(3, probs)


def test_strategy_boundary_sum():
    s = ClassicalStrategy(3, {"2 1 3": 0.5, "3 2 1": 0.5 + 1e-13})
    assert s.identity_mass == 0.0


def test_strategy_json_roundtrip(tmp_path):
    obj = {"n": 3, "probs": {"2 1 3": 0.25, "3 2 1": 0.1}}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    s = load_strategy(path)
    assert s.probs[Permutation.from_key("2 1 3")] == 0.25
    assert s.identity_mass == pytest.approx(0.65)
    assert s.to_json() == {"n": 3, "probs": {"2 1 3": 0.25, "3 2 1": 0.1}}


@pytest.mark.parametrize(
    "obj",
    [
        {"n": 3, "probs": {}, "extra": 1},
        {"probs": {}},
        {"n": "3", "probs": {}},
        {"n": 3, "probs": {"2 1 3": "0.5"}},
        {"n": 3, "probs": {"2 1 3": 1.5}},
        [1, 2],
    ],
)
def test_strategy_json_rejects(obj):
    with pytest.raises(InvalidStrategyError):
        ClassicalStrategy.from_json(obj)


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_compose_and_inverse(a, b):
    p, q = Permutation(tuple(a)), Permutation(tuple(b))
    assert p.compose(p.inverse()).is_identity()
    for j in range(6):
        assert p.compose(q).map[j] == p.map[q.map[j]]
