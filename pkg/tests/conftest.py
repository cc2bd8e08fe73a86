import cmath
import math

import numpy as np
import pytest

W3 = cmath.exp(2j * math.pi / 3)
S3 = 1 / math.sqrt(3)

# N = 3 matrices written out by hand from the worked 3-state example.
REF_X = {
    0: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    1: [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
    2: [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
    3: [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
    4: [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    5: [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
}
# Label -> 1-based one-line key of the same permutation.
REF_X_KEYS = {0: "1 2 3", 1: "2 1 3", 2: "3 2 1", 3: "1 3 2", 4: "2 3 1", 5: "3 1 2"}

REF_F3 = S3 * np.array([[1, 1, 1], [1, W3, W3**2], [1, W3**2, W3**4]])
REF_T = {
    1: REF_F3,
    2: S3 * np.array([[1, 1, 1], [W3**2, 1, W3], [W3**4, 1, W3**2]]),
    3: S3 * np.array([[1, 1, 1], [W3, W3**2, 1], [W3**2, W3**4, 1]]),
}
REF_Y3 = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)
REF_Z3 = np.diag([1, W3, W3**2])
D3 = np.full((3, 3), 1 / 3)


def naive_matmul(a, b):
    n = len(a)
    return np.array([[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)])


def dense_perm_matrix(one_line_0based):
    """x[i, j] = 1 iff pi(j) = i, built entry by entry."""
    n = len(one_line_0based)
    return np.array([[1.0 if one_line_0based[j] == i else 0.0 for j in range(n)] for i in range(n)])


def projector(n, k):
    """|k><k| with k 1-based."""
    p = np.zeros((n, n), dtype=complex)
    p[k - 1, k - 1] = 1
    return p


def brute_force_depolarize(rho, d, r):
    """Kraus sum built from the shift/clock definitions, independent of the engine."""
    w = cmath.exp(2j * math.pi / d)
    y = np.zeros((d, d), dtype=complex)
    for l in range(d):
        y[(l - 1) % d, l] = 1
    z = np.diag([w**l for l in range(d)])
    out = (1 - r) * rho
    for i in range(d):
        for j in range(d):
            if (i, j) == (0, 0):
                continue
            m = np.linalg.matrix_power(y, i) @ np.linalg.matrix_power(z, j)
            out = out + r / (d * d - 1) * (m @ rho @ m.conj().T)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)
