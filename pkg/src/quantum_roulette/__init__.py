"""Simulation engine for the N-state quantum roulette game."""
from .channels import KrausSet, apply_channel, clock_operator, depolarizing_kraus, shift_operator
from .errors import RouletteError
from .game import GameConfig, GameTranscript, NoiseModel, outcome_distribution, paper_p22_formula, play, run_noiseless, run_noisy
from .linalg import DensityMatrix, adjoint, conjugate_by, is_unitary, mat_mul
from .permutations import (
    ClassicalStrategy,
    Permutation,
    classical_mix,
    conjugate_by_permutation,
    enumerate_sn,
    perm_to_matrix,
)
from .spectral import bob_unitary, circulant_eigenvalues, fourier_basis, mixing_matrix

__version__ = "0.1.0"
