"""The four-step roulette protocol.

1. Alice places the roulette in a basis state ``|initial>``.
2. Bob applies ``T_initial``, which maps the state onto the mixing matrix D.
3. Alice applies her classical strategy (a mixture of permutations).
4. Bob applies ``T_target^dag`` and reads off the diagonal.

In the noisy variant the state is passed through a depolarizing channel right
after step 1. Everything is deterministic; no measurement is sampled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


from .channels import apply_channel, depolarizing_kraus
from .errors import InvalidStateError, RouletteError
from .linalg import DensityMatrix, adjoint, conjugate_by, frobenius
from .permutations import ClassicalStrategy, Permutation, classical_mix
from .spectral import bob_unitary, mixing_matrix

FIXED_POINT_TOL = 1e-12
OUTCOME_TOL = 1e-10

NOISE_STEPS = frozenset({"after_step1"})


@dataclass(frozen=True)
class NoiseModel:
    r: float
    schedule: frozenset = NOISE_STEPS

    def __post_init__(self):
        if not 0.0 <= float(self.r) <= 1.0:
            raise RouletteError(f"noise strength r={self.r!r} outside [0, 1]")
        schedule = frozenset(self.schedule)
        if not schedule or not schedule <= NOISE_STEPS:
            raise RouletteError(f"unsupported noise schedule {sorted(schedule)}; only 'after_step1' is available")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "schedule", schedule)


@dataclass(frozen=True)
class GameConfig:
    """A single game. ``initial`` and ``bob_target`` are 1-based."""

    n: int
    initial: int
    bob_target: int
    alice: ClassicalStrategy = None
    noise: NoiseModel | None = None

    def __post_init__(self):
        if not 1 <= self.initial <= self.n:
            raise RouletteError(f"initial state {self.initial} outside 1..{self.n}")
        if not 1 <= self.bob_target <= self.n:
            raise RouletteError(f"target state {self.bob_target} outside 1..{self.n}")
        if self.alice is None:
            object.__setattr__(self, "alice", ClassicalStrategy(self.n))
        elif self.alice.n != self.n:
            raise RouletteError(f"Alice's strategy acts on {self.alice.n} states, game has {self.n}")


@dataclass(frozen=True)
class GameTranscript:
    config: GameConfig
    rho0: DensityMatrix
    rho1: DensityMatrix
    rho2: DensityMatrix
    rho3: DensityMatrix
    outcome: list = field(default_factory=list)
    win_probability: float = 0.0


def outcome_distribution(rho: DensityMatrix) -> list[float]:
    """Computational-basis probabilities, clamped to [0, 1] after validation."""
    diag = rho.diagonal()
    bad = [(i + 1, x) for i, x in enumerate(diag) if not -OUTCOME_TOL <= x <= 1 + OUTCOME_TOL]
    if bad:
        raise InvalidStateError(f"diagonal entries outside [0, 1]: {bad}")
    return [float(min(1.0, max(0.0, x))) for x in diag]


def _play_from(cfg: GameConfig, rho0: DensityMatrix, check_fixed_point: bool) -> GameTranscript:
    u1 = bob_unitary(cfg.n, cfg.initial).mat
    rho1 = conjugate_by(u1, rho0)
    rho2 = classical_mix(rho1, cfg.alice)
    if check_fixed_point:
        d = mixing_matrix(cfg.n).mat
        for name, rho in (("rho1", rho1), ("rho2", rho2)):
            dev = frobenius(rho.mat - d)
            if dev > FIXED_POINT_TOL:
                raise RouletteError(f"{name} deviates from D by {dev:.3e}")
    u2 = adjoint(bob_unitary(cfg.n, cfg.bob_target).mat)
    rho3 = conjugate_by(u2, rho2)
    outcome = outcome_distribution(rho3)
    return GameTranscript(cfg, rho0, rho1, rho2, rho3, outcome, outcome[cfg.bob_target - 1])


def run_noiseless(cfg: GameConfig) -> GameTranscript:
    if cfg.noise is not None:
        raise RouletteError("run_noiseless called with a noise model; use run_noisy")
    rho0 = DensityMatrix.basis(cfg.n, cfg.initial - 1)
    return _play_from(cfg, rho0, check_fixed_point=True)


def run_noisy(cfg: GameConfig) -> GameTranscript:
    """Depolarize the placed state, then play steps 2-4 with Bob's usual T_initial."""
    if cfg.noise is None:
        raise RouletteError("run_noisy needs a noise model")
    placed = DensityMatrix.basis(cfg.n, cfg.initial - 1)
    if cfg.n == 1:
        rho0 = placed  # a 1-state system has no non-trivial channel
    else:
        rho0 = apply_channel(placed, depolarizing_kraus(cfg.n, cfg.noise.r))
    return _play_from(cfg, rho0, check_fixed_point=False)


def play(cfg: GameConfig) -> GameTranscript:
    return run_noiseless(cfg) if cfg.noise is None else run_noisy(cfg)


# The only Alice move the closed form covers: swap states 1 and 2.
CLOSED_FORM_SWAP_KEY = "2 1 3"


def paper_p22_formula(r: float, p1: float) -> float:
    """Reference closed form for <2|rho_3|2> in the noisy 3-state game.

    Kept as a comparand only; it disagrees with the exact simulation (it gives
    1 - p1 instead of 1 at r = 0).
    """
    for name, v in (("r", r), ("p1", p1)):
        if not 0.0 <= v <= 1.0 or math.isnan(v):
            raise RouletteError(f"{name}={v!r} outside [0, 1]")
    alpha = 2.0 * math.sqrt(2.0 * r * (1.0 - r))
    return (-8.0 + (7.0 + alpha) * r) * (-1.0 + p1) / 8.0


def paper_formula_applies(cfg: GameConfig) -> bool:
    """True for the configuration the closed form was written for."""
    if cfg.n != 3 or cfg.noise is None or cfg.initial != 2 or cfg.bob_target != 2:
        return False
    allowed = {Permutation.from_key(CLOSED_FORM_SWAP_KEY)}
    return set(cfg.alice.probs) <= allowed


def paper_formula_for(cfg: GameConfig) -> float | None:
    if not paper_formula_applies(cfg):
        return None
    p1 = cfg.alice.probs.get(Permutation.from_key(CLOSED_FORM_SWAP_KEY), 0.0)
    return paper_p22_formula(cfg.noise.r, p1)
