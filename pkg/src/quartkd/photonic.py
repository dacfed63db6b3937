"""Time-bin realization of the four-letter protocol and its equivalence proof.

A photon emitted at t0 occupies one of four time slots (the time basis) or a
phase-coherent superposition of all four (the energy basis).  The sender's
energy-basis preparation is a symmetric 1x4 split followed by one phase per
arm; the receiver's energy analyzer compensates the delays, applies its own
phases and recombines the slots in a symmetric 4x4 coupler, one detector per
output port.

Reference construction, frozen after validating the quoted phase examples:

* 2x2 coupler transfer matrix (1/sqrt(2)) [[1, i], [i, 1]] (reflection
  picks up i);
* two layers of two couplers with the crossing ``CROSSING`` between them,
  so each second-layer coupler combines one arm from each first-layer
  coupler;
* the sender injects into input port ``ALICE_INPUT_PORT``; with arm phases
  (0, pi/2, 0, -pi/2) this creates the first energy-basis state exactly, up
  to a global phase;
* the receiver's phases are (0, -pi/2, 0, pi/2) and detectors are labeled
  by ``DETECTOR_RELABEL`` so that energy state j fires detector j.

Phases multiply slot amplitudes as exp(+i*phase) on both sides.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import pi

import numpy as np

from .eve import EveStrategy, apply_strategy
from .qudit import (PHI, PSI, StateVector, basis, build_phi_basis,
                    exact_outcome_distribution, measure)
from .streams import EQUIVALENCE, StreamFactory

TimeBinState = StateVector   # four slot amplitudes relative to the emission time

TIME_BASIS = PSI
ENERGY_BASIS = PHI

CROSSING = (1, 2, 3, 0)          # first-layer arm -> second-layer port
ALICE_INPUT_PORT = 0
DETECTOR_RELABEL = (0, 3, 1, 2)  # raw output port -> detector label

UNITARITY_TOL = 1e-10


def _two_pi_normalize(phase: float) -> float:
    if not np.isfinite(phase):
        raise ValueError(f"phase must be finite, got {phase!r}")
    return float((phase + pi) % (2 * pi) - pi)


@dataclass(frozen=True)
class PhaseSettings:
    """Four per-slot phases in radians, stored in (-pi, pi]."""

    phases: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.phases) != 4:
            raise ValueError("need exactly four phases")
        object.__setattr__(self, "phases",
                           tuple(_two_pi_normalize(p) for p in self.phases))

    def factors(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.phases))


@dataclass(frozen=True)
class MultiportCoupler:
    """Symmetric 4x4 coupler: unitary with every entry of modulus 1/2."""

    unitary: np.ndarray
    crossing: tuple[int, int, int, int]

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=np.complex128)
        if u.shape != (4, 4):
            raise ValueError(f"expected a 4x4 unitary, got shape {u.shape}")
        if not np.allclose(u @ u.conj().T, np.eye(4), atol=UNITARITY_TOL):
            raise ValueError("coupler matrix is not unitary")
        if not np.allclose(np.abs(u), 0.5, atol=UNITARITY_TOL):
            raise ValueError("coupler is not a symmetric multiport (|U_jk| != 1/2)")
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)


@dataclass(frozen=True)
class DetectorOutcome:
    """Detector index (energy analysis) or arrival slot (time analysis)."""

    kind: str   # "time" | "energy"
    index: int


@lru_cache(maxsize=None)
def build_multiport() -> MultiportCoupler:
    """Compose two 2x2 coupler layers around the frozen crossing."""
    c = np.array([[1, 1j], [1j, 1]], dtype=np.complex128) / np.sqrt(2)
    layer = np.zeros((4, 4), dtype=np.complex128)
    layer[:2, :2] = c
    layer[2:, 2:] = c
    perm = np.zeros((4, 4))
    for old, new in enumerate(CROSSING):
        perm[new, old] = 1.0
    return MultiportCoupler(layer @ perm @ layer, CROSSING)


BOB_SETTINGS = PhaseSettings((0.0, -pi / 2, 0.0, pi / 2))


def alice_settings_for(letter: int, coupler: MultiportCoupler | None = None) -> PhaseSettings:
    """Solve the per-arm phases that turn the input split into energy state ``letter``."""
    if coupler is None:
        coupler = build_multiport()
    col = coupler.unitary[:, ALICE_INPUT_PORT]
    target = build_phi_basis(4).matrix[letter]
    ratios = target / col
    if not np.allclose(np.abs(ratios), 1.0, atol=UNITARITY_TOL):
        raise ValueError(f"no phase-only solution for letter {letter}")
    phases = np.angle(ratios / ratios[0])
    settings = PhaseSettings(tuple(float(p) for p in phases))
    prepared = settings.factors() * col
    assert abs(np.abs(np.vdot(target, prepared)) - 1.0) < UNITARITY_TOL
    return settings


ALICE_SETTINGS = tuple(alice_settings_for(j) for j in range(4))


def alice_prepare_photonic(basis_label: str, letter: int,
                           settings: PhaseSettings | None = None) -> TimeBinState:
    """Prepare a time-bin state: a single slot, or a phased four-slot superposition."""
    if not 0 <= letter < 4:
        raise ValueError(f"invalid letter {letter}")
    if basis_label == TIME_BASIS:
        amps = np.zeros(4, dtype=np.complex128)
        amps[letter] = 1.0
        return StateVector(4, amps)
    if basis_label == ENERGY_BASIS:
        if settings is None:
            settings = ALICE_SETTINGS[letter]
        col = build_multiport().unitary[:, ALICE_INPUT_PORT]
        return StateVector(4, settings.factors() * col)
    raise ValueError(f"unknown preparation basis {basis_label!r}")


def time_detection_distribution(state: TimeBinState) -> np.ndarray:
    """Arrival-slot probabilities."""
    return np.abs(state.amps) ** 2


def energy_detection_distribution(state: TimeBinState,
                                  settings: PhaseSettings = BOB_SETTINGS) -> np.ndarray:
    """Detector probabilities (in detector-label order) of the energy analyzer."""
    raw = np.abs(build_multiport().unitary @ (settings.factors() * state.amps)) ** 2
    labeled = np.empty(4)
    for port, label in enumerate(DETECTOR_RELABEL):
        labeled[label] = raw[port]
    return labeled


def _sample_index(probs: np.ndarray, u: float) -> int:
    acc = 0.0
    for k in range(3):
        acc += probs[k]
        if u < acc:
            return k
    return 3


def bob_analyze_photonic(state: TimeBinState, basis_label: str, u: float,
                         settings: PhaseSettings = BOB_SETTINGS) -> DetectorOutcome:
    """Analyze a time-bin state with one uniform [0,1) draw.

    Time basis samples the arrival slot; energy basis compensates delays,
    applies the receiver phases, traverses the coupler and samples the firing
    output port, reported under its detector label.
    """
    if basis_label == TIME_BASIS:
        return DetectorOutcome("time", _sample_index(time_detection_distribution(state), u))
    if basis_label == ENERGY_BASIS:
        # invert in detector-label order: the same draw then selects the same
        # outcome as the abstract sampler whenever the distributions agree
        labeled = energy_detection_distribution(state, settings)
        return DetectorOutcome("energy", _sample_index(labeled, u))
    raise ValueError(f"unknown analyzer basis {basis_label!r}")


# ---------------------------------------------------------------------------
# routing


@dataclass(frozen=True)
class PermutationVerdict:
    is_permutation: bool
    mapping: tuple[int, ...] | None
    max_off_target: float


def routing_matrix(alice_settings=None,
                   bob_settings: PhaseSettings = BOB_SETTINGS) -> np.ndarray:
    """Entry (j, k): probability that photonic energy state j fires detector k."""
    if alice_settings is None:
        alice_settings = ALICE_SETTINGS
    rows = []
    for j in range(4):
        state = alice_prepare_photonic(ENERGY_BASIS, j, alice_settings[j])
        rows.append(energy_detection_distribution(state, bob_settings))
    return np.array(rows)


def check_permutation(matrix: np.ndarray, tol: float = 1e-10) -> PermutationVerdict:
    """Decide whether a routing matrix is a permutation within tolerance."""
    peaks = matrix.argmax(axis=1)
    off = matrix.copy()
    for j, k in enumerate(peaks):
        off[j, k] = 0.0
    max_off = float(off.max())
    ok = (len(set(peaks.tolist())) == 4
          and bool(np.all(matrix[np.arange(4), peaks] >= 1.0 - tol))
          and max_off <= tol)
    return PermutationVerdict(ok, tuple(int(k) for k in peaks) if ok else None, max_off)


# ---------------------------------------------------------------------------
# equivalence with the abstract engine


@dataclass(frozen=True)
class EquivalenceReport:
    """Deviations between the abstract engine and the photonic pipeline."""

    exact_max_deviation: float
    n_rounds: int
    outcome_agreement: float | None
    max_frequency_deviation: float | None
    qter_abstract: float | None
    qter_photonic: float | None
    sifted_abstract: int | None
    sifted_photonic: int | None


def exact_equivalence_deviation() -> float:
    """Max |photonic - abstract| outcome probability over 8 states x 2 analyzers."""
    worst = 0.0
    for prep in (TIME_BASIS, ENERGY_BASIS):
        for letter in range(4):
            abstract_state = basis(prep, 4).vectors[letter]
            photonic_state = alice_prepare_photonic(prep, letter)
            for analyzer in (TIME_BASIS, ENERGY_BASIS):
                abstract = exact_outcome_distribution(abstract_state, basis(analyzer, 4))
                if analyzer == TIME_BASIS:
                    photonic = time_detection_distribution(photonic_state)
                else:
                    photonic = energy_detection_distribution(photonic_state)
                worst = max(worst, float(np.abs(abstract - photonic).max()))
    return worst


def _eve_photonic(strategy: EveStrategy, state: TimeBinState,
                  rng: np.random.Generator) -> tuple[TimeBinState, int | None]:
    """Photonic intercept/resend, draw-for-draw aligned with eve.apply_strategy."""
    if strategy.kind == "none":
        return state, None
    if rng.random() >= strategy.intercept_fraction:
        return state, None
    if strategy.kind == "intercept_resend":
        pool = strategy.basis_pool
        label = pool[int(rng.integers(len(pool)))] if len(pool) > 1 else pool[0]
    else:
        raise ValueError(f"strategy {strategy.kind!r} has no photonic realization")
    if label not in (TIME_BASIS, ENERGY_BASIS):
        raise ValueError(f"basis {label!r} has no photonic analyzer")
    outcome = bob_analyze_photonic(state, label, rng.random())
    return alice_prepare_photonic(label, outcome.index), outcome.index


def photonic_equivalence_check(n_rounds: int, seed: int,
                               strategy: EveStrategy | None = None) -> EquivalenceReport:
    """Run matched sessions through both pipelines with shared random streams.

    Both pipelines consume identical per-round streams with identical draw
    counts, so their outcome distributions (and error rates) must agree up to
    sampling noise; the exact distributions must agree to 1e-10.
    """
    if n_rounds < 0:
        raise ValueError(f"n_rounds must be >= 0, got {n_rounds}")
    exact_dev = exact_equivalence_deviation()
    if n_rounds == 0:
        return EquivalenceReport(exact_dev, 0, None, None, None, None, None, None)
    if strategy is None:
        strategy = EveStrategy(kind="intercept_resend")
    factory = StreamFactory(seed)
    dim = 4
    agree = 0
    cells_a: dict[tuple, np.ndarray] = {}
    cells_p: dict[tuple, np.ndarray] = {}
    errors_a = errors_p = sifted_a = sifted_p = 0
    for i in range(n_rounds):
        rng_a = factory.stream(EQUIVALENCE, i)
        a_basis = PSI if rng_a.integers(2) == 0 else PHI
        a_letter = int(rng_a.integers(dim))
        state_a, _ = apply_strategy(strategy, basis(a_basis, dim).vectors[a_letter], rng_a)
        b_basis = PSI if rng_a.integers(2) == 0 else PHI
        out_a, _ = measure(state_a, basis(b_basis, dim), rng_a.random())

        rng_p = factory.stream(EQUIVALENCE, i)
        pa_basis = PSI if rng_p.integers(2) == 0 else PHI
        pa_letter = int(rng_p.integers(dim))
        state_p = alice_prepare_photonic(pa_basis, pa_letter)
        state_p, _ = _eve_photonic(strategy, state_p, rng_p)
        pb_basis = PSI if rng_p.integers(2) == 0 else PHI
        out_p = bob_analyze_photonic(state_p, pb_basis, rng_p.random()).index

        assert (a_basis, a_letter, b_basis) == (pa_basis, pa_letter, pb_basis)
        key = (a_basis, a_letter, b_basis)
        cells_a.setdefault(key, np.zeros(dim))[out_a] += 1
        cells_p.setdefault(key, np.zeros(dim))[out_p] += 1
        agree += out_a == out_p
        if a_basis == b_basis:
            sifted_a += 1
            sifted_p += 1
            errors_a += out_a != a_letter
            errors_p += out_p != a_letter

    max_freq_dev = 0.0
    for key, counts_a in cells_a.items():
        n = counts_a.sum()
        max_freq_dev = max(max_freq_dev,
                           float(np.abs(counts_a / n - cells_p[key] / n).max()))
    return EquivalenceReport(
        exact_max_deviation=exact_dev,
        n_rounds=n_rounds,
        outcome_agreement=agree / n_rounds,
        max_frequency_deviation=max_freq_dev,
        qter_abstract=errors_a / sifted_a if sifted_a else 0.0,
        qter_photonic=errors_p / sifted_p if sifted_p else 0.0,
        sifted_abstract=sifted_a,
        sifted_photonic=sifted_p,
    )
