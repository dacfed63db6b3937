"""Session engine: random preparation, channel traversal, measurement, sifting.

Determinism contract: a session is fully determined by its config (seed
included).  Round i consumes only the stream keyed (ROUND, i); the draw order
inside a round is fixed: sender basis, sender letter, eavesdropper draws (see
eve.apply_strategy), channel-flip draws (only when channel_flip_prob > 0),
receiver basis, receiver measurement uniform.  Rounds may therefore be
evaluated in any order or concurrently without changing the transcript.
"""

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from .eve import NONE, EveRecord, EveStrategy, apply_strategy
from .qudit import (LETTER_NAMES, PHI, PSI, SUPPORTED_DIMS, StateVector,
                    basis, letter_name, measure)
from .streams import ROUND, SAMPLING, StreamFactory


@dataclass(frozen=True)
class ProtocolConfig:
    dim: int = 4
    rounds: int = 100_000
    seed: int = 0
    eve: EveStrategy = NONE
    sample_fraction: float = 0.5
    channel_flip_prob: float = 0.0

    def __post_init__(self):
        if self.dim not in SUPPORTED_DIMS:
            raise ValueError(f"unsupported dimension {self.dim}")
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if not 0.0 < self.sample_fraction < 1.0:
            raise ValueError(f"sample_fraction {self.sample_fraction} outside (0, 1)")
        if not 0.0 <= self.channel_flip_prob < 1.0:
            raise ValueError(f"channel_flip_prob {self.channel_flip_prob} outside [0, 1)")
        StreamFactory(self.seed)  # validates the seed range


@dataclass(frozen=True, slots=True)
class RoundRecord:
    index: int
    alice_basis: str
    alice_letter: int
    eve: EveRecord | None
    bob_basis: str
    bob_letter: int


@dataclass(frozen=True)
class Transcript:
    config: ProtocolConfig
    rounds: tuple[RoundRecord, ...]
    sifted_indices: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sifted_indices", tuple(
            r.index for r in self.rounds if r.alice_basis == r.bob_basis
        ))


@dataclass(frozen=True)
class SiftedKeys:
    """Matching-basis letters, in round order.

    ``eve_letters`` is an analysis-only side channel: -1 marks rounds the
    eavesdropper skipped, None means no eavesdropper was configured.
    """

    alice_letters: np.ndarray
    bob_letters: np.ndarray
    eve_letters: np.ndarray | None = None

    def __len__(self) -> int:
        return self.alice_letters.size


def alice_prepare(dim: int, rng: np.random.Generator) -> tuple[str, int, StateVector]:
    """Uniform basis in {psi, phi}, uniform letter, state = basis vector."""
    label = PSI if rng.integers(2) == 0 else PHI
    letter = int(rng.integers(dim))
    return label, letter, basis(label, dim).vectors[letter]


def bob_measure(state: StateVector, dim: int,
                rng: np.random.Generator) -> tuple[str, int]:
    """Uniform basis in {psi, phi}, Born-rule outcome."""
    if state.dim != dim:
        raise ValueError(f"dimension mismatch: state {state.dim} vs {dim}")
    label = PSI if rng.integers(2) == 0 else PHI
    letter, _ = measure(state, basis(label, dim), rng.random())
    return label, letter


def run_session(config: ProtocolConfig) -> Transcript:
    """Run a full session; deterministic given the config."""
    factory = StreamFactory(config.seed)
    dim = config.dim
    strategy = config.eve
    flip_prob = config.channel_flip_prob
    records = []
    for i in range(config.rounds):
        rng = factory.stream(ROUND, i)
        a_basis, a_letter, state = alice_prepare(dim, rng)
        state, eve_rec = apply_strategy(strategy, state, rng)
        if flip_prob > 0.0 and rng.random() < flip_prob:
            # flip in the carrier's own basis: replace by a different letter
            if eve_rec is None:
                c_basis, c_letter = a_basis, a_letter
            else:
                c_basis, c_letter = eve_rec.basis_used, eve_rec.letter_observed
            c_letter = (c_letter + 1 + int(rng.integers(dim - 1))) % dim
            state = basis(c_basis, dim).vectors[c_letter]
        b_basis, b_letter = bob_measure(state, dim, rng)
        records.append(RoundRecord(i, a_basis, a_letter, eve_rec, b_basis, b_letter))
    return Transcript(config, tuple(records))


def sift(transcript: Transcript) -> SiftedKeys:
    """Keep exactly the matching-basis rounds, preserving order."""
    idx = transcript.sifted_indices
    rounds = transcript.rounds
    alice = np.array([rounds[i].alice_letter for i in idx], dtype=np.int64)
    bob = np.array([rounds[i].bob_letter for i in idx], dtype=np.int64)
    if transcript.config.eve.kind == "none":
        eve_letters = None
    else:
        eve_letters = np.array(
            [-1 if rounds[i].eve is None else rounds[i].eve.letter_observed
             for i in idx], dtype=np.int64)
    return SiftedKeys(alice, bob, eve_letters)


def estimate_qter(keys: SiftedKeys, sample_fraction: float,
                  rng: np.random.Generator) -> tuple[float, SiftedKeys]:
    """Estimate the error rate on a random sample and discard the sample.

    Samples ceil(fraction * len) positions without replacement; the returned
    remaining key contains exactly the unsampled positions, in order.
    """
    n = len(keys)
    if n == 0:
        raise ValueError("empty key")
    if not 0.0 < sample_fraction < 1.0:
        raise ValueError(f"sample_fraction {sample_fraction} outside (0, 1)")
    k = ceil(sample_fraction * n)
    if k >= n:
        raise ValueError(f"sampling {k} of {n} symbols would leave no key")
    picked = rng.choice(n, size=k, replace=False)
    mask = np.zeros(n, dtype=bool)
    mask[picked] = True
    qter = float((keys.alice_letters[mask] != keys.bob_letters[mask]).mean())
    remaining = SiftedKeys(
        keys.alice_letters[~mask],
        keys.bob_letters[~mask],
        None if keys.eve_letters is None else keys.eve_letters[~mask],
    )
    return qter, remaining


def session_sampling_stream(config: ProtocolConfig) -> np.random.Generator:
    """The stream reserved for error-rate sampling in this session."""
    return StreamFactory(config.seed).stream(SAMPLING)


# ---------------------------------------------------------------------------
# serialization


def transcript_to_lines(transcript: Transcript) -> str:
    """One round per line: index, bases and letters, '-' for absent eavesdropper fields."""
    lines = []
    for r in transcript.rounds:
        if r.eve is None:
            eb, el = "-", "-"
        else:
            eb, el = r.eve.basis_used, letter_name(r.eve.letter_observed)
        lines.append(f"{r.index} {r.alice_basis} {letter_name(r.alice_letter)} "
                     f"{eb} {el} {r.bob_basis} {letter_name(r.bob_letter)}")
    return "\n".join(lines) + "\n"


def config_to_dict(config: ProtocolConfig) -> dict:
    return {
        "dim": config.dim,
        "rounds": config.rounds,
        "seed": config.seed,
        "eve": {
            "kind": config.eve.kind,
            "basis_pool": list(config.eve.basis_pool),
            "intercept_fraction": config.eve.intercept_fraction,
        },
        "sample_fraction": config.sample_fraction,
        "channel_flip_prob": config.channel_flip_prob,
    }


def transcript_to_doc(transcript: Transcript) -> dict:
    """Structured-document form of a transcript."""
    rounds = []
    for r in transcript.rounds:
        entry = {
            "index": r.index,
            "alice_basis": r.alice_basis,
            "alice_letter": letter_name(r.alice_letter),
            "bob_basis": r.bob_basis,
            "bob_letter": letter_name(r.bob_letter),
        }
        if r.eve is not None:
            entry["eve_basis"] = r.eve.basis_used
            entry["eve_letter"] = letter_name(r.eve.letter_observed)
        rounds.append(entry)
    return {
        "config": config_to_dict(transcript.config),
        "sifted_indices": list(transcript.sifted_indices),
        "rounds": rounds,
    }
