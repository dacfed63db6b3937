"""Eavesdropping strategies: in-flight state transformations plus predictions.

An active strategy measures the passing state and forwards the observed
eigenstate, so the forwarded state is always a basis vector of the measurement
basis.  Predictions come from the exact enumeration oracle; empirical
statistics are computed from session transcripts.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import analytics, oracle
from .oracle import (KIND_INTERCEPT_RESEND, KIND_INTERMEDIATE, KIND_NONE,
                     STRATEGY_KINDS)
from .qudit import BASIS_LABELS, PHI, PSI, THETA, StateVector, basis, measure


@dataclass(frozen=True)
class EveStrategy:
    """Tagged description of the eavesdropping behavior.

    ``basis_pool`` applies to intercept/resend only (the bases sampled
    uniformly per round); the intermediate strategy always measures in the
    theta basis.  ``intercept_fraction`` is the probability that a given
    round is touched at all.
    """

    kind: str = KIND_NONE
    basis_pool: tuple[str, ...] = (PSI, PHI)
    intercept_fraction: float = 1.0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if not 0.0 <= self.intercept_fraction <= 1.0:
            raise ValueError(f"intercept_fraction {self.intercept_fraction} outside [0, 1]")
        if self.kind == KIND_INTERCEPT_RESEND:
            if not self.basis_pool:
                raise ValueError("intercept/resend needs a non-empty basis pool")
            for label in self.basis_pool:
                if label not in BASIS_LABELS:
                    raise ValueError(f"unknown basis label {label!r} in pool")


@dataclass(frozen=True, slots=True)
class EveRecord:
    """What the eavesdropper did on a round she acted on."""

    basis_used: str
    letter_observed: int


class EveStats(NamedTuple):
    letter_accuracy: float
    info_bits: float


NONE = EveStrategy()


def apply_strategy(strategy: EveStrategy, state: StateVector,
                   rng: np.random.Generator) -> tuple[StateVector, EveRecord | None]:
    """Transform an in-flight state; returns the forwarded state and a record.

    The record is present iff the strategy acted on this round.  Draw order
    per call: one interception uniform (any active kind), then the basis pick
    (intercept/resend only), then the measurement uniform.
    """
    if strategy.kind == KIND_NONE:
        return state, None
    if rng.random() >= strategy.intercept_fraction:
        return state, None
    if strategy.kind == KIND_INTERCEPT_RESEND:
        pool = strategy.basis_pool
        label = pool[int(rng.integers(len(pool)))] if len(pool) > 1 else pool[0]
    else:
        label = THETA
    letter, post = measure(state, basis(label, state.dim), rng.random())
    return post, EveRecord(label, letter)


def predicted_qter(strategy: EveStrategy, dim: int) -> Fraction:
    """Exact sifted-key error probability, scaled by the interception fraction."""
    if strategy.kind == KIND_NONE:
        return Fraction(0)
    base = oracle.sifted_error_rate(strategy.kind, strategy.basis_pool, dim)
    return base * Fraction(str(strategy.intercept_fraction))


def predicted_eve_info(strategy: EveStrategy, dim: int) -> float:
    """Average information gained per sifted symbol, in bits."""
    if strategy.kind == KIND_NONE:
        return 0.0
    base = oracle.eve_information_bits(strategy.kind, strategy.basis_pool, dim)
    return base * strategy.intercept_fraction


def predicted_eve_accuracy(strategy: EveStrategy, dim: int) -> float:
    """Exact probability that a recorded letter matches the sender's."""
    return oracle.eve_letter_accuracy(strategy.kind, strategy.basis_pool, dim)


def eve_empirical_stats(transcript, sifted) -> EveStats:
    """Letter accuracy and plug-in information from a session's records.

    The information estimate is the plug-in mutual information between the
    sender's sifted letters and the eavesdropper's (basis, letter) records,
    conditioned on the sender's basis: basis choices become public during
    sifting, so her score on matching-basis rounds and on conjugate-basis
    rounds are separate terms of the average.
    """
    rounds = transcript.rounds
    dim = transcript.config.dim
    alice = []
    alice_bases = []
    eve_letters = []
    eve_symbols = []
    for idx in transcript.sifted_indices:
        rec = rounds[idx]
        if rec.eve is None:
            continue
        alice.append(rec.alice_letter)
        alice_bases.append(rec.alice_basis)
        eve_letters.append(rec.eve.letter_observed)
        eve_symbols.append(BASIS_LABELS.index(rec.eve.basis_used) * dim
                           + rec.eve.letter_observed)
    if not alice:
        raise ValueError("transcript contains no eavesdropper records on sifted rounds")
    if np.asarray(sifted.alice_letters).size != len(transcript.sifted_indices):
        raise ValueError("sifted keys do not match the transcript")
    alice = np.array(alice)
    alice_bases = np.array(alice_bases)
    eve_letters = np.array(eve_letters)
    eve_symbols = np.array(eve_symbols)
    accuracy = float((alice == eve_letters).mean())
    info = 0.0
    for label in np.unique(alice_bases):
        group = alice_bases == label
        info += (group.mean()
                 * analytics.plugin_mutual_information(alice[group], eve_symbols[group]))
    return EveStats(accuracy, info)
