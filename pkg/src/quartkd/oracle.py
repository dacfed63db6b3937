"""Exact symbolic probability oracles for eavesdropping analysis.

Everything here is computed by enumerating (sender basis x sender letter x
eavesdropper choice x eavesdropper outcome x receiver outcome) with exact
squared overlaps -- no floating-point sampling.  Squared overlaps at d=4 are
plain rationals (1/4, 3/4, 1/12); at d=2 the intermediate basis brings in
sqrt(2), so the arithmetic runs in sympy's exact field and is reduced to a
rational at the end whenever the result is one.
"""

from fractions import Fraction
from functools import lru_cache
from math import log2

import sympy as sp

from .qudit import PHI, PSI, SUPPORTED_DIMS, THETA

KIND_NONE = "none"
KIND_INTERCEPT_RESEND = "intercept_resend"
KIND_INTERMEDIATE = "intermediate"
STRATEGY_KINDS = (KIND_NONE, KIND_INTERCEPT_RESEND, KIND_INTERMEDIATE)

_HALF = sp.Rational(1, 2)


@lru_cache(maxsize=None)
def exact_basis_matrix(label: str, dim: int) -> sp.ImmutableMatrix:
    """Basis vectors as rows of an exact sympy matrix."""
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {dim}")
    if label == PSI:
        return sp.ImmutableMatrix(sp.eye(dim))
    if label == PHI:
        if dim == 4:
            rows = sp.Matrix([
                [1, 1, 1, 1],
                [1, -1, 1, -1],
                [1, -1, -1, 1],
                [1, 1, -1, -1],
            ]) / 2
        else:
            rows = sp.Matrix([[1, 1], [1, -1]]) / sp.sqrt(2)
        return sp.ImmutableMatrix(rows)
    if label == THETA:
        if dim == 4:
            rows = sp.Matrix([
                [3, 1, 1, 1],
                [1, -3, 1, -1],
                [1, -1, -3, 1],
                [1, 1, -1, -3],
            ]) / (2 * sp.sqrt(3))
        else:
            c = sp.sqrt(2 + sp.sqrt(2)) / 2   # cos(pi/8)
            s = sp.sqrt(2 - sp.sqrt(2)) / 2   # sin(pi/8)
            rows = sp.Matrix([[c, s], [-s, c]])
        return sp.ImmutableMatrix(rows)
    raise ValueError(f"unknown basis label {label!r}")


@lru_cache(maxsize=None)
def exact_outcome_probs(state_label: str, state_letter: int, measure_label: str,
                        dim: int) -> tuple:
    """Exact Born probabilities for measuring a named basis state."""
    state = exact_basis_matrix(state_label, dim).row(state_letter)
    meas = exact_basis_matrix(measure_label, dim)
    probs = []
    for k in range(dim):
        amp = sum(meas[k, j] * state[j] for j in range(dim))
        probs.append(sp.simplify(sp.expand(amp ** 2)))
    assert sp.simplify(sum(probs) - 1) == 0
    return tuple(probs)


def _branches(kind: str, pool: tuple, dim: int):
    """Yield (weight, alice_basis, alice_letter, eve_letter_or_None, forwarded).

    ``forwarded`` is the (basis, letter) pair describing the state sent on to
    the receiver; for an inactive eavesdropper it is the sender's own pair.
    Weights sum to 1 over the enumeration.
    """
    per_letter = _HALF * sp.Rational(1, dim)
    for alice_basis in (PSI, PHI):
        for a in range(dim):
            if kind == KIND_NONE:
                yield per_letter, alice_basis, a, None, (alice_basis, a)
            elif kind == KIND_INTERCEPT_RESEND:
                w_basis = per_letter / len(pool)
                for eve_basis in pool:
                    probs = exact_outcome_probs(alice_basis, a, eve_basis, dim)
                    for e in range(dim):
                        if probs[e] != 0:
                            yield w_basis * probs[e], alice_basis, a, e, (eve_basis, e)
            elif kind == KIND_INTERMEDIATE:
                probs = exact_outcome_probs(alice_basis, a, THETA, dim)
                for e in range(dim):
                    if probs[e] != 0:
                        yield per_letter * probs[e], alice_basis, a, e, (THETA, e)
            else:
                raise ValueError(f"unknown strategy kind {kind!r}")


def _validate(kind: str, pool: tuple, dim: int) -> None:
    if kind not in STRATEGY_KINDS:
        raise ValueError(f"unknown strategy kind {kind!r}")
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {dim}")
    if kind == KIND_INTERCEPT_RESEND and not pool:
        raise ValueError("intercept/resend needs a non-empty basis pool")


def _as_rational(expr) -> sp.Rational:
    value = sp.nsimplify(sp.simplify(expr))
    if not value.is_rational:
        raise ValueError(f"expected a rational result, got {value}")
    return sp.Rational(value)


def to_fraction(expr) -> Fraction:
    r = _as_rational(expr)
    return Fraction(int(r.p), int(r.q))


@lru_cache(maxsize=None)
def sifted_error_rate(kind: str, pool: tuple, dim: int) -> Fraction:
    """Exact sifted-key error probability at interception fraction 1.

    The receiver measures in the sender's basis (only those rounds survive
    sifting); an error is any outcome different from the sender's letter.
    """
    _validate(kind, pool, dim)
    if kind == KIND_NONE:
        return Fraction(0)
    total = sp.Integer(0)
    for weight, alice_basis, a, _eve, (fwd_basis, fwd_letter) in _branches(kind, pool, dim):
        bob_probs = exact_outcome_probs(fwd_basis, fwd_letter, alice_basis, dim)
        total += weight * (1 - bob_probs[a])
    return to_fraction(total)


@lru_cache(maxsize=None)
def bob_correct_probability(kind: str, pool: tuple, dim: int) -> Fraction:
    return 1 - sifted_error_rate(kind, pool, dim)


@lru_cache(maxsize=None)
def eve_letter_accuracy(kind: str, pool: tuple, dim: int) -> float:
    """Exact probability that the eavesdropper's recorded letter matches the sender's."""
    _validate(kind, pool, dim)
    if kind == KIND_NONE:
        raise ValueError("no eavesdropper: accuracy undefined")
    hit = sp.Integer(0)
    for weight, _basis, a, eve_letter, _fwd in _branches(kind, pool, dim):
        if eve_letter == a:
            hit += weight
    return float(sp.simplify(hit))


def eve_letter_accuracy_fraction(kind: str, pool: tuple, dim: int) -> Fraction | None:
    """Accuracy as an exact rational, or None where it is irrational (d=2 intermediate)."""
    _validate(kind, pool, dim)
    if kind == KIND_NONE:
        return None
    hit = sp.Integer(0)
    for weight, _basis, a, eve_letter, _fwd in _branches(kind, pool, dim):
        if eve_letter == a:
            hit += weight
    value = sp.nsimplify(sp.simplify(hit))
    if value.is_rational:
        return Fraction(int(value.p), int(value.q))
    return None


def _information_bits(probs) -> float:
    """Per-symbol information log2(d) + sum p*log2(p), with 0*log2(0) = 0."""
    d = len(probs)
    acc = log2(d)
    for p in probs:
        pf = float(p)
        if pf > 0.0:
            acc += pf * log2(pf)
    return acc


@lru_cache(maxsize=None)
def eve_information_bits(kind: str, pool: tuple, dim: int) -> float:
    """Average per-symbol information the eavesdropper gains, in bits.

    For each of her basis choices, her conditional outcome distribution given
    the sender's state is scored with the per-symbol information formula and
    the scores averaged over sender states and basis choices.
    """
    _validate(kind, pool, dim)
    if kind == KIND_NONE:
        return 0.0
    acc = 0.0
    n_states = 0
    for alice_basis in (PSI, PHI):
        for a in range(dim):
            n_states += 1
            if kind == KIND_INTERCEPT_RESEND:
                per_choice = [
                    _information_bits(exact_outcome_probs(alice_basis, a, b, dim))
                    for b in pool
                ]
                acc += sum(per_choice) / len(per_choice)
            else:
                acc += _information_bits(exact_outcome_probs(alice_basis, a, THETA, dim))
    return acc / n_states
