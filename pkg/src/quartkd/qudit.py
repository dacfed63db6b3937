"""States, bases and Born-rule measurement for two- and four-letter alphabets.

The three basis families:

* ``psi``   -- the computational basis (realized photonically as arrival-time
  slots).
* ``phi``   -- the conjugate basis, mutually unbiased with ``psi``: every
  cross overlap has modulus 1/sqrt(d).
* ``theta`` -- the intermediate basis, maximizing the (equal) overlap with
  the matching ``psi`` and ``phi`` vectors.  For d=4 its squared overlaps
  are 3/4 with the matching letter and 1/12 with every other.

All vectors are stored with the first nonzero amplitude real and positive;
comparisons elsewhere are phase-insensitive (overlap modulus), so the global
phase convention never leaks into results.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SUPPORTED_DIMS = (2, 4)

PSI = "psi"
PHI = "phi"
THETA = "theta"
BASIS_LABELS = (PSI, PHI, THETA)

LETTER_NAMES = ("alpha", "beta", "gamma", "delta")
LETTER_SYMBOLS = ("α", "β", "γ", "δ")

NORM_TOL = 1e-10
PROB_SUM_TOL = 1e-9


class CorruptedStateError(RuntimeError):
    """Measurement probabilities failed to sum to one."""


def letter_name(index: int) -> str:
    return LETTER_NAMES[index]


def parse_letter(name: str) -> int:
    """Inverse of letter_name, accepting names or single Greek symbols."""
    name = name.strip()
    if name in LETTER_NAMES:
        return LETTER_NAMES.index(name)
    if name in LETTER_SYMBOLS:
        return LETTER_SYMBOLS.index(name)
    raise ValueError(f"unknown letter {name!r}")


@dataclass(frozen=True, slots=True)
class StateVector:
    """Normalized complex amplitude vector of dimension ``dim``."""

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        if self.dim not in SUPPORTED_DIMS:
            raise ValueError(f"unsupported dimension {self.dim}; expected one of {SUPPORTED_DIMS}")
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} amplitudes, got shape {amps.shape}")
        norm = np.sum(np.abs(amps) ** 2)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: sum |a_k|^2 = {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.amps, other.amps)

    def __hash__(self):
        return hash((self.dim, self.amps.tobytes()))


@dataclass(frozen=True, slots=True)
class BasisSet:
    """Ordered orthonormal family of ``dim`` state vectors.

    ``matrix`` holds the vectors as rows; ``matrix_conj`` is cached so the
    Born-rule projection is a single matmul in the hot path.
    """

    label: str
    dim: int
    vectors: tuple[StateVector, ...]
    matrix: np.ndarray
    matrix_conj: np.ndarray

    def __post_init__(self):
        if self.label not in BASIS_LABELS:
            raise ValueError(f"unknown basis label {self.label!r}")
        gram = np.abs(self.matrix.conj() @ self.matrix.T)
        if not np.allclose(gram, np.eye(self.dim), atol=NORM_TOL):
            raise ValueError(f"basis {self.label!r} is not orthonormal")


def _make_basis(label: str, dim: int, rows: np.ndarray) -> BasisSet:
    rows = np.asarray(rows, dtype=np.complex128)
    vectors = tuple(StateVector(dim, rows[k]) for k in range(dim))
    matrix = np.vstack([v.amps for v in vectors])
    matrix.flags.writeable = False
    mconj = matrix.conj()
    mconj.flags.writeable = False
    return BasisSet(label, dim, vectors, matrix, mconj)


def _require_dim(dim: int) -> None:
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {dim}; expected one of {SUPPORTED_DIMS}")


@lru_cache(maxsize=None)
def build_psi_basis(dim: int) -> BasisSet:
    """Computational basis: vector k has amplitude 1 in slot k."""
    _require_dim(dim)
    return _make_basis(PSI, dim, np.eye(dim))


@lru_cache(maxsize=None)
def build_phi_basis(dim: int) -> BasisSet:
    """Conjugate basis, mutually unbiased with psi (all overlaps 1/sqrt(d))."""
    _require_dim(dim)
    if dim == 4:
        rows = 0.5 * np.array([
            [1, 1, 1, 1],
            [1, -1, 1, -1],
            [1, -1, -1, 1],
            [1, 1, -1, -1],
        ])
    else:
        rows = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    return _make_basis(PHI, dim, rows)


@lru_cache(maxsize=None)
def build_theta_basis(dim: int) -> BasisSet:
    """Intermediate basis: equal maximal overlap with matching psi and phi vectors.

    For d=4 the vectors carry one dominant coefficient 3/(2*sqrt(3)) and three
    of modulus 1/(2*sqrt(3)), with the sign pattern inherited from phi.  For
    d=2 this is the familiar cos/sin(pi/8) basis halfway between psi and phi.
    """
    _require_dim(dim)
    if dim == 4:
        rows = np.array([
            [3, 1, 1, 1],
            [1, -3, 1, -1],
            [1, -1, -3, 1],
            [1, 1, -1, -3],
        ]) / (2 * np.sqrt(3))
    else:
        c, s = np.cos(np.pi / 8), np.sin(np.pi / 8)
        rows = np.array([[c, s], [-s, c]])
    return _make_basis(THETA, dim, rows)


_BUILDERS = {PSI: build_psi_basis, PHI: build_phi_basis, THETA: build_theta_basis}


def basis(label: str, dim: int) -> BasisSet:
    """Look up one of the three basis families by label."""
    try:
        builder = _BUILDERS[label]
    except KeyError:
        raise ValueError(f"unknown basis label {label!r}") from None
    return builder(dim)


def overlap(a: StateVector, b: StateVector) -> complex:
    """Inner product <a|b>, conjugating the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def exact_outcome_distribution(state: StateVector, basis_set: BasisSet) -> np.ndarray:
    """Born-rule outcome probabilities |<basis_k|state>|^2 for every k."""
    if state.dim != basis_set.dim:
        raise ValueError(f"dimension mismatch: state {state.dim} vs basis {basis_set.dim}")
    return np.abs(basis_set.matrix_conj @ state.amps) ** 2


def measure(state: StateVector, basis_set: BasisSet, u: float) -> tuple[int, StateVector]:
    """Sample a Born-rule outcome using one uniform [0,1) draw.

    The outcome is chosen by cumulative-sum inversion in letter order; the
    final interval absorbs any rounding residue.  Returns the outcome letter
    and the post-measurement state (the corresponding basis vector).
    """
    probs = exact_outcome_distribution(state, basis_set)
    total = probs.sum()
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise CorruptedStateError(f"outcome probabilities sum to {total!r}")
    acc = 0.0
    for k in range(basis_set.dim - 1):
        acc += probs[k]
        if u < acc:
            return k, basis_set.vectors[k]
    k = basis_set.dim - 1
    return k, basis_set.vectors[k]
