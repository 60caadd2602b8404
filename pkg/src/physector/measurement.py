"""Commuting measurement outcomes described by their diagonal weights.

Outcome ``j`` acts on basis level ``l`` with weight ``c[j, l] >= 0``; for
a diagonal state the Born probability is ``p_j = sum_l c[j, l] rho_ll``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError

__all__ = [
    "COMPLETENESS_TOL",
    "CommutingMeasurement",
    "validate",
    "born_probabilities",
    "identity_measurement",
    "random_measurement",
    "subset",
]

COMPLETENESS_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CommutingMeasurement:
    """A ``J x D`` array of outcome weights plus a completeness flag.

    Construction does not enforce the invariants; use :func:`validate`.
    """

    coefficients: np.ndarray
    complete: bool = False

    def __post_init__(self):
        c = _frozen(self.coefficients)
        if c.ndim != 2:
            raise ShapeError(f"coefficients must be 2-D, got shape {c.shape}")
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "complete", bool(self.complete))

    @property
    def n_outcomes(self) -> int:
        return self.coefficients.shape[0]

    @property
    def n_levels(self) -> int:
        return self.coefficients.shape[1]

    def __eq__(self, other):
        if not isinstance(other, CommutingMeasurement):
            return NotImplemented
        return self.complete == other.complete and np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None


def validate(m: CommutingMeasurement) -> list[str]:
    """Return a list of invariant violations; an empty list means ok."""
    c = m.coefficients
    problems = []
    if m.n_outcomes < 1 or m.n_levels < 1:
        problems.append(f"empty measurement of shape {c.shape}")
        return problems
    if not np.all(np.isfinite(c)):
        problems.append("non-finite coefficient")
        return problems
    for j, l in zip(*np.nonzero(c < 0)):
        problems.append(f"negative coefficient at ({j},{l})")
    if m.complete:
        defects = 1.0 - c.sum(axis=0)
        for l in np.nonzero(np.abs(defects) > COMPLETENESS_TOL)[0]:
            problems.append(f"completeness defect {defects[l]:.6g} at level {l}")
    return problems


def born_probabilities(m: CommutingMeasurement, s) -> np.ndarray:
    """Outcome probabilities for a diagonal state (a DiagonalState or a vector)."""
    diag = np.asarray(getattr(s, "diag", s), dtype=np.float64)
    if diag.shape != (m.n_levels,):
        raise ShapeError(f"state has {diag.shape} levels, measurement has {m.n_levels}")
    return m.coefficients @ diag


def identity_measurement(n_levels: int) -> CommutingMeasurement:
    """Projective measurement onto each basis level."""
    return CommutingMeasurement(np.eye(n_levels), complete=True)


def random_measurement(n_levels: int, n_outcomes: int, seed: int) -> CommutingMeasurement:
    """Random complete measurement: uniform(0, 1) weights, each level normalized.

    Every weight is strictly positive, so each outcome sees every level.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if n_outcomes < 2:
        raise ValueError("a random complete measurement needs at least 2 outcomes")
    rng = np.random.default_rng(seed)
    c = rng.uniform(size=(n_outcomes, n_levels))
    # open interval: the generator's 0.0 has probability ~2**-53 but is not excluded
    c[c == 0.0] = np.finfo(np.float64).tiny
    c /= c.sum(axis=0)
    return CommutingMeasurement(c, complete=True)


def subset(m: CommutingMeasurement, indices) -> CommutingMeasurement:
    """Restrict to the given outcomes. The result is never marked complete."""
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise IndexError("duplicate outcome index in subset")
    for i in idx:
        if not 0 <= i < m.n_outcomes:
            raise IndexError(f"outcome index {i} out of range for {m.n_outcomes} outcomes")
    return CommutingMeasurement(m.coefficients[idx, :], complete=False)
