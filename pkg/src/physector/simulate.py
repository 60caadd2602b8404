"""Multinomial detection-event simulation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidProbabilityError

__all__ = ["FrequencyRecord", "sample_frequencies", "restrict_record", "derive_seed", "UNKNOWN_SEED"]

UNKNOWN_SEED = -1
_PROB_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyRecord:
    """Outcome counts from ``n_events`` detection events.

    Counts need not sum to ``n_events``: events that land outside the
    recorded outcomes (incomplete measurement subsets) are dropped, and the
    relative frequencies stay ``counts / n_events``.
    """

    counts: np.ndarray
    n_events: int
    seed: int = UNKNOWN_SEED

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64)
        if c.ndim != 1:
            raise ValueError("counts must be a vector")
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        n = int(self.n_events)
        if n < 1:
            raise ValueError("n_events must be >= 1")
        if int(c.sum()) > n:
            raise ValueError(f"counts sum to {int(c.sum())}, more than n_events={n}")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "n_events", n)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def f(self) -> np.ndarray:
        return self.counts / self.n_events

    @property
    def n_outcomes(self) -> int:
        return self.counts.size

    def __eq__(self, other):
        if not isinstance(other, FrequencyRecord):
            return NotImplemented
        return (self.n_events, self.seed) == (other.n_events, other.seed) and np.array_equal(self.counts, other.counts)

    __hash__ = None


def sample_frequencies(p, n_events: int, seed: int) -> FrequencyRecord:
    """Draw ``n_events`` events from the multinomial law with probabilities ``p``.

    If ``sum(p) < 1`` the remainder is an unreported bin. Sampling cost is
    independent of ``n_events`` (conditional binomials inside numpy), so
    ``n_events = 1e9`` is cheap.
    """
    n_events = int(n_events)
    if n_events < 1:
        raise ValueError("n_events must be >= 1")
    p = np.array(p, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise InvalidProbabilityError("p must be a non-empty vector")
    if not np.all(np.isfinite(p)):
        raise InvalidProbabilityError("p contains non-finite entries")
    if np.any(p < -_PROB_TOL):
        raise InvalidProbabilityError(f"negative probability {p.min()!r}")
    p = np.clip(p, 0.0, None)
    total = float(p.sum())
    if total > 1.0 + _PROB_TOL:
        raise InvalidProbabilityError(f"probabilities sum to {total!r} > 1")
    pvals = np.append(p, max(0.0, 1.0 - total))
    pvals /= pvals.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n_events, pvals)[:-1]
    return FrequencyRecord(counts, n_events, seed)


def restrict_record(record: FrequencyRecord, indices) -> FrequencyRecord:
    """Counts of a subset of outcomes, same ``n_events`` (no renormalization)."""
    return FrequencyRecord(record.counts[list(indices)], record.n_events, record.seed)


def derive_seed(master_seed: int, stream: int, index: int) -> int:
    """Child seed for ``(stream, index)`` under ``master_seed``.

    Uses numpy's SeedSequence so children are statistically independent
    while remaining a pure function of their inputs.
    """
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(stream), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
