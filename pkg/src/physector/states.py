"""Reference diagonal states: even cat, Fock mixtures, and hybrid wave-plate states.

Only diagonals are kept. Commuting outcomes cannot see coherences, so
nothing downstream needs them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError

__all__ = [
    "DiagonalState",
    "from_diag",
    "even_cat_diagonal",
    "fock_mixture",
    "hybrid_pure_state",
    "HYBRID_ANGLES",
    "CAT_AMPLITUDE",
    "MIXTURE_COMPONENTS",
]

CAT_AMPLITUDE = 0.3536
MIXTURE_COMPONENTS = ((4, 0.25), (9, 0.5), (23, 0.25))

# (theta1, theta2, theta3) giving supports {0,1}, {0,1,2} and {0,1,2,3}
HYBRID_ANGLES = {
    "qubit": (math.pi / 4, 0.0, math.pi / 8),
    "qutrit": (math.pi / 8, 0.0, math.pi / 8),
    "ququart": (math.pi / 8, math.pi / 8, math.pi / 8),
}

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DiagonalState:
    """Diagonal entries on ``n_levels`` basis levels.

    ``truncation_mass`` is the weight that lives outside the modeled levels.
    """

    diag: np.ndarray
    truncation_mass: float = 0.0

    def __post_init__(self):
        d = np.array(self.diag, dtype=np.float64)
        if d.ndim != 1 or d.size < 1:
            raise ValueError(f"diag must be a non-empty vector, got shape {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "truncation_mass", float(self.truncation_mass))

    @property
    def n_levels(self) -> int:
        return self.diag.size

    def support(self, threshold: float = 0.0) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.diag > threshold)[0])

    def __eq__(self, other):
        if not isinstance(other, DiagonalState):
            return NotImplemented
        return self.truncation_mass == other.truncation_mass and np.array_equal(self.diag, other.diag)

    __hash__ = None


def from_diag(diag) -> DiagonalState:
    """Build a state from raw diagonal values, checking the invariants."""
    d = np.asarray(diag, dtype=np.float64)
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise NormalizationError("diagonal entries must be finite and nonnegative")
    total = float(d.sum())
    if total > 1.0 + _SUM_TOL:
        raise NormalizationError(f"diagonal sums to {total!r} > 1")
    return DiagonalState(d, truncation_mass=max(0.0, 1.0 - total))


def even_cat_diagonal(alpha: float, n_levels: int) -> DiagonalState:
    """Photon-number distribution of the even cat state ``|alpha> + |-alpha>``.

    Even levels carry ``alpha**(2n) / n!`` normalized by ``cosh(alpha**2)``;
    odd levels are exactly zero. The state is cut at ``n_levels`` and the
    discarded weight goes to ``truncation_mass``.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    a2 = float(alpha) ** 2
    diag = np.zeros(n_levels)
    if a2 == 0.0:
        diag[0] = 1.0
        return DiagonalState(diag, 0.0)
    log_norm = math.log(math.cosh(a2)) if a2 < 350 else a2 - math.log(2.0)
    for n in range(0, n_levels, 2):
        diag[n] = math.exp(n * math.log(a2) - math.lgamma(n + 1) - log_norm)
    # fsum is correctly rounded, so the mass cannot grow when levels are added
    return DiagonalState(diag, max(0.0, 1.0 - math.fsum(diag)))


def fock_mixture(components, n_levels: int | None = None) -> DiagonalState:
    """Incoherent mixture of Fock states given as ``(level, weight)`` pairs."""
    components = [(int(level), float(w)) for level, w in components]
    if not components:
        raise NormalizationError("mixture needs at least one component")
    levels = [level for level, _ in components]
    if len(set(levels)) != len(levels):
        raise IndexError("duplicate level in mixture")
    if min(levels) < 0:
        raise IndexError("negative level in mixture")
    if any(w <= 0 for _, w in components):
        raise NormalizationError("mixture weights must be positive")
    total = math.fsum(w for _, w in components)
    if abs(total - 1.0) > _SUM_TOL:
        raise NormalizationError(f"mixture weights sum to {total!r}, not 1")
    size = max(levels) + 1
    if n_levels is not None:
        if n_levels < size:
            raise IndexError(f"n_levels={n_levels} cannot hold level {max(levels)}")
        size = n_levels
    diag = np.zeros(size)
    for level, w in components:
        diag[level] = w
    return DiagonalState(diag, 0.0)


def hybrid_pure_state(theta1: float, theta2: float, theta3: float) -> DiagonalState:
    """Level populations of the polarization/path photon after three half-wave plates.

    Basis: 0=(H,a), 1=(V,a), 2=(H,b), 3=(V,b).
    """
    s1, c1 = math.sin(2 * theta1), math.cos(2 * theta1)
    amps = np.array(
        [
            s1 * math.sin(2 * theta3),
            -s1 * math.cos(2 * theta3),
            c1 * math.cos(2 * theta2),
            c1 * math.sin(2 * theta2),
        ]
    )
    diag = amps**2
    return DiagonalState(diag, max(0.0, 1.0 - float(diag.sum())))
