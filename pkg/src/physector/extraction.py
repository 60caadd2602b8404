"""Physical-sector extraction from commuting-measurement frequencies.

The procedure orders basis levels by a rough diagonal estimate, then tests
growing prefixes of that order. For each candidate subspace a decision
observable ``W = sum_j y_j Pi_j`` is built whose diagonal vanishes on the
subspace and is positive elsewhere. Its data estimate ``w = sum_j y_j f_j``
is near zero only when the subspace supports the data, and the
reliability index ``B = 2 exp(-w**2 / (2 var))`` decides acceptance.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import OutsideFovError, PositivityError, ShapeError
from .measurement import CommutingMeasurement
from .numerics import min_norm_solve, numerical_rank, pseudoinverse
from .simulate import FrequencyRecord

__all__ = [
    "DEFAULT_TOL",
    "DEGENERATE_VARIANCE",
    "DecisionObservable",
    "DecisionStatistic",
    "ExtractionStep",
    "ExtractionReport",
    "diagonal_hint",
    "build_decision_observable",
    "decision_statistic",
    "hoeffding_sample_size",
    "hoeffding_bound",
    "default_fov",
    "run_psep",
    "resolve_workers",
]

DEFAULT_TOL = 1e-8
DEGENERATE_VARIANCE = 1e-300
THREADS_ENV = "PHYSECTOR_THREADS"


@dataclass(frozen=True)
class DecisionObservable:
    y: np.ndarray
    target_subspace: tuple[int, ...]
    fov: tuple[int, ...]
    achieved_diag: np.ndarray
    residual_inf: float
    sum_y_sq: float
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class DecisionStatistic:
    w: float
    variance: float
    b_sub: float
    epsilon: float
    n_events: int


@dataclass
class ExtractionStep:
    k: int
    subspace: tuple[int, ...]
    mean_b_sub: float
    std_b_sub: float
    mean_w: float
    mean_variance: float
    b_sub_per_set: list[float] = field(default_factory=list)


@dataclass
class ExtractionReport:
    sorted_order: tuple[int, ...]
    hint: list[float]
    steps: list[ExtractionStep]
    alpha: float
    extracted_sector: tuple[int, ...] | None
    status: str
    order_mode: str = "hint"
    fov: tuple[int, ...] = ()
    n_sets: int = 0
    warnings: list[str] = field(default_factory=list)

    @property
    def d_phys(self) -> int | None:
        return None if self.extracted_sector is None else len(self.extracted_sector)

    def level_view(self) -> list[dict]:
        """Per-level B_sub in default (ascending) level order.

        A level's value is the mean B_sub of the step that added it.
        Levels never reached are omitted.
        """
        rows = []
        for step in self.steps:
            level = step.subspace[-1]
            rows.append(
                {
                    "level": level,
                    "step": step.k,
                    "mean_b_sub": step.mean_b_sub,
                    "std_b_sub": step.std_b_sub,
                    "in_sector": self.extracted_sector is not None and level in self.extracted_sector,
                }
            )
        return sorted(rows, key=lambda r: r["level"])


TIE_RTOL = 1e-10


def _stable_descending(values, levels):
    """Levels by descending value; values within TIE_RTOL count as tied and go by index."""
    ranked = sorted(levels, key=lambda n: (-values[n], n))
    if not ranked:
        return ()
    scale = max(abs(values[n]) for n in ranked)
    tol = TIE_RTOL * scale
    out, run = [], [ranked[0]]
    for n in ranked[1:]:
        if values[run[0]] - values[n] <= tol:
            run.append(n)
        else:
            out += sorted(run)
            run = [n]
    out += sorted(run)
    return tuple(out)


def diagonal_hint(m: CommutingMeasurement, f) -> tuple[np.ndarray, tuple[int, ...]]:
    """Rough diagonal estimate ``C^+ f`` and the levels sorted by it (descending).

    Ties go to the lower level index. The estimate can be negative; it is
    used only for ordering.
    """
    freqs = np.asarray(getattr(f, "f", f), dtype=np.float64)
    if freqs.shape != (m.n_outcomes,):
        raise ShapeError(f"{freqs.shape[0] if freqs.ndim else 0} frequencies for {m.n_outcomes} outcomes")
    hint = pseudoinverse(m.coefficients) @ freqs
    return hint, _stable_descending(hint, range(m.n_levels))


def _check_levels(levels, n_levels, what):
    levels = tuple(int(n) for n in levels)
    if len(set(levels)) != len(levels):
        raise ValueError(f"duplicate level in {what}")
    for n in levels:
        if not 0 <= n < n_levels:
            raise IndexError(f"{what} level {n} out of range for {n_levels} levels")
    return levels


def build_decision_observable(
    m: CommutingMeasurement, sub, fov=None, tol: float = DEFAULT_TOL
) -> DecisionObservable:
    """Minimum-norm outcome weights that vanish on ``sub`` and equal 1 elsewhere in ``fov``.

    Raises OutsideFovError when the targets cannot be met to ``tol`` and
    PositivityError when an excluded level ends up with weight ``<= tol``.
    """
    if fov is None:
        fov = range(m.n_levels)
    fov = _check_levels(fov, m.n_levels, "fov")
    sub = _check_levels(sub, m.n_levels, "subspace")
    missing = set(sub) - set(fov)
    if missing:
        raise ValueError(f"subspace levels {sorted(missing)} are outside the fov")
    in_sub = set(sub)
    targets = np.array([0.0 if n in in_sub else 1.0 for n in fov])
    system = m.coefficients[:, list(fov)].T
    solved = min_norm_solve(system, targets)
    y = solved.solution
    achieved = system @ y
    if solved.residual_inf > tol:
        raise OutsideFovError(
            f"subspace support test not representable by these outcomes "
            f"(residual {solved.residual_inf:.3g} > tol {tol:.3g}; fov of {len(fov)} levels may exceed the outcome rank)",
            residual=solved.residual_inf,
        )
    for n, a in zip(fov, achieved):
        if n not in in_sub and a <= tol:
            raise PositivityError(f"level {n} received non-positive weight {a:.3g}", residual=solved.residual_inf)
    return DecisionObservable(
        y=y,
        target_subspace=sub,
        fov=fov,
        achieved_diag=achieved,
        residual_inf=solved.residual_inf,
        sum_y_sq=float(y @ y),
        tol=tol,
    )


def decision_statistic(obs: DecisionObservable, f: FrequencyRecord) -> DecisionStatistic:
    """Decision value ``w``, plug-in multinomial variance and the index B_sub.

    The variance uses the observed frequencies in place of the unknown
    probabilities. With (numerically) zero variance the index is 2 if
    ``|w|`` is within the observable's tolerance and 0 otherwise.
    """
    freqs = f.f
    if freqs.shape != obs.y.shape:
        raise ShapeError(f"{freqs.size} frequencies for an observable over {obs.y.size} outcomes")
    y = obs.y
    w = float(y @ freqs)
    variance = max(0.0, float((y * y) @ freqs - w * w) / f.n_events)
    if variance <= DEGENERATE_VARIANCE:
        b_sub = 2.0 if abs(w) <= obs.tol else 0.0
    else:
        b_sub = 2.0 * math.exp(-(w * w) / (2.0 * variance))
    return DecisionStatistic(w=w, variance=variance, b_sub=b_sub, epsilon=abs(w), n_events=f.n_events)


def hoeffding_bound(n_events: int, epsilon: float, sum_y_sq: float) -> float:
    """Upper bound on ``Pr{|w - <W>| >= epsilon}`` after ``n_events`` events."""
    return 2.0 * math.exp(-n_events * epsilon**2 / (2.0 * sum_y_sq))


def hoeffding_sample_size(epsilon: float, alpha: float, sum_y_sq: float) -> int:
    """Smallest event count for which the bound on a deviation ``>= epsilon`` is ``<= alpha``."""
    if epsilon <= 0 or alpha <= 0 or sum_y_sq <= 0:
        raise ValueError("epsilon, alpha and sum_y_sq must be positive")
    if alpha >= 2:
        return 1
    n = math.ceil(-2.0 * math.log(alpha / 2.0) * sum_y_sq / epsilon**2)
    return max(1, n)


def default_fov(m_sets) -> tuple[tuple[int, ...], list[str]]:
    """Largest leading block of levels whose columns have full rank in every set."""
    n_levels = m_sets[0].n_levels
    rank = min(numerical_rank(m.coefficients) for m in m_sets)
    if rank >= n_levels:
        return tuple(range(n_levels)), []
    size = rank
    while size > 0 and any(numerical_rank(m.coefficients[:, :size]) < size for m in m_sets):
        size -= 1
    warning = (
        f"outcome rank {rank} is below the {n_levels} modeled levels; "
        f"field of view reduced to levels 0..{size - 1}"
    )
    return tuple(range(size)), [warning]


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "0") or 0)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def _evaluate(m, record, sub, fov, tol, index):
    try:
        obs = build_decision_observable(m, sub, fov, tol)
    except OutsideFovError as exc:
        exc.set_index = index
        raise
    return decision_statistic(obs, record)


def run_psep(
    m_sets,
    data,
    alpha: float,
    fov=None,
    order: str = "hint",
    tol: float = DEFAULT_TOL,
    workers: int | None = None,
) -> ExtractionReport:
    """Extract the physical sector from one or more measurement sets.

    Parameters
    ----------
    m_sets : sequence of CommutingMeasurement
        Measurement sets over a common basis of ``D`` levels.
    data : sequence of FrequencyRecord
        One record per set, aligned with ``m_sets``.
    alpha : float
        Significance level; the first subspace whose B_sub averaged over
        sets reaches ``alpha`` is accepted.
    fov : sequence of int, optional
        Working levels. Defaults to the largest leading block within rank.
    order : {"hint", "default"}
        Test prefixes of the hint-sorted order or of ascending levels.
    workers : int, optional
        Thread count for per-set evaluation; ``None`` reads PHYSECTOR_THREADS.
    """
    m_sets = list(m_sets)
    data = list(data)
    if not m_sets:
        raise ValueError("at least one measurement set is required")
    if len(m_sets) != len(data):
        raise ShapeError(f"{len(m_sets)} measurement sets but {len(data)} frequency records")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if order not in ("hint", "default"):
        raise ValueError(f"unknown order {order!r}")
    n_levels = m_sets[0].n_levels
    for i, (m, rec) in enumerate(zip(m_sets, data)):
        if m.n_levels != n_levels:
            raise ShapeError(f"measurement set {i} has {m.n_levels} levels, expected {n_levels}")
        if rec.n_outcomes != m.n_outcomes:
            raise ShapeError(f"measurement set {i} has {m.n_outcomes} outcomes but {rec.n_outcomes} counts")

    warnings = []
    if fov is None:
        fov, warnings = default_fov(m_sets)
    else:
        fov = _check_levels(fov, n_levels, "fov")
        for i, m in enumerate(m_sets):
            rank = numerical_rank(m.coefficients[:, list(fov)]) if fov else 0
            if rank < len(fov):
                raise OutsideFovError(
                    f"fov of {len(fov)} levels exceeds the outcome rank {rank}", set_index=i
                )
    if not fov:
        raise OutsideFovError("empty field of view")

    hints = [diagonal_hint(m, rec)[0] for m, rec in zip(m_sets, data)]
    mean_hint = np.mean(hints, axis=0)
    if order == "hint":
        sorted_order = _stable_descending(mean_hint, fov)
    else:
        sorted_order = tuple(sorted(fov))

    n_workers = min(resolve_workers(workers), len(m_sets))
    steps = []
    extracted = None
    status = "fov-exhausted"
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        for size in range(1, len(sorted_order) + 1):
            sub = sorted_order[:size]
            stats = list(
                pool.map(
                    _evaluate,
                    m_sets,
                    data,
                    [sub] * len(m_sets),
                    [fov] * len(m_sets),
                    [tol] * len(m_sets),
                    range(len(m_sets)),
                )
            )
            b = np.array([s.b_sub for s in stats])
            step = ExtractionStep(
                k=size - 1,
                subspace=sub,
                mean_b_sub=float(np.mean(b)),
                std_b_sub=float(np.std(b)),
                mean_w=float(np.mean([s.w for s in stats])),
                mean_variance=float(np.mean([s.variance for s in stats])),
                b_sub_per_set=[float(v) for v in b],
            )
            steps.append(step)
            if size == len(sorted_order):
                # testing the whole fov is vacuous (y = 0); nothing was learned
                extracted = tuple(sorted(sub))
                break
            if step.mean_b_sub >= alpha:
                extracted = tuple(sorted(sub))
                status = "accepted"
                break

    return ExtractionReport(
        sorted_order=sorted_order,
        hint=[float(v) for v in mean_hint],
        steps=steps,
        alpha=float(alpha),
        extracted_sector=extracted,
        status=status,
        order_mode=order,
        fov=fov,
        n_sets=len(m_sets),
        warnings=warnings,
    )
