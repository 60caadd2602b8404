"""Simulation campaigns: state + measurement sets + data, then extraction.

Seeds for set ``i`` are derived from the master seed with
``derive_seed(master, stream, i)``; stream 0 draws measurements, stream 1
draws data, stream 2 draws outcome subsets.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .extraction import ExtractionReport, run_psep
from .formats import load_state
from .measurement import born_probabilities, identity_measurement, random_measurement, subset
from .simulate import derive_seed, restrict_record, sample_frequencies
from .states import (
    CAT_AMPLITUDE,
    HYBRID_ANGLES,
    MIXTURE_COMPONENTS,
    DiagonalState,
    even_cat_diagonal,
    fock_mixture,
    hybrid_pure_state,
)

__all__ = ["CampaignConfig", "DEMOS", "demo_config", "build_state", "build_campaign", "run_campaign", "SEED_SCHEME"]

SEED_SCHEME = "numpy SeedSequence([master_seed, stream, index]); stream 0 measurements, 1 data, 2 outcome subsets"

STREAM_MEASUREMENT = 0
STREAM_DATA = 1
STREAM_SUBSETS = 2

DATA_MODES = ("fresh", "shared-subsets")
STATE_KINDS = ("cat", "mixture", "hybrid")


@dataclass
class CampaignConfig:
    state: str = "cat"
    cat_alpha: float = CAT_AMPLITUDE
    components: list = field(default_factory=lambda: [list(c) for c in MIXTURE_COMPONENTS])
    angles: list = field(default_factory=lambda: list(HYBRID_ANGLES["qubit"]))
    fov_dim: int = 30
    n_sets: int = 200
    outcomes: int = 40
    n_events: int = 10**7
    alpha: float = 0.05
    seed: int = 1
    data_mode: str = "fresh"
    parent_outcomes: int = 256
    include_identity: bool = False
    order: str = "hint"
    out_dir: str = "."

    def check(self) -> None:
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.n_sets < 1:
            raise ValueError("n_sets must be >= 1")
        if self.n_events < 1:
            raise ValueError("n_events must be >= 1")
        if self.fov_dim < 1:
            raise ValueError("fov_dim must be >= 1")
        if self.outcomes < 2:
            raise ValueError("outcomes must be >= 2")
        if self.data_mode not in DATA_MODES:
            raise ValueError(f"data_mode must be one of {DATA_MODES}")
        if self.order not in ("hint", "default"):
            raise ValueError("order must be 'hint' or 'default'")
        if self.data_mode == "shared-subsets" and self.outcomes > self.parent_outcomes:
            raise ValueError("outcomes per subset exceed parent_outcomes")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def _hybrid(name):
    return {
        "state": "hybrid",
        "angles": list(HYBRID_ANGLES[name]),
        "fov_dim": 4,
        "n_sets": 100,
        "outcomes": 8,
        "n_events": 2_500_000,
        "include_identity": True,
    }


DEMOS = {
    "cat": {"state": "cat"},
    "mixture": {"state": "mixture"},
    "hybrid-qubit": _hybrid("qubit"),
    "hybrid-qutrit": _hybrid("qutrit"),
    "hybrid-ququart": _hybrid("ququart"),
}


def demo_config(name: str, **overrides) -> CampaignConfig:
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}")
    return CampaignConfig(**{**DEMOS[name], **overrides})


def build_state(config: CampaignConfig) -> DiagonalState:
    kind = config.state
    if kind == "cat":
        return even_cat_diagonal(config.cat_alpha, config.fov_dim)
    if kind == "mixture":
        return fock_mixture([tuple(c) for c in config.components], config.fov_dim)
    if kind == "hybrid":
        if config.fov_dim != 4:
            raise ValueError("hybrid states live on 4 levels; set fov_dim to 4")
        return hybrid_pure_state(*config.angles)
    s = load_state(kind)
    if s.n_levels != config.fov_dim:
        raise ValueError(f"state file has {s.n_levels} levels but fov_dim is {config.fov_dim}")
    return s


def build_campaign(config: CampaignConfig, state: DiagonalState | None = None):
    """Return ``(measurement_sets, records)`` for the configured campaign."""
    config.check()
    if state is None:
        state = build_state(config)
    d, seed = config.fov_dim, config.seed
    if config.data_mode == "fresh":
        m_sets = []
        if config.include_identity:
            m_sets.append(identity_measurement(d))
        m_sets += [
            random_measurement(d, config.outcomes, derive_seed(seed, STREAM_MEASUREMENT, i))
            for i in range(config.n_sets)
        ]
        records = [
            sample_frequencies(born_probabilities(m, state), config.n_events, derive_seed(seed, STREAM_DATA, i))
            for i, m in enumerate(m_sets)
        ]
        return m_sets, records

    parent = random_measurement(d, config.parent_outcomes, derive_seed(seed, STREAM_MEASUREMENT, 0))
    parent_record = sample_frequencies(
        born_probabilities(parent, state), config.n_events, derive_seed(seed, STREAM_DATA, 0)
    )
    m_sets, records = subset_campaign(parent, parent_record, config.n_sets, config.outcomes, seed)
    if config.include_identity:
        ident = identity_measurement(d)
        m_sets.insert(0, ident)
        records.insert(
            0, sample_frequencies(born_probabilities(ident, state), config.n_events, derive_seed(seed, STREAM_DATA, 1))
        )
    return m_sets, records


def subset_campaign(parent, parent_record, n_sets: int, outcomes: int, seed: int):
    """Random outcome subsets of one measurement, all reading the same counts."""
    if outcomes > parent.n_outcomes:
        raise ValueError(f"cannot draw {outcomes} outcomes from {parent.n_outcomes}")
    rng = np.random.default_rng(derive_seed(seed, STREAM_SUBSETS, 0))
    m_sets, records = [], []
    for _ in range(n_sets):
        idx = np.sort(rng.choice(parent.n_outcomes, size=outcomes, replace=False))
        m_sets.append(subset(parent, idx))
        records.append(restrict_record(parent_record, idx))
    return m_sets, records


def run_campaign(config: CampaignConfig, workers: int | None = None) -> ExtractionReport:
    m_sets, records = build_campaign(config)
    return run_psep(m_sets, records, config.alpha, order=config.order, workers=workers)
