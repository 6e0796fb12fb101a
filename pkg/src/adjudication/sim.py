"""Monte Carlo cross-check of exact amplification.

Trials are split into fixed-size chunks; chunk ``i`` draws from PCG64 seeded
with ``SeedSequence(seed, spawn_key=(i,))``. Tallies therefore depend only on
the seed and the trial count, never on how many workers share the chunks.

Each version's output is drawn exactly: the distribution's weights are put
over a common denominator ``D`` and a uniform integer in ``[0, D)`` is
compared against the integer cumulative thresholds.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from . import adjudicators
from .bag import Bag
from .errors import ConfigurationError, InputError
from .generalized import Distribution, OutcomeDistribution, amplify
from .outcome import Outcome, outcome_key, outcome_to_json
from .values import decimal_string, rational_to_json

ALGORITHM = "PCG64"
CHUNK_TRIALS = 1 << 16
_MAX_DENOMINATOR = (1 << 63) - 1


@dataclass(frozen=True)
class SimConfig:
    distribution: Distribution
    n_versions: int
    adjudicator: str = "mv"
    trials: int = 100_000
    seed: int = 0
    adjudicator_config: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if isinstance(self.n_versions, bool) or not isinstance(self.n_versions, int) or self.n_versions < 1:
            raise ConfigurationError(f"n_versions must be a positive integer, got {self.n_versions!r}")
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got {self.trials!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 1 << 64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    def to_json(self) -> dict:
        return {
            "distribution": self.distribution.to_json(),
            "n_versions": self.n_versions,
            "adjudicator": self.adjudicator,
            "adjudicator_config": dict(self.adjudicator_config),
            "trials": self.trials,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: Any) -> "SimConfig":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
        try:
            return cls(
                distribution=Distribution.from_json(obj["distribution"]),
                n_versions=obj["n_versions"],
                adjudicator=obj.get("adjudicator", "mv"),
                trials=obj.get("trials", 100_000),
                seed=obj.get("seed", 0),
                adjudicator_config=obj.get("adjudicator_config", {}),
            )
        except (KeyError, TypeError, InputError) as exc:
            raise ConfigurationError(f"invalid simulation config: {exc}") from exc


@dataclass(frozen=True)
class OutcomeStats:
    outcome: Outcome
    count: int
    empirical: Fraction
    exact: Fraction
    deviation: Fraction
    sigma: float

    @property
    def three_sigma(self) -> float:
        return 3 * self.sigma

    def within(self, k: float) -> bool:
        return self.deviation <= k * self.sigma


@dataclass(frozen=True)
class SimReport:
    config: SimConfig
    tallies: Mapping[Outcome, int]
    exact: OutcomeDistribution

    def stats(self) -> list[OutcomeStats]:
        trials = self.config.trials
        keys = sorted(set(self.tallies) | set(self.exact.support()), key=outcome_key)
        out = []
        for o in keys:
            count = self.tallies.get(o, 0)
            emp = Fraction(count, trials)
            p = self.exact.weight(o)
            sigma = math.sqrt(float(p * (1 - p)) / trials)
            out.append(OutcomeStats(o, count, emp, p, abs(emp - p), sigma))
        return out

    def empirical(self) -> dict[Outcome, Fraction]:
        return {s.outcome: s.empirical for s in self.stats()}

    def within(self, k: float = 4.0) -> bool:
        return all(s.within(k) for s in self.stats())

    def max_deviation(self) -> Fraction:
        return max(s.deviation for s in self.stats())

    def to_json(self) -> dict:
        return {
            "algorithm": ALGORITHM,
            "chunk_trials": CHUNK_TRIALS,
            "config": self.config.to_json(),
            "outcomes": [
                {
                    "outcome": outcome_to_json(s.outcome),
                    "count": s.count,
                    "empirical": {**rational_to_json(s.empirical), "decimal": decimal_string(s.empirical)},
                    "exact": {**rational_to_json(s.exact), "decimal": decimal_string(s.exact)},
                    "deviation": decimal_string(s.deviation),
                    "sigma": f"{s.sigma:.12g}",
                    "three_sigma": f"{s.three_sigma:.12g}",
                    "within_4_sigma": s.within(4.0),
                }
                for s in self.stats()
            ],
        }

    def table(self) -> str:
        lines = [f"{'outcome':<22}{'count':>10}{'empirical':>16}{'exact':>16}{'deviation':>16}{'3 sigma':>16}"]
        for s in self.stats():
            lines.append(
                f"{json.dumps(outcome_to_json(s.outcome)):<22}{s.count:>10}"
                f"{decimal_string(s.empirical):>16}{decimal_string(s.exact):>16}"
                f"{decimal_string(s.deviation):>16}{s.three_sigma:>16.6g}"
            )
        lines.append(f"seed={self.config.seed} trials={self.config.trials} algorithm={ALGORITHM}")
        return "\n".join(lines)


def _thresholds(d: Distribution) -> tuple[int, np.ndarray]:
    weights = [w for _, w in d.items()]
    denom = math.lcm(*(w.denominator for w in weights))
    if denom > _MAX_DENOMINATOR:
        raise ConfigurationError(f"common denominator {denom} exceeds what the sampler supports")
    cumulative = np.cumsum([w.numerator * (denom // w.denominator) for w in weights], dtype=np.int64)
    return denom, cumulative


def _chunk_tally(seed: int, chunk: int, trials: int, n: int, denom: int, cumulative: np.ndarray) -> Counter:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    draws = rng.integers(0, denom, size=(trials, n), dtype=np.int64)
    idx = np.searchsorted(cumulative, draws, side="right")
    counts = np.stack([(idx == j).sum(axis=1) for j in range(len(cumulative))], axis=1)
    rows, freq = np.unique(counts, axis=0, return_counts=True)
    return Counter({tuple(int(x) for x in row): int(f) for row, f in zip(rows, freq)})


def count_vectors(cfg: SimConfig, workers: int = 1) -> Counter:
    """Tally of per-trial count vectors (one entry per support value)."""
    if workers < 1:
        raise ConfigurationError("workers must be at least 1")
    denom, cumulative = _thresholds(cfg.distribution)
    chunks = [
        (i, min(CHUNK_TRIALS, cfg.trials - i * CHUNK_TRIALS))
        for i in range(math.ceil(cfg.trials / CHUNK_TRIALS))
    ]

    def job(chunk: tuple[int, int]) -> Counter:
        return _chunk_tally(cfg.seed, chunk[0], chunk[1], cfg.n_versions, denom, cumulative)

    total: Counter = Counter()
    if workers == 1:
        for c in chunks:
            total.update(job(c))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(job, chunks):
                total.update(part)
    return total


def run_sim(cfg: SimConfig, workers: int = 1) -> SimReport:
    adj = adjudicators.make(cfg.adjudicator, cfg.adjudicator_config)
    support = cfg.distribution.support()
    tallies: Counter = Counter()
    for vector, freq in sorted(count_vectors(cfg, workers).items()):
        bag = Bag({v: c for v, c in zip(support, vector)})
        tallies[adj(bag)] += freq
    exact = amplify(cfg.distribution, cfg.n_versions, adj)
    ordered = dict(sorted(tallies.items(), key=lambda kv: outcome_key(kv[0])))
    return SimReport(cfg, ordered, exact)
