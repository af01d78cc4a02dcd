"""Improvement-ratio study on random monotone matrix games.

For each sampled game the ratio

    eta mu / (eta mu + (7/16) eta^2 gamma^2),  eta = 1/(4L),

measures how much of the extragradient contraction certificate comes from
strong monotonicity alone: near 0 the singular-value term dominates (the
certificate improves a monotonicity-only rate a lot), near 1 it adds
nothing.  The study samples games at several player splits and writes one
ratio column per split.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateFieldError, DomainError
from .games import GameProblem, constants, random_monotone_game

EG_CERTIFICATE_WEIGHT = 7.0 / 16.0

PAPER_PAIRS = (
    (450, 50),
    (350, 150),
    (250, 250),
    (100, 100),
    (100, 200),
    (100, 300),
    (100, 400),
    (100, 500),
)

CI_PAIRS = (
    (90, 10),
    (70, 30),
    (50, 50),
    (20, 20),
    (20, 40),
    (20, 60),
    (20, 80),
    (20, 100),
)


def improvement_ratio(p: GameProblem) -> float:
    """eta mu / (eta mu + (7/16) eta^2 gamma^2) at eta = 1/(4L)."""
    c = constants(p)
    if c.lipschitz <= 0:
        raise DegenerateFieldError("zero field")
    eta = 1.0 / (4.0 * c.lipschitz)
    denom = eta * c.mu + EG_CERTIFICATE_WEIGHT * eta**2 * c.gamma**2
    if denom <= 0.0:
        raise DegenerateFieldError("mu and gamma are both zero")
    return float(eta * c.mu / denom)


@dataclass(frozen=True)
class ExperimentSpec:
    """One improvement-ratio run: player splits, sample count, seed."""

    name: str
    pairs: Sequence[tuple]
    trials: int
    seed: int
    out_dir: Path

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not self.pairs:
            raise DomainError("need at least one (d1, d2) pair")
        for d1, d2 in self.pairs:
            if d1 < 1 or d2 < 1:
                raise DomainError("player dimensions must be >= 1")
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))
        object.__setattr__(self, "out_dir", Path(self.out_dir))


def column_name(d1: int, d2: int) -> str:
    return f"{d1}vs{d2}"


def sample_ratios(spec: ExperimentSpec) -> dict:
    """Ratios per column; trial i of pair j uses the substream
    (seed, j, i), so any execution order produces identical numbers."""
    out = {}
    for j, (d1, d2) in enumerate(spec.pairs):
        vals = np.empty(spec.trials)
        for i in range(spec.trials):
            game = random_monotone_game(d1, d2, seed=[spec.seed, j, i])
            vals[i] = improvement_ratio(game)
        out[column_name(d1, d2)] = vals
    return out


@dataclass(frozen=True)
class ExperimentResult:
    csv_path: Path
    manifest_path: Path
    columns: dict
    summary: dict
    figure_paths: tuple = dc_field(default_factory=tuple)


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Sample, write the ratio CSV and a JSON manifest, return both.

    CSV layout: one column per pair named "<d1>vs<d2>", ``trials`` rows,
    17 significant digits, LF line endings.  The manifest echoes the spec
    and records per-column summaries plus the balance-direction
    observation (balanced splits should show smaller mean ratios); the
    direction is reported, not enforced.
    """
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    columns = sample_ratios(spec)
    names = list(columns)

    csv_path = spec.out_dir / "gamma.csv"
    with open(csv_path, "w", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(spec.trials):
            fh.write(",".join(f"{columns[n][i]:.17g}" for n in names) + "\n")

    summary = {
        n: {
            "mean": float(np.mean(columns[n])),
            "min": float(np.min(columns[n])),
            "max": float(np.max(columns[n])),
        }
        for n in names
    }
    direction = _direction_report(spec, summary)
    manifest = {
        "name": spec.name,
        "seed": spec.seed,
        "trials": spec.trials,
        "pairs": [list(p) for p in spec.pairs],
        "generator": {"name": "random_monotone", "chi_squared_dof": 1, "prng": "numpy PCG64"},
        "eta_rule": "1/(4L) per instance",
        "columns": summary,
        "direction_report": direction,
    }
    manifest_path = spec.out_dir / "manifest.json"
    with open(manifest_path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ExperimentResult(
        csv_path=csv_path, manifest_path=manifest_path, columns=columns, summary=summary
    )


def _direction_report(spec: ExperimentSpec, summary: dict) -> dict:
    """Mean ratio of the most balanced split vs the least balanced one."""
    def imbalance(pair):
        return abs(pair[0] - pair[1])

    balanced = min(spec.pairs, key=imbalance)
    skewed = max(spec.pairs, key=imbalance)
    mean_balanced = summary[column_name(*balanced)]["mean"]
    mean_skewed = summary[column_name(*skewed)]["mean"]
    return {
        "balanced_pair": list(balanced),
        "skewed_pair": list(skewed),
        "balanced_mean": mean_balanced,
        "skewed_mean": mean_skewed,
        "expected_direction_holds": bool(mean_balanced <= mean_skewed),
    }
