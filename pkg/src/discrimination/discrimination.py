"""Success metrics for telling the four Bell states apart with one fixed setup.

The circuit and detectors stay the same for all four inputs; each Bell state
gives one conditioned outcome distribution and the metrics compare them under
a uniform prior.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

from fock_core import BellKind, bell_state
from detection import DetectionEvent, DetectorConfig, OutcomeDistribution, outcome_distribution
from evolution import apply_unitary
from optics_elements import CircuitSpec, ModeUnitary, PnpConvention, compose_circuit
from utils import InvalidInputError

PROB_TOL = 1e-10
UNIFORM_PRIOR = 0.25

ABSTAIN = "abstain"
Guess = Union[BellKind, str]
Strategy = Dict[DetectionEvent, Guess]
Conditioned = Mapping[BellKind, OutcomeDistribution]


@dataclass(frozen=True)
class DiscriminationReport:
    conditioned: Tuple[Tuple[BellKind, OutcomeDistribution], ...]
    bayes_success: float
    unambiguous_success: float
    confusable_pairs: Tuple[Tuple[BellKind, BellKind, float], ...]

    def conditioned_dict(self) -> Dict[BellKind, OutcomeDistribution]:
        return dict(self.conditioned)


def _check_input_modes(input_modes: Tuple[int, int], spatial_mode_count: int) -> None:
    i, j = input_modes
    if i == j or min(i, j) < 1 or max(i, j) > spatial_mode_count:
        raise InvalidInputError(f"input modes {input_modes} invalid for a {spatial_mode_count}-mode circuit")


def conditioned_for_unitary(u: ModeUnitary, cfg: DetectorConfig,
                            input_modes: Tuple[int, int] = (1, 2)) -> Dict[BellKind, OutcomeDistribution]:
    return {kind: outcome_distribution(apply_unitary(bell_state(kind, *input_modes), u), cfg)
            for kind in BellKind}


def conditioned_distributions(spec: CircuitSpec, cfg: DetectorConfig,
                              input_modes: Tuple[int, int] = (1, 2),
                              convention: PnpConvention = PnpConvention.CALIBRATED) -> Dict[BellKind, OutcomeDistribution]:
    _check_input_modes(input_modes, spec.spatial_mode_count)
    cfg.check_within(spec.spatial_mode_count)
    return conditioned_for_unitary(compose_circuit(spec, convention), cfg, input_modes)


def _support(conditioned: Conditioned) -> List[DetectionEvent]:
    events = {e for dist in conditioned.values() for e in dist.events}
    return sorted(events, key=lambda e: e.sort_key())


def map_strategy(conditioned: Conditioned) -> Strategy:
    """Maximum-a-posteriori guess per event; ties go to the earliest BellKind."""
    tables = {k: conditioned[k].as_dict() for k in BellKind}
    strategy: Strategy = {}
    for event in _support(conditioned):
        strategy[event] = max(BellKind, key=lambda k: (tables[k].get(event, 0.0), -list(BellKind).index(k)))
    return strategy


def unambiguous_strategy(conditioned: Conditioned, tol: float = PROB_TOL) -> Strategy:
    """Name a state only on events no other state can produce; abstain otherwise."""
    tables = {k: conditioned[k].as_dict() for k in BellKind}
    strategy: Strategy = {}
    for event in _support(conditioned):
        possible = [k for k in BellKind if tables[k].get(event, 0.0) > tol]
        strategy[event] = possible[0] if len(possible) == 1 else ABSTAIN
    return strategy


def strategy_success(strategy: Strategy, conditioned: Conditioned, prior: float = UNIFORM_PRIOR) -> float:
    total = 0.0
    for kind in BellKind:
        for event, p in conditioned[kind]:
            if strategy.get(event, ABSTAIN) == kind:
                total += prior * p
    return total


def bayes_success(conditioned: Conditioned, prior: float = UNIFORM_PRIOR) -> float:
    tables = [conditioned[k].as_dict() for k in BellKind]
    return prior * sum(max(t.get(e, 0.0) for t in tables) for e in _support(conditioned))


def unambiguous_success(conditioned: Conditioned, prior: float = UNIFORM_PRIOR, tol: float = PROB_TOL) -> float:
    tables = {k: conditioned[k].as_dict() for k in BellKind}
    total = 0.0
    for kind in BellKind:
        others = [tables[k] for k in BellKind if k is not kind]
        for event, p in conditioned[kind]:
            if p > tol and all(o.get(event, 0.0) <= tol for o in others):
                total += p
    return prior * total


def total_variation(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    pd, qd = p.as_dict(), q.as_dict()
    return 0.5 * sum(abs(pd.get(e, 0.0) - qd.get(e, 0.0)) for e in set(pd) | set(qd))


def confusability(conditioned: Conditioned) -> List[Tuple[BellKind, BellKind, float]]:
    return [(a, b, total_variation(conditioned[a], conditioned[b]))
            for a, b in itertools.combinations(BellKind, 2)]


def build_report(conditioned: Conditioned) -> DiscriminationReport:
    return DiscriminationReport(
        conditioned=tuple((k, conditioned[k]) for k in BellKind),
        bayes_success=bayes_success(conditioned),
        unambiguous_success=unambiguous_success(conditioned),
        confusable_pairs=tuple(confusability(conditioned)),
    )


def report_for_unitary(u: ModeUnitary, cfg: DetectorConfig,
                       input_modes: Tuple[int, int] = (1, 2)) -> DiscriminationReport:
    return build_report(conditioned_for_unitary(u, cfg, input_modes))


def discrimination_report(spec: CircuitSpec, cfg: DetectorConfig,
                          input_modes: Tuple[int, int] = (1, 2),
                          convention: PnpConvention = PnpConvention.CALIBRATED) -> DiscriminationReport:
    return build_report(conditioned_distributions(spec, cfg, input_modes, convention))
