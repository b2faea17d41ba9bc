"""Exhaustive search of bounded linear-optical circuit families.

Circuits are enumerated depth-major, then lexicographically over the element
alphabet. The enumeration is cut into fixed-size chunks that are evaluated
independently (serially or with joblib workers) and reduced in enumeration
order, so the result never depends on the worker count.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from joblib import Parallel, delayed
from loguru import logger
from tqdm import tqdm

from detection import DetectorConfig, outcome_distribution
from discrimination import bayes_success, unambiguous_success
from evolution import apply_unitary
from fock_core import BellKind, bell_state
from optics_elements import KIND_ORDER, CircuitSpec, ElementKind, ElementSpec, compose_circuit
from utils import ConfigError, load_settings

DEFAULT_SPACE_LABEL = "default desk-scale space (this project's choice of family)"


@dataclass(frozen=True)
class SearchSpace:
    """Photons always enter spatial modes 1 and 2; any further modes start empty."""
    spatial_mode_count: int
    max_depth: int
    element_kinds: Tuple[ElementKind, ...]
    angle_set: Tuple[float, ...] = ()
    detector_configs: Tuple[DetectorConfig, ...] = ()
    label: str = "user-supplied space"

    def __post_init__(self):
        kinds = tuple(k for k in KIND_ORDER if k in set(self.element_kinds))
        object.__setattr__(self, "element_kinds", kinds)
        object.__setattr__(self, "angle_set", tuple(float(a) for a in self.angle_set))
        object.__setattr__(self, "detector_configs", tuple(self.detector_configs))
        if self.spatial_mode_count < 2:
            raise ConfigError(f"search needs at least 2 spatial modes, got {self.spatial_mode_count}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if any(not k.is_beam_splitter for k in kinds) and not self.angle_set:
            raise ConfigError("angle_set must be non-empty when rotators or phase shifters are searched")
        if any(not math.isfinite(a) for a in self.angle_set):
            raise ConfigError("angle_set entries must be finite")
        if not self.detector_configs:
            raise ConfigError("at least one detector configuration is required")
        for cfg in self.detector_configs:
            try:
                cfg.check_within(self.spatial_mode_count)
            except ValueError as e:
                raise ConfigError(str(e))

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], label: str = "user-supplied space") -> "SearchSpace":
        try:
            modes = int(data["spatial_mode_count"])
            kinds = tuple(ElementKind.parse(k) for k in data["element_kinds"])
            raw_detectors = data.get("detectors") or [{}]
            detectors = tuple(
                DetectorConfig(bool(d.get("polarization_resolving", True)),
                               bool(d.get("number_resolving", True)),
                               frozenset(d.get("monitored_spatial_modes") or range(1, modes + 1)))
                for d in raw_detectors)
            return cls(modes, int(data["max_depth"]), kinds, tuple(data.get("angle_set") or ()),
                       detectors, label)
        except KeyError as e:
            raise ConfigError(f"search space is missing required field {e.args[0]!r}")
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"malformed search space: {e}")

    @classmethod
    def default(cls) -> "SearchSpace":
        return cls.from_mapping(load_settings().search, label=DEFAULT_SPACE_LABEL)

    def to_mapping(self) -> Dict[str, Any]:
        return {
            "spatial_mode_count": self.spatial_mode_count,
            "max_depth": self.max_depth,
            "element_kinds": [k.value for k in self.element_kinds],
            "angle_set": list(self.angle_set),
            "detectors": [{"polarization_resolving": c.polarization_resolving,
                           "number_resolving": c.number_resolving,
                           "monitored_spatial_modes": sorted(c.monitored_spatial_modes)}
                          for c in self.detector_configs],
            "label": self.label,
        }


@dataclass(frozen=True)
class TieRecord:
    index: int
    detector_index: int
    circuit: CircuitSpec


@dataclass(frozen=True)
class SearchResult:
    best_unambiguous: float
    best_bayes: float
    unambiguous_ties: Tuple[TieRecord, ...]
    unambiguous_tie_count: int
    bayes_ties: Tuple[TieRecord, ...]
    bayes_tie_count: int
    circuits_evaluated: int
    evaluations: int
    wall_time_s: float
    ceiling_exceeded: bool
    empty_family: bool
    space: SearchSpace


def element_alphabet(space: SearchSpace) -> List[ElementSpec]:
    modes = range(1, space.spatial_mode_count + 1)
    alphabet: List[ElementSpec] = []
    for kind in space.element_kinds:
        if kind.is_beam_splitter:
            alphabet.extend(ElementSpec(kind, pair) for pair in itertools.combinations(modes, 2))
        else:
            alphabet.extend(ElementSpec(kind, (port,), angle) for port in modes for angle in space.angle_set)
    return alphabet


def count_circuits(space: SearchSpace) -> int:
    n = len(element_alphabet(space))
    return sum(n ** d for d in range(1, space.max_depth + 1))


def enumerate_circuits(space: SearchSpace) -> Iterator[CircuitSpec]:
    alphabet = element_alphabet(space)
    for depth in range(1, space.max_depth + 1):
        for elements in itertools.product(alphabet, repeat=depth):
            yield CircuitSpec(space.spatial_mode_count, elements)


@dataclass
class _Best:
    """Running maximum with the earliest `cap` tied records."""
    value: float = -math.inf
    ties: List[TieRecord] = field(default_factory=list)
    count: int = 0

    def offer(self, value: float, record: TieRecord, tol: float, cap: int) -> None:
        if value > self.value + tol:
            self.value, self.ties, self.count = value, [record], 1
        elif value >= self.value - tol:
            self.value = max(self.value, value)
            self.count += 1
            if len(self.ties) < cap:
                self.ties.append(record)

    def merge(self, later: "_Best", tol: float, cap: int) -> None:
        if later.count == 0:
            return
        if self.count == 0 or later.value > self.value + tol:
            self.value, self.ties, self.count = later.value, list(later.ties), later.count
        elif later.value >= self.value - tol:
            self.value = max(self.value, later.value)
            self.ties = (self.ties + later.ties)[:cap]
            self.count += later.count


@dataclass
class _ChunkResult:
    unambiguous: _Best
    bayes: _Best
    circuits: int
    evaluations: int


def _evaluate_chunk(start: int, circuits: Sequence[CircuitSpec], detectors: Sequence[DetectorConfig],
                    tol: float, cap: int) -> _ChunkResult:
    bells = [bell_state(kind, 1, 2) for kind in BellKind]
    u_best, b_best = _Best(), _Best()
    evaluations = 0
    for offset, circuit in enumerate(circuits):
        u = compose_circuit(circuit)
        outputs = [apply_unitary(s, u, check=False) for s in bells]
        for d_idx, cfg in enumerate(detectors):
            conditioned = {kind: outcome_distribution(out, cfg) for kind, out in zip(BellKind, outputs)}
            record = TieRecord(start + offset, d_idx, circuit)
            u_best.offer(unambiguous_success(conditioned), record, tol, cap)
            b_best.offer(bayes_success(conditioned), record, tol, cap)
            evaluations += 1
    return _ChunkResult(u_best, b_best, len(circuits), evaluations)


def _chunks(space: SearchSpace, size: int) -> Iterator[Tuple[int, List[CircuitSpec]]]:
    stream = enumerate_circuits(space)
    start = 0
    while True:
        chunk = list(itertools.islice(stream, size))
        if not chunk:
            return
        yield start, chunk
        start += len(chunk)


def search_max_success(space: SearchSpace, workers: int = 1, progress: bool = False,
                       chunk_size: Optional[int] = None) -> SearchResult:
    settings = load_settings()
    tol = settings.tolerances.probability
    cap = int(settings.search.tie_cap)
    chunk_size = int(chunk_size or settings.search.chunk_size)
    ceiling = float(settings.search.unambiguous_ceiling)

    total = count_circuits(space)
    n_chunks = math.ceil(total / chunk_size) if total else 0
    logger.info("searching {} circuits x {} detector configs ({} chunks, {} workers)",
                total, len(space.detector_configs), n_chunks, workers)

    started = time.perf_counter()
    if workers == 1:
        results = (_evaluate_chunk(start, chunk, space.detector_configs, tol, cap)
                   for start, chunk in _chunks(space, chunk_size))
    else:
        # generator output keeps submission order
        results = Parallel(n_jobs=workers, return_as="generator")(
            delayed(_evaluate_chunk)(start, chunk, space.detector_configs, tol, cap)
            for start, chunk in _chunks(space, chunk_size))

    u_best, b_best = _Best(), _Best()
    circuits = evaluations = 0
    for part in tqdm(results, total=n_chunks, desc="circuits", unit="chunk", disable=not progress):
        u_best.merge(part.unambiguous, tol, cap)
        b_best.merge(part.bayes, tol, cap)
        circuits += part.circuits
        evaluations += part.evaluations
    elapsed = time.perf_counter() - started

    empty = evaluations == 0
    if empty:
        logger.warning("search space {} contains no circuits", space.label)
    best_u = 0.0 if empty else u_best.value
    best_b = 0.0 if empty else b_best.value
    exceeded = best_u > ceiling + settings.tolerances.ceiling
    if exceeded:
        logger.error("CEILING EXCEEDED: unambiguous success {:.12f} > {} (first circuit: {})",
                     best_u, ceiling, u_best.ties[0].circuit if u_best.ties else "?")
    logger.info("best unambiguous {:.10f}, best bayes {:.10f} over {} circuits in {:.1f}s",
                best_u, best_b, circuits, elapsed)

    return SearchResult(
        best_unambiguous=best_u,
        best_bayes=best_b,
        unambiguous_ties=tuple(u_best.ties),
        unambiguous_tie_count=u_best.count,
        bayes_ties=tuple(b_best.ties),
        bayes_tie_count=b_best.count,
        circuits_evaluated=circuits,
        evaluations=evaluations,
        wall_time_s=elapsed,
        ceiling_exceeded=exceeded,
        empty_family=empty,
        space=space,
    )
