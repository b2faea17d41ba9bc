"""Born-rule outcome distributions under configurable photon detectors."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, Optional, Tuple

from loguru import logger

from fock_core import ModeLabel, Polarization, PhotonicState
from utils import CoverageError, InvalidInputError

EVENT_TOL = 1e-12


@dataclass(frozen=True)
class DetectorConfig:
    polarization_resolving: bool = True
    number_resolving: bool = True
    monitored_spatial_modes: FrozenSet[int] = frozenset()

    def __post_init__(self):
        modes = frozenset(int(m) for m in self.monitored_spatial_modes)
        if not modes:
            raise InvalidInputError("detector configuration must monitor at least one spatial mode")
        if min(modes) < 1:
            raise InvalidInputError(f"monitored spatial modes must be >= 1, got {sorted(modes)}")
        object.__setattr__(self, "monitored_spatial_modes", modes)

    @classmethod
    def full(cls, modes: Iterable[int]) -> "DetectorConfig":
        return cls(True, True, frozenset(modes))

    @classmethod
    def polarization_blind(cls, modes: Iterable[int]) -> "DetectorConfig":
        return cls(False, True, frozenset(modes))

    @classmethod
    def threshold(cls, modes: Iterable[int], polarization_resolving: bool = True) -> "DetectorConfig":
        return cls(polarization_resolving, False, frozenset(modes))

    def check_within(self, spatial_mode_count: int) -> None:
        if max(self.monitored_spatial_modes) > spatial_mode_count:
            raise InvalidInputError(
                f"detectors monitor modes {sorted(self.monitored_spatial_modes)} "
                f"but the circuit has only {spatial_mode_count}")

    def describe(self) -> str:
        pol = "pol-resolving" if self.polarization_resolving else "pol-blind"
        num = "number-resolving" if self.number_resolving else "threshold"
        return f"{pol}/{num} on modes {sorted(self.monitored_spatial_modes)}"


@dataclass(frozen=True)
class Channel:
    spatial: int
    polarization: Optional[Polarization] = None

    def sort_key(self) -> Tuple[int, int]:
        return (self.spatial, -1 if self.polarization is None else int(self.polarization))

    def __str__(self) -> str:
        return f"{self.spatial}" if self.polarization is None else f"{self.spatial}{self.polarization.name}"


@dataclass(frozen=True)
class DetectionEvent:
    """Counts per channel in canonical channel order; threshold detectors store 1 per click."""
    counts: Tuple[Tuple[Channel, int], ...]

    def __post_init__(self):
        canonical = tuple(sorted(((c, int(n)) for c, n in self.counts if n > 0), key=lambda t: t[0].sort_key()))
        object.__setattr__(self, "counts", canonical)

    @property
    def total(self) -> int:
        return sum(n for _, n in self.counts)

    def spatial_modes(self) -> Tuple[int, ...]:
        return tuple(sorted({c.spatial for c, _ in self.counts}))

    def relabeled(self, spatial_map: Dict[int, int]) -> "DetectionEvent":
        return DetectionEvent(tuple((Channel(spatial_map.get(c.spatial, c.spatial), c.polarization), n)
                                    for c, n in self.counts))

    def sort_key(self):
        return tuple((c.sort_key(), n) for c, n in self.counts)

    def __str__(self) -> str:
        return ",".join(f"{c}" if n == 1 else f"{c}:{n}" for c, n in self.counts)


@dataclass(frozen=True)
class OutcomeDistribution:
    probabilities: Tuple[Tuple[DetectionEvent, float], ...]

    @classmethod
    def from_dict(cls, probs: Dict[DetectionEvent, float], tol: float = EVENT_TOL) -> "OutcomeDistribution":
        kept = sorted(((e, float(p)) for e, p in probs.items() if p >= tol), key=lambda t: t[0].sort_key())
        return cls(tuple(kept))

    def as_dict(self) -> Dict[DetectionEvent, float]:
        return dict(self.probabilities)

    def prob(self, event: DetectionEvent) -> float:
        return self.as_dict().get(event, 0.0)

    @property
    def events(self) -> Tuple[DetectionEvent, ...]:
        return tuple(e for e, _ in self.probabilities)

    def total(self) -> float:
        return sum(p for _, p in self.probabilities)

    def __iter__(self) -> Iterator[Tuple[DetectionEvent, float]]:
        return iter(self.probabilities)

    def __len__(self) -> int:
        return len(self.probabilities)


class PatternClass(Enum):
    Split = "split"
    Bunched = "bunched"


def _fine_event(counts: Iterable[Tuple[ModeLabel, int]]) -> DetectionEvent:
    return DetectionEvent(tuple((Channel(l.spatial, l.polarization), n) for l, n in counts))


def _coarsen(event: DetectionEvent, cfg: DetectorConfig) -> DetectionEvent:
    merged: Dict[Channel, int] = defaultdict(int)
    for channel, n in event.counts:
        if channel.spatial not in cfg.monitored_spatial_modes:
            continue
        key = channel if cfg.polarization_resolving else Channel(channel.spatial)
        merged[key] += n
    if not cfg.number_resolving:
        merged = {c: 1 for c, n in merged.items() if n > 0}
    return DetectionEvent(tuple(merged.items()))


def coarse_grain(fine: OutcomeDistribution, cfg: DetectorConfig) -> OutcomeDistribution:
    """Marginal of a full-resolving distribution under weaker detectors."""
    probs: Dict[DetectionEvent, float] = defaultdict(float)
    for event, p in fine:
        probs[_coarsen(event, cfg)] += p
    return OutcomeDistribution.from_dict(probs)


def outcome_distribution(state: PhotonicState, cfg: DetectorConfig) -> OutcomeDistribution:
    fine: Dict[DetectionEvent, float] = defaultdict(float)
    for vec, amp in state:
        p = abs(amp) ** 2
        if p < EVENT_TOL:
            continue
        escaped = [s for s in vec.spatial_modes() if s not in cfg.monitored_spatial_modes]
        if escaped:
            raise CoverageError(
                f"{vec} has photons in unmonitored spatial modes {escaped} (probability {p:.3g})")
        fine[_fine_event(vec.counts)] += p
    dist = coarse_grain(OutcomeDistribution.from_dict(fine, tol=0.0), cfg)
    logger.debug("outcome distribution under {}: {} events", cfg.describe(), len(dist))
    return dist


def classify_pattern(ev: DetectionEvent) -> PatternClass:
    if ev.total != 2:
        raise InvalidInputError(f"split/bunch classification needs exactly two detected photons, got {ev.total}")
    return PatternClass.Split if len(ev.spatial_modes()) == 2 else PatternClass.Bunched


def split_bunch_probabilities(state: PhotonicState) -> Tuple[float, float]:
    """(P_split, P_bunch) with full-resolving detectors on every occupied mode."""
    modes = state.spatial_modes()
    if not modes:
        return 0.0, 0.0
    dist = outcome_distribution(state, DetectorConfig.full(modes))
    p_split = sum(p for e, p in dist if classify_pattern(e) is PatternClass.Split)
    p_bunch = sum(p for e, p in dist if classify_pattern(e) is PatternClass.Bunched)
    return p_split, p_bunch
