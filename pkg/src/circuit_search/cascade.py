"""Splitting bunched photon pairs with a growing tree of PP beam splitters."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple

from loguru import logger

from detection import split_bunch_probabilities
from evolution import evolve_circuit
from fock_core import OccupationVector, Polarization, PhotonicState, normalize
from optics_elements import CircuitSpec, ElementKind, ElementSpec
from utils import InvalidInputError

PolContent = Tuple[Polarization, ...]


@dataclass(frozen=True)
class CascadeStage:
    stage: int
    p_split: float
    p_bunch: float
    fidelity: float
    branch_probability: float
    spatial_mode_count: int


def _bunched_mode(vec: OccupationVector) -> int | None:
    modes = vec.spatial_modes()
    return modes[0] if len(modes) == 1 else None


def _polarization_content(vec: OccupationVector) -> PolContent:
    return tuple(label.polarization for label in vec.photons())


def _by_location(state: PhotonicState) -> Dict[int, Dict[PolContent, complex]]:
    out: Dict[int, Dict[PolContent, complex]] = defaultdict(dict)
    for vec, amp in state:
        out[_bunched_mode(vec)][_polarization_content(vec)] = amp
    return out


def polarization_fidelity(bunched: PhotonicState, reference: Dict[PolContent, complex]) -> float:
    """<phi|rho_pol|phi> with the bunched location traced out."""
    total = 0.0
    for contents in _by_location(bunched).values():
        overlap = sum((ref.conjugate() * contents.get(key, 0j) for key, ref in reference.items()), 0j)
        total += abs(overlap) ** 2
    return total


def cascade_experiment(initial: PhotonicState, stages: int) -> List[CascadeStage]:
    if stages < 1:
        raise InvalidInputError(f"stages must be >= 1, got {stages}")
    if initial.photon_number != 2:
        raise InvalidInputError(f"cascade needs a two-photon state, got {initial.photon_number} photons")
    locations = {_bunched_mode(vec) for vec, _ in initial}
    if len(locations) != 1 or None in locations:
        raise InvalidInputError("cascade input must be bunched in a single spatial mode")

    state = normalize(initial)
    reference = _by_location(state)[locations.pop()]
    mode_count = max(state.spatial_modes())
    branch = 1.0
    records: List[CascadeStage] = []
    for stage in range(1, stages + 1):
        occupied = state.spatial_modes()
        elements = [ElementSpec(ElementKind.PPBS, (m, m + mode_count)) for m in occupied]
        mode_count *= 2
        state = evolve_circuit(state, CircuitSpec(mode_count, tuple(elements)))

        p_split, p_bunch = split_bunch_probabilities(state)
        bunched = PhotonicState.from_terms(
            ((v, a) for v, a in state if _bunched_mode(v) is not None), state.photon_number)
        state = normalize(bunched)
        branch *= p_bunch
        fidelity = polarization_fidelity(state, reference)
        logger.info("cascade stage {}: P_split={:.12f} P_bunch={:.12f} fidelity={:.12f}",
                    stage, p_split, p_bunch, fidelity)
        records.append(CascadeStage(stage, p_split, p_bunch, fidelity, branch, mode_count))
    return records
