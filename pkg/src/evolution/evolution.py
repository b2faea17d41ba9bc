"""Evolution of Fock states by creation-operator substitution.

Each basis ket is rewritten as prod(a^dag)^n / sqrt(n!) |0>, every a^dag_in is
replaced by sum_out U[out, in] b^dag_out, the product is multiplied out and the
resulting monomials are converted back to normalized kets (times sqrt(m!)).
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from typing import Dict, Iterable, Tuple

from loguru import logger

from fock_core import ModeLabel, OccupationVector, PhotonicState
from optics_elements import CircuitSpec, ModeUnitary, PnpConvention, element_matrix
from utils import InvalidInputError


def _monomial_amplitude(photons: Tuple[ModeLabel, ...]) -> float:
    """sqrt(prod m!) for a sorted photon tuple."""
    return math.sqrt(math.prod(math.factorial(len(list(g))) for _, g in itertools.groupby(photons)))


def apply_unitary(state: PhotonicState, u: ModeUnitary, check: bool = True) -> PhotonicState:
    if check and not u.is_unitary():
        raise InvalidInputError("refusing to evolve with a non-unitary mode matrix")

    columns: Dict[ModeLabel, list] = {}
    monomials: Dict[Tuple[ModeLabel, ...], complex] = defaultdict(complex)
    for vec, amp in state:
        coeff = amp / vec.factorial_norm()
        cols = []
        for photon in vec.photons():
            if photon not in columns:
                columns[photon] = u.column(photon)
            cols.append(columns[photon])
        for choice in itertools.product(*cols):
            c = coeff
            for _, factor in choice:
                c *= factor
            monomials[tuple(sorted(label for label, _ in choice))] += c

    out = ((OccupationVector.from_photons(photons), c * _monomial_amplitude(photons))
           for photons, c in monomials.items())
    return PhotonicState.from_terms(out, state.photon_number)


def _check_modes(state: PhotonicState, spec: CircuitSpec) -> None:
    outside = [s for s in state.spatial_modes() if s > spec.spatial_mode_count]
    if outside:
        raise InvalidInputError(
            f"state occupies spatial modes {outside} beyond the circuit's {spec.spatial_mode_count}")


def evolve_circuit(state: PhotonicState, spec: CircuitSpec,
                   convention: PnpConvention = PnpConvention.CALIBRATED) -> PhotonicState:
    spec.validate()
    _check_modes(state, spec)
    for element in spec.elements:
        state = apply_unitary(state, element_matrix(element, convention))
        logger.debug("after {}: {} terms", element, len(state))
    return state


def evolve_sequence(state: PhotonicState, unitaries: Iterable[ModeUnitary]) -> PhotonicState:
    for u in unitaries:
        state = apply_unitary(state, u)
    return state
