"""The fixed suite of operator identities and split/bunch claims checked by `belldisc verify`."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from loguru import logger

from circuit_search import SearchSpace, cascade_experiment, search_max_success
from detection import DetectorConfig, PatternClass, classify_pattern, outcome_distribution, split_bunch_probabilities
from discrimination import conditioned_distributions, confusability, bayes_success, unambiguous_success
from evolution import evolve_circuit
from fock_core import BellKind, PhotonicState, bell_state, bunched_state, normalize, occ
from optics_elements import (CircuitSpec, ElementKind, ElementSpec, PnpConvention, phase_shifter_matrix,
                             pnp_bs_matrix, pol_rotator_matrix, pp_bs_matrix)
from utils import DegenerateStateError

AMP_TOL = 1e-12
PROB_TOL = 1e-10


@dataclass(frozen=True)
class Claim:
    name: str
    expected: str
    computed: str
    passed: bool


def _bs(kind: ElementKind) -> ElementSpec:
    return ElementSpec(kind, (1, 2))


PP_PP_MZ = CircuitSpec(2, (_bs(ElementKind.PPBS), _bs(ElementKind.PPBS)))
PP_PNP_MZ = CircuitSpec(2, (_bs(ElementKind.PPBS), _bs(ElementKind.PNPBS)))
FULL = DetectorConfig.full((1, 2))


def _fmt(state: PhotonicState) -> str:
    return str(state)


def _state_claim(name: str, got: PhotonicState, want: PhotonicState) -> Claim:
    return Claim(name, _fmt(want), _fmt(got), got.allclose(want, AMP_TOL))


def _unitarity_claim(convention: PnpConvention) -> Claim:
    elements = {
        "ppbs": pp_bs_matrix(1, 2),
        "pnpbs": pnp_bs_matrix(1, 2, convention),
        "rotator(pi/8)": pol_rotator_matrix(1, math.pi / 8),
        "phase(pi/3)": phase_shifter_matrix(1, math.pi / 3),
    }
    bad = [name for name, u in elements.items() if not u.is_unitary(AMP_TOL)]
    return Claim("element unitarity",
                 "U^dag U = I for every element", "all unitary" if not bad else f"non-unitary: {bad}", not bad)


def _split_bunch_claims(convention: PnpConvention) -> List[Claim]:
    claims = []
    for kind_bs, splitter in ((ElementKind.PPBS, BellKind.PsiMinus), (ElementKind.PNPBS, BellKind.PsiPlus)):
        spec = CircuitSpec(2, (_bs(kind_bs),))
        for kind in BellKind:
            out = evolve_circuit(bell_state(kind), spec, convention)
            p_split, p_bunch = split_bunch_probabilities(out)
            want_split = kind is splitter
            ok = abs((p_split if want_split else p_bunch) - 1.0) <= PROB_TOL
            claims.append(Claim(
                f"{kind.value} at {kind_bs.value}: {'split' if want_split else 'bunched'}",
                "P=1", f"P_split={p_split:.12f} P_bunch={p_bunch:.12f}", ok))
            if kind in (BellKind.PsiPlus, BellKind.PsiMinus) and not want_split:
                dist = outcome_distribution(out, FULL)
                hv_only = all(sorted(c.polarization.name for c, n in e.counts for _ in range(n)) == ["H", "V"]
                              for e, _ in dist if classify_pattern(e) is PatternClass.Bunched)
                claims.append(Claim(f"{kind.value} at {kind_bs.value}: bunches only as |HV>", "one H + one V",
                                    "one H + one V" if hv_only else "other polarization content", hv_only))
    return claims


def _mz_claims(convention: PnpConvention) -> List[Claim]:
    hv = PhotonicState.from_terms([(occ("1H", "1V"), 1.0)])
    claims = [
        _state_claim("PP-PP MZ: |1H,1V> -> |2H,2V>",
                     evolve_circuit(hv, PP_PP_MZ, convention), PhotonicState.from_terms([(occ("2H", "2V"), 1.0)])),
        _state_claim("PP-PNP MZ: |1H,1V> -> -|2H,1V>",
                     evolve_circuit(hv, PP_PNP_MZ, convention),
                     PhotonicState.from_terms([(occ("2H", "1V"), -1.0)])),
    ]
    for sign, label in ((-1.0, "-"), (1.0, "+")):
        # (a_1H^2 -+ a_1V^2)|0>/2 in normalized kets
        start = bunched_state({"HH": 1.0, "VV": sign}, 1)
        claims.append(_state_claim(
            f"PP-PP MZ: 2H {label} 2V stays bunched in mode 2",
            evolve_circuit(start, PP_PP_MZ, convention),
            normalize(PhotonicState.from_terms([(occ("2H", "2H"), 1.0), (occ("2V", "2V"), sign)]))))
        claims.append(_state_claim(
            f"PP-PNP MZ: 2H {label} 2V -> 2H in mode 2 {label} 2V in mode 1",
            evolve_circuit(start, PP_PNP_MZ, convention),
            normalize(PhotonicState.from_terms([(occ("2H", "2H"), 1.0), (occ("1V", "1V"), sign)]))))
    return claims


def _bosonic_claim() -> Claim:
    combo = PhotonicState.from_terms([(occ("1H", "1V"), 1.0), (occ("1V", "1H"), -1.0)], photon_number=2)
    try:
        normalize(combo)
        ok, got = False, "nonzero state"
    except DegenerateStateError:
        ok, got = True, "zero state"
    return Claim("|HV>_11 - |VH>_11 = 0", "zero state", got, ok)


def _metric_claims(convention: PnpConvention) -> List[Claim]:
    conditioned = conditioned_distributions(CircuitSpec(2, (_bs(ElementKind.PPBS),)), FULL, (1, 2), convention)
    u, b = unambiguous_success(conditioned), bayes_success(conditioned)
    tv = {(a, c): d for a, c, d in confusability(conditioned)}[(BellKind.PhiMinus, BellKind.PhiPlus)]
    return [
        Claim("standard setup unambiguous success", "0.5",
              f"{u:.12f}", abs(u - 0.5) <= PROB_TOL),
        Claim("standard setup Bayes success", "0.75",
              f"{b:.12f}", abs(b - 0.75) <= PROB_TOL),
        Claim("TV(phi+, phi-) after PPBS", "0",
              f"{tv:.12f}", abs(tv) <= PROB_TOL),
    ]


def _cascade_claims(stages: int = 5) -> List[Claim]:
    claims = []
    for name, content in (("|HV>", {"HV": 1.0}), ("|2H>", {"HH": 1.0})):
        records = cascade_experiment(bunched_state(content, 1), stages)
        ok = all(abs(r.p_split - 0.5) <= PROB_TOL and abs(r.p_bunch - 0.5) <= PROB_TOL
                 and abs(r.fidelity - 1.0) <= PROB_TOL for r in records)
        got = "; ".join(f"{r.p_split:.6f}/{r.p_bunch:.6f}/F={r.fidelity:.6f}" for r in records)
        claims.append(Claim(f"cascade of {name}, {stages} stages",
                            "P_split = P_bunch = 0.5, fidelity 1", got, ok))
    return claims


def _small_search_claim() -> Claim:
    space = SearchSpace(2, 1, (ElementKind.PPBS, ElementKind.PNPBS), (), (FULL,))
    result = search_max_success(space)
    ok = abs(result.best_unambiguous - 0.5) <= PROB_TOL and result.circuits_evaluated == 2
    return Claim("depth-1 beam-splitter search", "best 0.5 over 2 circuits",
                 f"best {result.best_unambiguous:.12f} over {result.circuits_evaluated} circuits", ok)


def run_claims(convention: PnpConvention = PnpConvention.CALIBRATED) -> List[Claim]:
    claims: List[Claim] = [_unitarity_claim(convention)]
    claims += _split_bunch_claims(convention)
    claims += _mz_claims(convention)
    claims.append(_bosonic_claim())
    claims += _metric_claims(convention)
    claims += _cascade_claims()
    claims.append(_small_search_claim())
    for c in claims:
        if not c.passed:
            logger.error("claim failed: {} (expected {}, got {})", c.name, c.expected, c.computed)
    return claims
