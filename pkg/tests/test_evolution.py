import itertools
import math

import numpy as np
import pytest
import sympy
from scipy.stats import unitary_group

from detection import split_bunch_probabilities
from evolution import apply_unitary, evolve_circuit, evolve_sequence
from evolution.oracle import (exact_element_matrix, permanent, permanent_apply, symbolic_apply,
                              symbolic_to_state)
from fock_core import BellKind, PhotonicState, bell_state, bunched_state, normalize, occ
from optics_elements import (CircuitSpec, ElementKind, ElementSpec, ModeUnitary, PnpConvention, all_labels,
                             compose_circuit, element_matrix)
from utils import InvalidInputError

R = 1 / math.sqrt(2)
PPBS = ElementSpec(ElementKind.PPBS, (1, 2))
PNPBS = ElementSpec(ElementKind.PNPBS, (1, 2))


def _state(*pairs):
    return PhotonicState.from_terms([(occ(*photons), amp) for photons, amp in pairs])


def _random_state(rng, labels, photons=2, max_terms=4):
    basis = list(itertools.combinations_with_replacement(labels, photons))
    picks = rng.choice(len(basis), size=rng.integers(1, max_terms + 1), replace=False)
    amps = rng.normal(size=len(picks)) + 1j * rng.normal(size=len(picks))
    return normalize(PhotonicState.from_terms(
        [(occ(*basis[i]), a) for i, a in zip(picks, amps)], photon_number=photons))


def _random_unitary(rng, labels):
    return ModeUnitary(labels, unitary_group.rvs(len(labels), random_state=rng))


class TestBellStatesAtBeamSplitters:
    def test_psi_minus_splits_at_ppbs(self):
        out = evolve_circuit(bell_state(BellKind.PsiMinus), CircuitSpec(2, (PPBS,)))
        assert out.allclose(bell_state(BellKind.PsiMinus))

    def test_psi_plus_bunches_at_ppbs(self):
        out = evolve_circuit(bell_state(BellKind.PsiPlus), CircuitSpec(2, (PPBS,)))
        assert out.allclose(_state((("1H", "1V"), R), (("2H", "2V"), -R)))

    def test_psi_minus_bunches_at_pnpbs(self):
        out = evolve_circuit(bell_state(BellKind.PsiMinus), CircuitSpec(2, (PNPBS,)))
        assert out.allclose(_state((("1H", "1V"), -R), (("2H", "2V"), -R)))

    def test_psi_plus_splits_at_pnpbs(self):
        out = evolve_circuit(bell_state(BellKind.PsiPlus), CircuitSpec(2, (PNPBS,)))
        assert out.allclose(bell_state(BellKind.PsiPlus))

    def test_hong_ou_mandel_dip(self):
        out = evolve_circuit(_state((("1H", "2H"), 1.0)), CircuitSpec(2, (PPBS,)))
        assert out.amplitude(occ("1H", "2H")) == 0
        assert out.allclose(_state((("1H", "1H"), R), (("2H", "2H"), -R)))


class TestMachZehnder:
    def test_pp_pp_keeps_pair_bunched(self):
        spec = CircuitSpec(2, (PPBS, PPBS))
        assert evolve_circuit(_state((("1H", "1V"), 1.0)), spec).allclose(_state((("2H", "2V"), 1.0)))
        for sign in (1.0, -1.0):
            start = bunched_state({"HH": 1.0, "VV": sign})
            expected = bunched_state({"HH": 1.0, "VV": sign}, spatial=2)
            assert evolve_circuit(start, spec).allclose(expected)

    def test_pp_pnp_splits_pair(self):
        spec = CircuitSpec(2, (PPBS, PNPBS))
        assert evolve_circuit(_state((("1H", "1V"), 1.0)), spec).allclose(_state((("2H", "1V"), -1.0)))
        for sign in (1.0, -1.0):
            start = bunched_state({"HH": 1.0, "VV": sign})
            expected = _state((("2H", "2H"), R), (("1V", "1V"), sign * R))
            assert evolve_circuit(start, spec).allclose(expected)

    @pytest.mark.parametrize("sign, psi, phi", [(1.0, BellKind.PsiPlus, BellKind.PhiPlus),
                                                (-1.0, BellKind.PsiMinus, BellKind.PhiMinus)])
    def test_pp_pnp_bunches_psi_and_splits_phi(self, sign, psi, phi):
        spec = CircuitSpec(2, (PPBS, PNPBS))
        psi_out = evolve_circuit(bell_state(psi), spec)
        assert psi_out.allclose(_state((("1H", "1V"), sign * R), (("2H", "2V"), -R)))
        assert split_bunch_probabilities(psi_out)[1] == pytest.approx(1.0)
        phi_out = evolve_circuit(bell_state(phi), spec)
        assert phi_out.allclose(_state((("1H", "2H"), -R), (("1V", "2V"), sign * R)))
        assert split_bunch_probabilities(phi_out)[0] == pytest.approx(1.0)

    def test_literal_pnp_convention_bunches_instead(self):
        spec = CircuitSpec(2, (PPBS, PNPBS))
        out = evolve_circuit(_state((("1H", "1V"), 1.0)), spec, PnpConvention.LITERAL)
        assert out.allclose(_state((("2H", "2V"), -1.0)))


def test_empty_circuit_returns_input():
    s = bell_state(BellKind.PhiMinus)
    assert evolve_circuit(s, CircuitSpec(2)) == s


def test_state_outside_circuit_is_rejected():
    with pytest.raises(InvalidInputError):
        evolve_circuit(bell_state(BellKind.PsiPlus, 1, 3), CircuitSpec(2, (PPBS,)))


def test_non_unitary_matrix_is_rejected():
    u = ModeUnitary(all_labels(1), np.diag([1.0, 2.0]))
    with pytest.raises(InvalidInputError):
        apply_unitary(_state((("1H",), 1.0)), u)


def test_untouched_modes_pass_through():
    s = _state((("1H", "3V"), 1.0))
    out = apply_unitary(s, element_matrix(PPBS))
    assert out.allclose(_state((("1H", "3V"), R), (("2H", "3V"), -R)))


def test_evolve_sequence_matches_composed_circuit():
    spec = CircuitSpec(3, (PPBS, ElementSpec(ElementKind.PolRotator, (2,), 0.4),
                           ElementSpec(ElementKind.PNPBS, (2, 3)), ElementSpec(ElementKind.PhaseShifter, (1,), 1.2)))
    s = bell_state(BellKind.PsiPlus)
    by_elements = evolve_circuit(s, spec)
    by_sequence = evolve_sequence(s, [element_matrix(e) for e in spec.elements])
    by_total = apply_unitary(s, compose_circuit(spec))
    assert by_elements.allclose(by_total, 1e-12)
    assert by_sequence.allclose(by_total, 1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_norm_linearity_and_composition(seed):
    rng = np.random.default_rng(seed)
    labels = all_labels(3)
    for _ in range(40):
        u, v = _random_unitary(rng, labels), _random_unitary(rng, labels)
        a, b = _random_state(rng, labels), _random_state(rng, labels)
        out = apply_unitary(a, u)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)
        c = complex(rng.normal(), rng.normal())
        lhs = apply_unitary(a.add(b.scale(c)), u)
        rhs = out.add(apply_unitary(b, u).scale(c))
        assert lhs.allclose(rhs, 1e-10)
        assert apply_unitary(out, v).allclose(apply_unitary(a, u.then(v)), 1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_matches_symbolic_expansion_oracle(seed):
    # 4 x 250 randomized cases
    rng = np.random.default_rng(1000 + seed)
    labels = all_labels(2)
    for _ in range(250):
        u = _random_unitary(rng, labels)
        s = _random_state(rng, labels, photons=int(rng.integers(1, 4)))
        expected = symbolic_to_state(symbolic_apply(s, labels, u.matrix), s.photon_number)
        assert apply_unitary(s, u).allclose(expected, 1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_matches_permanent_oracle(seed):
    rng = np.random.default_rng(2000 + seed)
    labels = all_labels(3)
    for _ in range(250):
        u = _random_unitary(rng, labels)
        s = _random_state(rng, labels, photons=int(rng.integers(1, 4)))
        assert apply_unitary(s, u).allclose(permanent_apply(s, u), 1e-10)


def test_exact_symbolic_bell_amplitudes():
    labels, matrix = exact_element_matrix(PPBS)
    out = symbolic_apply(bell_state(BellKind.PsiPlus), labels, matrix, exact_amplitudes=True)
    assert set(out) == {occ("1H", "1V"), occ("2H", "2V")}
    assert sympy.simplify(out[occ("1H", "1V")] - sympy.sqrt(2) / 2) == 0
    assert sympy.simplify(out[occ("2H", "2V")] + sympy.sqrt(2) / 2) == 0


def test_exact_matrices_agree_with_numeric():
    rot = ElementSpec(ElementKind.PolRotator, (1,), math.pi / 4)
    for element in (PPBS, PNPBS, rot, ElementSpec(ElementKind.PhaseShifter, (2,), math.pi / 8)):
        for convention in PnpConvention:
            labels, exact = exact_element_matrix(element, convention)
            numeric = element_matrix(element, convention)
            assert labels == numeric.labels
            assert np.allclose(np.array(exact.evalf().tolist(), dtype=complex), numeric.matrix, atol=1e-14)
    _, exact = exact_element_matrix(rot)
    assert exact == sympy.Matrix([[sympy.sqrt(2) / 2, -sympy.sqrt(2) / 2], [sympy.sqrt(2) / 2, sympy.sqrt(2) / 2]])


def test_permanent():
    assert permanent(np.zeros((0, 0))) == 1
    assert permanent(np.array([[1, 2], [3, 4]], dtype=complex)) == pytest.approx(10)
    assert permanent(np.ones((3, 3))) == pytest.approx(6)
