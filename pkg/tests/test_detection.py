import pytest

from detection import (Channel, DetectionEvent, DetectorConfig, OutcomeDistribution, PatternClass,
                       classify_pattern, coarse_grain, outcome_distribution, split_bunch_probabilities)
from evolution import evolve_circuit
from fock_core import BellKind, Polarization, bell_state
from optics_elements import CircuitSpec, ElementKind, ElementSpec
from utils import CoverageError, InvalidInputError

H, V = Polarization.H, Polarization.V
PPBS = CircuitSpec(2, (ElementSpec(ElementKind.PPBS, (1, 2)),))
FULL = DetectorConfig.full((1, 2))


def ev(**counts):
    """ev(c1H=1, c2V=1) or ev(c1=2) for polarization-blind channels."""
    out = []
    for key, n in counts.items():
        spatial, pol = key[1:], None
        if spatial[-1] in "HV":
            spatial, pol = spatial[:-1], Polarization[spatial[-1]]
        out.append((Channel(int(spatial), pol), n))
    return DetectionEvent(tuple(out))


def _after_ppbs(kind):
    return evolve_circuit(bell_state(kind), PPBS)


def test_phi_plus_after_ppbs_gives_four_bunched_events():
    dist = outcome_distribution(_after_ppbs(BellKind.PhiPlus), FULL)
    assert dist.as_dict() == pytest.approx({ev(c1H=2): 0.25, ev(c1V=2): 0.25, ev(c2H=2): 0.25, ev(c2V=2): 0.25})
    assert all(classify_pattern(e) is PatternClass.Bunched for e in dist.events)


def test_empty_circuit_psi_minus():
    dist = outcome_distribution(bell_state(BellKind.PsiMinus), FULL)
    assert dist.as_dict() == pytest.approx({ev(c1H=1, c2V=1): 0.5, ev(c1V=1, c2H=1): 0.5})
    assert dist.total() == pytest.approx(1.0)


def test_polarization_blind_detectors():
    dist = outcome_distribution(_after_ppbs(BellKind.PsiPlus), DetectorConfig.polarization_blind((1, 2)))
    assert dist.as_dict() == pytest.approx({ev(c1=2): 0.5, ev(c2=2): 0.5})


def test_threshold_detectors_collapse_counts():
    dist = outcome_distribution(_after_ppbs(BellKind.PhiPlus), DetectorConfig.threshold((1, 2)))
    assert dist.prob(ev(c1H=1)) == pytest.approx(0.25)
    assert dist.prob(ev(c1H=2)) == 0.0
    blind = outcome_distribution(_after_ppbs(BellKind.PsiPlus), DetectorConfig.threshold((1, 2), False))
    assert blind.as_dict() == pytest.approx({ev(c1=1): 0.5, ev(c2=1): 0.5})


def test_unmonitored_support_raises():
    with pytest.raises(CoverageError):
        outcome_distribution(_after_ppbs(BellKind.PsiPlus), DetectorConfig.full((1,)))


def test_monitoring_extra_modes_is_fine():
    dist = outcome_distribution(bell_state(BellKind.PsiMinus), DetectorConfig.full((1, 2, 3)))
    assert len(dist) == 2


def test_coarse_grain_matches_direct_computation():
    state = _after_ppbs(BellKind.PsiPlus)
    fine = outcome_distribution(state, FULL)
    for cfg in (DetectorConfig.polarization_blind((1, 2)), DetectorConfig.threshold((1, 2)),
                DetectorConfig.threshold((1, 2), False)):
        assert coarse_grain(fine, cfg).as_dict() == pytest.approx(outcome_distribution(state, cfg).as_dict())


def test_split_bunch_probabilities():
    assert split_bunch_probabilities(_after_ppbs(BellKind.PsiMinus)) == pytest.approx((1.0, 0.0))
    for kind in (BellKind.PsiPlus, BellKind.PhiMinus, BellKind.PhiPlus):
        assert split_bunch_probabilities(_after_ppbs(kind)) == pytest.approx((0.0, 1.0))


def test_classify_pattern_needs_two_photons():
    assert classify_pattern(ev(c1H=1, c3V=1)) is PatternClass.Split
    assert classify_pattern(ev(c2H=1, c2V=1)) is PatternClass.Bunched
    with pytest.raises(InvalidInputError):
        classify_pattern(ev(c1H=1))


def test_detection_event_is_canonical():
    a = DetectionEvent(((Channel(2, H), 1), (Channel(1, V), 1), (Channel(3, H), 0)))
    b = DetectionEvent(((Channel(1, V), 1), (Channel(2, H), 1)))
    assert a == b
    assert str(a) == "1V,2H"
    assert a.spatial_modes() == (1, 2)
    assert a.relabeled({1: 4}) == ev(c2H=1, c4V=1)


def test_outcome_distribution_drops_negligible_events():
    dist = OutcomeDistribution.from_dict({ev(c1H=2): 1.0, ev(c2H=2): 1e-15})
    assert dist.events == (ev(c1H=2),)


def test_detector_config_validation():
    with pytest.raises(InvalidInputError):
        DetectorConfig(True, True, frozenset())
    with pytest.raises(InvalidInputError):
        DetectorConfig.full((0, 1))
    with pytest.raises(InvalidInputError):
        DetectorConfig.full((1, 4)).check_within(3)
    assert "pol-blind" in DetectorConfig.polarization_blind((1,)).describe()
