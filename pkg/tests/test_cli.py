import json
import math

import pytest
from loguru import logger

from cli import main, run_claims
from cli.reports import (circuit_from_json, circuit_to_json, complex_from_json, distribution_from_json,
                         distribution_to_json, state_from_json, state_to_json)
from detection import DetectorConfig, outcome_distribution
from fock_core import BellKind, bell_state, occ
from optics_elements import CircuitSpec, ElementKind, ElementSpec, PnpConvention
from utils import CircuitValidationError, InvalidInputError

PP_PNP = {"modes": 2, "elements": [{"kind": "ppbs", "ports": [1, 2]}, {"kind": "pnpbs", "ports": [1, 2]}]}
PPBS = {"modes": 2, "elements": [{"kind": "ppbs", "ports": [1, 2]}]}
SMALL_SPACE = {"spatial_mode_count": 2, "max_depth": 1, "element_kinds": ["ppbs", "pnpbs"]}


@pytest.fixture(autouse=True)
def _drop_log_sinks():
    yield
    logger.remove()


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(path)


def _events(dist_json):
    return {tuple(sorted(d["event"].items())): d["probability"] for d in dist_json}


def test_claim_suite_passes():
    claims = run_claims()
    assert claims
    assert [c.name for c in claims if not c.passed] == []


def test_literal_convention_fails_the_split_claims():
    failed = [c.name for c in run_claims(PnpConvention.LITERAL) if not c.passed]
    assert "PP-PNP MZ: |1H,1V> -> -|2H,1V>" in failed
    assert "element unitarity" not in failed


def test_verify_command(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.splitlines()[0].startswith("PASS")


def test_verify_literal_exits_one(capsys):
    assert main(["verify", "--pnp-convention", "literal"]) == 1
    assert "FAIL  PP-PNP MZ" in capsys.readouterr().out


def test_verify_json(capsys):
    assert main(["verify", "--json", "--seed", "11"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert report["seed"] == 11
    assert all(c["passed"] for c in report["claims"])
    assert "pnpbs" in report["conventions"]


def test_simulate_bunched_pair_through_pp_pnp(tmp_path, capsys):
    circuit = _write(tmp_path, "mz.json", PP_PNP)
    state = _write(tmp_path, "hv.json", {"photons": 2, "terms": [{"modes": {"1H": 1, "1V": 1}, "amplitude": [1, 0]}]})
    assert main(["simulate", circuit, "--state-file", state]) == 0
    report = json.loads(capsys.readouterr().out)
    assert _events(report["distribution"]) == pytest.approx({(("1V", 1), ("2H", 1)): 1.0})
    assert state_from_json(report["output"]).amplitude(occ("2H", "1V")) == pytest.approx(-1.0)


def test_simulate_phi_plus_through_ppbs(tmp_path, capsys):
    circuit = _write(tmp_path, "bs.json", PPBS)
    assert main(["simulate", circuit, "--state", "phi+"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert _events(report["distribution"]) == pytest.approx({
        (("1H", 2),): 0.25, (("1V", 2),): 0.25, (("2H", 2),): 0.25, (("2V", 2),): 0.25})


def test_simulate_empty_circuit_echoes_input(tmp_path, capsys):
    circuit = _write(tmp_path, "empty.json", {"modes": 2, "elements": []})
    out_path = tmp_path / "report.json"
    assert main(["simulate", circuit, "--state", "psi-", "--out", str(out_path)]) == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["input"] == report["output"]
    assert state_from_json(report["output"]).allclose(bell_state(BellKind.PsiMinus))
    assert _events(report["distribution"]) == pytest.approx({
        (("1H", 1), ("2V", 1)): 0.5, (("1V", 1), ("2H", 1)): 0.5})


def test_simulate_polarization_blind(tmp_path, capsys):
    circuit = _write(tmp_path, "bs.json", PPBS)
    assert main(["simulate", circuit, "--state", "psi+", "--pol-blind"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert _events(report["distribution"]) == pytest.approx({(("1", 2),): 0.5, (("2", 2),): 0.5})


def test_discriminate(tmp_path, capsys):
    circuit = _write(tmp_path, "bs.json", PPBS)
    assert main(["discriminate", circuit]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["bayes_success"] == pytest.approx(0.75)
    assert report["unambiguous_success"] == pytest.approx(0.5)
    assert set(report["conditioned"]) == {"psi-", "psi+", "phi-", "phi+"}
    assert len(report["confusable_pairs"]) == 6


def test_search_reports_are_identical_across_worker_counts(tmp_path, capsys):
    space = _write(tmp_path, "space.json", SMALL_SPACE)
    reports = []
    for workers in ("1", "2"):
        out = tmp_path / f"search-{workers}.json"
        assert main(["search", space, "--workers", workers, "--out", str(out), "--quiet"]) == 0
        reports.append(json.loads(out.read_text(encoding="utf-8")))
    assert "best_unambiguous: 0.5000000000" in capsys.readouterr().out
    for r in reports:
        r.pop("timing")
    assert reports[0] == reports[1]
    assert reports[0]["circuits_evaluated"] == 2
    assert reports[0]["ceiling_exceeded"] is False


def test_search_yaml_space(tmp_path, capsys):
    space = _write(tmp_path, "space.yaml", "spatial_mode_count: 2\nmax_depth: 1\nelement_kinds: [ppbs]\n")
    assert main(["search", space, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["circuits_evaluated"] == 1
    assert report["best_bayes"] == pytest.approx(0.75)


def test_cascade(capsys):
    assert main(["cascade", "--initial", "hh", "--stages", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [s["stage"] for s in report["stages"]] == [1, 2, 3]
    assert all(s["p_split"] == pytest.approx(0.5) for s in report["stages"])


def test_malformed_circuit_json_reports_position(tmp_path, capsys):
    circuit = _write(tmp_path, "bad.json", '{"modes": 2,\n "elements": [}')
    assert main(["simulate", circuit, "--state", "psi+"]) == 2
    assert "bad.json:2:" in capsys.readouterr().err


def test_invalid_port_names_element(tmp_path, capsys):
    circuit = _write(tmp_path, "bad.json", {"modes": 2, "elements": [{"kind": "ppbs", "ports": [1, 3]}]})
    assert main(["discriminate", circuit]) == 2
    assert "element 0" in capsys.readouterr().err


@pytest.mark.parametrize("circuit", [
    {"modes": 2, "elements": [{"kind": "rotator", "ports": [1], "angle": "x"}]},
    {"modes": 2, "elements": [{"kind": "ppbs", "ports": ["a", 2]}]},
    {"modes": 2, "elements": [{"kind": "rotator", "ports": [1], "angle": [0.1]}]},
    {"modes": 2, "elements": [5]},
    {"modes": 2, "elements": 5},
])
def test_malformed_circuit_values_are_usage_errors(tmp_path, capsys, circuit):
    path = _write(tmp_path, "c.json", circuit)
    assert main(["simulate", path, "--state", "psi+"]) == 2
    assert "error:" in capsys.readouterr().err


def test_non_utf8_circuit_file_is_usage_error(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_bytes(json.dumps(PPBS).encode("utf-8") + b"\xff")
    assert main(["simulate", str(path), "--state", "psi+"]) == 2
    assert "c.json" in capsys.readouterr().err


@pytest.mark.parametrize("state", [
    [{"modes": {"1H": "a", "2V": 1}, "amplitude": 1.0}],
    [{"modes": {"1H": 1.5, "2V": 1}, "amplitude": 1.0}],
    [{"modes": ["1H", "2V"], "amplitude": 1.0}],
    [{"modes": {"1H": 1, "2V": 1}, "amplitude": ["a", 0]}],
    {"photons": "two", "terms": [{"modes": {"1H": 1, "2V": 1}, "amplitude": 1.0}]},
    {"1H": "a"},
])
def test_malformed_state_file_is_usage_error(tmp_path, state):
    circuit = _write(tmp_path, "c.json", PPBS)
    state_path = _write(tmp_path, "s.json", state)
    assert main(["simulate", circuit, "--state-file", state_path]) == 2


def test_missing_file_is_io_error(tmp_path):
    assert main(["discriminate", str(tmp_path / "nope.json")]) == 3


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["simulate"],
    ["simulate", "c.json"],
    ["cascade", "--initial", "xx"],
    ["cascade", "--stages", "0"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_circuit_json_round_trip():
    spec = CircuitSpec(3, (ElementSpec(ElementKind.PNPBS, (2, 3)),
                           ElementSpec(ElementKind.PolRotator, (1,), math.pi / 8),
                           ElementSpec(ElementKind.PhaseShifter, (2,), -0.5)))
    assert circuit_from_json(json.loads(json.dumps(circuit_to_json(spec)))) == spec


def test_circuit_json_errors():
    with pytest.raises(CircuitValidationError) as info:
        circuit_from_json({"modes": 2, "elements": [{"kind": "ppbs", "ports": [1, 2]}, {"kind": "rotator"}]})
    assert info.value.element_index == 1
    with pytest.raises(CircuitValidationError):
        circuit_from_json({"elements": []})


def test_state_and_distribution_round_trip():
    state = bell_state(BellKind.PsiMinus).scale(1j)
    again = state_from_json(json.loads(json.dumps(state_to_json(state))))
    assert again == state
    dist = outcome_distribution(state, DetectorConfig.polarization_blind((1, 2)))
    assert distribution_from_json(json.loads(json.dumps(distribution_to_json(dist)))) == dist


def test_complex_from_json():
    assert complex_from_json([0.5, -1]) == complex(0.5, -1)
    assert complex_from_json(2) == 2
    with pytest.raises(InvalidInputError):
        complex_from_json("1+2j")
