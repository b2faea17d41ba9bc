"""JSON encodings of circuits, states, distributions and reports.

Complex numbers are written as [re, im] pairs, angles in radians, mode labels
as strings such as "1H", detection events as {channel: count} objects.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

import yaml

from circuit_search import CascadeStage, SearchResult, SearchSpace, TieRecord
from detection import Channel, DetectionEvent, OutcomeDistribution
from discrimination import DiscriminationReport
from fock_core import ModeLabel, OccupationVector, Polarization, PhotonicState
from optics_elements import CircuitSpec, ElementKind, ElementSpec
from utils import CircuitValidationError, ConfigError, InvalidInputError

CONVENTIONS = {
    "bell_states": {
        "psi-": "(|1H,2V> - |1V,2H>)/sqrt2",
        "psi+": "(|1H,2V> + |1V,2H>)/sqrt2",
        "phi-": "(|1H,2H> - |1V,2V>)/sqrt2",
        "phi+": "(|1H,2H> + |1V,2V>)/sqrt2",
    },
    "amplitudes": "coefficients of normalized Fock kets prod (a^dag)^n/sqrt(n!) |0>",
    "mode_matrix": "a^dag_in = sum_out U[out][in] b^dag_out; x = H, y = V",
    "ppbs": "a_i -> (b_i - b_j)/sqrt2, a_j -> (b_i + b_j)/sqrt2 on H and V",
    "pnpbs": ("H as ppbs; V: a_iV -> (b_iV + b_jV)/sqrt2, a_jV -> (-b_iV + b_jV)/sqrt2. "
              "Calibrated so the PP-PNP Mach-Zehnder sends |1H,1V> to -|2H,1V>; the printed "
              "lower-sign table would bunch it instead"),
    "mach_zehnder": "two beam splitters in sequence on the same ports, no internal phase",
    "prior": "uniform 1/4 over the four Bell states",
}


def complex_to_json(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def complex_from_json(value: Any) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise InvalidInputError(f"complex numbers are [re, im] pairs, got {value!r}")


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ConfigError(f"not valid UTF-8 text (byte {e.start})", str(path))


def read_json(path: str | Path) -> Any:
    path = Path(path)
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, str(path), e.lineno, e.colno)


def read_config(path: str | Path) -> Any:
    """JSON, or YAML for .yaml/.yml files."""
    path = Path(path)
    if path.suffix.lower() not in (".yaml", ".yml"):
        return read_json(path)
    try:
        return yaml.safe_load(_read_text(path))
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        raise ConfigError(str(e.problem), str(path), mark.line + 1 if mark else None,
                          mark.column + 1 if mark else None)


def write_json(data: Any, path: str | Path | None) -> str:
    text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# ------- circuits -------

def element_to_json(el: ElementSpec) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": el.kind.value, "ports": list(el.ports)}
    if el.angle is not None:
        out["angle"] = el.angle
    return out


def circuit_to_json(spec: CircuitSpec) -> Dict[str, Any]:
    return {"modes": spec.spatial_mode_count, "elements": [element_to_json(e) for e in spec.elements]}


def circuit_from_json(data: Any) -> CircuitSpec:
    if not isinstance(data, dict) or "modes" not in data:
        raise CircuitValidationError('circuit JSON must be an object with "modes" and "elements"')
    modes = data["modes"]
    if not isinstance(modes, int) or isinstance(modes, bool):
        raise CircuitValidationError(f'"modes" must be an integer, got {modes!r}')
    raw_elements = data.get("elements", [])
    if not isinstance(raw_elements, list):
        raise CircuitValidationError(f'"elements" must be a list, got {raw_elements!r}')
    elements = []
    for i, raw in enumerate(raw_elements):
        try:
            el = ElementSpec(ElementKind.parse(str(raw["kind"])), tuple(raw["ports"]), raw.get("angle"))
            el.check(modes, i)
        except CircuitValidationError as e:
            if e.element_index is None:
                raise CircuitValidationError(str(e), i)
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise CircuitValidationError(f"malformed element {raw!r} ({e})", i)
        elements.append(el)
    return CircuitSpec(modes, tuple(elements))


def load_circuit(path: str | Path) -> CircuitSpec:
    return circuit_from_json(read_json(path))


# ------- states -------

def occupation_to_json(vec: OccupationVector) -> Dict[str, int]:
    return {str(label): n for label, n in vec.counts}


def occupation_from_json(data: Dict[str, int]) -> OccupationVector:
    if not isinstance(data, dict):
        raise InvalidInputError(f"occupation must be a {{label: count}} object, got {data!r}")
    counts = {}
    for k, v in data.items():
        if not isinstance(v, int) or isinstance(v, bool):
            raise InvalidInputError(f"photon count for {k!r} must be an integer, got {v!r}")
        counts[ModeLabel.parse(str(k))] = v
    return OccupationVector.from_mapping(counts)


def state_to_json(state: PhotonicState) -> Dict[str, Any]:
    return {"photons": state.photon_number,
            "terms": [{"modes": occupation_to_json(v), "amplitude": complex_to_json(a)} for v, a in state]}


def state_from_json(data: Any) -> PhotonicState:
    try:
        terms = data["terms"] if isinstance(data, dict) else data
        photons = data.get("photons") if isinstance(data, dict) else None
        pairs = [(occupation_from_json(t["modes"]), complex_from_json(t["amplitude"])) for t in terms]
        if photons is not None and (not isinstance(photons, int) or isinstance(photons, bool)):
            raise InvalidInputError(f"\"photons\" must be an integer, got {photons!r}")
    except InvalidInputError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f"malformed state term list ({e})")
    return PhotonicState.from_terms(pairs, photons)


# ------- detection -------

def event_to_json(ev: DetectionEvent) -> Dict[str, int]:
    return {str(c): n for c, n in ev.counts}


def event_from_json(data: Dict[str, int]) -> DetectionEvent:
    counts = []
    try:
        for key, n in data.items():
            if key[-1].upper() in ("H", "V"):
                counts.append((Channel(int(key[:-1]), Polarization[key[-1].upper()]), int(n)))
            else:
                counts.append((Channel(int(key)), int(n)))
    except (AttributeError, IndexError, TypeError, ValueError) as e:
        raise InvalidInputError(f"malformed detection event {data!r} ({e})")
    return DetectionEvent(tuple(counts))


def distribution_to_json(dist: OutcomeDistribution) -> List[Dict[str, Any]]:
    return [{"event": event_to_json(e), "probability": p} for e, p in dist]


def distribution_from_json(data: Sequence[Dict[str, Any]]) -> OutcomeDistribution:
    return OutcomeDistribution.from_dict({event_from_json(d["event"]): float(d["probability"]) for d in data},
                                         tol=0.0)


def discrimination_to_json(report: DiscriminationReport) -> Dict[str, Any]:
    return {
        "conditioned": {k.value: distribution_to_json(d) for k, d in report.conditioned},
        "bayes_success": report.bayes_success,
        "unambiguous_success": report.unambiguous_success,
        "confusable_pairs": [{"a": a.value, "b": b.value, "total_variation": tv}
                             for a, b, tv in report.confusable_pairs],
    }


# ------- search / cascade -------

def _tie_to_json(t: TieRecord) -> Dict[str, Any]:
    return {"index": t.index, "detector": t.detector_index, "circuit": circuit_to_json(t.circuit)}


def search_result_to_json(result: SearchResult, seed: int | None = None) -> Dict[str, Any]:
    return {
        "space": result.space.to_mapping(),
        "best_unambiguous": result.best_unambiguous,
        "best_bayes": result.best_bayes,
        "ceiling_exceeded": result.ceiling_exceeded,
        "empty_family": result.empty_family,
        "circuits_evaluated": result.circuits_evaluated,
        "evaluations": result.evaluations,
        "unambiguous_argmax": {"count": result.unambiguous_tie_count,
                               "recorded": [_tie_to_json(t) for t in result.unambiguous_ties]},
        "bayes_argmax": {"count": result.bayes_tie_count,
                         "recorded": [_tie_to_json(t) for t in result.bayes_ties]},
        "seed": seed,
        "conventions": CONVENTIONS,
        "timing": {"wall_time_s": result.wall_time_s},
    }


def cascade_to_json(stages: Sequence[CascadeStage]) -> List[Dict[str, Any]]:
    return [{"stage": s.stage, "p_split": s.p_split, "p_bunch": s.p_bunch, "fidelity": s.fidelity,
             "branch_probability": s.branch_probability, "spatial_modes": s.spatial_mode_count}
            for s in stages]


def load_search_space(path: str | Path) -> SearchSpace:
    data = read_config(path)
    if not isinstance(data, dict):
        raise ConfigError("search space must be a mapping", str(path))
    return SearchSpace.from_mapping(data, label=data.get("label", f"user-supplied space ({Path(path).name})"))