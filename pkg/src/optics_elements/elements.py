"""Mode matrices of the optical elements and their composition into circuits.

A ModeUnitary stores the creation-operator substitution table
    a^dag_in = sum_out U[out, in] b^dag_out
over its own mode labels; modes it does not list pass through unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from fock_core import ModeLabel, Polarization
from utils import CircuitValidationError, InvalidInputError

UNITARITY_TOL = 1e-12
_R = 1 / math.sqrt(2)

# 2x2 blocks over (port_i, port_j), columns are inputs
_PP_BLOCK = np.array([[_R, _R], [-_R, _R]])
_PNP_V_CALIBRATED = np.array([[_R, -_R], [_R, _R]])
_PNP_V_LITERAL = np.array([[_R, _R], [_R, -_R]])


class ElementKind(Enum):
    PPBS = "ppbs"
    PNPBS = "pnpbs"
    PolRotator = "rotator"
    PhaseShifter = "phase"

    @property
    def is_beam_splitter(self) -> bool:
        return self in (ElementKind.PPBS, ElementKind.PNPBS)

    @classmethod
    def parse(cls, text: str) -> "ElementKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidInputError(f"unknown element kind {text!r}; expected one of {[k.value for k in cls]}")


KIND_ORDER = tuple(ElementKind)


class PnpConvention(Enum):
    """Sign placement of the PNP beam splitter's V block.

    CALIBRATED reproduces the PP-PNP Mach-Zehnder split of |1H,1V>.
    LITERAL is the printed lower-sign table; it bunches that state instead.
    """
    CALIBRATED = "calibrated"
    LITERAL = "literal"


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    labels: Tuple[ModeLabel, ...]
    matrix: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise InvalidInputError("duplicate mode labels in ModeUnitary")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (len(labels), len(labels)):
            raise InvalidInputError(f"matrix shape {m.shape} does not match {len(labels)} labels")
        m.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(labels)})

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @classmethod
    def identity(cls, labels: Sequence[ModeLabel]) -> "ModeUnitary":
        return cls(tuple(labels), np.eye(len(labels)))

    def index(self, label: ModeLabel) -> Optional[int]:
        return self._index.get(label)

    def column(self, label: ModeLabel, atol: float = 0.0) -> List[Tuple[ModeLabel, complex]]:
        """Output labels and coefficients of a^dag_label; identity when the label is foreign."""
        i = self._index.get(label)
        if i is None:
            return [(label, 1.0 + 0j)]
        col = self.matrix[:, i]
        return [(self.labels[k], complex(col[k])) for k in np.flatnonzero(np.abs(col) > atol)]

    def is_unitary(self, atol: float = UNITARITY_TOL) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(self.dimension), rtol=0.0, atol=atol))

    def embed(self, labels: Sequence[ModeLabel]) -> np.ndarray:
        """Full matrix over `labels`, identity on modes this unitary does not act on."""
        labels = tuple(labels)
        pos = {l: i for i, l in enumerate(labels)}
        missing = [l for l in self.labels if l not in pos]
        if missing:
            raise InvalidInputError(f"cannot embed: modes {', '.join(map(str, missing))} not in target")
        full = np.eye(len(labels), dtype=complex)
        idx = [pos[l] for l in self.labels]
        full[np.ix_(idx, idx)] = self.matrix
        return full

    def then(self, other: "ModeUnitary") -> "ModeUnitary":
        """Apply self first, then other."""
        labels = tuple(sorted(set(self.labels) | set(other.labels)))
        return ModeUnitary(labels, other.embed(labels) @ self.embed(labels))

    def inverse(self) -> "ModeUnitary":
        return ModeUnitary(self.labels, self.matrix.conj().T)

    def scaled(self, phase: complex) -> "ModeUnitary":
        return ModeUnitary(self.labels, self.matrix * phase)

    def allclose(self, other: "ModeUnitary", atol: float = UNITARITY_TOL) -> bool:
        labels = tuple(sorted(set(self.labels) | set(other.labels)))
        return bool(np.allclose(self.embed(labels), other.embed(labels), rtol=0.0, atol=atol))


@dataclass(frozen=True)
class ElementSpec:
    kind: ElementKind
    ports: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "ports", tuple(int(p) for p in self.ports))
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle))
        self.check()

    def check(self, spatial_mode_count: Optional[int] = None, index: Optional[int] = None) -> None:
        kind, ports = self.kind, self.ports
        if kind.is_beam_splitter:
            if len(ports) != 2 or ports[0] == ports[1]:
                raise CircuitValidationError(f"{kind.value} needs two distinct ports, got {list(ports)}", index)
            if self.angle is not None:
                raise CircuitValidationError(f"{kind.value} takes no angle", index)
        else:
            if len(ports) != 1:
                raise CircuitValidationError(f"{kind.value} needs exactly one port, got {list(ports)}", index)
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitValidationError(f"{kind.value} needs a finite angle, got {self.angle!r}", index)
        for p in ports:
            if p < 1 or (spatial_mode_count is not None and p > spatial_mode_count):
                limit = f"1..{spatial_mode_count}" if spatial_mode_count is not None else ">= 1"
                raise CircuitValidationError(f"port {p} outside {limit}", index)

    def __str__(self) -> str:
        ports = ",".join(map(str, self.ports))
        if self.angle is None:
            return f"{self.kind.value}({ports})"
        return f"{self.kind.value}({ports};{self.angle:.6g})"


@dataclass(frozen=True)
class CircuitSpec:
    """Elements in application order (first element acts first)."""
    spatial_mode_count: int
    elements: Tuple[ElementSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.spatial_mode_count, int) or self.spatial_mode_count < 1:
            raise CircuitValidationError(f"mode count must be a positive integer, got {self.spatial_mode_count!r}")
        for i, el in enumerate(self.elements):
            el.check(self.spatial_mode_count, i)

    def mode_labels(self) -> Tuple[ModeLabel, ...]:
        return all_labels(self.spatial_mode_count)

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.elements)) + "]"


def all_labels(spatial_mode_count: int) -> Tuple[ModeLabel, ...]:
    return tuple(ModeLabel(s, p) for s in range(1, spatial_mode_count + 1) for p in Polarization)


def _two_port_labels(port_i: int, port_j: int) -> Tuple[ModeLabel, ...]:
    if port_i == port_j:
        raise InvalidInputError(f"beam splitter ports must differ, got {port_i} twice")
    return (ModeLabel(port_i, Polarization.H), ModeLabel(port_j, Polarization.H),
            ModeLabel(port_i, Polarization.V), ModeLabel(port_j, Polarization.V))


def _block_unitary(port_i: int, port_j: int, h_block: np.ndarray, v_block: np.ndarray) -> ModeUnitary:
    m = np.zeros((4, 4))
    m[:2, :2] = h_block
    m[2:, 2:] = v_block
    return ModeUnitary(_two_port_labels(port_i, port_j), m)


def pp_bs_matrix(port_i: int, port_j: int) -> ModeUnitary:
    """a_i -> (b_i - b_j)/sqrt2, a_j -> (b_i + b_j)/sqrt2 on both polarizations."""
    return _block_unitary(port_i, port_j, _PP_BLOCK, _PP_BLOCK)


def pnp_bs_matrix(port_i: int, port_j: int,
                  convention: PnpConvention = PnpConvention.CALIBRATED) -> ModeUnitary:
    """H block as pp_bs_matrix; V block a_iV -> (b_iV + b_jV)/sqrt2, a_jV -> (-b_iV + b_jV)/sqrt2."""
    v_block = _PNP_V_CALIBRATED if convention is PnpConvention.CALIBRATED else _PNP_V_LITERAL
    return _block_unitary(port_i, port_j, _PP_BLOCK, v_block)


def pol_rotator_matrix(port: int, angle: float) -> ModeUnitary:
    c, s = math.cos(angle), math.sin(angle)
    labels = (ModeLabel(port, Polarization.H), ModeLabel(port, Polarization.V))
    return ModeUnitary(labels, np.array([[c, -s], [s, c]]))


def phase_shifter_matrix(port: int, angle: float) -> ModeUnitary:
    labels = (ModeLabel(port, Polarization.H), ModeLabel(port, Polarization.V))
    return ModeUnitary(labels, np.exp(1j * angle) * np.eye(2))


def element_matrix(element: ElementSpec,
                   convention: PnpConvention = PnpConvention.CALIBRATED) -> ModeUnitary:
    kind = element.kind
    if kind is ElementKind.PPBS:
        return pp_bs_matrix(*element.ports)
    if kind is ElementKind.PNPBS:
        return pnp_bs_matrix(*element.ports, convention=convention)
    if kind is ElementKind.PolRotator:
        return pol_rotator_matrix(element.ports[0], element.angle)
    return phase_shifter_matrix(element.ports[0], element.angle)


def compose_circuit(spec: CircuitSpec,
                    convention: PnpConvention = PnpConvention.CALIBRATED) -> ModeUnitary:
    spec.validate()
    labels = spec.mode_labels()
    total = np.eye(len(labels), dtype=complex)
    for element in spec.elements:
        total = element_matrix(element, convention).embed(labels) @ total
    return ModeUnitary(labels, total)


def compose_unitaries(unitaries: Iterable[ModeUnitary], labels: Sequence[ModeLabel]) -> ModeUnitary:
    labels = tuple(labels)
    total = np.eye(len(labels), dtype=complex)
    for u in unitaries:
        total = u.embed(labels) @ total
    return ModeUnitary(labels, total)


def inverse_circuit_unitaries(spec: CircuitSpec,
                              convention: PnpConvention = PnpConvention.CALIBRATED) -> List[ModeUnitary]:
    """Element-wise inverses in reverse order; composing spec with these gives identity."""
    return [element_matrix(el, convention).inverse() for el in reversed(spec.elements)]
