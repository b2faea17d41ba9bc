"""Pure bosonic states of fixed photon number over (spatial, polarization) modes.

Amplitude convention: the amplitude stored for occupation vector n is the
coefficient of the normalized Fock ket |n> = prod_m (a_m^dag)^{n_m} / sqrt(n_m!) |0>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from utils import DegenerateStateError, InvalidInputError

AMPLITUDE_TOL = 1e-12


class Polarization(IntEnum):
    H = 0
    V = 1


# x/y labels of the beam-splitter substitution table are H/V
_POL_ALIASES = {"H": Polarization.H, "V": Polarization.V, "X": Polarization.H, "Y": Polarization.V}


@dataclass(frozen=True, order=True)
class ModeLabel:
    """One optical mode. Orders spatial-major, H before V."""
    spatial: int
    polarization: Polarization

    def __post_init__(self):
        if not isinstance(self.spatial, (int, np.integer)) or self.spatial < 1:
            raise InvalidInputError(f"spatial index must be a positive integer, got {self.spatial!r}")
        object.__setattr__(self, "spatial", int(self.spatial))
        object.__setattr__(self, "polarization", Polarization(self.polarization))

    @classmethod
    def parse(cls, text: str) -> "ModeLabel":
        text = text.strip()
        if len(text) < 2 or text[-1].upper() not in _POL_ALIASES or not text[:-1].isdigit():
            raise InvalidInputError(f"cannot parse mode label {text!r} (expected e.g. '1H', '2V')")
        return cls(int(text[:-1]), _POL_ALIASES[text[-1].upper()])

    def __str__(self) -> str:
        return f"{self.spatial}{self.polarization.name}"


def _as_label(value) -> ModeLabel:
    if isinstance(value, ModeLabel):
        return value
    if isinstance(value, str):
        return ModeLabel.parse(value)
    spatial, pol = value
    return ModeLabel(spatial, pol)


@dataclass(frozen=True)
class OccupationVector:
    """Sparse photon counts per mode; zero entries are never stored."""
    counts: Tuple[Tuple[ModeLabel, int], ...] = ()

    def __post_init__(self):
        merged: Dict[ModeLabel, int] = {}
        for label, n in self.counts:
            label = _as_label(label)
            if n < 0:
                raise InvalidInputError(f"negative photon count {n} on mode {label}")
            merged[label] = merged.get(label, 0) + int(n)
        canonical = tuple(sorted((l, n) for l, n in merged.items() if n > 0))
        object.__setattr__(self, "counts", canonical)

    @classmethod
    def from_mapping(cls, counts: Mapping) -> "OccupationVector":
        return cls(tuple((_as_label(k), v) for k, v in counts.items()))

    @classmethod
    def from_photons(cls, photons: Iterable) -> "OccupationVector":
        """Occupation vector of a creation monomial; photon order is irrelevant."""
        return cls(tuple((_as_label(p), 1) for p in photons))

    @property
    def total(self) -> int:
        return sum(n for _, n in self.counts)

    def as_dict(self) -> Dict[ModeLabel, int]:
        return dict(self.counts)

    def photons(self) -> Tuple[ModeLabel, ...]:
        """Labels repeated by count, in canonical order."""
        return tuple(label for label, n in self.counts for _ in range(n))

    def spatial_modes(self) -> Tuple[int, ...]:
        return tuple(sorted({label.spatial for label, _ in self.counts}))

    def factorial_norm(self) -> float:
        """sqrt(prod n_m!), the factor between a creation monomial and its normalized ket."""
        return math.sqrt(math.prod(math.factorial(n) for _, n in self.counts))

    def __str__(self) -> str:
        return "|" + ",".join(f"{l}" if n == 1 else f"{l}:{n}" for l, n in self.counts) + ">"


def occ(*photons) -> OccupationVector:
    """Shorthand: occ('1H', '2V') or occ('1H', '1H')."""
    return OccupationVector.from_photons(photons)


@dataclass(frozen=True)
class PhotonicState:
    """Immutable pure state: canonical sorted (OccupationVector, amplitude) pairs."""
    terms: Tuple[Tuple[OccupationVector, complex], ...]
    photon_number: int

    @classmethod
    def from_terms(cls, pairs: Iterable[Tuple[OccupationVector, complex]],
                   photon_number: Optional[int] = None) -> "PhotonicState":
        acc: Dict[OccupationVector, complex] = {}
        for vec, amp in pairs:
            if photon_number is None:
                photon_number = vec.total
            if vec.total != photon_number:
                raise InvalidInputError(
                    f"mixed photon numbers: {vec} has {vec.total} photons, expected {photon_number}")
            acc[vec] = acc.get(vec, 0j) + complex(amp)
        if photon_number is None or photon_number < 1:
            raise InvalidInputError("photon_number must be a positive integer")
        kept = tuple(sorted(((v, a) for v, a in acc.items() if abs(a) >= AMPLITUDE_TOL),
                            key=lambda t: t[0].counts))
        return cls(kept, photon_number)

    @classmethod
    def from_dict(cls, amplitudes: Mapping[OccupationVector, complex],
                  photon_number: Optional[int] = None) -> "PhotonicState":
        return cls.from_terms(amplitudes.items(), photon_number)

    def amplitudes(self) -> Dict[OccupationVector, complex]:
        return dict(self.terms)

    def amplitude(self, vec: OccupationVector) -> complex:
        for v, a in self.terms:
            if v == vec:
                return a
        return 0j

    def __iter__(self) -> Iterator[Tuple[OccupationVector, complex]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for _, a in self.terms))

    def scale(self, factor: complex) -> "PhotonicState":
        return PhotonicState.from_terms(((v, a * factor) for v, a in self.terms), self.photon_number)

    def add(self, other: "PhotonicState") -> "PhotonicState":
        if other.photon_number != self.photon_number:
            raise InvalidInputError("cannot add states of different photon number")
        return PhotonicState.from_terms(list(self.terms) + list(other.terms), self.photon_number)

    def spatial_modes(self) -> Tuple[int, ...]:
        return tuple(sorted({s for v, _ in self.terms for s in v.spatial_modes()}))

    def allclose(self, other: "PhotonicState", atol: float = AMPLITUDE_TOL) -> bool:
        if other.photon_number != self.photon_number:
            return False
        a, b = self.amplitudes(), other.amplitudes()
        return all(abs(a.get(k, 0j) - b.get(k, 0j)) <= atol for k in set(a) | set(b))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({a.real:+.6g}{a.imag:+.6g}j){v}" for v, a in self.terms)


class BellKind(Enum):
    PsiMinus = "psi-"
    PsiPlus = "psi+"
    PhiMinus = "phi-"
    PhiPlus = "phi+"

    @classmethod
    def parse(cls, text: str) -> "BellKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidInputError(
                f"unknown Bell state selector {text!r}; expected one of {[k.value for k in cls]}")


_H, _V = Polarization.H, Polarization.V
# (first-pair polarizations, second-pair polarizations, relative sign)
_BELL_TABLE = {
    BellKind.PsiMinus: ((_H, _V), (_V, _H), -1.0),
    BellKind.PsiPlus: ((_H, _V), (_V, _H), +1.0),
    BellKind.PhiMinus: ((_H, _H), (_V, _V), -1.0),
    BellKind.PhiPlus: ((_H, _H), (_V, _V), +1.0),
}


def bell_state(kind: BellKind, spatial_a: int = 1, spatial_b: int = 2) -> PhotonicState:
    """Psi+- = (|H>_a|V>_b +- |V>_a|H>_b)/sqrt2, Phi+- = (|H>_a|H>_b +- |V>_a|V>_b)/sqrt2."""
    if spatial_a == spatial_b:
        raise InvalidInputError(f"Bell states need two distinct spatial modes, got {spatial_a} twice")
    (p1, p2), (q1, q2), sign = _BELL_TABLE[kind]
    r = 1 / math.sqrt(2)
    return PhotonicState.from_terms([
        (occ(ModeLabel(spatial_a, p1), ModeLabel(spatial_b, p2)), r),
        (occ(ModeLabel(spatial_a, q1), ModeLabel(spatial_b, q2)), sign * r),
    ], photon_number=2)


def bunched_state(polarization_amplitudes: Mapping[str, complex], spatial: int = 1) -> PhotonicState:
    """Two photons in one spatial mode; keys 'HH', 'HV', 'VV' give normalized-ket amplitudes."""
    pairs = []
    for key, amp in polarization_amplitudes.items():
        key = key.upper()
        if len(key) != 2 or any(c not in _POL_ALIASES for c in key):
            raise InvalidInputError(f"bad polarization content key {key!r}")
        pairs.append((occ(*(ModeLabel(spatial, _POL_ALIASES[c]) for c in key)), amp))
    return normalize(PhotonicState.from_terms(pairs, photon_number=2))


def inner_product(a: PhotonicState, b: PhotonicState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.photon_number != b.photon_number:
        raise InvalidInputError(
            f"inner product of {a.photon_number}- and {b.photon_number}-photon states")
    bd = b.amplitudes()
    return complex(sum((amp.conjugate() * bd[v] for v, amp in a.terms if v in bd), 0j))


def normalize(s: PhotonicState) -> PhotonicState:
    n = s.norm()
    if n < AMPLITUDE_TOL:
        raise DegenerateStateError("cannot normalize a zero state (all amplitudes interfered away)")
    return s.scale(1.0 / n)
