"""Independent reference implementations of apply_unitary, used by the test suites.

symbolic_apply multiplies out the substituted creation polynomial with sympy,
which is exact when the matrix holds radicals (beam splitters). permanent_apply
uses the transition amplitude <m|U|n> = perm(U[m, n]) / sqrt(prod n! prod m!).
"""
from __future__ import annotations

import itertools
import math
from typing import Dict, Sequence, Tuple

import numpy as np
import sympy

from fock_core import ModeLabel, OccupationVector, PhotonicState
from optics_elements import ElementKind, ElementSpec, ModeUnitary, PnpConvention, element_matrix

_HALF_SQRT2 = sympy.sqrt(2) / 2


def _sym_number(z, exact: bool = False) -> sympy.Expr:
    if isinstance(z, sympy.Basic):
        return z
    z = complex(z)
    if exact:
        # dyadic rationals over sqrt2 are recovered exactly
        re, im = (sympy.nsimplify(x, [sympy.sqrt(2)], tolerance=1e-13) for x in (z.real, z.imag))
        return re + sympy.I * im
    return sympy.Float(z.real, 30) + sympy.I * sympy.Float(z.imag, 30)


def exact_element_matrix(element: ElementSpec,
                         convention: PnpConvention = PnpConvention.CALIBRATED) -> Tuple[Tuple[ModeLabel, ...], sympy.Matrix]:
    """Same labels as element_matrix, entries as sympy radicals / exact trig values."""
    labels = element_matrix(element, convention).labels
    r = _HALF_SQRT2
    if element.kind is ElementKind.PPBS:
        block = sympy.Matrix([[r, r], [-r, r]])
        v_block = block
    elif element.kind is ElementKind.PNPBS:
        block = sympy.Matrix([[r, r], [-r, r]])
        if convention is PnpConvention.CALIBRATED:
            v_block = sympy.Matrix([[r, -r], [r, r]])
        else:
            v_block = sympy.Matrix([[r, r], [r, -r]])
    else:
        theta = sympy.nsimplify(element.angle / math.pi, rational=True, tolerance=1e-13) * sympy.pi
        if element.kind is ElementKind.PolRotator:
            c, s = sympy.cos(theta), sympy.sin(theta)
            return labels, sympy.Matrix([[c, -s], [s, c]])
        return labels, sympy.exp(sympy.I * theta) * sympy.eye(2)
    return labels, sympy.diag(block, v_block)


def symbolic_apply(state: PhotonicState, labels: Sequence[ModeLabel], matrix,
                   exact_amplitudes: bool = False) -> Dict[OccupationVector, sympy.Expr]:
    """Output amplitudes by polynomial expansion; labels outside `labels` pass through.

    With a radical-valued matrix and exact_amplitudes=True the arithmetic is exact.
    """
    labels = tuple(labels)
    m = sympy.Matrix(matrix) if not isinstance(matrix, sympy.MatrixBase) else matrix
    pos = {l: i for i, l in enumerate(labels)}
    out_labels = sorted(set(labels) | {p for v, _ in state for p, _ in v.counts})
    gens = {l: sympy.Symbol(f"b_{l}") for l in out_labels}

    def creation(label: ModeLabel) -> sympy.Expr:
        i = pos.get(label)
        if i is None:
            return gens[label]
        return sum((_sym_number(m[k, i]) * gens[labels[k]] for k in range(len(labels))), sympy.Integer(0))

    poly_expr = sympy.Integer(0)
    for vec, amp in state:
        term = _sym_number(amp, exact_amplitudes) / sympy.sqrt(math.prod(math.factorial(n) for _, n in vec.counts))
        for photon in vec.photons():
            term *= creation(photon)
        poly_expr += term

    symbols = [gens[l] for l in out_labels]
    poly = sympy.Poly(sympy.expand(poly_expr), *symbols)
    result: Dict[OccupationVector, sympy.Expr] = {}
    for exponents, coeff in poly.terms():
        counts = tuple((out_labels[k], e) for k, e in enumerate(exponents) if e)
        scale = sympy.sqrt(math.prod(math.factorial(e) for e in exponents))
        value = coeff * scale
        # float entries: leave tiny residues for PhotonicState pruning
        if not value.has(sympy.Float):
            value = sympy.simplify(value)
        if value != 0:
            result[OccupationVector(counts)] = value
    return result


def symbolic_to_state(amplitudes: Dict[OccupationVector, sympy.Expr], photon_number: int) -> PhotonicState:
    return PhotonicState.from_terms(((v, complex(sympy.N(a, 30))) for v, a in amplitudes.items()), photon_number)


def permanent(matrix: np.ndarray) -> complex:
    """Permanent by explicit permutation sum; matrices here are at most photon_number wide."""
    n = matrix.shape[0]
    if n == 0:
        return 1.0 + 0j
    total = 0j
    for perm in itertools.permutations(range(n)):
        prod = 1.0 + 0j
        for r, c in enumerate(perm):
            prod *= matrix[r, c]
        total += prod
    return total


def permanent_apply(state: PhotonicState, u: ModeUnitary) -> PhotonicState:
    labels = tuple(sorted(set(u.labels) | {p for v, _ in state for p, _ in v.counts}))
    full = u.embed(labels)
    pos = {l: i for i, l in enumerate(labels)}
    out = []
    for photons_out in itertools.combinations_with_replacement(labels, state.photon_number):
        vec_out = OccupationVector.from_photons(photons_out)
        rows = [pos[p] for p in photons_out]
        amp_out = 0j
        for vec_in, amp in state:
            cols = [pos[p] for p in vec_in.photons()]
            sub = full[np.ix_(rows, cols)]
            amp_out += amp * permanent(sub) / (vec_in.factorial_norm() * vec_out.factorial_norm())
        out.append((vec_out, amp_out))
    return PhotonicState.from_terms(out, state.photon_number)
