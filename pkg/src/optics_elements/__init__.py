from .elements import (UNITARITY_TOL, ElementKind, KIND_ORDER, PnpConvention, ModeUnitary, ElementSpec, CircuitSpec,
                       all_labels, pp_bs_matrix, pnp_bs_matrix, pol_rotator_matrix, phase_shifter_matrix,
                       element_matrix, compose_circuit, compose_unitaries, inverse_circuit_unitaries)
