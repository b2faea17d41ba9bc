from .fock_state import (AMPLITUDE_TOL, Polarization, ModeLabel, OccupationVector, PhotonicState, BellKind,
                         occ, bell_state, bunched_state, inner_product, normalize)
