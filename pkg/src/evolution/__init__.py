from .evolution import apply_unitary, evolve_circuit, evolve_sequence
