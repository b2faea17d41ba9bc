from .circuit_search import (DEFAULT_SPACE_LABEL, SearchSpace, TieRecord, SearchResult, element_alphabet,
                             count_circuits, enumerate_circuits, search_max_success)
from .cascade import CascadeStage, cascade_experiment, polarization_fidelity
