from .detection import (EVENT_TOL, DetectorConfig, Channel, DetectionEvent, OutcomeDistribution, PatternClass,
                        coarse_grain, outcome_distribution, classify_pattern, split_bunch_probabilities)
