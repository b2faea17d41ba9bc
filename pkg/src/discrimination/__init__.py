from .discrimination import (PROB_TOL, UNIFORM_PRIOR, ABSTAIN, DiscriminationReport, conditioned_for_unitary,
                             conditioned_distributions, map_strategy, unambiguous_strategy, strategy_success,
                             bayes_success, unambiguous_success, total_variation, confusability, build_report,
                             report_for_unitary, discrimination_report)
