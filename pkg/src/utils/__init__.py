from .errors import (BellDiscError, InvalidInputError, DegenerateStateError, CoverageError,
                     CircuitValidationError, ConfigError)
from .settings import load_settings, resolve_workers
from .logging_setup import configure_logging
