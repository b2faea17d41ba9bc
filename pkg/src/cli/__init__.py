from .main import main, build_parser, RunConfig
from .claims import Claim, run_claims
