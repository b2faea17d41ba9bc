"""belldisc command-line entry point.

    belldisc verify [--json] [--pnp-convention literal]
    belldisc simulate CIRCUIT.json --state psi+ [--pol-blind] [--threshold] [--monitor 1,2]
    belldisc discriminate CIRCUIT.json [detector flags]
    belldisc search [SPACE.json|SPACE.yaml] [--workers N]
    belldisc cascade --initial hv --stages 5

Exit codes: 0 success, 1 claim failure, 2 usage or validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from loguru import logger

from circuit_search import SearchSpace, cascade_experiment, search_max_success
from detection import DetectorConfig, outcome_distribution
from discrimination import discrimination_report
from evolution import evolve_circuit
from fock_core import BellKind, PhotonicState, bell_state, bunched_state
from optics_elements import CircuitSpec, PnpConvention

from utils import BellDiscError, InvalidInputError, configure_logging, load_settings, resolve_workers
from .claims import run_claims
from .reports import (CONVENTIONS, cascade_to_json, circuit_to_json, discrimination_to_json,
                      distribution_to_json, load_circuit, load_search_space, read_json,
                      search_result_to_json, state_from_json, state_to_json, write_json)

EXIT_OK, EXIT_CLAIM_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("verify", "simulate", "discriminate", "search", "cascade")

# bunched polarization content accepted by `cascade --initial`
CASCADE_INITIAL = {
    "hv": {"HV": 1.0},
    "hh": {"HH": 1.0},
    "vv": {"VV": 1.0},
    "phi+": {"HH": 1.0, "VV": 1.0},
    "phi-": {"HH": 1.0, "VV": -1.0},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Optional[str] = None
    out_path: Optional[str] = None
    as_json: bool = False
    workers: Optional[int] = None
    seed: Optional[int] = None
    verbosity: int = 0
    quiet: bool = False
    state: Optional[str] = None
    state_path: Optional[str] = None
    input_modes: Tuple[int, int] = (1, 2)
    pol_blind: bool = False
    threshold: bool = False
    monitor: Optional[Tuple[int, ...]] = None
    initial: str = "hv"
    stages: Optional[int] = None
    pnp_convention: PnpConvention = PnpConvention.CALIBRATED

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidInputError(f"unknown command {self.command!r}")
        if self.command in ("simulate", "discriminate") and not self.input_path:
            raise InvalidInputError(f"{self.command} needs a circuit JSON file")
        if self.command == "simulate" and (self.state is None) == (self.state_path is None):
            raise InvalidInputError("simulate needs exactly one of --state or --state-file")
        if self.command == "cascade" and self.initial not in CASCADE_INITIAL:
            raise InvalidInputError(
                f"unknown cascade input {self.initial!r}; expected one of {sorted(CASCADE_INITIAL)}")
        if self.stages is not None and self.stages < 1:
            raise InvalidInputError(f"--stages must be >= 1, got {self.stages}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            input_path=getattr(args, "input", None),
            out_path=args.out,
            as_json=args.json,
            workers=args.workers,
            seed=args.seed,
            verbosity=args.verbose,
            quiet=args.quiet,
            state=getattr(args, "state", None),
            state_path=getattr(args, "state_file", None),
            input_modes=_parse_modes(getattr(args, "input_modes", "1,2"), "--input-modes", 2),
            pol_blind=getattr(args, "pol_blind", False),
            threshold=getattr(args, "threshold", False),
            monitor=_parse_modes(args.monitor, "--monitor") if getattr(args, "monitor", None) else None,
            initial=getattr(args, "initial", "hv").lower(),
            stages=getattr(args, "stages", None),
            pnp_convention=PnpConvention(getattr(args, "pnp_convention", PnpConvention.CALIBRATED.value)),
        )


def _parse_modes(text: str, flag: str, exactly: Optional[int] = None) -> Tuple[int, ...]:
    try:
        modes = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise InvalidInputError(f"{flag} takes comma-separated integers, got {text!r}")
    if exactly is not None and len(modes) != exactly:
        raise InvalidInputError(f"{flag} takes {exactly} modes, got {text!r}")
    return modes


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write the JSON report to this path")
    common.add_argument("--workers", type=int, default=None,
                        help="parallel workers for search (0 = one per CPU; default $BELLDISC_WORKERS or 1)")
    common.add_argument("--seed", type=int, default=None,
                        help="recorded in reports; all current computation is deterministic")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    common.add_argument("--quiet", action="store_true", help="no progress bar")

    detectors = argparse.ArgumentParser(add_help=False)
    detectors.add_argument("--pol-blind", action="store_true", help="detectors do not resolve polarization")
    detectors.add_argument("--threshold", action="store_true", help="click/no-click detectors")
    detectors.add_argument("--monitor", help="comma-separated monitored spatial modes (default: all)")
    detectors.add_argument("--input-modes", default="1,2", help="spatial modes the photon pair enters")

    parser = argparse.ArgumentParser(prog="belldisc",
                                     description="Two-photon Bell-state simulator for linear-optical circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the fixed claim suite")
    p.add_argument("--pnp-convention", choices=[c.value for c in PnpConvention],
                   default=PnpConvention.CALIBRATED.value)

    p = sub.add_parser("simulate", parents=[common, detectors], help="evolve one input through a circuit")
    p.add_argument("input", help="circuit JSON")
    p.add_argument("--state", help="Bell-state selector: psi-, psi+, phi-, phi+")
    p.add_argument("--state-file", help="explicit term-list JSON")

    p = sub.add_parser("discriminate", parents=[common, detectors], help="Bell-state discrimination report")
    p.add_argument("input", help="circuit JSON")

    p = sub.add_parser("search", parents=[common], help="exhaustive circuit search")
    p.add_argument("input", nargs="?", help="search-space JSON or YAML (default: the packaged space)")

    p = sub.add_parser("cascade", parents=[common], help="split bunched pairs with a PPBS cascade")
    p.add_argument("--initial", default="hv", help=f"one of {', '.join(CASCADE_INITIAL)}")
    p.add_argument("--stages", type=int, default=None)
    return parser


def _detector(cfg: RunConfig, spec: CircuitSpec) -> DetectorConfig:
    modes = cfg.monitor or range(1, spec.spatial_mode_count + 1)
    detector = DetectorConfig(not cfg.pol_blind, not cfg.threshold, frozenset(modes))
    detector.check_within(spec.spatial_mode_count)
    return detector


def _emit(cfg: RunConfig, data) -> None:
    text = write_json(data, cfg.out_path)
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        logger.info("wrote {}", cfg.out_path)


def cmd_verify(cfg: RunConfig) -> int:
    claims = run_claims(cfg.pnp_convention)
    passed = all(c.passed for c in claims)
    data = {
        "passed": passed,
        "pnp_convention": cfg.pnp_convention.value,
        "claims": [{"name": c.name, "expected": c.expected, "computed": c.computed, "passed": c.passed}
                   for c in claims],
        "seed": cfg.seed,
        "conventions": CONVENTIONS,
    }
    if cfg.as_json:
        _emit(cfg, data)
    else:
        for c in claims:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: expected {c.expected}; computed {c.computed}")
        print(f"{sum(c.passed for c in claims)}/{len(claims)} claims passed")
        if cfg.out_path:
            write_json(data, cfg.out_path)
    return EXIT_OK if passed else EXIT_CLAIM_FAILED


def _input_state(cfg: RunConfig) -> PhotonicState:
    if cfg.state is not None:
        return bell_state(BellKind.parse(cfg.state), *cfg.input_modes)
    return state_from_json(read_json(cfg.state_path))


def cmd_simulate(cfg: RunConfig) -> int:
    spec = load_circuit(cfg.input_path)
    state = _input_state(cfg)
    detector = _detector(cfg, spec)
    final = evolve_circuit(state, spec)
    dist = outcome_distribution(final, detector)
    _emit(cfg, {
        "circuit": circuit_to_json(spec),
        "input": state_to_json(state),
        "output": state_to_json(final),
        "detector": detector.describe(),
        "distribution": distribution_to_json(dist),
        "seed": cfg.seed,
        "conventions": CONVENTIONS,
    })
    return EXIT_OK


def cmd_discriminate(cfg: RunConfig) -> int:
    spec = load_circuit(cfg.input_path)
    detector = _detector(cfg, spec)
    report = discrimination_report(spec, detector, cfg.input_modes)
    logger.info("bayes {:.10f}, unambiguous {:.10f}", report.bayes_success, report.unambiguous_success)
    data = {"circuit": circuit_to_json(spec), "detector": detector.describe(),
            **discrimination_to_json(report), "seed": cfg.seed, "conventions": CONVENTIONS}
    _emit(cfg, data)
    return EXIT_OK


def cmd_search(cfg: RunConfig) -> int:
    space = load_search_space(cfg.input_path) if cfg.input_path else SearchSpace.default()
    workers = resolve_workers(cfg.workers)
    progress = not cfg.quiet and sys.stderr.isatty()
    result = search_max_success(space, workers=workers, progress=progress)
    data = search_result_to_json(result, cfg.seed)
    if cfg.as_json and cfg.out_path is None:
        sys.stdout.write(write_json(data, None))
        return EXIT_OK
    if cfg.out_path:
        write_json(data, cfg.out_path)
    if result.ceiling_exceeded:
        print("!!! CEILING EXCEEDED: unambiguous success above 0.5 !!!")
    print(f"space: {space.label}")
    print(f"best_unambiguous: {result.best_unambiguous:.10f}")
    print(f"best_bayes: {result.best_bayes:.10f}")
    print(f"circuits: {result.circuits_evaluated} ({result.evaluations} evaluations)")
    print(f"elapsed: {result.wall_time_s:.2f}s")
    return EXIT_OK


def cmd_cascade(cfg: RunConfig) -> int:
    stages = cfg.stages or int(load_settings().cascade.stages)
    initial = bunched_state(CASCADE_INITIAL[cfg.initial], 1)
    records = cascade_experiment(initial, stages)
    _emit(cfg, {"initial": cfg.initial, "stages": cascade_to_json(records), "seed": cfg.seed})
    return EXIT_OK


HANDLERS = {
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "discriminate": cmd_discriminate,
    "search": cmd_search,
    "cascade": cmd_cascade,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.verbose)
    try:
        cfg = RunConfig.from_args(args)
        return HANDLERS[cfg.command](cfg)
    except BellDiscError as e:
        logger.debug("{} failed: {!r}", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.debug("{} failed: {!r}", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
