from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from . import actions, fractional, topology
from .axioms import verify_gtheta, verify_parametric_triangle, verify_theta_parametric
from .carriers import Point, point_from_json
from .errors import ConfigurationError, PreconditionError, ThetaSpacesError
from .metric_core import list_catalog, space_from_config
from .report import AxiomReport, Verdict, combine, to_jsonable
from .repro import run_all
from .run_info import RunWatcher
from .sequences import (
    SEQUENCE_T_GRID,
    check_cauchy,
    check_convergence,
    check_sequential_continuity,
    check_unique_limit,
    distance_trace,
    make_sequence,
)
from .space import GThetaSpace
from .suzuki import PremiseForm, SuzukiConfig, Variant, get_map, iterate_fixed_point, verify_suzuki

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).parent / "schema" / "run_config.schema.json"

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_CONFIG = 2

Config = Mapping[str, Any]


@dataclass
class Outcome:
    """What a command produced: exit status, report body, summary lines for standard
    output and an optional CSV trace (header row first)."""

    status: int
    body: dict[str, Any]
    summary: list[str] = field(default_factory=list[str])
    trace: list[list[Any]] | None = None


# Configuration ----------------------------------------------------------------


def load_schema() -> dict[str, Any]:
    with open(SCHEMA_PATH, encoding="utf-8") as fp:
        return json.load(fp)


def validate_config(config: Config) -> None:
    """Validate a run configuration against the published schema.

    Raises:
        ConfigurationError: For the first violation, with its JSON pointer.
    """
    validator = Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        error = errors[0]
        pointer = "".join("/{}".format(part) for part in error.absolute_path)
        raise ConfigurationError(error.message, pointer or "/")


def load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fp:
            data = json.load(fp)
    except (OSError, ValueError) as err:
        raise ConfigurationError("Cannot read config {}: {}".format(path, err), "/") from err
    if not isinstance(data, dict):
        raise ConfigurationError("Config {} is not a JSON object.".format(path), "/")
    return data  # type: ignore


def _space_flag(text: str) -> Any:
    """A catalog name, or a JSON space block such as {"space": "int_b_space", "depth": 10}."""
    if text.lstrip().startswith("{"):
        try:
            return json.loads(text)
        except ValueError as err:
            raise argparse.ArgumentTypeError("invalid space block: {}".format(err)) from err
    return text


def _space(config: Config) -> GThetaSpace:
    value = config.get("space")
    if value is None:
        raise ConfigurationError("This command needs a space.", "/space")
    block: dict[str, Any] = {"space": value} if isinstance(value, str) else dict(value)
    if "action" in config:
        block["action"] = config["action"]
    if "control" in config:
        block["control"] = config["control"]
    return space_from_config(block)


def _point(config: Config, key: str) -> Point:
    if key not in config:
        raise ConfigurationError("This command needs --{}.".format(key), "/" + key)
    return point_from_json(config[key])


def _reports_json(reports: Sequence[AxiomReport]) -> list[dict[str, Any]]:
    return [r.to_json() for r in reports]


def _report_lines(reports: Sequence[AxiomReport]) -> list[str]:
    lines: list[str] = []
    for r in reports:
        line = "  {:<20} {}".format(r.axiom, r.verdict.value)
        if r.witness is not None:
            line += "  witness {} ({} vs {})".format(
                [to_jsonable(p) for p in r.witness.points], r.witness.lhs, r.witness.rhs
            )
        if r.note:
            line += "  [{}]".format(r.note)
        lines.append(line)
    return lines


# Commands ---------------------------------------------------------------------


def cmd_actions_verify(config: Config) -> Outcome:
    trials = config.get("trials", 10_000)
    seed = config.get("seed", 0)
    selected = (
        [actions.get_action(config["action"])] if "action" in config else actions.actions()
    )
    body: dict[str, Any] = {"actions": {}, "controls": {}}
    summary: list[str] = []
    undeclared = False
    for action in selected:
        reports = actions.verify_action(action, trials, seed)
        body["actions"][action.name] = _reports_json(reports)
        summary.append("{}:".format(action.name))
        summary += _report_lines(reports)
        undeclared |= any(
            r.verdict is Verdict.FAIL and r.axiom not in action.known_violations
            for r in reports
        )
    if "action" not in config:
        for pair in actions.controls():
            reports = actions.verify_control(pair)
            body["controls"][pair.name] = _reports_json(reports)
            summary.append("control {}:".format(pair.name))
            summary += _report_lines(reports)
    return Outcome(EXIT_REFUTED if undeclared else EXIT_OK, body, summary)


def cmd_spaces_list(config: Config) -> Outcome:
    rows = list_catalog()
    summary = ["{:<24} {}".format(row["name"], row["description"]) for row in rows]
    return Outcome(EXIT_OK, {"spaces": rows}, summary)


_AXIOM_SETS: dict[str, tuple[str, ...]] = {
    "gtheta": ("gtheta",),
    "parametric": ("parametric",),
    "theta": ("theta",),
    "all": ("gtheta", "parametric", "theta"),
}


def cmd_verify(config: Config) -> Outcome:
    space = _space(config)
    trials = config.get("trials", 10_000)
    seed = config.get("seed", 0)
    reports: list[AxiomReport] = []
    for name in _AXIOM_SETS[config.get("axioms", "all")]:
        if name == "gtheta":
            reports += verify_gtheta(space, trials, seed)
        elif name == "parametric":
            reports.append(verify_parametric_triangle(space, trials, seed))
        else:
            reports.append(verify_theta_parametric(space, trials, seed))
    verdict = combine(reports)
    summary = ["{} ({}): {}".format(space.name, space.action.name, verdict.value)]
    summary += _report_lines(reports)
    body = {"space": space.name, "verdict": verdict.value, "reports": _reports_json(reports)}
    return Outcome(EXIT_REFUTED if verdict is Verdict.FAIL else EXIT_OK, body, summary)


def _ball(config: Config) -> topology.Ball:
    for key in ("radius", "t"):
        if key not in config:
            raise ConfigurationError("A ball needs --{}.".format(key), "/" + key)
    kind = topology.BallKind.CLOSED if config.get("closed", False) else topology.BallKind.OPEN
    return topology.Ball(_point(config, "center"), config["radius"], config["t"], kind)


def cmd_topology_ball(config: Config) -> Outcome:
    space = _space(config)
    ball = _ball(config)
    members = topology.ball_members(space, ball)
    body: dict[str, Any] = {
        "space": space.name,
        "ball": ball.to_json(),
        "members": to_jsonable(members),
        "size": len(members),
    }
    if ball.kind is topology.BallKind.OPEN:
        body["open_condition"] = topology.open_ball_sufficiency(space, ball).to_json()
    ordered = sorted(members, key=repr)
    trace: list[list[Any]] = [["point", "distance"]]
    trace += [
        [to_jsonable(p), space.distance(ball.center, p, ball.t)] for p in ordered
    ]
    summary = [
        "{} ball around {} (radius {}, t {}): {} members".format(
            ball.kind.value, to_jsonable(ball.center), ball.radius, ball.t, len(members)
        )
    ]
    if len(members) <= 20:
        summary.append("  " + ", ".join(str(to_jsonable(p)) for p in ordered))
    return Outcome(EXIT_OK, body, summary, trace)


def cmd_topology_open_check(config: Config) -> Outcome:
    space = _space(config)
    if "points" in config:
        subset = [point_from_json(p) for p in config["points"]]
    else:
        subset = sorted(topology.ball_members(space, _ball(config)), key=repr)
    report = topology.is_open_set(space, subset)
    summary = ["{} points: {}".format(len(subset), report.verdict.value)]
    if report.witness is not None:
        center, escape = report.witness.points
        summary.append(
            "  center {} escapes to {} at t = {} (distance {} < radius {})".format(
                to_jsonable(center),
                to_jsonable(escape),
                report.witness.params["t"],
                report.witness.lhs,
                report.witness.rhs,
            )
        )
    body = {"space": space.name, "points": to_jsonable(subset), "report": report.to_json()}
    return Outcome(EXIT_REFUTED if report.verdict is Verdict.FAIL else EXIT_OK, body, summary)


def cmd_seq_check(config: Config) -> Outcome:
    space = _space(config)
    if "sequence" not in config:
        raise ConfigurationError("seq check needs --sequence.", "/sequence")
    seq = make_sequence(
        config["sequence"], config.get("horizon", 10_000), **config.get("sequence_params", {})
    )
    limit = _point(config, "limit")
    eps = config.get("eps", 1e-3)

    convergence = check_convergence(space, seq, limit, eps=eps)
    cauchy = check_cauchy(space, seq, eps=eps)
    body: dict[str, Any] = {
        "space": space.name,
        "sequence": seq.name,
        "convergence": convergence.to_json(),
        "cauchy": cauchy.to_json(),
    }
    summary = [
        "{} -> {}: convergence {}, cauchy {}".format(
            seq.name, to_jsonable(limit), convergence.verdict.value, cauchy.verdict.value
        )
    ]
    verdicts = [convergence.verdict]
    if "limit2" in config:
        unique = check_unique_limit(space, seq, limit, _point(config, "limit2"), eps=eps)
        body["unique_limit"] = unique.to_json()
        summary.append("  unique limit {}".format(unique.verdict.value))
        verdicts.append(Verdict.PASS if unique.consistent else Verdict.FAIL)
    if "probe" in config:
        continuity = check_sequential_continuity(
            space, seq, limit, _point(config, "probe"), eps=eps
        )
        body["continuity"] = continuity.to_json()
        summary.append("  sequential continuity {}".format(continuity.verdict.value))
        if continuity.verdict is Verdict.FAIL:
            verdicts.append(Verdict.FAIL)

    table = distance_trace(space, seq, limit, SEQUENCE_T_GRID)
    trace: list[list[Any]] = [["index", "t", "distance"]]
    for t, row in zip(SEQUENCE_T_GRID, table):
        trace += [[i, t, float(d)] for i, d in enumerate(row)]
    failed = any(v is not Verdict.PASS for v in verdicts)
    return Outcome(EXIT_REFUTED if failed else EXIT_OK, body, summary, trace)


def cmd_fixed_point_run(config: Config) -> Outcome:
    space = _space(config)
    fn = get_map(config.get("map", "plane_T"))
    start = _point(config, "start")
    if not space.carrier.contains(start):
        raise ConfigurationError(
            "Start {!r} is not a point of {}.".format(start, space.name), "/start"
        )
    result = iterate_fixed_point(
        space, fn, start, tol=config.get("tol", 1e-10), max_iter=config.get("max_iter", 1000)
    )
    body: dict[str, Any] = {
        "space": space.name,
        "map": fn.name,
        "start": to_jsonable(start),
        "result": result.to_json(),
        "trace": to_jsonable(result.trace),
    }
    summary = [
        "{} from {}: {} after {} iterations at {}".format(
            fn.name,
            to_jsonable(start),
            "converged" if result.converged else "not converged",
            result.iterations,
            to_jsonable(result.fixed_point),
        )
    ]
    refuted = not result.converged
    if "u" in config:
        suzuki = verify_suzuki(
            space,
            fn,
            SuzukiConfig(
                config["u"],
                Variant(config.get("variant", "general")),
                PremiseForm(config.get("premise_form", "x_Tx")),
                seed=config.get("seed", 0),
            ),
        )
        body["suzuki"] = suzuki.to_json()
        summary += _report_lines([suzuki])
        refuted |= suzuki.verdict is Verdict.FAIL

    trace: list[list[Any]] = [["iteration", "t", "step_distance"]]
    for i, row in enumerate(result.step_distances):
        trace += [[i, t, d] for t, d in zip(result.t_grid, row)]
    return Outcome(EXIT_REFUTED if refuted else EXIT_OK, body, summary, trace)


def cmd_fde_solve(config: Config) -> Outcome:
    problem = fractional.FdeProblem.from_rhs(
        config.get("eta", 1.5),
        config.get("g", "linear:lambda=0.2,c=tau"),
        n=config.get("n", 2000),
        tol=config.get("tol", 1e-10),
        max_iter=config.get("max_iter", 500),
    )
    gate = fractional.verify_lipschitz(problem, seed=config.get("seed", 0))
    body: dict[str, Any] = {
        "eta": problem.eta,
        "g": problem.g.text,
        "n": problem.n,
        "lipschitz": gate.to_json(),
    }
    summary = ["Lipschitz gate: r = {:.6g}, {}".format(gate.r, gate.report.verdict.value)]
    if not gate.gate_passed:
        summary.append("  H is not known to contract, not solving")
        return Outcome(EXIT_REFUTED, body, summary)

    try:
        result = fractional.solve_fde(problem)
    except PreconditionError as err:
        summary.append("  {}".format(err))
        return Outcome(EXIT_REFUTED, body, summary)
    solution: fractional.GridFunction = result.fixed_point
    check = fractional.boundary_check(solution)
    body["result"] = result.to_json()
    body["boundary"] = check.to_json()
    summary.append(
        "{} after {} iterations, residual {:.3g}, ratio {}, boundary gap {:.3g}".format(
            "converged" if result.converged else "not converged",
            result.iterations,
            result.residual,
            result.observed_ratio,
            check.gap,
        )
    )
    trace: list[list[Any]] = [["t", "f"]]
    trace += [[float(t), float(v)] for t, v in zip(solution.nodes, solution.values)]
    return Outcome(EXIT_OK if result.converged else EXIT_REFUTED, body, summary, trace)


def cmd_repro_all(config: Config) -> Outcome:
    report = run_all(config.get("seed", 0), config.get("trials", 10_000))
    summary = [
        "{:<26} {:<14} {}".format(item.id, item.verdict.value, item.observed)
        for item in report.items
    ]
    summary.append("repro: {}".format(report.verdict.value))
    return Outcome(EXIT_OK if report.passed else EXIT_REFUTED, report.to_json(), summary)


COMMANDS: dict[str, Callable[[Config], Outcome]] = {
    "actions verify": cmd_actions_verify,
    "spaces list": cmd_spaces_list,
    "verify": cmd_verify,
    "topology ball": cmd_topology_ball,
    "topology open-check": cmd_topology_open_check,
    "seq check": cmd_seq_check,
    "fixed-point run": cmd_fixed_point_run,
    "fde solve": cmd_fde_solve,
    "repro all": cmd_repro_all,
}


# Parser -----------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, help="Seed of the randomized checks (default: 0)")
    common.add_argument("--out", help="Write the JSON report (or CSV trace) to this path")
    common.add_argument("--format", choices=["json", "csv"], help="Output format of --out")
    common.add_argument("--config", help="JSON run configuration; flags override its keys")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    return common


def _add_space(parser: argparse.ArgumentParser, action: bool = False) -> None:
    parser.add_argument("--space", type=_space_flag, help="Catalog name or JSON space block")
    if action:
        parser.add_argument("--action", help="Replace the attached B-action")
        parser.add_argument("--control", help="Replace the attached control pair")


def _add_ball(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--center")
    parser.add_argument("--radius", type=float)
    parser.add_argument("--t", type=float)
    parser.add_argument("--closed", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="theta-spaces",
        description="Verify axioms of generalized θ-parametric metric spaces, iterate "
        "Suzuki-type contractions and solve the Caputo boundary problem.",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(
        sub: Any,
        name: str,
        command: str,
        help: str,
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(
            name, parents=[common], argument_default=argparse.SUPPRESS, help=help
        )
        p.set_defaults(command=command)
        return p

    sub = groups.add_parser("actions").add_subparsers(dest="leaf", required=True)
    p = leaf(sub, "verify", "actions verify", "Check B-action and control pair axioms")
    p.add_argument("--action")
    p.add_argument("--trials", type=int)

    sub = groups.add_parser("spaces").add_subparsers(dest="leaf", required=True)
    leaf(sub, "list", "spaces list", "List the catalog spaces")

    p = leaf(groups, "verify", "verify", "Check the metric axioms of a space")
    _add_space(p, action=True)
    p.add_argument("--axioms", choices=sorted(_AXIOM_SETS))
    p.add_argument("--trials", type=int)

    sub = groups.add_parser("topology").add_subparsers(dest="leaf", required=True)
    p = leaf(sub, "ball", "topology ball", "Enumerate the members of a ball")
    _add_space(p)
    _add_ball(p)
    p = leaf(sub, "open-check", "topology open-check", "Check that a set is open")
    _add_space(p)
    _add_ball(p)
    p.add_argument("--points", nargs="+")

    sub = groups.add_parser("seq").add_subparsers(dest="leaf", required=True)
    p = leaf(sub, "check", "seq check", "Convergence, Cauchy and continuity of a sequence")
    _add_space(p)
    p.add_argument("--sequence")
    p.add_argument("--sequence-params", dest="sequence_params", type=json.loads)
    p.add_argument("--limit")
    p.add_argument("--limit2")
    p.add_argument("--probe")
    p.add_argument("--eps", type=float)
    p.add_argument("--horizon", type=int)

    sub = groups.add_parser("fixed-point").add_subparsers(dest="leaf", required=True)
    p = leaf(sub, "run", "fixed-point run", "Picard iteration of a catalog map")
    _add_space(p)
    p.add_argument("--map")
    p.add_argument("--start")
    p.add_argument("--u", type=float)
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument(
        "--premise-form", dest="premise_form", choices=[f.value for f in PremiseForm]
    )
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)

    sub = groups.add_parser("fde").add_subparsers(dest="leaf", required=True)
    p = leaf(sub, "solve", "fde solve", "Solve the Caputo boundary problem")
    p.add_argument("--eta", type=float)
    p.add_argument("--g", help="Right-hand side, e.g. linear:lambda=0.2,c=tau")
    p.add_argument("--n", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)

    sub = groups.add_parser("repro").add_subparsers(dest="leaf", required=True)
    p = leaf(sub, "all", "repro all", "Reproduce every worked example and counterexample")
    p.add_argument("--trials", type=int)

    return parser


def resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    """Defaults < config file < flags, validated against the schema."""
    flags = {k: v for k, v in vars(args).items() if k not in ("group", "leaf", "config")}
    config: dict[str, Any] = load_config_file(args.config) if "config" in args else {}
    config.update(flags)
    validate_config(config)
    return config


# Output -----------------------------------------------------------------------


def write_outputs(config: Config, report: dict[str, Any], trace: list[list[Any]] | None) -> None:
    out = config.get("out")
    if out is None:
        return
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    path = Path(out)
    if config.get("format", "json") == "csv":
        if trace is None:
            logger.warning("%s has no trace, writing the JSON report only", config["command"])
        else:
            with open(path, "w", encoding="utf-8", newline="") as fp:
                csv.writer(fp).writerows(trace)
            path = path.with_suffix(".json" if path.suffix != ".json" else ".report.json")
    path.write_text(text, encoding="utf-8")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    watcher = RunWatcher()

    try:
        config = resolve_config(args)
        outcome = COMMANDS[config["command"]](config)
    except ThetaSpacesError as err:
        print("[error] {}".format(err), file=sys.stderr)
        return EXIT_CONFIG

    for line in outcome.summary:
        print(line)
    body = {"command": config["command"], "config": to_jsonable(config), **outcome.body}
    report = {"header": watcher.header(), "body": to_jsonable(body)}
    try:
        write_outputs(config, report, outcome.trace)
    except OSError as err:
        print("[error] cannot write {}: {}".format(config.get("out"), err), file=sys.stderr)
        return EXIT_CONFIG
    return outcome.status
