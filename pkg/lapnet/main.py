# lapnet/main.py
import argparse
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bounds.asymptotics import path_cycle_ratio_experiment
from .bounds.lower_bounds import bounds_for_graph, check_convex, sparsity_bound
from .bounds.survey import survey_ratio_r1
from .composite.networks import (composite_threshold, rho_nn, rho_nn_flattened_oracle,
                                 rho_nn_general_oracle)
from .design.floor import SIDES, floor_value, performance_floor
from .design.gains import design_gain, design_observer
from .design.threshold import lambda_tilde, lambda_tilde_observer
from .graph.graph_io import load_graph
from .model.composite_model import CompositeSpec
from .model.fixtures import FIXTURE_DEFAULTS, build_fixture, fixture_names, parse_params
from .model.model_io import load_model, save_model
from .model.network import assemble_full, augment_observer, observer_gain_identity
from .model.subsystem import GainSet
from .performance.functions import KINDS, PerformanceFunction
from .performance.measures import (mu_oracle, mu_spectral, rho_oracle, rho_spectral,
                                   rho_u_spectral)
from .performance.rational_fit import fit_rational
from .settings.settings_manager import SettingsManager
from .simulate.sde import SimulationConfig, simulate_trajectory, simulate_variance
from .utils.errors import ModelValidationError, NumericalFailure, UnstableError
from .utils.json_validator import require_valid_json
from .utils.logger_config import setup_logging
from .utils.output import build_header, write_csv, write_json
from .utils.parallel import thread_count
from .utils.schemas import GAIN_SCHEMA

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64


class LapnetArgumentParser(argparse.ArgumentParser):
    """argparse with the sysexits usage code for bad invocations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunContext:
    settings: SettingsManager
    threads: int
    inputs: dict

    def header(self):
        return build_header(self.inputs, self.settings.tolerances())

    def threshold_options(self):
        get = self.settings.get_setting
        return {"scan_max": get("threshold_scan_max"), "tol": get("threshold_tol"),
                "points": get("threshold_points"), "margin": get("hurwitz_margin")}


# --- input handling ---

def _matrix_argument(text, name):
    """A matrix given inline as JSON, e.g. '[[1, 2]]'."""
    try:
        value = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelValidationError(f"--{name} is not valid JSON: {e.msg} (column {e.colno})", field=name) from e
    return np.atleast_2d(np.asarray(value, dtype=float))


def _load_gain_file(path):
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelValidationError(
                f"Gain file is not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from e
    require_valid_json(data, GAIN_SCHEMA, f"Gain file '{path}'")
    return data


def _fixture_source(name, params):
    pairs = ",".join(f"{k}={params[k]!r}" for k in sorted(params))
    return f"fixture:{name}" + (f"?{pairs}" if pairs else "")


def load_subject(args, ctx):
    """(SubsystemModel, GainSet or None) from --model or --fixture, with gain overrides applied."""
    if args.model and args.fixture:
        raise ModelValidationError("give either --model or --fixture, not both", field="model")
    if args.model:
        model, gains = load_model(args.model)
        ctx.inputs["model"] = args.model
    elif args.fixture:
        params = parse_params(args.param)
        model, gains = build_fixture(args.fixture, params)
        ctx.inputs["model"] = _fixture_source(args.fixture, params)
    else:
        raise ModelValidationError("a subsystem is required: use --model FILE or --fixture NAME", field="model")

    K = None if gains is None else gains.K
    F = None if gains is None else gains.F
    if getattr(args, "gains", None):
        data = _load_gain_file(args.gains)
        K = np.asarray(data["K"], dtype=float) if "K" in data else K
        F = np.asarray(data["F"], dtype=float) if "F" in data else F
        ctx.inputs["gains"] = args.gains
    if getattr(args, "K", None):
        K = _matrix_argument(args.K, "K")
    if getattr(args, "F", None):
        F = _matrix_argument(args.F, "F")
    return model, (None if K is None and F is None else GainSet(K, F))


def require_K(gains):
    if gains is None or gains.K is None:
        raise ModelValidationError("no feedback gain K: add K to the model or pass --K / --gains", field="K")
    return gains.K


def require_F(gains):
    if gains is None or gains.F is None:
        raise ModelValidationError("no observer gain F: add F to the model or pass --F / --gains", field="F")
    return gains.F


def load_graph_input(spec, ctx, key="graph"):
    if not spec:
        raise ModelValidationError(f"--{key.replace('_', '-')} is required", field=key)
    g = load_graph(spec)
    ctx.inputs[key] = spec
    return g


# --- commands ---

def cmd_analyze(args, ctx):
    model, gains = load_subject(args, ctx)
    g = load_graph_input(args.graph, ctx)
    if args.measure == "mu":
        result = mu_spectral(model, g, require_F(gains), weight=args.weight, threads=ctx.threads)
        oracle = (lambda: mu_oracle(model, g, gains.F, weight=args.weight))
    elif args.measure == "rho_u":
        result = rho_u_spectral(model, g, require_K(gains), threads=ctx.threads)
        oracle = None
    else:
        F = require_F(gains) if args.observer else None
        result = rho_spectral(model, g, require_K(gains), F=F, threads=ctx.threads)
        oracle = (lambda: rho_oracle(model, g, gains.K, F=F))
    payload = {"header": ctx.header(), "measure": args.measure, **result.to_dict(args.measure)}
    if args.oracle:
        if oracle is None:
            raise ModelValidationError("no oracle is available for rho_u", field="oracle")
        payload["oracle"] = oracle()
    logger.info(f"{args.measure} = {result.total:.17g}")
    write_json(payload, args.out)


def _performance_function(kind, model, gains, weight="output"):
    if kind == "composite":
        raise ModelValidationError("use the composite command for composite networks", field="kind")
    if kind == "estimation":
        return PerformanceFunction(kind, model, F=require_F(gains), weight=weight)
    if kind == "observer":
        return PerformanceFunction(kind, model, K=require_K(gains), F=require_F(gains))
    return PerformanceFunction(kind, model, K=require_K(gains))


def cmd_sweep(args, ctx):
    model, gains = load_subject(args, ctx)
    if args.per_output:
        rows_of_C = [model.replace(C=model.C[i:i + 1]) for i in range(model.C.shape[0])]
        functions = [_performance_function(args.kind, m, gains, args.weight) for m in rows_of_C]
    else:
        functions = [_performance_function(args.kind, model, gains, args.weight)]
    lams = np.logspace(np.log10(args.lambda_min), np.log10(args.lambda_max), args.points)

    def evaluate(pf, lam):
        try:
            return pf.evaluate(lam)
        except UnstableError as e:
            logger.warning(f"lambda={lam:.6g}: {e}")
            return (float("nan"),) * 3

    rows = []
    for lam in lams:
        values = [evaluate(pf, float(lam)) for pf in functions]
        if args.per_output:
            rows.append([float(lam)] + [float(v[0]) for v in values])
        else:
            rows.append([float(lam)] + [float(x) for x in values[0]])
    if args.per_output:
        columns = ["lambda"] + [f"phi_{i + 1}" for i in range(len(functions))]
    else:
        columns = ["lambda", "phi", "phi_xi", "phi_eta"]
    write_csv(columns, rows, args.out)


def cmd_threshold(args, ctx):
    model, gains = load_subject(args, ctx)
    options = ctx.threshold_options()
    if args.observer:
        result = lambda_tilde_observer(model, require_F(gains), **options)
    else:
        result = lambda_tilde(model, require_K(gains), **options)
    logger.info(f"lambda_tilde = {result.lambda_tilde}")
    write_json({"header": ctx.header(), **result.to_dict()}, args.out)


def cmd_design_gain(args, ctx):
    model, gains = load_subject(args, ctx)
    design = design_gain(model, args.c, decay=args.decay)
    if args.save_model:
        F = None if gains is None else gains.F
        save_model(model, args.save_model, GainSet(design.gain, F))
    write_json({"header": ctx.header(), **design.to_dict("K")}, args.out)


def cmd_design_observer(args, ctx):
    model, gains = load_subject(args, ctx)
    design = design_observer(model, args.c)
    if args.save_model:
        save_model(model, args.save_model, GainSet(None if gains is None else gains.K, design.gain))
    write_json({"header": ctx.header(), **design.to_dict("F")}, args.out)


def cmd_floor(args, ctx):
    model, _ = load_subject(args, ctx)
    schedule = args.eps or ctx.settings.get_setting("floor_eps_schedule")
    floor = performance_floor(model, side=args.side, eps_schedule=schedule)
    value = floor_value(floor, model.E if args.side == "control" else None)
    write_json({"header": ctx.header(), **floor.to_dict(), "floor_value": value}, args.out)


def cmd_bounds(args, ctx):
    model, gains = load_subject(args, ctx)
    pf = _performance_function("state_feedback", model, gains)
    rows = []
    for index, spec in enumerate(args.graph or []):
        g = load_graph_input(spec, ctx, key=f"graph{index}")
        check_convex(pf, max(g.n_nodes, 2 * g.total_weight))
        rho = rho_spectral(model, g, pf.K, threads=ctx.threads).total
        unweighted, weighted = bounds_for_graph(pf, g)
        sparsity = sparsity_bound(pf, g.n_nodes, g.n_edges, check=False).value
        u_value = float("nan") if unweighted is None else unweighted.value
        rows.append([spec, g.n_nodes, g.n_edges, g.max_degree, g.total_weight, rho, u_value,
                     weighted.value, sparsity, rho / u_value if unweighted else float("nan"),
                     rho / weighted.value])
    if not rows:
        raise ModelValidationError("bounds needs at least one --graph", field="graph")
    write_csv(["graph", "N", "M", "Delta", "W", "rho", "bound_unweighted", "bound_weighted",
               "bound_sparsity", "r1", "r2"], rows, args.out)


def cmd_asymptotics(args, ctx):
    model, gains = load_subject(args, ctx)
    K = require_K(gains)
    table = path_cycle_ratio_experiment(model, K, args.sizes, kind=args.kind, progress=args.progress)
    write_csv(["N", "rho", "N_gamma_N", "ratio"], [[r.N, r.rho, r.n_gamma, r.ratio] for r in table], args.out)


def cmd_survey(args, ctx):
    model, gains = load_subject(args, ctx)
    result = survey_ratio_r1(model, require_K(gains), args.nodes, allow_large=args.allow_large,
                             threads=ctx.threads, progress=args.progress)
    write_csv(["r1", "cdf"], result.cdf(), args.out)


def cmd_composite(args, ctx):
    model, gains = load_subject(args, ctx)
    g1 = load_graph_input(args.module_graph, ctx, key="module_graph")
    g2 = load_graph_input(args.higher_graph, ctx, key="higher_graph")
    K1 = _matrix_argument(args.K1, "K1") if args.K1 else require_K(gains)
    if args.K2:
        K2 = _matrix_argument(args.K2, "K2")
    else:
        K2 = args.alpha * K1
    cs = CompositeSpec(model, g1, K1, g2, K2, port=args.port)
    result = rho_nn(cs, threads=ctx.threads)
    payload = {"header": ctx.header(), "m": cs.m, "N": cs.N, "port": cs.port,
               "alpha": cs.proportional_factor(), **result.to_dict()}
    if args.threshold:
        payload["threshold"] = composite_threshold(cs).to_dict()
    if args.oracle:
        payload["oracle_general"] = rho_nn_general_oracle(cs)
        if cs.proportional_factor() is not None:
            payload["oracle_flattened"] = rho_nn_flattened_oracle(cs)
    write_json(payload, args.out)


def _simulation_network(model, gains, g, observer):
    if observer:
        augmented = augment_observer(model, require_K(gains), require_F(gains))
        return assemble_full(augmented, g, observer_gain_identity(augmented))
    return assemble_full(model, g, require_K(gains))


def cmd_simulate(args, ctx):
    model, gains = load_subject(args, ctx)
    g = load_graph_input(args.graph, ctx)
    net = _simulation_network(model, gains, g, args.observer)
    cfg = SimulationConfig(dt=args.dt, t_end=args.t_end, burn_in=args.burn_in,
                           n_paths=args.paths or ctx.settings.get_setting("sim_paths"), seed=args.seed)
    if args.trajectory:
        x0 = None
        if args.random_x0:
            x0 = np.random.default_rng(args.seed).standard_normal(net.A_cl.shape[0])
        rows = simulate_trajectory(net, cfg, x0=x0)
        write_csv(["t", "node", "output_component", "value"], rows, args.out)
        return
    estimate, stderr = simulate_variance(net, cfg, threads=ctx.threads)
    K = require_K(gains)
    analytic = rho_spectral(model, g, K, F=gains.F if args.observer else None, threads=ctx.threads).total
    write_json({"header": ctx.header(), "estimate": estimate, "stderr": stderr, "analytic": analytic,
                "seed": args.seed, "n_paths": cfg.n_paths}, args.out)


def cmd_fit(args, ctx):
    model, gains = load_subject(args, ctx)
    pf = _performance_function(args.kind, model, gains, args.weight)
    tol = args.tol or ctx.settings.get_setting("fit_tol")
    fit = fit_rational(pf, lambda_samples=args.samples, max_degree=args.max_degree, tol=tol)
    write_json({"header": ctx.header(), "kind": args.kind, "degrees": list(fit.degrees), **fit.to_dict()},
               args.out)


def cmd_fixtures(args, ctx):
    if args.show:
        params = parse_params(args.param)
        model, gains = build_fixture(args.show, params)
        data = model.to_dict()
        if gains is not None:
            data.update(gains.to_dict())
        if args.save:
            save_model(model, args.save, gains)
        write_json(data, args.out)
        return
    listing = {name: FIXTURE_DEFAULTS[name] for name in fixture_names()}
    if args.out in (None, "-") and not args.json:
        for name in fixture_names():
            print(name)
        return
    write_json(listing, args.out)


HANDLERS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "design-gain": cmd_design_gain,
    "design-observer": cmd_design_observer,
    "floor": cmd_floor,
    "bounds": cmd_bounds,
    "asymptotics": cmd_asymptotics,
    "survey": cmd_survey,
    "composite": cmd_composite,
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "fixtures": cmd_fixtures,
}


# --- argument parsing ---

def _positive_int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")
    if not values or any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return values


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def build_parser():
    common = LapnetArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output file, '-' for standard output")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    common.add_argument("--threads", type=int, help="worker threads (default: settings or LAPNET_THREADS)")

    subject = LapnetArgumentParser(add_help=False)
    subject.add_argument("--model", help="subsystem model JSON file")
    subject.add_argument("--fixture", choices=fixture_names(), help="built-in example subsystem")
    subject.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                         help="fixture parameter, repeatable")
    subject.add_argument("--gains", help="JSON file with K and/or F overriding the model's gains")
    subject.add_argument("--K", help="feedback gain as an inline JSON matrix")
    subject.add_argument("--F", help="observer gain as an inline JSON matrix")

    parser = LapnetArgumentParser(prog="lapnet", description="H2 performance of linear consensus networks "
                                                             "through Laplacian spectra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("analyze", parents=[common, subject], help="performance measure from the spectrum")
    p.add_argument("--graph", required=True, help="edge-list file or kind:N[:weight]")
    p.add_argument("--measure", choices=["rho", "mu", "rho_u"], default="rho")
    p.add_argument("--observer", action="store_true", help="observer-based output feedback (uses F)")
    p.add_argument("--weight", choices=["output", "state"], default="output")
    p.add_argument("--oracle", action="store_true", help="also solve the assembled network directly")

    p = sub.add_parser("sweep", parents=[common, subject], help="performance function over a lambda grid (CSV)")
    p.add_argument("--kind", choices=[k for k in KINDS if k != "composite"], default="state_feedback")
    p.add_argument("--lambda-min", type=float, default=0.1)
    p.add_argument("--lambda-max", type=float, default=100.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--weight", choices=["output", "state"], default="output")
    p.add_argument("--per-output", action="store_true", help="one column per row of C")

    p = sub.add_parser("threshold", parents=[common, subject], help="minimum connectivity threshold")
    p.add_argument("--observer", action="store_true", help="threshold of A - lambda*F*H instead")

    for name, helptext in (("design-gain", "feedback gain with lambda_tilde <= c"),
                           ("design-observer", "observer gain with lambda_tilde <= c")):
        p = sub.add_parser(name, parents=[common, subject], help=helptext)
        p.add_argument("--c", type=float, required=True)
        p.add_argument("--save-model", help="write the model with the designed gain to this file")
        if name == "design-gain":
            p.add_argument("--decay", type=float, default=0.0, help="design for A + decay*I")

    p = sub.add_parser("floor", parents=[common, subject], help="cheap-gain performance floor")
    p.add_argument("--side", choices=SIDES, default="control")
    p.add_argument("--eps", type=_float_list, help="comma-separated epsilon schedule")

    p = sub.add_parser("bounds", parents=[common, subject], help="graph lower bounds (CSV)")
    p.add_argument("--graph", action="append", help="repeatable")

    p = sub.add_parser("asymptotics", parents=[common, subject], help="N*Gamma_N versus rho (CSV)")
    p.add_argument("--kind", choices=["path", "cycle"], default="path")
    p.add_argument("--sizes", type=_positive_int_list, default=[10, 20, 50, 100, 200])
    p.add_argument("--progress", action="store_true")

    p = sub.add_parser("survey", parents=[common, subject], help="empirical CDF of r1 over all graphs (CSV)")
    p.add_argument("--nodes", type=int, default=5)
    p.add_argument("--allow-large", action="store_true", help="permit n = 7")
    p.add_argument("--progress", action="store_true")

    p = sub.add_parser("composite", parents=[common, subject], help="network of networks")
    p.add_argument("--module-graph", required=True)
    p.add_argument("--higher-graph", required=True)
    p.add_argument("--K1", help="inner gain as inline JSON (default: the model's K)")
    p.add_argument("--K2", help="higher-level gain as inline JSON")
    p.add_argument("--alpha", type=float, default=1.0, help="K2 = alpha*K1 when --K2 is absent")
    p.add_argument("--port", type=int)
    p.add_argument("--threshold", action="store_true")
    p.add_argument("--oracle", action="store_true")

    p = sub.add_parser("simulate", parents=[common, subject], help="Monte-Carlo variance or a trajectory")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--burn-in", type=float)
    p.add_argument("--observer", action="store_true")
    p.add_argument("--trajectory", action="store_true", help="emit t,node,output_component,value CSV")
    p.add_argument("--random-x0", action="store_true", help="start the trajectory from a seeded random state")

    p = sub.add_parser("fit", parents=[common, subject], help="rational form of a performance function")
    p.add_argument("--kind", choices=[k for k in KINDS if k != "composite"], default="state_feedback")
    p.add_argument("--weight", choices=["output", "state"], default="output")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--tol", type=float)
    p.add_argument("--samples", type=_float_list)

    p = sub.add_parser("fixtures", parents=[common], help="list or dump the built-in subsystems")
    p.add_argument("--list", action="store_true")
    p.add_argument("--json", action="store_true", help="list with default parameters as JSON")
    p.add_argument("--show", choices=fixture_names())
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--save", help="also write the model file")
    return parser


def cli_dispatch(argv=None):
    """Runs one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    settings = SettingsManager()
    setup_logging(level=args.log_level, settings_manager=settings)
    threads = args.threads if args.threads else thread_count(settings.get_setting("threads"))
    ctx = RunContext(settings=settings, threads=threads, inputs={})
    logger.debug(f"lapnet {__version__}: {args.command} with {threads} thread(s)")
    try:
        HANDLERS[args.command](args, ctx)
    except (ModelValidationError, FileNotFoundError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_VALIDATION
    except NumericalFailure as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_NUMERICAL
    return EXIT_OK


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
