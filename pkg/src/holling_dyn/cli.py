"""Command-line interface: ``holling-dyn simulate|analyze|limit-study|fit``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import analysis, experiments, fitting
from .errors import HollingError, IntegrationError, NoCycleDetected, ValidationError
from .integrator import IntegratorConfig, integrate
from .model import FullParams, ReducedParams, embed_reduced, full_field, param_names, reduced_field
from .output import csv_text, json_text, svg_lines, write_atomic

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

FULL_NAMES = param_names(FullParams)
REDUCED_NAMES = param_names(ReducedParams)
EXPONENTS = ("l", "m")

_number = {"type": "number"}
_positive = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}


def _params_schema(names, required_exponents=False):
    required = [n for n in names if n not in EXPONENTS or required_exponents]
    return {
        "type": "object",
        "properties": {n: _number for n in names},
        "required": required,
        "additionalProperties": False,
    }


_integrator_schema = {
    "type": "object",
    "properties": {
        "rel_tol": _positive,
        "abs_tol": _positive,
        "max_steps": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

_ic_full = {
    "type": "object",
    "properties": {"N": _nonneg, "P_S": _nonneg, "P_H": _nonneg},
    "required": ["N", "P_S", "P_H"],
    "additionalProperties": False,
}
_ic_reduced = {
    "type": "object",
    "properties": {"N": _nonneg, "P": _nonneg},
    "required": ["N", "P"],
    "additionalProperties": False,
}

_scenario_common = {
    "title": {"type": ["string", "number"]},
    "epsilon": _positive,
    "horizon": _nonneg,
    "grid_step": _positive,
    "t0": _number,
    "integrator": _integrator_schema,
}


def _scenario_branch(model, params_schema, ic_schema, needs_epsilon=False):
    props = {"model": {"const": model}, "params": params_schema, "ic": ic_schema, **_scenario_common}
    branch = {
        "type": "object",
        "properties": props,
        "required": ["model", "params", "ic", "horizon", "grid_step"] + (["epsilon"] if needs_epsilon else []),
        "additionalProperties": False,
    }
    if not needs_epsilon:
        branch["not"] = {"required": ["epsilon"]}
    return branch


SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["model"],
    "properties": {"model": {"enum": ["full", "scaled", "reduced", "generalized"]}},
}
SCENARIO_BRANCHES = {
    "full": _scenario_branch("full", _params_schema(FULL_NAMES), _ic_full),
    "generalized": _scenario_branch("generalized", _params_schema(FULL_NAMES, True), _ic_full),
    "reduced": _scenario_branch("reduced", _params_schema(REDUCED_NAMES), _ic_reduced),
    "scaled": _scenario_branch(
        "scaled", _params_schema(REDUCED_NAMES), {"oneOf": [_ic_full, _ic_reduced]}, needs_epsilon=True
    ),
}

ANALYZE_SCHEMA = {
    "type": "object",
    "properties": {"params": _params_schema(FULL_NAMES), "N0": _nonneg},
    "required": ["params"],
    "additionalProperties": False,
}

LIMIT_SCHEMA = {
    "type": "object",
    "properties": {
        "params": _params_schema(REDUCED_NAMES),
        "epsilons": {"type": "array", "items": _positive, "minItems": 1},
        "ic": _ic_reduced,
        "tau": _positive,
        "grid_step": _positive,
        "integrator": _integrator_schema,
        "title": {"type": "string"},
    },
    "required": ["params", "epsilons", "ic", "tau"],
    "additionalProperties": False,
}

FIT_SCHEMA = {
    "type": "object",
    "properties": {
        "free_params": {"type": "array", "items": {"enum": list(REDUCED_NAMES)}, "uniqueItems": True},
        "fixed_values": {"type": "object", "additionalProperties": _positive},
        "initial_guess": {"type": "object", "additionalProperties": _positive},
        "bounds": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": _positive, "minItems": 2, "maxItems": 2},
        },
        "max_iters": {"type": "integer", "minimum": 0},
        "tolerance": _positive,
        "integrator": _integrator_schema,
    },
    "additionalProperties": False,
}


class InputError(ValidationError):
    pass


def _load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _validate(doc, schema, what):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise InputError(f"{what}: {where}: {err.message}")


def _build(cls, values, where):
    try:
        return cls(**values)
    except ValidationError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _integrator_cfg(doc) -> IntegratorConfig:
    return IntegratorConfig(**doc.get("integrator", {}))


def _run_scenario(doc):
    """Return (header, times, states) for a validated scenario."""
    model = doc["model"]
    t0 = float(doc.get("t0", 0.0))
    horizon = float(doc["horizon"])
    t1 = t0 + horizon
    grid = experiments.uniform_grid(t0, t1, doc["grid_step"]) if horizon > 0 else np.array([t0])
    cfg = _integrator_cfg(doc)
    ic = doc["ic"]
    if model in ("full", "generalized"):
        p = _build(FullParams, doc["params"], "params")
        rhs, y0, header = full_field(p), (ic["N"], ic["P_S"], ic["P_H"]), ("t", "N", "P_S", "P_H")
    elif model == "reduced":
        p = _build(ReducedParams, doc["params"], "params")
        rhs, y0, header = reduced_field(p), (ic["N"], ic["P"]), ("t", "N", "P")
    else:
        rp = _build(ReducedParams, doc["params"], "params")
        try:
            p = embed_reduced(rp, doc["epsilon"])
        except ValidationError as exc:
            raise InputError(f"epsilon: {exc}") from exc
        if "P" in ic:
            split = experiments.slow_manifold_split(rp.chi, rp.kappa, ic["N"], ic["P"], rp.m)
            y0 = (ic["N"], *split)
        else:
            y0 = (ic["N"], ic["P_S"], ic["P_H"])
        rhs, header = full_field(p), ("t", "N", "P_S", "P_H")
    traj = integrate(rhs, y0, t0, t1, grid, cfg)
    return header, traj.times, traj.states


def cmd_simulate(args) -> int:
    path = Path(args.file)
    doc = _load_json(path)
    _validate(doc, SCENARIO_SCHEMA, "scenario")
    _validate(doc, SCENARIO_BRANCHES[doc["model"]], "scenario")
    header, times, states = _run_scenario(doc)
    rows = np.column_stack([times, states])
    out = Path(args.out)
    outputs = {out / f"{path.stem}.csv": csv_text(header, rows)}
    if args.svg:
        series = {name: states[:, i] for i, name in enumerate(header[1:])}
        outputs[out / f"{path.stem}.svg"] = svg_lines(times, series, title=str(doc.get("title", path.stem)))
    for target, text in outputs.items():
        write_atomic(target, text)
    print(json.dumps({"written": [str(p) for p in outputs]}))
    return EXIT_OK


def _complex_pairs(values):
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def analysis_report(p: FullParams, N0=None) -> dict:
    report = analysis.check_assumptions(p)
    out = {"params": p.to_dict(), "assumptions": report.to_dict()}
    if not (report.a21_holds and report.a22_holds):
        return out
    if p.base_exponents:
        eq = analysis.equilibria(p)
        out["equilibria"] = {
            name: {
                "state": list(point),
                "eigenvalues": _complex_pairs(eq.eigenvalues_at[name]),
                "classification": eq.classification_at[name],
            }
            for name, point in eq.points().items()
        }
        if eq.E_star is not None:
            out["E_star"] = list(eq.E_star)
            rh = analysis.routh_hurwitz_interior(p)
            out["routh_hurwitz"] = {"p1": rh.p1, "p2": rh.p2, "p3": rh.p3, "stable": rh.stable}
    else:
        out["equilibria_note"] = "closed-form equilibria need l = m = 1"
    sub = analysis.predator_subsystem(p, N0)
    out["lambda_star"] = sub.lambda_star
    out["left_vec"] = list(sub.left_vec)
    out["dissipativity_M"] = sub.dissipativity_M
    return out


def cmd_analyze(args) -> int:
    path = Path(args.file)
    doc = _load_json(path)
    if "params" not in doc:
        doc = {"params": doc}
    _validate(doc, ANALYZE_SCHEMA, "analysis input")
    p = _build(FullParams, doc["params"], "params")
    text = json_text(analysis_report(p, doc.get("N0")))
    if args.out:
        write_atomic(Path(args.out) / f"{path.stem}.analysis.json", text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_limit_study(args) -> int:
    path = Path(args.file)
    doc = _load_json(path)
    _validate(doc, LIMIT_SCHEMA, "limit-study config")
    rp = _build(ReducedParams, doc["params"], "params")
    res = experiments.singular_limit_study(
        rp,
        doc["epsilons"],
        (doc["ic"]["N"], doc["ic"]["P"]),
        doc["tau"],
        grid_step=doc.get("grid_step", 0.01),
        cfg=_integrator_cfg(doc),
    )
    rows = list(zip(res.epsilons, res.sup_err_N, res.sup_err_P))
    target = Path(args.out) / f"{path.stem}.csv"
    outputs = {target: csv_text(("epsilon", "sup_err_N", "sup_err_P"), rows)}
    if args.svg:
        t = res.reduced.times
        series = {"N (reduced)": res.reduced.states[:, 0], "P (reduced)": res.reduced.states[:, 1]}
        for e, traj in zip(res.epsilons, res.full):
            series[f"N eps={e:g}"] = traj.states[:, 0]
            series[f"P eps={e:g}"] = traj.states[:, 1] + traj.states[:, 2]
        outputs[target.with_suffix(".svg")] = svg_lines(t, series, title=doc.get("title", path.stem))
    for target, text in outputs.items():
        write_atomic(target, text)
    print(json.dumps({"written": [str(p) for p in outputs]}))
    return EXIT_OK


def _fit_config(doc) -> fitting.FitConfig:
    base = fitting.default_fit_config()
    free = tuple(doc.get("free_params", base.free_params))
    # Parameters neither listed as free nor fixed keep their reference-fit values.
    fixed = {k: v for k, v in fitting.TABLE2.items() if k not in free}
    fixed.update(doc.get("fixed_values", {}))
    guess = {k: v for k, v in fitting.TABLE2.items() if k in free}
    guess.update(doc.get("initial_guess", {}))
    bounds = {k: (v / 10.0, v * 10.0) for k, v in guess.items()}
    bounds.update({k: tuple(v) for k, v in doc.get("bounds", {}).items()})
    try:
        return fitting.FitConfig(
            free_params=free,
            fixed_values=fixed,
            initial_guess=guess,
            bounds=bounds,
            max_iters=doc.get("max_iters", base.max_iters),
            tolerance=doc.get("tolerance", base.tolerance),
            integrator=_integrator_cfg(doc),
        )
    except ValidationError as exc:
        raise InputError(f"fit config: {exc}") from exc


def cmd_fit(args) -> int:
    if args.dataset and args.embedded:
        raise InputError("give either --dataset or --embedded, not both")
    data = fitting.load_dataset(args.dataset if args.dataset else "embedded")
    stem = Path(args.file).stem if args.file else "fit"
    if args.eval_only:
        if not args.params_from:
            raise InputError("--eval-only needs --params-from")
        pdoc = _load_json(args.params_from)
        if "params" in pdoc:
            pdoc = pdoc["params"]
        _validate(pdoc, _params_schema(REDUCED_NAMES), "params")
        p = _build(ReducedParams, pdoc, "params")
        result = {"params": p.to_dict(), "sse": fitting.objective_sse(p, data), "evaluated_only": True}
    else:
        doc = _load_json(args.file) if args.file else {}
        _validate(doc, FIT_SCHEMA, "fit config")
        if args.params_from:
            # Parameter file seeds the start point; explicit config guesses win.
            pdoc = _load_json(args.params_from)
            pdoc = pdoc.get("params", pdoc)
            free = doc.get("free_params", fitting.FREE_DEFAULTS)
            guess = {k: v for k, v in pdoc.items() if k in free}
            guess.update(doc.get("initial_guess", {}))
            doc["initial_guess"] = guess
        config = _fit_config(doc)
        res = fitting.fit(config, data)
        p = res.params
        result = res.to_dict()
    text = json_text(result)
    outputs = {}
    out = Path(args.out) if args.out else None
    if out is not None:
        outputs[out / f"{stem}.result.json"] = text
    if args.report:
        sim = fitting.simulate_at_years(p, data)
        rows = np.column_stack([data.years, data.hares, data.lynx, sim[:, 0], sim[:, 1]])
        header = ("year", "hares", "lynx", "N_model", "P_model")
        outputs[(out or Path(".")) / f"{stem}.report.csv"] = csv_text(header, rows)
    for target, body in outputs.items():
        write_atomic(target, body)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holling-dyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a scenario and write a trajectory CSV")
    p.add_argument("file")
    p.add_argument("--svg", action="store_true", help="also write a line plot")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="equilibria, stability and dissipativity report")
    p.add_argument("file")
    p.add_argument("--out", default=None, help="also write the report into this directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("limit-study", help="singular-limit error table")
    p.add_argument("file")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_limit_study)

    p = sub.add_parser("fit", help="least-squares fit of the reduced model")
    p.add_argument("file", nargs="?", default=None, help="fit config JSON (defaults apply when omitted)")
    p.add_argument("--dataset", default=None, help="CSV with header year,hares_thousands,lynx_thousands")
    p.add_argument("--embedded", action="store_true", help="use the built-in 1900-1920 record (default)")
    p.add_argument("--params-from", default=None, help="reduced-model parameter JSON")
    p.add_argument("--eval-only", action="store_true", help="evaluate the objective without optimizing")
    p.add_argument("--report", action="store_true", help="write fitted trajectory vs data CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IntegrationError, NoCycleDetected) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HollingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
