"""JSON experiment-config schema and (de)serialization.

Rationals appear in JSON either as numbers or as "num/den" strings; they are
parsed exactly (floats go through Fraction(str(x)) so "0.1" means 1/10).
"""

from __future__ import annotations

from fractions import Fraction

from .experiments import EXPERIMENTS, METHODS, ExperimentConfig, InvalidConfigError
from .netgen import GraphSpec

_RATIONAL = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
    ]
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ectrl experiment config",
    "type": "object",
    "required": ["experiment", "graph"],
    "additionalProperties": False,
    "properties": {
        "experiment": {"enum": list(EXPERIMENTS)},
        "graph": {
            "type": "object",
            "required": ["model", "n_nodes", "mean_degree"],
            "additionalProperties": False,
            "properties": {
                "model": {"enum": ["er", "sf"]},
                "n_nodes": {"type": "integer", "minimum": 1},
                "mean_degree": {"type": "number", "minimum": 0},
                "gamma": {"type": "number", "exclusiveMinimum": 2},
                "directed": {"type": "boolean"},
            },
        },
        "order": {"type": "integer", "minimum": 1},
        "unit_eigenvalues": {
            "type": "array",
            "items": {"type": "array", "items": _RATIONAL, "minItems": 1},
        },
        "rho_grid": {"type": "array", "items": _RATIONAL},
        "simplex_step": _RATIONAL,
        "delta_grid": {"type": "array", "items": _RATIONAL},
        "ns_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "q_grid": {"type": "array", "items": _RATIONAL},
        "k_grid": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "shared_weight": _RATIONAL,
        "realizations": {"type": "integer", "minimum": 1},
        "master_seed": {"type": "integer", "minimum": 0},
        "methods": {"type": "array", "items": {"enum": list(METHODS)}, "minItems": 1},
        "trials": {"type": "integer", "minimum": 1},
        "jobs": {"type": "integer", "minimum": 1},
        "timing": {"type": "boolean"},
    },
}


def parse_rational(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def config_from_dict(doc: dict) -> ExperimentConfig:
    import jsonschema

    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidConfigError(f"config schema violation: {exc.message}") from exc
    g = doc["graph"]
    graph = GraphSpec(
        model=g["model"],
        n_nodes=g["n_nodes"],
        mean_degree=g["mean_degree"],
        gamma=g.get("gamma", 3.0),
        directed=g.get("directed", False),
    )
    kwargs = dict(experiment=doc["experiment"], graph=graph)
    if "order" in doc:
        kwargs["order"] = doc["order"]
    if "unit_eigenvalues" in doc:
        kwargs["unit_eigenvalues"] = tuple(
            tuple(parse_rational(e) for e in typ) for typ in doc["unit_eigenvalues"]
        )
    for key in ("rho_grid", "delta_grid", "q_grid"):
        if key in doc:
            kwargs[key] = tuple(parse_rational(x) for x in doc[key])
    if "simplex_step" in doc:
        kwargs["simplex_step"] = parse_rational(doc["simplex_step"])
    if "ns_grid" in doc:
        kwargs["ns_grid"] = tuple(doc["ns_grid"])
    if "k_grid" in doc:
        kwargs["k_grid"] = tuple(doc["k_grid"])
    if "shared_weight" in doc:
        kwargs["shared_weight"] = parse_rational(doc["shared_weight"])
    for key in ("realizations", "master_seed", "trials", "jobs", "timing"):
        if key in doc:
            kwargs[key] = doc[key]
    if "methods" in doc:
        kwargs["methods"] = tuple(doc["methods"])
    cfg = ExperimentConfig(**kwargs)
    cfg.validate()
    return cfg


def _rat_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    g = cfg.graph
    return {
        "experiment": cfg.experiment,
        "graph": {
            "model": g.model,
            "n_nodes": g.n_nodes,
            "mean_degree": g.mean_degree,
            "gamma": g.gamma,
            "directed": g.directed,
        },
        "order": cfg.order,
        "unit_eigenvalues": [[_rat_str(e) for e in t] for t in cfg.unit_eigenvalues],
        "rho_grid": [_rat_str(Fraction(x)) for x in cfg.rho_grid],
        "simplex_step": _rat_str(Fraction(cfg.simplex_step)),
        "delta_grid": [_rat_str(Fraction(x)) for x in cfg.delta_grid],
        "ns_grid": list(cfg.ns_grid),
        "q_grid": [_rat_str(Fraction(x)) for x in cfg.q_grid],
        "k_grid": list(cfg.k_grid),
        "shared_weight": _rat_str(Fraction(cfg.shared_weight)),
        "realizations": cfg.realizations,
        "master_seed": cfg.master_seed,
        "methods": list(cfg.methods),
        "trials": cfg.trials,
        "jobs": cfg.jobs,
        "timing": cfg.timing,
    }
