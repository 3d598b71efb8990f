"""Library of loader functions for reading experiment configs from json files
and writing experiment results. A config is a single json document; see the
configs/ directory for examples of its structure. Reports are written as CSV
with a fixed float format so that reruns of a config produce identical files.

These functions operate as the Loader of an anisopy experiment
"""
import csv
import json
import logging
from typing import Any, Dict, List, Optional

import scipy.io

from .harness import ConfigError, ExperimentConfig, RateReport
from .keylang import ExpressionSyntaxError, compile_expression, variables
from .mesh import Grid1D, InvalidMeshError, InvalidSplitError, TensorMesh, build_tensor_mesh, build_uniform_grid
from .problems import DiffusionSpec, SourceSpec, UnknownProblemError, build_diffusion, build_source
from .space import NodalField

__all__ = [
    "CONFIG_KEYS",
    "load_config",
    "config_from_dict",
    "mesh_from_dict",
    "diffusion_from_dict",
    "source_from_dict",
    "format_float",
    "write_report",
    "write_summary",
    "dump_field",
    "dump_matrix",
]

logger = logging.getLogger(__name__)

CONFIG_KEYS = frozenset(
    {
        "kind",
        "dim",
        "q",
        "diffusion",
        "source",
        "mesh",
        "eps",
        "cells",
        "load_mode",
        "tol",
        "maxit",
        "threads",
        "limit",
        "reference_levels",
        "delta",
        "c2",
        "quad_cells",
        "quadrature",
        "min_slope",
        "max_slope",
        "slope_slack",
        "h2_ratio",
        "decomp_tolerance",
        "output",
        "dump_fields",
    }
)
"""The keys a config document may contain"""

_PASSTHROUGH = {
    "load_mode": str,
    "tol": float,
    "maxit": int,
    "threads": int,
    "limit": bool,
    "reference_levels": int,
    "c2": float,
    "quad_cells": int,
    "quadrature": int,
    "min_slope": float,
    "max_slope": float,
    "slope_slack": float,
    "h2_ratio": float,
    "decomp_tolerance": float,
    "output": str,
    "dump_fields": bool,
}


def load_config(filename: str) -> ExperimentConfig:
    """Creates an ExperimentConfig object from the specified json file

    Parameters
    ----------
    filename : str
        the path of the json file

    Returns
    -------
    ExperimentConfig
        the config, not yet validated

    Raises
    ------
    ConfigError if the document is malformed
    """
    with open(filename, "r") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{filename} is not valid json: {e}") from e
    logger.debug(f"loaded config {filename}")
    return config_from_dict(obj)


def _as_list(value: Any) -> List:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def config_from_dict(obj: Dict[str, Any]) -> ExperimentConfig:
    """Creates an ExperimentConfig object from a parsed json document

    Parameters
    ----------
    obj : Dict[str, Any]
        the document

    Returns
    -------
    ExperimentConfig
        the config

    Raises
    ------
    ConfigError if a key is unknown, a required key is missing, or a value
    cannot be converted
    """
    if not isinstance(obj, dict):
        raise ConfigError("a config must be a json object")
    unknown = set(obj) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for key in ("kind", "diffusion", "source"):
        if key not in obj:
            raise ConfigError(f"config is missing '{key}'")
    try:
        dim = int(obj.get("dim", 2))
        q = int(obj.get("q", 1))
        kwargs: Dict[str, Any] = {
            "kind": str(obj["kind"]),
            "diffusion": diffusion_from_dict(obj["diffusion"], dim, q),
            "source": source_from_dict(obj["source"], dim, q),
        }
        if "mesh" in obj:
            kwargs["mesh"] = mesh_from_dict(obj["mesh"], dim, q)
        if "eps" in obj:
            kwargs["eps"] = [float(e) for e in _as_list(obj["eps"])]
        if "cells" in obj:
            kwargs["cells"] = [int(m) for m in _as_list(obj["cells"])]
        if "delta" in obj:
            kwargs["delta"] = [float(d) for d in _as_list(obj["delta"])]
        for key, cast in _PASSTHROUGH.items():
            if key in obj and obj[key] is not None:
                kwargs[key] = cast(obj[key])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid config value: {e}") from e
    return ExperimentConfig(**kwargs)


def mesh_from_dict(obj: Dict[str, Any], dim: int, q: int) -> TensorMesh:
    """Creates a TensorMesh from {"uniform": m or [m, ...]} or
    {"points": [[...], ...]}

    Raises
    ------
    ConfigError if the description is malformed or the grids are invalid
    """
    try:
        if "uniform" in obj:
            cells = _as_list(obj["uniform"])
            if len(cells) == 1:
                cells = cells * dim
            grids = [build_uniform_grid(int(m)) for m in cells]
        elif "points" in obj:
            grids = [Grid1D(points) for points in obj["points"]]
        else:
            raise ConfigError("a mesh needs 'uniform' or 'points'")
        if len(grids) != dim:
            raise ConfigError(f"a {dim}D mesh needs {dim} grids, got {len(grids)}")
        return build_tensor_mesh(grids, q)
    except (InvalidMeshError, InvalidSplitError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid mesh: {e}") from e


def _compile(value: Any, dim: int):
    """Returns a float, or a compiled function for an expression string"""
    if isinstance(value, str):
        try:
            fn = compile_expression(value)
        except ExpressionSyntaxError as e:
            raise ConfigError(f"invalid expression '{value}': {e}") from e
        used = variables(fn.ast)
        if used and max(used) >= dim:
            raise ConfigError(f"expression '{value}' uses x{max(used) + 1} in {dim}D")
        return fn
    return float(value)


def _uses(entry: Any) -> set:
    return variables(entry.ast) if callable(entry) else set()


def diffusion_from_dict(obj: Dict[str, Any], dim: int, q: int) -> DiffusionSpec:
    """Creates a DiffusionSpec from {"name", "params"} or from
    {"entries", "lambda", "flags"}

    Expression entries are KeyLang strings in x1..xN. Undeclared flags
    default to: symmetric when the entries equal their transpose, a22_x2_only
    when no A22 entry uses an X1 coordinate, lipschitz true, and
    offdiag_zero_on_boundary true only when every off-diagonal entry is 0.

    Raises
    ------
    ConfigError if the description is malformed
    """
    try:
        if "name" in obj and "entries" not in obj:
            return build_diffusion(obj["name"], dim, q, obj.get("params"))
        raw = obj["entries"]
        if len(raw) != dim or any(len(row) != dim for row in raw):
            raise ConfigError(f"diffusion entries must be a {dim}x{dim} matrix")
        entries = [[_compile(e, dim) for e in row] for row in raw]
        x1 = set(range(q))
        defaults = {
            "symmetric": all(raw[i][j] == raw[j][i] for i in range(dim) for j in range(dim)),
            "lipschitz": True,
            "offdiag_zero_on_boundary": all(
                entries[i][j] == 0.0 for i in range(dim) for j in range(dim) if i != j
            ),
            "a22_x2_only": not any(_uses(entries[i][j]) & x1 for i in range(q, dim) for j in range(q, dim)),
        }
        flags = {**defaults, **{k: bool(v) for k, v in obj.get("flags", {}).items()}}
        unknown = set(flags) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown diffusion flags {sorted(unknown)}")
        return DiffusionSpec(obj.get("name", "custom"), entries, q, float(obj["lambda"]), **flags)
    except UnknownProblemError as e:
        raise ConfigError(str(e)) from e
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid diffusion: {e}") from e


def source_from_dict(obj: Dict[str, Any], dim: int, q: int) -> SourceSpec:
    """Creates a SourceSpec from {"name", "params"} or from
    {"expression", "tags"}

    Raises
    ------
    ConfigError if the description is malformed
    """
    try:
        if "expression" not in obj:
            return build_source(obj["name"], dim, q, obj.get("params"))
        fn = _compile(str(obj["expression"]), dim)
        return SourceSpec(obj.get("name", obj["expression"]), fn, obj.get("tags", []))
    except UnknownProblemError as e:
        raise ConfigError(str(e)) from e
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid source: {e}") from e


def format_float(x: float) -> str:
    """Formats a float with 17 significant digits"""
    return format(float(x), ".17g")


def _columns(report: RateReport) -> List[str]:
    columns = [report.primary]
    for case in report.cases:
        for name in case.errors:
            if name not in columns:
                columns.append(name)
    return columns


def write_report(report: RateReport, path: str) -> None:
    """Writes the report as CSV

    One row per case with the columns kind, param_name, param, the primary
    quantity, the other measured quantities and at_floor, followed by
    slope, intercept and r2 rows per fit, a row per metric and a final pass
    row.

    Parameters
    ----------
    report : RateReport
        the report to write
    path : str
        the path of the CSV file
    """
    columns = _columns(report)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["kind", "param_name", "param", *columns, "at_floor"])
        for case in report.cases:
            values = [format_float(case.errors[c]) if c in case.errors else "" for c in columns]
            writer.writerow(
                [report.kind, case.param_name, format_float(case.param), *values, str(case.at_floor).lower()]
            )
        for name, fit in report.fits.items():
            writer.writerow(["slope", name, format_float(fit.slope)])
            writer.writerow(["intercept", name, format_float(fit.intercept)])
            writer.writerow(["r2", name, format_float(fit.r2)])
        for name, value in report.metrics.items():
            writer.writerow([name, format_float(value)])
        writer.writerow(["pass", report.status])


def write_summary(report: RateReport, path: str) -> None:
    """Writes a plain-text summary of the report"""
    wall = sum(case.wall_time for case in report.cases)
    iterations = sum(s.iterations for case in report.cases for s in case.stats)
    lines = [
        f"experiment: {report.kind}",
        f"status: {report.status}",
        f"cases: {len(report.cases)}",
        f"cg iterations: {iterations}",
        f"wall time: {wall:.3f} s",
    ]
    for name, fit in report.fits.items():
        lines.append(f"fit {name}: slope={fit.slope:.6f} intercept={fit.intercept:.6f} r2={fit.r2:.6f}")
        if fit.dropped:
            lines.append(f"  dropped at floor: {len(fit.dropped)} samples")
    for name, value in report.metrics.items():
        lines.append(f"{name}: {value:.6g}")
    lines += report.notes
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def dump_field(field: NodalField, path: str) -> None:
    """Writes the field as CSV rows x1,...,xN,value in node order"""
    coords = field.mesh.node_coordinates
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([f"x{a + 1}" for a in range(field.mesh.dim)] + ["value"])
        for k in range(field.mesh.num_nodes):
            writer.writerow([format_float(c) for c in coords[:, k]] + [format_float(field.values[k])])


def dump_matrix(matrix, path: str, comment: Optional[str] = None) -> None:
    """Writes a sparse matrix in Matrix Market coordinate format"""
    scipy.io.mmwrite(path, matrix, comment=comment or "", precision=17)
