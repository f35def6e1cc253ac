"""Run configuration documents (TOML).

Example::

    command = "profile"
    format = "csv"

    [model]
    kind = "power"
    tau = 0.25

    [grid]
    x_min = -5.0
    x_max = 5.0
    count = 201
    t = [1.0, 3.0, 5.0]

    [quadrature]
    rel_tolerance = 1e-8

Discrete models use ``kind = "discrete"`` with ``stress`` and ``strain``
arrays of ``[coefficient, order]`` pairs. The optional ``[initial]`` table
selects the profile initial data and ``[material]`` the dimensional
modulus/density for the wave speed.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .constitutive import DiscreteModel, PowerTypeModel
from .errors import DomainError, ParseError, ValidationError
from .kernel import QuadratureSettings

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

__all__ = ["COMMANDS", "FORMATS", "GridSpec", "InitialSpec", "RunConfig", "parse_config",
           "load_config"]

COMMANDS = ("classify", "material", "validate", "kernel", "profile", "compare")
FORMATS = ("csv", "json")

_TOP_KEYS = {"command", "format", "output", "name", "model", "grid", "quadrature",
             "initial", "material"}
_MODEL_KEYS = {"kind", "tau", "stress", "strain", "name"}
_GRID_KEYS = {"x_min", "x_max", "count", "t"}
_QUAD_KEYS = {"rel_tolerance", "abs_tolerance", "q_max_cap", "max_subdivisions",
              "cone_margin"}
_INITIAL_KEYS = {"u0", "v0", "x0", "width", "amplitude"}
_MATERIAL_KEYS = {"modulus", "density"}


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    count: int

    def values(self):
        return np.linspace(self.x_min, self.x_max, self.count)


@dataclass(frozen=True)
class InitialSpec:
    """Profile initial data: ``u0`` in dirac|gaussian|zero, ``v0`` in gaussian|zero.

    Gaussians are centred at ``x0`` with standard deviation ``width`` and
    unit mass times ``amplitude``; they are sampled on the output grid.
    """

    u0: str = "dirac"
    v0: str = "zero"
    x0: float = 0.0
    width: float = 0.1
    amplitude: float = 1.0


@dataclass(frozen=True)
class RunConfig:
    model: object
    command: str = "classify"
    grid: GridSpec | None = None
    t_list: tuple = ()
    settings: QuadratureSettings = field(default_factory=QuadratureSettings)
    output: str | None = None
    format: str = "csv"
    initial: InitialSpec = field(default_factory=InitialSpec)
    modulus: float | None = None
    density: float | None = None
    name: str = ""


def _unknown(table, allowed, where):
    extra = sorted(set(table) - allowed)
    if extra:
        raise ParseError(f"unknown key {extra[0]!r} in {where}")


def _table(doc, key):
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ParseError(f"[{key}] must be a table")
    return value


def _number(table, key, where, default=None):
    if key not in table:
        if default is None:
            raise ValidationError(f"{where}.{key} is required")
        return default
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}.{key} must be a number")
    return float(value)


def _terms(value, where):
    if not isinstance(value, list) or not value:
        raise ValidationError(f"{where} must be a nonempty array of [coefficient, order] pairs")
    out = []
    for item in value:
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           for v in item)):
            raise ValidationError(f"{where} entries must be [coefficient, order] pairs")
        out.append((float(item[0]), float(item[1])))
    return out


def _model(table):
    _unknown(table, _MODEL_KEYS, "[model]")
    kind = table.get("kind")
    name = str(table.get("name", ""))
    try:
        if kind == "power":
            return PowerTypeModel(_number(table, "tau", "model"), name)
        if kind == "discrete":
            return DiscreteModel(_terms(table.get("stress"), "model.stress"),
                                 _terms(table.get("strain"), "model.strain"), name)
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc
    raise ValidationError("model.kind must be 'discrete' or 'power'")


def _grid(table):
    if not table:
        return None, ()
    _unknown(table, _GRID_KEYS, "[grid]")
    t = table.get("t", [])
    if not isinstance(t, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in t):
        raise ValidationError("grid.t must be an array of numbers")
    t_list = tuple(float(v) for v in t)
    if any(not (v > 0.0 and math.isfinite(v)) for v in t_list):
        raise ValidationError("grid.t entries must be positive")
    if list(t_list) != sorted(t_list):
        raise ValidationError("grid.t must be sorted")
    if not {"x_min", "x_max", "count"} & set(table):
        return None, t_list
    count = table.get("count")
    if isinstance(count, bool) or not isinstance(count, int):
        raise ValidationError("grid.count must be an integer")
    if count < 2:
        raise ValidationError("grid.count must be >= 2")
    x_min, x_max = _number(table, "x_min", "grid"), _number(table, "x_max", "grid")
    if not x_max > x_min:
        raise ValidationError("grid.x_max must exceed grid.x_min")
    return GridSpec(x_min, x_max, count), t_list


def _settings(table):
    _unknown(table, _QUAD_KEYS, "[quadrature]")
    kwargs = {}
    for key in _QUAD_KEYS & set(table):
        value = table[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"quadrature.{key} must be a number")
        kwargs[key] = int(value) if key == "max_subdivisions" else float(value)
    try:
        return QuadratureSettings(**kwargs)
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc


def _initial(table):
    _unknown(table, _INITIAL_KEYS, "[initial]")
    spec = InitialSpec(
        u0=str(table.get("u0", "dirac")),
        v0=str(table.get("v0", "zero")),
        x0=_number(table, "x0", "initial", 0.0),
        width=_number(table, "width", "initial", 0.1),
        amplitude=_number(table, "amplitude", "initial", 1.0),
    )
    if spec.u0 not in ("dirac", "gaussian", "zero"):
        raise ValidationError("initial.u0 must be 'dirac', 'gaussian' or 'zero'")
    if spec.v0 not in ("gaussian", "zero"):
        raise ValidationError("initial.v0 must be 'gaussian' or 'zero'")
    if not spec.width > 0.0:
        raise ValidationError("initial.width must be positive")
    return spec


def parse_config(text):
    """Parse and validate a TOML run configuration.

    Raises
    ------
    ParseError
        Malformed TOML (message carries line and column) or an unknown key.
    ValidationError
        Well-formed document violating an invariant.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"invalid TOML: {exc}") from exc
    _unknown(doc, _TOP_KEYS, "top level")
    command = doc.get("command", "classify")
    if command not in COMMANDS:
        raise ValidationError(f"command must be one of {', '.join(COMMANDS)}")
    fmt = doc.get("format", "csv")
    if fmt not in FORMATS:
        raise ValidationError("format must be 'csv' or 'json'")
    if "model" not in doc:
        raise ValidationError("[model] table is required")
    model = _model(_table(doc, "model"))
    grid, t_list = _grid(_table(doc, "grid"))
    if command in ("kernel", "profile", "compare"):
        if grid is None:
            raise ValidationError(f"command {command!r} needs grid.x_min, x_max and count")
        if not t_list:
            raise ValidationError(f"command {command!r} needs a nonempty grid.t")
    mat = _table(doc, "material")
    _unknown(mat, _MATERIAL_KEYS, "[material]")
    modulus = _number(mat, "modulus", "material", math.nan) if "modulus" in mat else None
    density = _number(mat, "density", "material", math.nan) if "density" in mat else None
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ValidationError("output must be a path string")
    return RunConfig(
        model=model,
        command=command,
        grid=grid,
        t_list=t_list,
        settings=_settings(_table(doc, "quadrature")),
        output=output,
        format=fmt,
        initial=_initial(_table(doc, "initial")),
        modulus=modulus,
        density=density,
        name=str(doc.get("name", "")),
    )


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
