"""Flat key=value experiment configuration with per-experiment schemas.

The format is deliberately rigid: one ``key = value`` pair per line, ``#``
comments, dotted section names, no nesting. Every experiment declares the
exact keys it accepts; unknown or inapplicable keys are hard errors, since
a silently ignored typo would corrupt a sweep.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

from .pulses import SpinSystem
from .search import MAX_ORDER, OracleSpec, all_oracles

EXPERIMENT_NAMES = (
    "table1",
    "k1-curves",
    "k2-curves",
    "robustness",
    "bb1-scaling",
    "spectra",
)


class ConfigError(ValueError):
    """Malformed configuration text, unknown key, or invalid value."""


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines into a string mapping."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def apply_overrides(mapping: dict[str, str], overrides: list[str]) -> dict[str, str]:
    """Apply ``key=value`` command-line overrides on top of a mapping."""
    out = dict(mapping)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        out[key.strip()] = value.strip()
    return out


def config_hash(mapping: dict[str, str]) -> str:
    """Stable short hash of the effective configuration.

    The output location is excluded: it does not change what is computed.
    """
    physics = {k: v for k, v in mapping.items() if not k.startswith("output.")}
    blob = "\n".join(f"{k}={v}" for k, v in sorted(physics.items()))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# value parsers

def _float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise ConfigError(f"not a number: {s!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"number must be finite: {s!r}")
    return v


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ConfigError(f"not an integer: {s!r}") from None


def _float_list(s: str) -> tuple[float, ...]:
    items = [x.strip() for x in s.split(",") if x.strip()]
    if not items:
        raise ConfigError("empty number list")
    return tuple(_float(x) for x in items)


def _str_list(s: str) -> tuple[str, ...]:
    items = [x.strip() for x in s.split(",") if x.strip()]
    if not items:
        raise ConfigError("empty list")
    return tuple(items)


def _orders(s: str) -> tuple[int | None, ...]:
    """Recursion orders; ``inf`` selects the direct target preparation."""
    out: list[int | None] = []
    for item in _str_list(s):
        if item == "inf":
            out.append(None)
        else:
            r = _int(item)
            if r < 0:
                raise ConfigError(f"recursion order must be nonnegative: {item}")
            out.append(r)
    return tuple(out)


def _matching_sets(s: str, k: int) -> tuple[OracleSpec, ...]:
    """Matching-set selection: ``all`` or sets like ``00+01;10+01``."""
    if s == "all":
        return all_oracles(2, k)
    specs = []
    for group in s.split(";"):
        states = frozenset(x.strip() for x in group.split("+") if x.strip())
        if not states:
            raise ConfigError(f"empty matching set in {s!r}")
        try:
            spec = OracleSpec(2, states)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if spec.k != k:
            raise ConfigError(
                f"matching set {spec.label()} has {spec.k} states, expected {k}"
            )
        specs.append(spec)
    return tuple(specs)


# ---------------------------------------------------------------------------
# schemas

@dataclass(frozen=True)
class Field:
    default: str
    parse: Callable[[str], object]
    help: str = ""


_SYSTEM_FIELDS = {
    "system.j": Field("194.8", _float, "scalar coupling in Hz"),
    "system.t90": Field("15e-6", _float, "nominal 90-degree pulse time in s"),
    "system.t2_h": Field("1.2", _float, "proton T2 in s"),
    "system.t2_c": Field("0.6", _float, "carbon T2 in s"),
}

_OUT_FIELD = {"output.dir": Field("out", str, "output directory")}

SCHEMAS: dict[str, dict[str, Field]] = {
    "table1": {
        **_OUT_FIELD,
        "r.max": Field("4", _int, "largest recursion order row"),
        "oracle.k1": Field("11", str, "representative single matching state"),
        "oracle.k2": Field("00+01", str, "representative pair of matching states"),
    },
    "k1-curves": {
        **_OUT_FIELD,
        **_SYSTEM_FIELDS,
        "oracle.matching": Field("all", str, "matching sets, e.g. 00;01 or all"),
        "r.max": Field("3", _int, "largest recursion order"),
        "style": Field("naive,bb1", _str_list, "pulse styles to run"),
        "error.eps": Field("0", _float, "rf amplitude error on both channels"),
        "error.delta_j": Field("0", _float, "fractional coupling miscalibration"),
    },
    "k2-curves": {
        **_OUT_FIELD,
        **_SYSTEM_FIELDS,
        "oracle.matching": Field("all", str, "matching sets, e.g. 00+01;10+01"),
        "r.max": Field("3", _int, "largest recursion order"),
        "style": Field("naive", _str_list, "pulse styles to run"),
        "error.eps": Field("0", _float, "rf amplitude error on both channels"),
        "error.delta_j": Field("0", _float, "fractional coupling miscalibration"),
    },
    "robustness": {
        **_OUT_FIELD,
        **_SYSTEM_FIELDS,
        "oracle.matching": Field("all", str, "single-match sets to sweep"),
        "r.max": Field("3", _int, "largest recursion order"),
        "error.eps": Field("0,0.02,0.05,0.1", _float_list, "rf error grid"),
        "error.delta_j": Field("0,0.05", _float_list, "coupling error grid"),
    },
    "bb1-scaling": {
        **_OUT_FIELD,
        **_SYSTEM_FIELDS,
        "oracle.matching": Field("11", str, "single-match set for r=0 success"),
        "eps.min": Field("1e-3", _float, "smallest rf error"),
        "eps.max": Field("1e-2", _float, "largest rf error"),
        "eps.points": Field("8", _int, "log-spaced grid size"),
    },
    "spectra": {
        **_OUT_FIELD,
        **_SYSTEM_FIELDS,
        "oracle.k": Field("1", _int, "number of matching states (1 or 2)"),
        "oracle.matching": Field("all", str, "matching sets"),
        "r.values": Field("0,1,2,3,inf", _orders, "orders per panel column"),
        "style": Field("naive", str, "pulse style"),
        "error.eps": Field("0", _float, "rf amplitude error on both channels"),
        "error.delta_j": Field("0", _float, "fractional coupling miscalibration"),
        # T2-limited lines are a fraction of a Hz wide; the default grid
        # spacing of 0.1 Hz keeps sampled peak heights within ~12 percent
        "freq.span": Field("150", _float, "half-width of the frequency grid in Hz"),
        "freq.points": Field("3001", _int, "number of grid points"),
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment: effective key=value mapping plus typed views."""

    experiment: str
    mapping: dict[str, str]
    out_dir: str
    system: SpinSystem = SpinSystem()
    oracles: tuple[OracleSpec, ...] = ()
    r_max: int = 0
    r_values: tuple[int | None, ...] = ()
    styles: tuple[str, ...] = ()
    eps: float = 0.0
    delta_j: float = 0.0
    eps_values: tuple[float, ...] = ()
    delta_j_values: tuple[float, ...] = ()
    eps_min: float = 0.0
    eps_max: float = 0.0
    eps_points: int = 0
    oracle_k: int = 1
    freq_span: float = 0.0
    freq_points: int = 0
    table_k1: OracleSpec | None = None
    table_k2: OracleSpec | None = None

    def hash(self) -> str:
        return config_hash(self.mapping)


def default_mapping(experiment: str) -> dict[str, str]:
    schema = _schema_for(experiment)
    return {key: f.default for key, f in schema.items()}


def _schema_for(experiment: str) -> dict[str, Field]:
    if experiment not in SCHEMAS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; expected one of {EXPERIMENT_NAMES}"
        )
    return SCHEMAS[experiment]


def build_config(experiment: str, mapping: dict[str, str]) -> ExperimentConfig:
    """Validate a raw mapping against the experiment schema."""
    schema = _schema_for(experiment)
    unknown = sorted(set(mapping) - set(schema))
    if unknown:
        raise ConfigError(
            f"unknown keys for {experiment}: {', '.join(unknown)} "
            f"(allowed: {', '.join(sorted(schema))})"
        )
    effective = {**{k: f.default for k, f in schema.items()}, **mapping}
    values: dict[str, object] = {}
    for key, f in schema.items():
        try:
            values[key] = f.parse(effective[key])
        except ConfigError as exc:
            raise ConfigError(f"{key}: {exc}") from None

    kwargs: dict[str, object] = {
        "experiment": experiment,
        "mapping": effective,
        "out_dir": str(values["output.dir"]),
    }
    if "system.j" in values:
        kwargs["system"] = SpinSystem(
            J=values["system.j"],
            t90=values["system.t90"],
            T2_H=values["system.t2_h"],
            T2_C=values["system.t2_c"],
        )

    if experiment == "table1":
        r_max = int(values["r.max"])
        _check_order_cap(r_max)
        kwargs["r_max"] = r_max
        kwargs["table_k1"] = _matching_sets(str(values["oracle.k1"]), 1)[0]
        kwargs["table_k2"] = _matching_sets(str(values["oracle.k2"]), 2)[0]
    elif experiment in ("k1-curves", "k2-curves"):
        k = 1 if experiment == "k1-curves" else 2
        kwargs["oracle_k"] = k
        kwargs["oracles"] = _matching_sets(str(values["oracle.matching"]), k)
        kwargs["r_max"] = _check_order_cap(int(values["r.max"]))
        kwargs["styles"] = _check_styles(values["style"])
        kwargs["eps"] = _check_eps(float(values["error.eps"]))
        kwargs["delta_j"] = _check_eps(float(values["error.delta_j"]))
    elif experiment == "robustness":
        kwargs["oracles"] = _matching_sets(str(values["oracle.matching"]), 1)
        kwargs["r_max"] = _check_order_cap(int(values["r.max"]))
        kwargs["eps_values"] = tuple(_check_eps(e) for e in values["error.eps"])
        kwargs["delta_j_values"] = tuple(
            _check_eps(d) for d in values["error.delta_j"]
        )
    elif experiment == "bb1-scaling":
        kwargs["oracles"] = _matching_sets(str(values["oracle.matching"]), 1)
        lo, hi, n = float(values["eps.min"]), float(values["eps.max"]), int(values["eps.points"])
        if not 1e-3 <= lo < hi <= 1e-1:
            raise ConfigError("eps grid must satisfy 1e-3 <= min < max <= 1e-1")
        if n < 2:
            raise ConfigError("eps.points must be at least 2")
        kwargs["eps_min"], kwargs["eps_max"], kwargs["eps_points"] = lo, hi, n
    elif experiment == "spectra":
        k = int(values["oracle.k"])
        if k not in (1, 2):
            raise ConfigError("oracle.k must be 1 or 2")
        kwargs["oracle_k"] = k
        kwargs["oracles"] = _matching_sets(str(values["oracle.matching"]), k)
        orders = values["r.values"]
        for r in orders:
            if r is not None:
                _check_order_cap(r)
        kwargs["r_values"] = orders
        kwargs["styles"] = _check_styles((str(values["style"]),))
        kwargs["eps"] = _check_eps(float(values["error.eps"]))
        kwargs["delta_j"] = _check_eps(float(values["error.delta_j"]))
        span, pts = float(values["freq.span"]), int(values["freq.points"])
        if span <= 0 or pts < 2:
            raise ConfigError("freq.span must be positive and freq.points >= 2")
        kwargs["freq_span"], kwargs["freq_points"] = span, pts

    return ExperimentConfig(**kwargs)  # type: ignore[arg-type]


def _check_order_cap(r: int) -> int:
    if not 0 <= r <= MAX_ORDER:
        raise ConfigError(f"recursion order {r} outside 0..{MAX_ORDER}")
    return r


def _check_styles(styles) -> tuple[str, ...]:
    for s in styles:
        if s not in ("naive", "bb1"):
            raise ConfigError(f"unknown pulse style {s!r}")
    return tuple(styles)


def _check_eps(e: float) -> float:
    if not abs(e) < 1.0:
        raise ConfigError(f"error fraction {e} must satisfy |e| < 1")
    return e
