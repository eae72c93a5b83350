"""Scenario configuration: defaults, validation and plain-text file round trip.

A configuration file holds one ``key = value`` pair per line; ``#`` starts a
comment. Values are floats, ints, strings or comma-separated lists, in the SI
units of :mod:`crowdmatch.model`. Unknown keys are rejected.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Raised for unreadable, unknown or invalid configuration input."""


PAY_MODES = ("effort", "proposal")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of a simulation scenario.

    Static characteristics of units and task types are drawn uniformly from
    the ``*_min``/``*_max`` ranges once per replication; the ``*_std`` fields
    drive the per-round noise.
    """

    # population
    n_mus: int = 100
    n_types: int = 10
    tasks_per_type: tuple[int, ...] | None = None  # explicit per-type counts
    tasks_per_type_min: int = 5
    tasks_per_type_max: int = 10

    # task type statics
    size_min_mbit: float = 50.0
    size_max_mbit: float = 100.0
    complexity_min: float = 200.0  # cycles per bit
    complexity_max: float = 300.0
    earning_base: float = 1.4
    earning_per_mbit: float = 3.0

    # mobile unit statics
    sense_time_min_s: float = 60.0
    sense_time_max_s: float = 180.0
    comm_time_min_s_per_mbit: float = 0.025
    comm_time_max_s_per_mbit: float = 0.1
    cpu_freq_min_hz: float = 1e9
    cpu_freq_max_hz: float = 2e9
    power_comm_w: float = 0.2
    power_comp_w: float = 1.0
    # private unit cost coefficients, drawn uniformly per unit: units value
    # their own time and battery differently. Units below the paid time rate
    # profit from long tasks, units above it prefer short ones; a knife-edge
    # band around the paid rate is excluded because such units would be
    # indifferent between all tasks
    cost_time_min: float = 0.006  # per second
    cost_time_max: float = 0.016
    cost_time_band: float = 0.0015  # excluded half-width around pay_factor*pay_time_rate
    cost_energy_min: float = 0.002  # per joule
    cost_energy_max: float = 0.004

    # per-round noise
    sense_time_std_s: float = 10.0
    comm_time_std_s_per_mbit: float = 0.01
    cpu_freq_std_hz: float = 1e8
    size_rel_std: float = 0.05

    # deadlines: slack times the population-average expected completion time,
    # unless overridden explicitly per type
    deadline_slack: float = 1.2
    deadlines_s: tuple[float, ...] | None = None

    # market rules: the platform pays one public rate card for realized effort,
    # independent of any unit's private valuation
    pay_factor: float = 1.1
    pay_time_rate: float = 0.01  # per second
    pay_energy_rate: float = 0.004  # per joule
    pay_mode: str = "effort"  # "effort" pays realized effort, "proposal" the bid

    # learning parameters
    repeat_prob: float = 0.1  # probability of resending last round's offer
    free_threshold: float = 0.5  # rejection-counter level that triggers free offers
    free_phase_end: int = 30  # last round in which free offers may be sent
    # epsilon_t = 1 during the learning phase (t <= warmup), then scale/(t - warmup);
    # full exploration while free offers guarantee acceptance is what lets every
    # unit sample every type
    exploration_warmup: int = 30
    exploration_scale: float = 1.0

    # experiment shape
    horizon: int = 1000
    replications: int = 100
    master_seed: int = 20260
    gt_samples: int = 10_000  # Monte-Carlo samples for the expectation tables

    def validate(self) -> None:
        if self.n_mus < 1 or self.n_types < 1 or self.horizon < 1:
            raise ConfigError("n_mus, n_types and horizon must be >= 1")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.tasks_per_type is not None:
            if len(self.tasks_per_type) != self.n_types:
                raise ConfigError("tasks_per_type must list one count per type")
            if any(c < 1 for c in self.tasks_per_type):
                raise ConfigError("per-type task counts must be >= 1")
        elif not 1 <= self.tasks_per_type_min <= self.tasks_per_type_max:
            raise ConfigError("need 1 <= tasks_per_type_min <= tasks_per_type_max")
        for lo, hi, name in (
            (self.size_min_mbit, self.size_max_mbit, "size"),
            (self.complexity_min, self.complexity_max, "complexity"),
            (self.sense_time_min_s, self.sense_time_max_s, "sense time"),
            (self.comm_time_min_s_per_mbit, self.comm_time_max_s_per_mbit, "comm time"),
            (self.cpu_freq_min_hz, self.cpu_freq_max_hz, "cpu frequency"),
            (self.cost_time_min, self.cost_time_max, "time cost"),
            (self.cost_energy_min, self.cost_energy_max, "energy cost"),
        ):
            if not 0.0 < lo <= hi:
                raise ConfigError(f"{name} range must satisfy 0 < min <= max")
        if min(self.power_comm_w, self.power_comp_w) <= 0.0:
            raise ConfigError("powers must be positive")
        if min(self.pay_time_rate, self.pay_energy_rate) <= 0.0:
            raise ConfigError("payment rates must be positive")
        if self.cost_time_band < 0.0:
            raise ConfigError("cost_time_band must be >= 0")
        if min(
            self.sense_time_std_s, self.comm_time_std_s_per_mbit, self.cpu_freq_std_hz,
            self.size_rel_std,
        ) < 0.0:
            raise ConfigError("noise standard deviations must be >= 0")
        if self.deadlines_s is not None:
            if len(self.deadlines_s) != self.n_types:
                raise ConfigError("deadlines_s must list one deadline per type")
            if any(d <= 0.0 for d in self.deadlines_s):
                raise ConfigError("deadlines must be positive")
        elif self.deadline_slack <= 0.0:
            raise ConfigError("deadline_slack must be positive")
        if self.pay_factor < 0.0:
            raise ConfigError("pay_factor must be >= 0")
        if self.pay_mode not in PAY_MODES:
            raise ConfigError(f"pay_mode must be one of {PAY_MODES}")
        if not 0.0 <= self.repeat_prob < 1.0:
            raise ConfigError("repeat_prob must lie in [0, 1)")
        if self.free_threshold <= 0.0:
            raise ConfigError("free_threshold must be > 0")
        if self.free_phase_end < 1:
            raise ConfigError("free_phase_end must be >= 1")
        if self.exploration_warmup < 0:
            raise ConfigError("exploration_warmup must be >= 0")
        if self.exploration_scale < 0.0:
            raise ConfigError("exploration_scale must be >= 0")
        if self.gt_samples < 1:
            raise ConfigError("gt_samples must be >= 1")

    def replace(self, **changes) -> "ScenarioConfig":
        cfg = dataclasses.replace(self, **changes)
        cfg.validate()
        return cfg


_INT_TUPLE_FIELDS = {"tasks_per_type"}
_FLOAT_TUPLE_FIELDS = {"deadlines_s"}
_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def _parse_value(key: str, raw: str):
    if raw.lower() == "none":
        return None
    if key in _INT_TUPLE_FIELDS:
        return tuple(int(part) for part in raw.split(","))
    if key in _FLOAT_TUPLE_FIELDS:
        return tuple(float(part) for part in raw.split(","))
    ftype = _FIELD_TYPES[key]
    if ftype == "int":
        return int(raw)
    if ftype == "float":
        return float(raw)
    return raw


def load_config(path: str | Path) -> ScenarioConfig:
    """Read a scenario from a key/value file; unspecified keys keep defaults."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        try:
            values[key] = _parse_value(key, raw)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {exc}") from exc
    cfg = ScenarioConfig(**values)
    cfg.validate()
    return cfg


def save_config(cfg: ScenarioConfig, path: str | Path) -> None:
    """Write a scenario as a key/value file that :func:`load_config` accepts."""
    lines = []
    for f in dataclasses.fields(ScenarioConfig):
        value = getattr(cfg, f.name)
        if value is None:
            rendered = "none"
        elif isinstance(value, tuple):
            rendered = ",".join(repr(v) for v in value)
        elif isinstance(value, str):
            rendered = value
        else:
            rendered = repr(value)
        lines.append(f"{f.name} = {rendered}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
