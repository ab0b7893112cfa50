"""Scenario files: a small line-oriented `key = value` format with sections.

Example::

    # two pairs, grant protocol
    [general]
    protocol = gsdma
    num_pairs = 2
    sim_slots = 200000
    seed = 1

    [topology]
    kind = fully_connected
    snr_db = 30

    [traffic]
    arrival_rate = 0.5

Keys appearing before any section header belong to [general].  Unknown keys or
sections raise ParseError with the offending line number.  Sweep files are the
same format plus a [sweep] section listing axis values and seeds.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields


class ParseError(ValueError):
    """Raised for malformed scenario/sweep files (carries a line number)."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass
class Scenario:
    # --- general ---
    scenario_id: str = "scenario"
    protocol: str = "gsdma"            # gsdma | csmaca
    num_pairs: int = 2
    sim_slots: int = 200_000
    seed: int = 1
    slot_us: float = 20.0
    packet_len_slots: int = 50
    warmup_frac: float = 0.1
    priority_scheme: str = "queue_length"   # queue_length | static_unique
    priority_levels: int = 8
    static_order: str = ""             # comma-separated ranks per pair, 1 = highest

    # --- topology ---
    topology: str = "fully_connected"  # fully_connected | hidden | exposed | explicit
    snr_db: float = 30.0
    positions: str = ""                # explicit: "x,y; x,y; ..." txs then rxs
    tx_power_dbm: float = 20.0
    noise_dbm: float = -90.0
    freq_ghz: float = 2.4
    min_snr_db: float = 5.0

    # --- traffic ---
    arrival_rate: float = 0.5
    arrival_scale: float = 0.55
    queue_cap: int = 1                 # 0 = unbounded
    saturated: bool = False
    delay_from: str = "head_of_line"   # head_of_line | arrival

    # --- csma ---
    difs_slots: int = 12
    sifs_slots: int = 8
    ack_slots: int = 2
    cw_min: int = 16
    cw_max: int = 1024
    retry_limit: int = 7

    # --- error model ---
    error_model: str = "logistic"      # logistic | table | fixed | none
    p_min: float = 0.001
    p_max: float = 0.1
    snr_mid_base: float = 15.0
    snr_mid_step: float = 5.0
    slope: float = 5.0
    decode_cap: int = 4
    p_err_value: float = 0.0           # for error_model = fixed
    table_path: str = ""

    def copy(self) -> "Scenario":
        return dataclasses.replace(self)

    def validate(self) -> None:
        if self.protocol not in ("gsdma", "csmaca"):
            raise ParseError(f"unknown protocol {self.protocol!r}")
        if self.num_pairs < 1:
            raise ParseError("num_pairs must be >= 1")
        if self.topology not in ("fully_connected", "hidden", "exposed", "explicit"):
            raise ParseError(f"unknown topology {self.topology!r}")
        if self.topology in ("hidden", "exposed") and self.num_pairs != 2:
            raise ParseError(f"topology {self.topology!r} is defined for exactly 2 pairs")
        if self.priority_scheme not in ("queue_length", "static_unique"):
            raise ParseError(f"unknown priority_scheme {self.priority_scheme!r}")
        if self.delay_from not in ("head_of_line", "arrival"):
            raise ParseError(f"unknown delay_from {self.delay_from!r}")
        if self.error_model not in ("logistic", "table", "fixed", "none"):
            raise ParseError(f"unknown error_model {self.error_model!r}")
        if not 0.0 <= self.arrival_rate:
            raise ParseError("arrival_rate must be >= 0")
        if self.queue_cap < 0:
            raise ParseError("queue_cap must be >= 0 (0 = unbounded)")
        if self.cw_min < 1 or self.cw_max < self.cw_min:
            raise ParseError("require 1 <= cw_min <= cw_max")
        if self.sim_slots < 1000:
            raise ParseError("sim_slots must be >= 1000")

    def static_ranks(self) -> list[int]:
        """Parsed static_order; defaults to 1..K when unset."""
        if not self.static_order.strip():
            return list(range(1, self.num_pairs + 1))
        ranks = [int(x) for x in self.static_order.split(",")]
        if sorted(ranks) != list(range(1, self.num_pairs + 1)):
            raise ParseError(
                f"static_order must be a permutation of 1..{self.num_pairs}, got {ranks}"
            )
        return ranks


# section -> field names
_SECTIONS: dict[str, tuple[str, ...]] = {
    "general": (
        "scenario_id", "protocol", "num_pairs", "sim_slots", "seed", "slot_us",
        "packet_len_slots", "warmup_frac", "priority_scheme", "priority_levels",
        "static_order",
    ),
    "topology": (
        "topology", "snr_db", "positions", "tx_power_dbm", "noise_dbm",
        "freq_ghz", "min_snr_db",
    ),
    "traffic": (
        "arrival_rate", "arrival_scale", "queue_cap", "saturated", "delay_from",
    ),
    "csma": (
        "difs_slots", "sifs_slots", "ack_slots", "cw_min", "cw_max", "retry_limit",
    ),
    "error_model": (
        "error_model", "p_min", "p_max", "snr_mid_base", "snr_mid_step", "slope",
        "decode_cap", "p_err_value", "table_path",
    ),
}

# inside [topology] and [error_model] the discriminator key is spelled `kind`
_ALIASES = {("topology", "kind"): "topology", ("error_model", "kind"): "error_model"}

_FIELD_TYPES = {f.name: f.type for f in fields(Scenario)}


def _convert(name: str, raw: str, lineno: int):
    ftype = _FIELD_TYPES[name]
    raw = raw.strip()
    try:
        if ftype == "int":
            return int(raw)
        if ftype == "float":
            return float(raw)
        if ftype == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ParseError(f"bad value {raw!r} for key {name!r}", lineno) from None


def _strip_comment(line: str) -> str:
    # a # starts a comment unless inside nothing fancier; values never contain #
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


@dataclass
class SweepSpec:
    """A base scenario plus axes to vary and the seed list."""

    base: Scenario
    axes: dict[str, list] = field(default_factory=dict)  # field name -> values
    seeds: list[int] = field(default_factory=lambda: [1])

    SWEEPABLE = ("num_pairs", "snr_db", "arrival_rate", "protocol", "topology")

    def points(self):
        """Yield (point_index, scenario) over the cartesian product of axes."""
        import itertools

        names = [n for n in self.SWEEPABLE if n in self.axes]
        value_lists = [self.axes[n] for n in names]
        for idx, combo in enumerate(itertools.product(*value_lists)):
            scn = self.base.copy()
            for name, val in zip(names, combo):
                setattr(scn, name, val)
            yield idx, scn


def _parse_lines(lines, allow_sweep: bool):
    scn = Scenario()
    sweep_axes: dict[str, list] = {}
    seeds: list[int] | None = None
    saw_sweep = False
    section = "general"
    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name == "sweep":
                if not allow_sweep:
                    raise ParseError("[sweep] section not allowed in a plain scenario file", lineno)
                saw_sweep = True
                section = "sweep"
                continue
            if name not in _SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno)
            section = name
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if section == "sweep":
            if key == "seeds":
                try:
                    seeds = [int(x) for x in value.split(",")]
                except ValueError:
                    raise ParseError(f"bad seeds list {value!r}", lineno) from None
                continue
            if key not in SweepSpec.SWEEPABLE:
                raise ParseError(f"key {key!r} is not sweepable", lineno)
            vals = []
            for item in value.split(","):
                vals.append(_convert(key, item, lineno))
            sweep_axes[key] = vals
            continue
        name = _ALIASES.get((section, key), key)
        if name not in _SECTIONS[section]:
            raise ParseError(f"unknown key {key!r} in section [{section}]", lineno)
        setattr(scn, name, _convert(name, value, lineno))
    scn.validate()
    if allow_sweep:
        if not saw_sweep:
            raise ParseError("sweep file is missing a [sweep] section")
        if not sweep_axes:
            raise ParseError("[sweep] section defines no axes")
        return SweepSpec(base=scn, axes=sweep_axes, seeds=seeds or [scn.seed])
    return scn


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_lines(fh.read().splitlines(), allow_sweep=False)


def loads_scenario(text: str) -> Scenario:
    return _parse_lines(text.splitlines(), allow_sweep=False)


def load_sweep(path: str) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_lines(fh.read().splitlines(), allow_sweep=True)


def loads_sweep(text: str) -> SweepSpec:
    return _parse_lines(text.splitlines(), allow_sweep=True)


def dump_scenario(scn: Scenario) -> str:
    """Serialize; load(dump(s)) == s."""
    default = Scenario()
    out = []
    for section, names in _SECTIONS.items():
        body = []
        for name in names:
            val = getattr(scn, name)
            if val == getattr(default, name):
                continue
            key = name
            for (sec, alias), target in _ALIASES.items():
                if sec == section and target == name:
                    key = alias
            if isinstance(val, bool):
                val = "true" if val else "false"
            body.append(f"{key} = {val}")
        if body:
            out.append(f"[{section}]")
            out.extend(body)
            out.append("")
    return "\n".join(out) if out else "[general]\n"


def apply_overrides(scn: Scenario, overrides: list[str]) -> Scenario:
    """Apply CLI `--set section.key=value` (or `key=value`) assignments."""
    scn = scn.copy()
    for item in overrides:
        if "=" not in item:
            raise ParseError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip().lower()
        if "." in key:
            section, _, key = key.partition(".")
            if section not in _SECTIONS:
                raise ParseError(f"unknown section {section!r} in --set")
            name = _ALIASES.get((section, key), key)
            if name not in _SECTIONS[section]:
                raise ParseError(f"unknown key {key!r} in section [{section}]")
        else:
            name = key
            matches = [n for sec in _SECTIONS.values() for n in sec if n == name]
            if not matches:
                raise ParseError(f"unknown key {key!r} in --set")
        setattr(scn, name, _convert(name, value, None))
    scn.validate()
    return scn
