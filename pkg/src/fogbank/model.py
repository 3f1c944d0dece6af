"""Domain model: processing tiers, network devices, routes, tasks and scenarios.

The modelled architecture is a cloud-supported vehicular fog: a central cloud
(CC) pool behind the metro/core network, one fixed fog server at the OLT (LF),
one at the ONU (NF), and four vehicular fog clusters (VF), each a set of
identical vehicle nodes (VN) behind a roadside unit (RSU).  All task traffic
enters at the RSU of the source VF; RSUs reach each other only through the ONU.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Mapping, Optional

import numpy as np

TIERS = ("CC", "LF", "NF", "VN")
DEVICE_KINDS = ("RSU", "ONU", "OLT", "METRO", "CORE")
VARIANTS = ("CCOnly", "CloudFog", "LowDensity", "HighDensity")
STRATEGIES = ("Single", "Distributed")

#: Bounds used by the randomized-workload mode (MIPS).
RANDOM_WORKLOAD_RANGE = (500.0, 5000.0)


class ConfigError(ValueError):
    """Raised for malformed or invalid configuration documents."""


class ValidationError(ValueError):
    """Raised when a domain-type invariant is violated."""


@dataclass(frozen=True)
class ServerSpec:
    """A single processing node with an affine power profile.

    Power drawn when active is ``idle_power_w + marginal_w_per_mips * load``;
    an inactive server draws nothing.  With ``idle_power_w == 0`` this is the
    plain watts-per-MIPS model.
    """

    id: str
    tier: str
    capacity_mips: float
    idle_power_w: float
    max_power_w: float
    vf_id: Optional[str] = None

    def __post_init__(self) -> None:
        if self.tier not in TIERS:
            raise ValidationError(f"server {self.id}: unknown tier {self.tier!r}")
        if self.capacity_mips <= 0:
            raise ValidationError(f"server {self.id}: capacity_mips must be > 0")
        if not 0 <= self.idle_power_w <= self.max_power_w:
            raise ValidationError(
                f"server {self.id}: need 0 <= idle_power_w <= max_power_w, "
                f"got idle={self.idle_power_w}, max={self.max_power_w}"
            )
        if (self.vf_id is not None) != (self.tier == "VN"):
            raise ValidationError(
                f"server {self.id}: vf_id must be set exactly for VN servers"
            )

    @property
    def marginal_w_per_mips(self) -> float:
        """Incremental watts per allocated MIPS above idle."""
        return (self.max_power_w - self.idle_power_w) / self.capacity_mips


@dataclass(frozen=True)
class NetworkDeviceSpec:
    """A networking device with linear watts-per-Mbps power."""

    id: str
    kind: str
    energy_per_mbps_w: float
    capacity_mbps: float

    def __post_init__(self) -> None:
        if self.kind not in DEVICE_KINDS:
            raise ValidationError(f"device {self.id}: unknown kind {self.kind!r}")
        if self.energy_per_mbps_w < 0:
            raise ValidationError(f"device {self.id}: energy_per_mbps_w must be >= 0")
        if self.capacity_mbps <= 0:
            raise ValidationError(f"device {self.id}: capacity_mbps must be > 0")


@dataclass(frozen=True)
class Route:
    """Ordered device path from the source RSU to one server."""

    target_server: str
    devices: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.devices)) != len(self.devices):
            raise ValidationError(
                f"route to {self.target_server}: duplicate device in path"
            )
        if not self.devices:
            raise ValidationError(f"route to {self.target_server}: empty device path")


@dataclass(frozen=True)
class Task:
    id: int
    workload_mips: float
    traffic_mbps: float
    source_vf: str

    def __post_init__(self) -> None:
        if self.workload_mips <= 0:
            raise ValidationError(f"task {self.id}: workload_mips must be > 0")
        if self.traffic_mbps <= 0:
            raise ValidationError(f"task {self.id}: traffic_mbps must be > 0")


@dataclass(frozen=True)
class Topology:
    """All servers and network devices of one scenario variant."""

    servers: tuple[ServerSpec, ...]
    devices: tuple[NetworkDeviceSpec, ...]
    vf_ids: tuple[str, ...]

    def server(self, server_id: str) -> ServerSpec:
        for s in self.servers:
            if s.id == server_id:
                return s
        raise KeyError(server_id)

    def device(self, device_id: str) -> NetworkDeviceSpec:
        for d in self.devices:
            if d.id == device_id:
                return d
        raise KeyError(device_id)

    def rsu_of(self, vf_id: str) -> str:
        if vf_id not in self.vf_ids:
            raise KeyError(f"unknown VF {vf_id!r}")
        return f"rsu_{vf_id}"


@dataclass(frozen=True)
class Scenario:
    """A solvable placement problem: topology, routes, tasks and strategy."""

    topology: Topology
    routes: Mapping[str, Route]
    tasks: tuple[Task, ...]
    strategy: str
    variant: str
    source_vf: str

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown variant {self.variant!r}")
        for t in self.tasks:
            if t.source_vf != self.source_vf:
                raise ValidationError(
                    f"task {t.id}: source_vf {t.source_vf!r} differs from "
                    f"scenario source {self.source_vf!r}"
                )
        for s in self.topology.servers:
            if s.id not in self.routes:
                raise ValidationError(f"no route to server {s.id}")

    @property
    def total_workload_mips(self) -> float:
        return sum(t.workload_mips for t in self.tasks)

    def path_energy_w_per_mbps(self, server_id: str) -> float:
        """Summed watts-per-Mbps of every device on the route to a server."""
        route = self.routes[server_id]
        return sum(self.topology.device(d).energy_per_mbps_w for d in route.devices)


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TierConfig:
    capacity_mips: float
    idle_power_w: float
    max_power_w: float
    count: Optional[int] = None  # None on CC means: size pool to worst case


@dataclass(frozen=True)
class VnConfig:
    capacity_mips: float
    idle_power_w: float
    max_power_w: float
    count_low: int = 5
    count_high: int = 15
    vf_count: int = 4


@dataclass(frozen=True)
class DeviceConfig:
    energy_per_mbps_w: float
    capacity_mbps: float


@dataclass(frozen=True)
class TaskConfig:
    count: int = 50
    traffic_per_mips: float = 0.01  # Mbps of traffic per MIPS of workload


@dataclass(frozen=True)
class SweepConfig:
    start_mips: float = 500.0
    stop_mips: float = 5000.0
    step_mips: float = 500.0

    def workloads(self) -> tuple[float, ...]:
        n = int(round((self.stop_mips - self.start_mips) / self.step_mips)) + 1
        return tuple(self.start_mips + i * self.step_mips for i in range(n))


@dataclass(frozen=True)
class ModelConfig:
    cc: TierConfig
    lf: TierConfig
    nf: TierConfig
    vn: VnConfig
    network: Mapping[str, DeviceConfig]  # keyed by lower-case device kind
    tasks: TaskConfig = field(default_factory=TaskConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    seed: int = 42

    def cc_pool_size(self) -> int:
        """CC pool sized to the worst-case sweep demand unless pinned."""
        if self.cc.count is not None:
            return self.cc.count
        worst = self.tasks.count * self.sweep.stop_mips
        return max(1, math.ceil(worst / self.cc.capacity_mips))


# Calibrated so that the CC has the best marginal processing efficiency and
# the worst network path, and so that the NF is preferred over remote VFs
# (and remote VFs over LF/CC) once the local VF is saturated.
DEFAULT_CONFIG_DOC: dict = {
    "servers": {
        "cc": {"capacity_mips": 160000.0, "idle_power_w": 301.0, "max_power_w": 365.0},
        "lf": {"capacity_mips": 54400.0, "idle_power_w": 120.0, "max_power_w": 175.0, "count": 1},
        "nf": {"capacity_mips": 6000.0, "idle_power_w": 12.0, "max_power_w": 22.0, "count": 1},
        "vn": {
            "capacity_mips": 3200.0,
            "idle_power_w": 4.0,
            "max_power_w": 12.0,
            "count_low": 5,
            "count_high": 15,
            "vf_count": 4,
        },
    },
    "network": {
        "rsu": {"energy_per_mbps_w": 0.006, "capacity_mbps": 5000.0},
        "onu": {"energy_per_mbps_w": 0.009, "capacity_mbps": 5000.0},
        "olt": {"energy_per_mbps_w": 0.002, "capacity_mbps": 5000.0},
        "metro": {"energy_per_mbps_w": 0.005, "capacity_mbps": 5000.0},
        "core": {"energy_per_mbps_w": 0.010, "capacity_mbps": 5000.0},
    },
    "tasks": {"count": 50, "traffic_per_mips": 0.01},
    "sweep": {"from": 500.0, "to": 5000.0, "step": 500.0},
    "seed": 42,
}


def _schema() -> dict:
    text = resources.files("fogbank").joinpath("schemas/config-v1.schema.json").read_text()
    return json.loads(text)


def _merge_defaults(doc: dict) -> dict:
    """Deep-merge a config document over the shipped defaults."""
    def merge(base, over):
        if isinstance(base, dict) and isinstance(over, dict):
            out = dict(base)
            for k, v in over.items():
                out[k] = merge(base.get(k), v) if k in base else v
            return out
        return over

    return merge(DEFAULT_CONFIG_DOC, doc)


def load_config(text: str) -> ModelConfig:
    """Parse and validate a JSON configuration document.

    Missing fields take the shipped defaults; unknown keys are rejected.
    """
    import jsonschema

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed configuration: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise ConfigError("configuration root must be a JSON object")

    merged = _merge_defaults(doc)
    try:
        jsonschema.validate(merged, _schema())
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid configuration at {path}: {exc.message}") from exc

    srv = merged["servers"]

    def tier(d: dict) -> TierConfig:
        return TierConfig(
            capacity_mips=float(d["capacity_mips"]),
            idle_power_w=float(d["idle_power_w"]),
            max_power_w=float(d["max_power_w"]),
            count=d.get("count"),
        )

    vn = srv["vn"]
    config = ModelConfig(
        cc=tier(srv["cc"]),
        lf=tier(srv["lf"]),
        nf=tier(srv["nf"]),
        vn=VnConfig(
            capacity_mips=float(vn["capacity_mips"]),
            idle_power_w=float(vn["idle_power_w"]),
            max_power_w=float(vn["max_power_w"]),
            count_low=int(vn["count_low"]),
            count_high=int(vn["count_high"]),
            vf_count=int(vn["vf_count"]),
        ),
        network={
            kind: DeviceConfig(
                energy_per_mbps_w=float(d["energy_per_mbps_w"]),
                capacity_mbps=float(d["capacity_mbps"]),
            )
            for kind, d in merged["network"].items()
        },
        tasks=TaskConfig(
            count=int(merged["tasks"]["count"]),
            traffic_per_mips=float(merged["tasks"]["traffic_per_mips"]),
        ),
        sweep=SweepConfig(
            start_mips=float(merged["sweep"]["from"]),
            stop_mips=float(merged["sweep"]["to"]),
            step_mips=float(merged["sweep"]["step"]),
        ),
        seed=int(merged["seed"]),
    )
    _check_config(config)
    return config


def default_config() -> ModelConfig:
    return load_config("{}")


def _check_config(config: ModelConfig) -> None:
    for name, t in (("cc", config.cc), ("lf", config.lf), ("nf", config.nf), ("vn", config.vn)):
        if t.capacity_mips <= 0:
            raise ConfigError(f"servers.{name}.capacity_mips must be > 0")
        if not 0 <= t.idle_power_w <= t.max_power_w:
            raise ConfigError(
                f"servers.{name}: need 0 <= idle_power_w <= max_power_w"
            )
    if config.vn.vf_count < 1:
        raise ConfigError("servers.vn.vf_count must be >= 1")
    if config.tasks.count < 1:
        raise ConfigError("tasks.count must be >= 1")
    if config.tasks.traffic_per_mips <= 0:
        raise ConfigError("tasks.traffic_per_mips must be > 0")
    if config.sweep.step_mips <= 0 or config.sweep.stop_mips < config.sweep.start_mips:
        raise ConfigError("sweep grid must be non-empty with a positive step")


# --------------------------------------------------------------------------
# Topology, routes and tasks
# --------------------------------------------------------------------------

def build_topology(config: ModelConfig, variant: str) -> Topology:
    """Build the architecture for one scenario variant.

    Every variant carries the full network (one RSU per VF, ONU, OLT, metro
    and core devices) and the CC pool; the variant decides which processing
    tiers beyond the CC exist.
    """
    if variant not in VARIANTS:
        raise ValidationError(f"unknown variant {variant!r}")

    vf_ids = tuple(f"vf{i}" for i in range(1, config.vn.vf_count + 1))
    servers: list[ServerSpec] = []
    for i in range(1, config.cc_pool_size() + 1):
        servers.append(
            ServerSpec(f"cc{i}", "CC", config.cc.capacity_mips,
                       config.cc.idle_power_w, config.cc.max_power_w)
        )
    if variant != "CCOnly":
        for i in range(1, (config.lf.count or 1) + 1):
            servers.append(
                ServerSpec(f"lf{i}", "LF", config.lf.capacity_mips,
                           config.lf.idle_power_w, config.lf.max_power_w)
            )
        for i in range(1, (config.nf.count or 1) + 1):
            servers.append(
                ServerSpec(f"nf{i}", "NF", config.nf.capacity_mips,
                           config.nf.idle_power_w, config.nf.max_power_w)
            )
    vn_count = {"CCOnly": 0, "CloudFog": 0,
                "LowDensity": config.vn.count_low,
                "HighDensity": config.vn.count_high}[variant]
    for vf in vf_ids:
        for i in range(1, vn_count + 1):
            servers.append(
                ServerSpec(f"{vf}_vn{i}", "VN", config.vn.capacity_mips,
                           config.vn.idle_power_w, config.vn.max_power_w, vf_id=vf)
            )

    devices = [
        NetworkDeviceSpec(f"rsu_{vf}", "RSU",
                          config.network["rsu"].energy_per_mbps_w,
                          config.network["rsu"].capacity_mbps)
        for vf in vf_ids
    ]
    for kind in ("onu", "olt", "metro", "core"):
        devices.append(
            NetworkDeviceSpec(kind, kind.upper(),
                              config.network[kind].energy_per_mbps_w,
                              config.network[kind].capacity_mbps)
        )
    return Topology(tuple(servers), tuple(devices), vf_ids)


def derive_routes(topology: Topology, source_vf: str) -> dict[str, Route]:
    """Route from the source VF's RSU to every server in the topology."""
    rsu_src = topology.rsu_of(source_vf)
    routes: dict[str, Route] = {}
    for s in topology.servers:
        if s.tier == "VN" and s.vf_id == source_vf:
            path = (rsu_src,)
        elif s.tier == "VN":
            path = (rsu_src, "onu", topology.rsu_of(s.vf_id))
        elif s.tier == "NF":
            path = (rsu_src, "onu")
        elif s.tier == "LF":
            path = (rsu_src, "onu", "olt")
        else:  # CC
            path = (rsu_src, "onu", "olt", "metro", "core")
        routes[s.id] = Route(s.id, path)
    return routes


def make_tasks(
    count: int,
    workload_mips: float,
    seed: int = 0,
    *,
    traffic_per_mips: float = 0.01,
    source_vf: str = "vf1",
    randomize: bool = False,
) -> tuple[Task, ...]:
    """Create the task set for one sweep point.

    With ``randomize`` each workload is drawn uniformly from
    ``RANDOM_WORKLOAD_RANGE`` instead of being ``workload_mips`` everywhere;
    the draw is deterministic in ``seed``.
    """
    if count < 1:
        raise ValidationError("task count must be >= 1")
    if randomize:
        rng = np.random.default_rng(seed)
        lo, hi = RANDOM_WORKLOAD_RANGE
        workloads = rng.uniform(lo, hi, size=count)
    else:
        if workload_mips <= 0:
            raise ValidationError("workload_mips must be > 0")
        workloads = np.full(count, float(workload_mips))
    return tuple(
        Task(i + 1, float(w), float(w) * traffic_per_mips, source_vf)
        for i, w in enumerate(workloads)
    )


def make_scenario(
    config: ModelConfig,
    variant: str,
    strategy: str,
    workload_mips: float,
    *,
    task_count: Optional[int] = None,
    source_vf: str = "vf1",
    randomize: bool = False,
) -> Scenario:
    """Convenience: topology + routes + uniform tasks for one grid point."""
    topology = build_topology(config, variant)
    routes = derive_routes(topology, source_vf)
    tasks = make_tasks(
        task_count if task_count is not None else config.tasks.count,
        workload_mips,
        config.seed,
        traffic_per_mips=config.tasks.traffic_per_mips,
        source_vf=source_vf,
        randomize=randomize,
    )
    return Scenario(topology, routes, tasks, strategy, variant, source_vf)
