"""Shared fixtures: default config and small hand-built scenarios."""

from __future__ import annotations

import pytest

from fogbank.model import (
    NetworkDeviceSpec,
    Route,
    Scenario,
    ServerSpec,
    Task,
    Topology,
    default_config,
    derive_routes,
)


@pytest.fixture(scope="session")
def config():
    return default_config()


def build_tiny_scenario(
    servers,
    tasks,
    *,
    strategy: str = "Single",
    device_caps: dict | None = None,
) -> Scenario:
    """Scenario over a hand-picked server list with the default device path.

    ``servers`` is a list of ServerSpec; routes follow the standard shape for
    each tier.  ``device_caps`` overrides individual device capacities.
    """
    caps = {"rsu": 5000.0, "onu": 5000.0, "olt": 5000.0, "metro": 5000.0, "core": 5000.0}
    if device_caps:
        caps.update(device_caps)
    devices = tuple(
        [NetworkDeviceSpec(f"rsu_vf{i}", "RSU", 0.006, caps["rsu"]) for i in range(1, 5)]
        + [
            NetworkDeviceSpec("onu", "ONU", 0.009, caps["onu"]),
            NetworkDeviceSpec("olt", "OLT", 0.002, caps["olt"]),
            NetworkDeviceSpec("metro", "METRO", 0.005, caps["metro"]),
            NetworkDeviceSpec("core", "CORE", 0.010, caps["core"]),
        ]
    )
    topology = Topology(tuple(servers), devices, ("vf1", "vf2", "vf3", "vf4"))
    routes = derive_routes(topology, "vf1")
    return Scenario(topology, routes, tuple(tasks), strategy, "LowDensity", "vf1")


def make_uniform_tasks(count: int, workload: float) -> list[Task]:
    return [Task(i + 1, workload, workload / 100.0, "vf1") for i in range(count)]


@pytest.fixture
def tiny_scenario():
    return build_tiny_scenario


@pytest.fixture
def uniform_tasks():
    return make_uniform_tasks
