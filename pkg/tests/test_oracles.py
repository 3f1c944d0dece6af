"""Enumeration oracles and the randomized exactness harness."""

import pytest

from fogbank.bnb import INFEASIBLE, OPTIMAL
from fogbank.harness import oracle_check
from fogbank.model import ServerSpec, make_scenario
from fogbank.oracles import (
    MAX_ENUM_SERVERS_DISTRIBUTED,
    MAX_ENUM_SERVERS_SINGLE,
    MAX_ENUM_TASKS,
    OracleSizeError,
    enumerate_distributed,
    enumerate_single,
)

from conftest import build_tiny_scenario, make_uniform_tasks


def _vn_pool(count, cap=3200.0):
    return [
        ServerSpec(f"vf1_vn{i}", "VN", cap, 4.0, 12.0, vf_id="vf1")
        for i in range(1, count + 1)
    ]


class TestGuards:
    def test_single_task_guard(self):
        scenario = build_tiny_scenario(
            _vn_pool(2), make_uniform_tasks(MAX_ENUM_TASKS + 1, 100.0)
        )
        with pytest.raises(OracleSizeError):
            enumerate_single(scenario)

    def test_single_server_guard(self):
        scenario = build_tiny_scenario(
            _vn_pool(MAX_ENUM_SERVERS_SINGLE + 1), make_uniform_tasks(1, 100.0)
        )
        with pytest.raises(OracleSizeError):
            enumerate_single(scenario)

    def test_distributed_server_guard(self):
        scenario = build_tiny_scenario(
            _vn_pool(MAX_ENUM_SERVERS_DISTRIBUTED + 1),
            make_uniform_tasks(1, 100.0),
            strategy="Distributed",
        )
        with pytest.raises(OracleSizeError):
            enumerate_distributed(scenario)

    def test_strategy_mismatch(self):
        single = build_tiny_scenario(_vn_pool(2), make_uniform_tasks(1, 100.0))
        distributed = build_tiny_scenario(
            _vn_pool(2), make_uniform_tasks(1, 100.0), strategy="Distributed"
        )
        with pytest.raises(ValueError):
            enumerate_single(distributed)
        with pytest.raises(ValueError):
            enumerate_distributed(single)


class TestSingleOracle:
    def test_one_task_two_servers(self, config):
        # Activation cost decides: local vehicle (5.28 W) beats everything.
        scenario = make_scenario(config, "LowDensity", "Single", 500.0, task_count=1)
        small = build_tiny_scenario(
            [scenario.topology.server("vf1_vn1"), scenario.topology.server("nf1")],
            make_uniform_tasks(1, 500.0),
        )
        sol = enumerate_single(small)
        assert sol.status == OPTIMAL
        assert sol.objective_w == pytest.approx(5.28, abs=1e-9)
        assert sol.activations == ("vf1_vn1",)

    def test_symmetric_optimum_value(self):
        scenario = build_tiny_scenario(_vn_pool(2), make_uniform_tasks(2, 3000.0))
        sol = enumerate_single(scenario)
        assert sol.status == OPTIMAL
        # One full task per vehicle; either assignment has the same power.
        assert sol.activations == ("vf1_vn1", "vf1_vn2")

    def test_infeasible_when_tasks_cannot_fit(self):
        scenario = build_tiny_scenario(_vn_pool(2), make_uniform_tasks(3, 3000.0))
        assert enumerate_single(scenario).status == INFEASIBLE


class TestDistributedOracle:
    def test_forced_split(self):
        scenario = build_tiny_scenario(
            _vn_pool(2), make_uniform_tasks(1, 4000.0), strategy="Distributed"
        )
        sol = enumerate_distributed(scenario)
        assert sol.status == OPTIMAL
        assert sol.activations == ("vf1_vn1", "vf1_vn2")
        assert sum(sol.allocation.values()) == pytest.approx(4000.0)

    def test_consolidates_when_it_fits(self):
        scenario = build_tiny_scenario(
            _vn_pool(3), make_uniform_tasks(2, 1000.0), strategy="Distributed"
        )
        sol = enumerate_distributed(scenario)
        assert sol.status == OPTIMAL
        assert sol.activations == ("vf1_vn1",)  # 2000 fits one 3200 vehicle

    def test_infeasible_demand(self):
        scenario = build_tiny_scenario(
            _vn_pool(2), make_uniform_tasks(3, 3000.0), strategy="Distributed"
        )
        assert enumerate_distributed(scenario).status == INFEASIBLE


class TestHarness:
    def test_short_oracle_check_passes(self):
        result = oracle_check(trials=30, seed=7, max_tasks=4)
        assert result.ok, result.failures
        assert result.compared + result.infeasible_agreements == 30
        assert result.max_rel_gap <= 1e-9
