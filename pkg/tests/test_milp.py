"""MILP construction and the independent power evaluator."""

import math

import pytest

from fogbank.milp import (
    BINARY,
    AllocationError,
    build_milp,
    evaluate_power,
    export_lp,
    _identical_groups,
)
from fogbank.model import ServerSpec, make_scenario

from conftest import build_tiny_scenario, make_uniform_tasks


class TestBuild:
    def test_smallest_ccounly_single(self, config):
        scenario = make_scenario(config, "CCOnly", "Single", 500.0, task_count=1)
        inst = build_milp(scenario)
        names = [v.name for v in inst.variables]
        assert names == [
            "x[1][cc1]", "x[1][cc2]", "a[cc1]", "a[cc2]", "d[1][cc1]", "d[1][cc2]",
        ]
        by_prefix = {}
        for r in inst.rows:
            by_prefix.setdefault(r.name.split("_")[0], []).append(r.name)
        assert len(by_prefix["cap"]) == 2
        assert len(by_prefix["dem"]) == 1
        assert len(by_prefix["dev"]) == 5
        assert len(by_prefix["cpl"]) == 2
        assert len(by_prefix["one"]) == 1
        assert by_prefix["sb"] == ["sb_act_cc2", "sb_load_cc2"]

    def test_x_bounds_capped_by_workload_and_capacity(self, config):
        scenario = make_scenario(config, "LowDensity", "Single", 3500.0, task_count=1)
        inst = build_milp(scenario)
        v = inst.variables[inst.var_index["x[1][vf1_vn1]"]]
        assert (v.lb, v.ub) == (0.0, 3200.0)  # min(3500, 3200)
        v = inst.variables[inst.var_index["x[1][nf1]"]]
        assert (v.lb, v.ub) == (0.0, 3500.0)

    def test_no_d_variables_under_distributed(self, config):
        scenario = make_scenario(config, "LowDensity", "Distributed", 1000.0, task_count=2)
        inst = build_milp(scenario)
        assert not any(name.startswith("d[") for name in inst.var_index)
        assert not any(r.name.startswith(("cpl_", "one_")) for r in inst.rows)

    def test_objective_finite_nonnegative(self, config):
        scenario = make_scenario(config, "HighDensity", "Single", 2000.0, task_count=3)
        inst = build_milp(scenario)
        assert all(math.isfinite(c) and c >= 0.0 for c in inst.objective.values())
        assert inst.objective[inst.var_index["a[cc1]"]] == 301.0
        assert inst.objective[inst.var_index["a[vf1_vn1]"]] == 4.0

    def test_objective_rate_hand_value(self, config):
        # Local VN: e = 8/3200 = 0.0025; path RSU only: 0.006 W/Mbps at
        # 0.01 Mbps/MIPS -> 0.00006; total 0.00256 W per MIPS.
        scenario = make_scenario(config, "LowDensity", "Distributed", 500.0, task_count=1)
        inst = build_milp(scenario)
        rate = inst.objective[inst.var_index["x[1][vf1_vn1]"]]
        assert rate == pytest.approx(0.00256, rel=1e-12)

    def test_symmetry_rows_toggle(self, config):
        scenario = make_scenario(config, "LowDensity", "Distributed", 1000.0, task_count=2)
        with_sb = build_milp(scenario)
        without = build_milp(scenario, symmetry_breaking=False)
        assert any(r.name.startswith("sb_") for r in with_sb.rows)
        assert not any(r.name.startswith("sb_") for r in without.rows)

    def test_identical_groups(self, config):
        scenario = make_scenario(config, "LowDensity", "Single", 1000.0, task_count=1)
        groups = _identical_groups(scenario)
        assert ["cc1", "cc2"] in groups
        assert ["vf1_vn1", "vf1_vn2", "vf1_vn3", "vf1_vn4", "vf1_vn5"] in groups
        # Remote VFs have distinct routes, so vf2..vf4 form separate groups.
        assert len(groups) == 1 + 4

    def test_structural_infeasibility_total_capacity(self):
        servers = [ServerSpec("nf1", "NF", 3000.0, 5.0, 10.0)]
        scenario = build_tiny_scenario(servers, make_uniform_tasks(2, 2000.0))
        inst = build_milp(scenario)
        assert inst.structurally_infeasible
        assert "4000" in inst.infeasibility_reason

    def test_structural_infeasibility_single_oversized_task(self):
        servers = [
            ServerSpec("nf1", "NF", 3000.0, 5.0, 10.0),
            ServerSpec("lf1", "LF", 3000.0, 5.0, 10.0),
        ]
        scenario = build_tiny_scenario(servers, make_uniform_tasks(1, 3500.0))
        assert build_milp(scenario).structurally_infeasible
        # The same demand splits fine under Distributed.
        scenario = build_tiny_scenario(
            servers, make_uniform_tasks(1, 3500.0), strategy="Distributed"
        )
        assert not build_milp(scenario).structurally_infeasible

    def test_device_rows_aggregate_traffic_ratio(self, config):
        scenario = make_scenario(config, "CloudFog", "Distributed", 2000.0, task_count=2)
        inst = build_milp(scenario)
        onu = next(r for r in inst.rows if r.name == "dev_onu")
        coeffs = dict(onu.coeffs)
        # Local VN columns are absent; NF/LF/CC columns carry F/W = 0.01.
        assert coeffs[inst.var_index["x[1][nf1]"]] == pytest.approx(0.01)
        assert coeffs[inst.var_index["x[2][cc2]"]] == pytest.approx(0.01)
        assert onu.rhs == 5000.0


class TestEvaluatePower:
    def test_hand_value_local_vn(self, config):
        scenario = make_scenario(config, "LowDensity", "Single", 500.0, task_count=1)
        bd = evaluate_power({(1, "vf1_vn1"): 500.0}, scenario)
        assert bd.processing_w == pytest.approx(5.25, abs=1e-12)
        assert bd.networking_w == pytest.approx(0.03, abs=1e-12)
        assert bd.total_w == pytest.approx(5.28, abs=1e-12)
        assert bd.per_server_w == {"vf1_vn1": pytest.approx(5.25)}
        assert bd.per_device_w == {"rsu_vf1": pytest.approx(0.03)}

    def test_breakdown_conservation(self, config):
        scenario = make_scenario(config, "CloudFog", "Distributed", 2000.0, task_count=3)
        alloc = {(1, "nf1"): 2000.0, (2, "lf1"): 2000.0, (3, "cc1"): 2000.0}
        bd = evaluate_power(alloc, scenario)
        assert bd.total_w == bd.processing_w + bd.networking_w
        assert sum(bd.per_server_w.values()) == pytest.approx(bd.processing_w, rel=1e-9)
        assert sum(bd.per_device_w.values()) == pytest.approx(bd.networking_w, rel=1e-9)

    def test_homogeneity(self, config):
        import dataclasses

        from fogbank.model import build_topology, derive_routes, Scenario

        base = make_scenario(config, "CloudFog", "Distributed", 2000.0, task_count=2)
        alloc = {(1, "nf1"): 2000.0, (2, "lf1"): 2000.0}
        scale = 2.0
        servers = tuple(
            dataclasses.replace(s, idle_power_w=s.idle_power_w * scale,
                                max_power_w=s.max_power_w * scale)
            for s in base.topology.servers
        )
        devices = tuple(
            dataclasses.replace(d, energy_per_mbps_w=d.energy_per_mbps_w * scale)
            for d in base.topology.devices
        )
        topo = dataclasses.replace(base.topology, servers=servers, devices=devices)
        scaled = Scenario(topo, derive_routes(topo, "vf1"), base.tasks,
                          base.strategy, base.variant, base.source_vf)
        assert evaluate_power(alloc, scaled).total_w == pytest.approx(
            scale * evaluate_power(alloc, base).total_w, rel=1e-12
        )

    def test_zero_idle_reduces_to_two_term_form(self):
        servers = [
            ServerSpec("nf1", "NF", 6000.0, 0.0, 10.0),
            ServerSpec("lf1", "LF", 8000.0, 0.0, 16.0),
        ]
        tasks = make_uniform_tasks(2, 1500.0)
        scenario = build_tiny_scenario(servers, tasks, strategy="Distributed")
        alloc = {(1, "nf1"): 1500.0, (2, "lf1"): 1500.0}
        bd = evaluate_power(alloc, scenario)
        expected = 0.0
        for (k, sid), v in alloc.items():
            s = scenario.topology.server(sid)
            expected += s.marginal_w_per_mips * v
            expected += 0.01 * v * scenario.path_energy_w_per_mbps(sid)
        assert bd.total_w == pytest.approx(expected, rel=1e-12)

    def test_uncovered_demand_rejected(self, config):
        scenario = make_scenario(config, "CCOnly", "Single", 1000.0, task_count=2)
        with pytest.raises(AllocationError) as err:
            evaluate_power({(1, "cc1"): 1000.0}, scenario)
        assert any("dem_2" in v for v in err.value.violations)

    def test_overfilled_capacity_rejected(self, config):
        scenario = make_scenario(config, "LowDensity", "Distributed", 3300.0, task_count=1)
        with pytest.raises(AllocationError) as err:
            evaluate_power({(1, "vf1_vn1"): 3300.0}, scenario)
        assert any("cap_vf1_vn1" in v for v in err.value.violations)

    def test_check_can_be_skipped(self, config):
        scenario = make_scenario(config, "CCOnly", "Single", 1000.0, task_count=2)
        bd = evaluate_power({(1, "cc1"): 1000.0}, scenario, check_feasible=False)
        assert bd.total_w > 0.0


class TestExportLp:
    def test_lp_text_shape(self, config):
        scenario = make_scenario(config, "CCOnly", "Single", 500.0, task_count=1)
        text = export_lp(build_milp(scenario))
        assert text.startswith("Minimize")
        assert "Subject To" in text and "Bounds" in text and "Binaries" in text
        assert text.endswith("End\n")
        assert " cap_cc1:" in text and " dem_1:" in text and " dev_onu:" in text
        assert "x_1_cc1" in text and "a_cc2" in text and "d_1_cc1" in text
