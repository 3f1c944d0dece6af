"""Place one 500-MIPS task and inspect where the optimizer puts it.

A single small task from a vehicle under VF1 should stay on a local
vehicle: 500 MIPS on an idle vehicular node costs 4 W idle
+ 500 * (12-4)/3200 W processing + 5 Mbps * 0.006 W/Mbps through the
RSU = 5.28 W, far below waking any fog or cloud server.

Run:  python3 demos/01_place_a_single_task.py
"""

from fogbank.bnb import solve_scenario
from fogbank.milp import evaluate_power
from fogbank.model import default_config, make_scenario

config = default_config()
scenario = make_scenario(config, "LowDensity", "Single", 500.0, task_count=1)
solution = solve_scenario(scenario)

print(f"status        : {solution.status}")
print(f"total power   : {solution.objective_w:.2f} W")
for (task, server), mips in sorted(solution.allocation.items()):
    print(f"task {task} -> {server}: {mips:g} MIPS")

power = evaluate_power(solution.allocation, scenario)
print(f"processing    : {power.processing_w:.2f} W")
print(f"networking    : {power.networking_w:.2f} W")
print(f"active servers: {', '.join(solution.activations)}")
