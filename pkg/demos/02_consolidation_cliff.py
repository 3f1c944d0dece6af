"""Show the cloud-only consolidation cliff.

With only the central-cloud pool available, 50 tasks of up to 3000 MIPS
fit on one 160,000-MIPS server; at 3500 MIPS per task the demand
(175,000 MIPS) forces a second server awake and total power jumps by a
full idle+load step instead of the smooth per-MIPS increment.

Run:  python3 demos/02_consolidation_cliff.py
"""

from fogbank.bnb import solve_scenario
from fogbank.model import default_config, make_scenario

config = default_config()
previous = None
for workload in (2000.0, 2500.0, 3000.0, 3500.0, 4000.0):
    scenario = make_scenario(config, "CCOnly", "Single", workload)
    solution = solve_scenario(scenario)
    delta = "" if previous is None else f"  (+{solution.objective_w - previous:.0f} W)"
    print(f"{workload:6.0f} MIPS/task: {solution.objective_w:7.1f} W, "
          f"{len(solution.activations)} CC server(s){delta}")
    previous = solution.objective_w
