"""The synchronization instability, reproduced from the reference scenario.

One hundred identical appliances cycle their flexible loads, each sensing
the same bus voltage.  A brief source sag makes all of them postpone in
lockstep; when the sag ends the herd overshoots, reverses, and never
settles.  The passive control run shows the disturbance alone is harmless.

Run:  python demos/demo_instability.py
Writes demo_instability.svg next to this script.
"""

from dataclasses import replace
from pathlib import Path

import numpy as np

from reflexgrid import RuleKind, compute_metrics, load_scenario, run
from reflexgrid.output import write_trace_svg

HERE = Path(__file__).parent
scenario = load_scenario(HERE.parent / "scenarios" / "scenario_a.cfg").scenario
window = (scenario.disturbance.t_end, scenario.horizon)

print(f"fleet: {scenario.n_agents} reactive appliances, horizon {scenario.horizon} steps")
print(f"band:  [{scenario.band.v_low:.4f}, {scenario.band.v_high:.4f}] V")
print(f"sag:   -{scenario.disturbance.delta_v} V over steps "
      f"[{scenario.disturbance.t_start}, {scenario.disturbance.t_end})")

print("\n1. Control run: same fleet, reactions disabled.")
passive = replace(
    scenario, agents=tuple(replace(a, rule=RuleKind.PASSIVE) for a in scenario.agents)
)
m = compute_metrics(run(passive), scenario.band, window)
print(f"   outside-band fraction after the sag: {m.outside_band_fraction:.3f}")
print("   The voltage dips during the sag and returns immediately: no harm done.")

print("\n2. Reactive run: every appliance postpones below the band, advances above it.")
trace = run(scenario)
m = compute_metrics(trace, scenario.band, window)
print(f"   outside-band fraction after the sag: {m.outside_band_fraction:.3f}")
print(f"   band crossings: {m.band_crossings}, "
      f"overshoot {m.max_overshoot*1000:.1f} mV, undershoot {m.max_undershoot*1000:.1f} mV")

same = bool((trace.shifts == trace.shifts[:, :1]).all())
print(f"\n3. The herd: every agent carries the identical shift at every step: {same}")
peak = int(np.abs(trace.shifts[:, 0]).max())
print(f"   common shift peaks at {peak} steps of accumulated postponement")

print("\n4. What the oscillation looks like (connected flexible loads), after the sag:")
for t in range(1200, 1400, 20):
    n = int(trace.n_flex_on[t])
    bar = "#" * (n // 2)
    print(f"   t={t:5d}  n_on={n:3d} {bar}")

out = HERE / "demo_instability.svg"
write_trace_svg(trace, scenario.band, out,
                (scenario.disturbance.t_start, scenario.disturbance.t_end))
print(f"\nchart written to {out}")
