"""Comfort: minimum separation and collision-risk frames for a head-on pass.

Two aircraft start 10 km apart and close at 200 m/s. Time to reach drops
below 30 s at t = 21 s and the separation falls inside 0.5 NM (926 m) at
t = 46 s, so frames 21..49 are flagged.
"""

from wingman_metrics import MetricConfig, ScenarioSpec, collision_risk, evaluate, generate, min_distance, nm_to_m

enc = generate(ScenarioSpec.of("head-on"))
cfg = MetricConfig(epsilon_m=nm_to_m(0.5), t_critical_s=30.0)

d_min, t_min = min_distance(enc)
print(f"M4 = {d_min:.1f} m at t = {t_min:.0f} s")

count, frames = collision_risk(enc, cfg)
print(f"M5 = {count} of {len(frames)} evaluated frames")
print(f"{'t':>5} {'d [m]':>8} {'v_close':>8} {'TTR [s]':>8}  alert")
for f in frames[17:26] + frames[-5:]:
    ttr = "" if f.ttr_s is None else f"{f.ttr_s:.1f}"
    print(f"{f.t:5.0f} {f.d:8.0f} {f.v_close:8.1f} {ttr:>8}  {f.alert.value if f.alert else ''}")

# A wider critical distance or a longer horizon can only add alerts.
for eps in (500.0, 926.0, 1852.0):
    for tc in (15.0, 30.0, 60.0):
        n = collision_risk(enc, MetricConfig(epsilon_m=eps, t_critical_s=tc))[0]
        print(f"eps={eps:6.0f} m  t_critical={tc:4.0f} s  ->  M5={n}")

print("share of evaluated frames flagged:", evaluate(enc, cfg).m5_rate)
