"""Naturalness: mean squared velocity, acceleration and jerk.

A wingman flying a circular patrol orbit has |v| = R*w, |a| = R*w^2
and |j| = R*w^3, so the three metrics are known in closed form. We compare
them with the finite-difference estimates for a few sample rates and the
three stencil families.
"""

from wingman_metrics import MetricConfig, NaturalnessThresholds, ScenarioSpec, evaluate, generate, naturalness

R, w = 5000.0, 0.02
print(f"closed form: M1={R**2 * w**2:.6g}  M2={R**2 * w**4:.6g}  M3={R**2 * w**6:.6g}")

for dt in (0.5, 0.1, 0.02):
    enc = generate(ScenarioSpec.of("circular-cap", radius=R, omega=w, dt_s=dt, duration_s=600.0))
    for scheme in ("central", "forward", "backward"):
        m = [naturalness(enc.wingman, n, scheme) for n in (1, 2, 3)]
        print(f"dt={dt:<5} {scheme:<9} M1={m[0]:.6g}  M2={m[1]:.6g}  M3={m[2]:.6g}")

# Thresholds are per-aircraft configuration; these bounds are illustrative only.
profile = NaturalnessThresholds(max_m1=4e4, max_m2=9.0, max_m3=1e-2, profile_name="example-jet")
report = evaluate(generate(ScenarioSpec.of("circular-cap")), MetricConfig(thresholds=profile))
print("verdicts:", report.threshold_verdicts)
