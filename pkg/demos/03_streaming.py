"""Online evaluation with constant memory.

Samples are pushed one frame at a time. Alerts come back as soon as the
frame that triggers them arrives. The final report equals the batch report
computed with causal (backward) stencils.
"""

from wingman_metrics import MetricConfig, ScenarioSpec, StreamState, evaluate, generate

enc = generate(ScenarioSpec.of("crossing-tracks"))
cfg = MetricConfig(derivative_scheme="backward")

state = StreamState(cfg)
for t, pw, ph in zip(enc.times, enc.wingman.samples, enc.human.samples):
    for alert in state.push(t, pw, ph):
        print(f"t={alert.t:5.1f}  {alert.reason.value}")

streamed = state.finalize()
batch = evaluate(enc, cfg)
for name in ("m1", "m2", "m3", "m4_m", "m5_count"):
    print(f"{name:9s} stream={getattr(streamed, name)!r:<22} batch={getattr(batch, name)!r}")
