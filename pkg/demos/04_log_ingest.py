"""From an irregular telemetry log to a report.

Real logs drop frames and the two aircraft rarely start recording at the
same instant. Ingest linearly resamples both onto one grid covering only the
window where both are present.
"""

import numpy as np

from wingman_metrics import IngestOptions, evaluate, load_encounter

rng = np.random.default_rng(7)
rows = ["t,agent_id,x,y,z"]
for agent, t_start, y in (("lead", 0.0, 0.0), ("wing", 3.2, 400.0)):
    t = t_start
    while t < 120.0:
        rows.append(f"{t:.3f},{agent},{150.0 * t:.2f},{y + 20 * np.sin(0.1 * t):.2f},3000")
        t += rng.choice([0.5, 0.5, 0.5, 1.0])  # occasional dropped frame

log = "\n".join(rows).encode()
enc = load_encounter(log, "csv", wingman_id="wing", human_id="lead", opts=IngestOptions(target_dt_s=0.5))
print(f"grid: t0={enc.t0} dt={enc.dt} frames={enc.frame_count}")
report = evaluate(enc).to_dict()
alerts = report.pop("alert_frames")
print(report)
print(f"{len(alerts)} alert frames, first at t={alerts[0]['t']}" if alerts else "no alerts")
