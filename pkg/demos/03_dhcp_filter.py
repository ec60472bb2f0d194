"""The DHCP-cherry server filter against its plain-Python model."""

# %%
import random

from flangsim import dhcp, run_program
from flangsim.packet_io import format_packet_line

# %%
print(dhcp.POLICY_SOURCE.split("INIT")[0])

# %% [markdown]
# Nominal exchanges pass untouched, each packet leaving on the other side.

# %%
for sc in dhcp.nominal_traces():
    m = run_program(dhcp.policy_program(), [e.timed() for e in sc.trace])
    print(f"{sc.name:<16} in={len(sc.trace)} out={len(m.output)} alarms={len(m.alarms)}")

# %% [markdown]
# Misbehaving traffic is dropped.  Five drops inside one 60-unit window
# raise a single alarm; the counter is cleared at every multiple of 60.

# %%
for sc in dhcp.adversarial_traces():
    m = run_program(dhcp.policy_program(), [e.timed() for e in sc.trace])
    print(f"{sc.name:<16} drops={len(sc.trace) - len(m.output)} "
          f"alarms={[a.time for a in m.alarms]} (model: {sc.expected_drops}, {sc.expected_alarms})")

# %% [markdown]
# Differential check on random traffic.

# %%
rng = random.Random(7)
mismatches = 0
for _ in range(50):
    trace = dhcp.random_trace(rng)
    expected = dhcp.replay(trace)
    m = run_program(dhcp.policy_program(), [e.timed() for e in trace])
    got = [format_packet_line(o.time, o.port, o.fields) for o in m.output]
    want = [line for line in expected.output if not line.startswith("ALARM")]
    mismatches += got != want
print("mismatching traces:", mismatches)
