"""Driving the abstract machine one decision and one small step at a time."""

# %%
from flangsim import (HALTED, FireInterrupt, TimedPacket, exec_step, fire_interrupt,
                      init_machine, load_next_packet, parse_program, select_next)
from flangsim import ast as A

# %%
program = parse_program("""
INIT {
  set seen = 0;
  newInterrupt (10, period 10) { alarm(seen); }
}
FILTER {
  set seen = seen + 1;
  iter (2) { nop; }
  accept;
}
""")
packets = [TimedPacket(4, A.Port.LEFT, {"n": A.Int(1)}),
           TimedPacket(10, A.Port.RIGHT, {"n": A.Int(2)}),
           TimedPacket(25, A.Port.LEFT, {"n": A.Int(3)})]
m = init_machine(program, packets)
print("after INIT:", m.vars, "pending at", m.next_interrupts)

# %% [markdown]
# Each round, `select_next` picks an interrupt or the next packet.  An
# interrupt due at the same time as a packet goes first.

# %%
while (decision := select_next(m)) is not HALTED:
    if isinstance(decision, FireInterrupt):
        fire_interrupt(m, decision.id)
    else:
        load_next_packet(m)
    kind = m.current.kind.value
    steps = 0
    while m.current is not None:
        exec_step(m)
        steps += 1
    print(f"t={m.clock:>3} {kind:<9} {steps:>2} steps  next={m.next_interrupts}")

# %%
for o in m.output:
    print("out  ", o.time, o.port.value, dict(o.fields))
for a in m.alarms:
    print("alarm", a.time, a.message)

# %% [markdown]
# The interrupt due at 30 never fires: input ended at 25, and pending
# interrupts later than the last packet are not drained.

# %%
print(m.describe())
