"""Timestamp dynamics and age of information on a hand-driven schedule.

One sub-system sampled every 3 slots.  We transmit on a fixed pattern and
watch the three timestamps (generation, reception, utilization) and the
resulting age: reception jumps as soon as a transmission succeeds, but the
age only drops at the next sampling event, when the packet is utilized.
"""

from aoisched import SamplingCalendar, TimingState, advance

cal = SamplingCalendar(period=3, offset=1)
state = TimingState.cold([cal])

# transmit in slots 2, 3, 9, 14; succeed in 3 and 14
schedule = {2: False, 3: True, 9: False, 14: True}

print(f"sampling events: slots {[t for t in range(18) if cal.contains(t)]}")
print()
print(" slot  t_g  t_r  t_u  age  event")
for t in range(18):
    scheduled = (t - 1) in schedule
    success = schedule.get(t - 1, False)
    state = advance(state, [cal], scheduled=0 if scheduled else None, success=success)
    age = cal.aoi(state.t, state.t_u[0])
    notes = []
    if cal.contains(t):
        notes.append("sample")
    if t in schedule:
        notes.append("tx ok" if schedule[t] else "tx lost")
    print(
        f"{t:5d} {state.t_g[0]:4d} {state.t_r[0]:4d} {state.t_u[0]:4d} {age:4d}  "
        + ", ".join(notes)
    )

print()
print("note the one-period lag: the packet received after the slot-3 success")
print("(generated at slot 1) is first utilized at the slot-4 sampling event.")
