"""DHCP-cherry scenario: the server-side filtering policy written in FLang,
trace builders, and an independent (plain Python) model of the policy.

The protected server sits on the right of the filter.  Packets entering on
the left travel towards the server (incoming), packets entering on the
right come from it (outgoing).  Every packet carries ``type`` (a symbol
such as ``'Disc``) and ``client``; Off/Req/Rej/Rel also carry ``resource``.

The policy automaton has four states::

    0 --in:Disc(C)--> 1 --in:Req(C,*) / in:Rej(C,*)--> 2 --out:Ack(C)--> 0
    0 --in:Rel(C,*)--> 3 --out:Ack(C)--> 0

Outgoing packets are always forwarded.  An incoming packet with no matching
edge is dropped; every drop bumps ``ignoredPktCnt``, which a periodic
interrupt clears every 60 time units, and the fifth drop of a window
raises an alarm.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from . import ast as A
from .packet_io import TimedPacket, format_alarm_line, format_packet_line
from .parser import parse_program

RESET_PERIOD = 60
ALARM_THRESHOLD = 5
ALARM_MESSAGE = "too many dropped packets"

CLIENT_SIDE = A.Port.LEFT
SERVER_SIDE = A.Port.RIGHT

POLICY_SOURCE = """\
// DHCP cherry, server-side filter.  The server is on the right: packets
// entering on the right are outgoing, packets entering on the left incoming.

AUTOMATON DhcpK {
  init: 'S0;
  'S0 -'Disc-> 'S1;
  'S1 -'Req-> 'S2;
  'S1 -'Rej-> 'S2;
  'S1 -'Ack-> 'S1;
  'S2 -'Ack-> 'S0;
  'S0 -'Rel-> 'S3;
  'S3 -'Ack-> 'S0;
}

INIT {
  newAutomaton #A = DhcpK;
  set client = 0;
  set ignoredPktCnt = 0;
  newInterrupt (60, period 60) {
    set ignoredPktCnt = 0;
  }
}

FILTER {
  // outgoing packets always pass; an Ack to the session client closes it
  cond (arrivalPort == right) {
    cond (pkt.type == 'Ack && pkt.client == client && #A != 'S0) {
      step #A : 'Ack else {
        nop;
      };
    }
    accept;
  }
  // once a session is open, only its client may talk to the server
  set pass = false;
  cond (#A == 'S0 || pkt.client == client) {
    cond (pkt.type == 'Disc) {
      set pass = true;
      step #A : 'Disc else {
        set pass = false;
      };
    }
    cond (pkt.type == 'Req) {
      set pass = true;
      step #A : 'Req else {
        set pass = false;
      };
    }
    cond (pkt.type == 'Rej) {
      set pass = true;
      step #A : 'Rej else {
        set pass = false;
      };
    }
    cond (pkt.type == 'Rel) {
      set pass = true;
      step #A : 'Rel else {
        set pass = false;
      };
    }
  }
  cond (pass) {
    set client = pkt.client;
    accept;
  }
  set ignoredPktCnt = ignoredPktCnt + 1;
  cond (ignoredPktCnt == 5) {
    alarm("too many dropped packets");
  }
  drop;
}
"""


def policy_program() -> A.Program:
    return parse_program(POLICY_SOURCE)


# -- packets ---------------------------------------------------------------

class DhcpPacketType(enum.IntEnum):
    DISC = 0
    OFF = 1
    REQ = 2
    REJ = 3
    REL = 4
    ACK = 5

    @property
    def symbol(self) -> A.Symbol:
        return A.Symbol(self.name.capitalize())

    @property
    def has_resource(self) -> bool:
        return self in (DhcpPacketType.OFF, DhcpPacketType.REQ,
                        DhcpPacketType.REJ, DhcpPacketType.REL)

    @classmethod
    def from_symbol(cls, sym: A.Symbol) -> DhcpPacketType:
        return cls[sym.name.upper()]


class Direction(enum.Enum):
    IN = "in"
    OUT = "out"

    @property
    def port(self) -> A.Port:
        return CLIENT_SIDE if self is Direction.IN else SERVER_SIDE


@dataclass(frozen=True)
class DhcpPacket:
    type: DhcpPacketType
    client: int
    resource: int | None = None

    def __post_init__(self):
        if not 0 <= self.client <= 15:
            raise ValueError("client id is a 4-bit value")
        if self.type.has_resource != (self.resource is not None):
            raise ValueError(f"{self.type.name} resource part mismatch")
        if self.resource is not None and not 0 <= self.resource <= 15:
            raise ValueError("resource id is a 4-bit value")

    def fields(self) -> dict[str, A.Value]:
        out = {"type": self.type.symbol, "client": A.Int(self.client)}
        if self.resource is not None:
            out["resource"] = A.Int(self.resource)
        return out

    def encode(self) -> tuple[int, int]:
        """Bit encoding as ``(bits, length)``: 4-bit type, 4-bit client,
        then a 4-bit resource for the packet types that carry one."""
        bits = (self.type << 4) | self.client
        if self.resource is None:
            return bits, 8
        return (bits << 4) | self.resource, 12

    @classmethod
    def decode(cls, bits: int, length: int) -> DhcpPacket:
        if length == 8:
            return cls(DhcpPacketType(bits >> 4), bits & 0xF)
        if length == 12:
            return cls(DhcpPacketType(bits >> 8), (bits >> 4) & 0xF, bits & 0xF)
        raise ValueError("DHCP cherry packets are 8 or 12 bits long")

    @classmethod
    def from_fields(cls, fields) -> DhcpPacket:
        res = fields.get("resource")
        return cls(DhcpPacketType.from_symbol(fields["type"]), fields["client"].value,
                   None if res is None else res.value)


def Disc(c):
    return DhcpPacket(DhcpPacketType.DISC, c)


def Off(c, r):
    return DhcpPacket(DhcpPacketType.OFF, c, r)


def Req(c, r):
    return DhcpPacket(DhcpPacketType.REQ, c, r)


def Rej(c, r):
    return DhcpPacket(DhcpPacketType.REJ, c, r)


def Rel(c, r):
    return DhcpPacket(DhcpPacketType.REL, c, r)


def Ack(c):
    return DhcpPacket(DhcpPacketType.ACK, c)


@dataclass(frozen=True)
class TraceEntry:
    time: int
    direction: Direction
    packet: DhcpPacket

    def timed(self) -> TimedPacket:
        return TimedPacket(self.time, self.direction.port, self.packet.fields())

    def line(self) -> str:
        return format_packet_line(self.time, self.direction.port, self.packet.fields())


def entry(time, direction, pkt) -> TraceEntry:
    return TraceEntry(time, Direction(direction), pkt)


def direction_of(port: A.Port) -> Direction:
    return Direction.IN if port is CLIENT_SIDE else Direction.OUT


# -- independent policy model ---------------------------------------------

@dataclass(frozen=True)
class PolicyOracle:
    state: int = 0
    bound_client: int | None = None


def oracle_step(o: PolicyOracle, direction: Direction, pkt: DhcpPacket):
    """One move of the policy automaton; returns ``(oracle, accepted)``."""
    t = pkt.type
    if direction is Direction.OUT:
        if o.state in (2, 3) and t is DhcpPacketType.ACK and pkt.client == o.bound_client:
            return PolicyOracle(), True
        return o, True
    if o.state == 0:
        if t is DhcpPacketType.DISC:
            return PolicyOracle(1, pkt.client), True
        if t is DhcpPacketType.REL:
            return PolicyOracle(3, pkt.client), True
    elif o.state == 1 and pkt.client == o.bound_client:
        if t in (DhcpPacketType.REQ, DhcpPacketType.REJ):
            return PolicyOracle(2, o.bound_client), True
    return o, False


def alarm_flags(drop_times, period=RESET_PERIOD, threshold=ALARM_THRESHOLD) -> list[bool]:
    """Counter model: for each drop, whether it raises an alarm.

    The count restarts at every multiple of ``period`` (a drop stamped
    exactly on the boundary already sees the reset) and the alarm goes off
    when the count reaches ``threshold``.
    """
    flags = []
    window, count = None, 0
    for t in drop_times:
        if t // period != window:
            window, count = t // period, 0
        count += 1
        flags.append(count == threshold)
    return flags


def alarm_times(drop_times, period=RESET_PERIOD, threshold=ALARM_THRESHOLD) -> list[int]:
    return [t for t, hit in zip(drop_times, alarm_flags(drop_times, period, threshold))
            if hit]


@dataclass(frozen=True)
class Replay:
    verdicts: tuple[bool, ...]
    states: tuple[int, ...]
    drops: tuple[int, ...]
    alarms: tuple[int, ...]
    output: tuple[str, ...]


def replay(trace) -> Replay:
    """Run a trace through the model and derive the exact expected output."""
    o = PolicyOracle()
    verdicts, states = [], []
    for e in trace:
        o, ok = oracle_step(o, e.direction, e.packet)
        verdicts.append(ok)
        states.append(o.state)
    drops = [e.time for e, ok in zip(trace, verdicts) if not ok]
    flags = iter(alarm_flags(drops))
    output = []
    for e, ok in zip(trace, verdicts):
        if ok:
            output.append(format_packet_line(e.time, e.direction.port.opposite,
                                             e.packet.fields()))
        elif next(flags):
            output.append(format_alarm_line(e.time, ALARM_MESSAGE))
    return Replay(tuple(verdicts), tuple(states), tuple(drops),
                  tuple(alarm_times(drops)), tuple(output))


# -- traces ----------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    name: str
    trace: tuple[TraceEntry, ...]
    expected_output: tuple[str, ...]

    def input_lines(self) -> list[str]:
        return [e.line() for e in self.trace]


def _forwarded(trace) -> tuple[str, ...]:
    return tuple(format_packet_line(e.time, e.direction.port.opposite, e.packet.fields())
                 for e in trace)


ACQUIRE = (entry(1, "in", Disc(3)), entry(2, "out", Off(3, 1)),
           entry(3, "in", Req(3, 1)), entry(4, "out", Ack(3)))
ACQUIRE_REJECT = (entry(1, "in", Disc(3)), entry(2, "out", Off(3, 2)),
                  entry(3, "in", Rej(3, 2)), entry(4, "out", Ack(3)))
RELEASE = (entry(10, "in", Rel(3, 1)), entry(11, "out", Ack(3)))


def nominal_traces() -> list[Scenario]:
    """Server-side views of the nominal sequences; every packet passes."""
    both = ACQUIRE + RELEASE
    return [Scenario("acquire", ACQUIRE, _forwarded(ACQUIRE)),
            Scenario("acquire_reject", ACQUIRE_REJECT, _forwarded(ACQUIRE_REJECT)),
            Scenario("release", RELEASE, _forwarded(RELEASE)),
            Scenario("acquire_release", both, _forwarded(both))]


@dataclass(frozen=True)
class AdversarialScenario:
    name: str
    trace: tuple[TraceEntry, ...]
    expected_drops: int
    expected_alarms: int
    expected_output: tuple[str, ...]

    def input_lines(self) -> list[str]:
        return [e.line() for e in self.trace]


def adversarial_traces() -> list[AdversarialScenario]:
    traces = {
        "out_of_order": (entry(1, "in", Req(3, 1)), entry(2, "in", Disc(3)),
                         entry(3, "out", Off(3, 1)), entry(4, "in", Req(3, 1)),
                         entry(5, "out", Ack(3))),
        "interleaved": (entry(1, "in", Disc(3)), entry(2, "in", Disc(7)),
                        entry(3, "out", Off(3, 1)), entry(4, "in", Req(7, 1)),
                        entry(5, "in", Req(3, 1)), entry(6, "in", Rel(7, 2)),
                        entry(7, "out", Ack(3)), entry(8, "in", Disc(7))),
        "burst": tuple(entry(t, "in", Req(3, 1)) for t in range(1, 6)),
        "long_burst": tuple(entry(t, "in", Req(3, 1)) for t in range(1, 9)),
        "reset_straddle": tuple(entry(t, "in", Req(3, 1)) for t in (10, 30, 50, 70, 90)),
        "reset_boundary": tuple(entry(t, "in", Req(3, 1)) for t in (56, 57, 58, 59, 60)),
    }
    out = []
    for name, trace in traces.items():
        r = replay(trace)
        out.append(AdversarialScenario(name, trace, len(r.drops), len(r.alarms), r.output))
    return out


TYPES = list(DhcpPacketType)


def random_packet(rng: random.Random, clients=4) -> DhcpPacket:
    t = rng.choice(TYPES)
    res = rng.randrange(16) if t.has_resource else None
    return DhcpPacket(t, rng.randrange(clients), res)


def random_trace(rng: random.Random, max_len=200, max_gap=15) -> tuple[TraceEntry, ...]:
    """Random monotone trace; mostly protocol-shaped traffic mixed with noise."""
    n = rng.randint(0, max_len)
    t = rng.randint(0, 5)
    out = []
    for _ in range(n):
        t += rng.randint(0, max_gap)
        direction = rng.choice((Direction.IN, Direction.OUT))
        out.append(TraceEntry(t, direction, random_packet(rng)))
    return tuple(out)
