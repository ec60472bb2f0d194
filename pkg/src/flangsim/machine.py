"""Abstract machine executing FLang programs one small step at a time.

Execution has three phases.  ``init_machine`` installs automaton kinds and
runs the INIT blocks.  Then, repeatedly, ``select_next`` decides whether the
next thing to do is an interrupt or the next input packet, and the selected
statement is reduced to completion by ``exec_step``.  Interrupts never
preempt a running frame.

Scheduling rules:

* an interrupt due at the same time as the next packet fires first;
* interrupts due at the same time fire in registration order;
* once the input is exhausted, only interrupts due no later than the last
  packet's arrival time still fire, then the machine halts.
"""

from __future__ import annotations

import bisect
import enum
from collections import deque
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping

from . import ast as A
from .errors import (DuplicateKind, DuplicateTransition, FlangRuntimeError,
                     FlangTypeError, InvalidInterrupt, NegativeIterationCount,
                     NoPacketContext, NonMonotoneInput, StepLimitExceeded,
                     UnknownAutomaton, UnknownKind)
from .evaluator import EvalContext, evaluate
from .packet_io import TimedPacket


class FrameKind(enum.Enum):
    INIT = "init"
    INTERRUPT = "interrupt"
    PACKET = "packet"


@dataclass(frozen=True)
class Interrupt:
    at: int
    body: A.Statement
    period: int | None = None


@dataclass(frozen=True)
class OutputPacket:
    time: int
    port: A.Port
    fields: Mapping[str, A.Value]


@dataclass(frozen=True)
class AlarmEvent:
    time: int
    message: str


@dataclass(frozen=True)
class Repeat:
    """Internal continuation item: ``body`` still to run ``remaining`` times."""

    remaining: int
    body: A.Statement

    @property
    def loc(self):
        return getattr(self.body, "loc", None)


@dataclass
class ExecFrame:
    continuation: deque
    kind: FrameKind
    time: int
    port: A.Port | None = None
    fields: Mapping[str, A.Value] = field(default_factory=lambda: MappingProxyType({}))
    steps: int = 0


@dataclass(frozen=True)
class FireInterrupt:
    id: int


class LoadPacket:
    def __repr__(self):
        return "LoadPacket"


class Halted:
    def __repr__(self):
        return "Halted"


LOAD_PACKET = LoadPacket()
HALTED = Halted()


def insert_into_ordered_time_list(times: list[int], t: int) -> list[int]:
    """Return a new sorted list holding ``times`` plus ``t`` (duplicates kept)."""
    out = list(times)
    bisect.insort_right(out, t)
    return out


def _text_of(v: A.Value) -> str:
    return v.value if isinstance(v, A.Text) else A.render_value(v)


class MachineState:
    """Configuration of the abstract machine.

    ``packets`` is consumed lazily.  Emitted packets and alarms are appended
    to ``output`` and ``alarms`` and also passed to ``on_output`` /
    ``on_alarm`` when given (``keep=False`` disables the lists).
    ``tracer(m, item)`` is called before every small step.
    """

    def __init__(self, packets: Iterable[TimedPacket] = (), *,
                 on_output: Callable[[OutputPacket], None] | None = None,
                 on_alarm: Callable[[AlarmEvent], None] | None = None,
                 tracer=None, max_steps: int | None = None, keep: bool = True):
        if max_steps is not None and max_steps <= 0:
            raise ValueError("max_steps must be positive")
        self.program: A.Program | None = None
        self.kinds: dict[str, A.AutomatonKindDef] = {}
        self._tables: dict[str, dict] = {}
        self.filter: A.Statement | None = None
        self.interrupts: dict[int, Interrupt] = {}
        self.next_interrupts: list[int] = []
        self.next_interrupt_id = 0
        self.clock = 0
        self.current: ExecFrame | None = None
        self.automata: dict[str, tuple[str, A.Symbol]] = {}
        self.vars: dict[str, A.Value] = {}
        self.in_head: TimedPacket | None = None
        self.in_tail: Iterator[TimedPacket] = iter(packets)
        self.last_packet_time: int | None = None
        self.output: list[OutputPacket] = []
        self.alarms: list[AlarmEvent] = []
        self.on_output = on_output
        self.on_alarm = on_alarm
        self.keep = keep
        self.tracer = tracer
        self.max_steps = max_steps
        self.steps = 0
        self._ctx: EvalContext | None = None

    # -- prologue

    def install_kind(self, kind: A.AutomatonKindDef):
        if kind.kind in self.kinds:
            raise DuplicateKind(f"automaton kind {kind.kind} defined twice", kind.loc)
        table = kind.table()
        if len(table) != len(kind.transitions):
            raise DuplicateTransition(
                f"kind {kind.kind} has two transitions for one (state, event)", kind.loc)
        self.kinds[kind.kind] = kind
        self._tables[kind.kind] = table

    def run_init(self, body: A.Statement):
        self._start_frame(ExecFrame(deque([body]), FrameKind.INIT, self.clock))
        while self.current is not None:
            self.exec_step()

    # -- scheduling

    def register_interrupt(self, at: int, body: A.Statement, period: int | None = None) -> int:
        if at <= self.clock:
            raise InvalidInterrupt(f"interrupt time {at} is not after clock {self.clock}")
        if period is not None and period <= 0:
            raise InvalidInterrupt(f"interrupt period must be positive, got {period}")
        iid = self.next_interrupt_id
        self.next_interrupt_id += 1
        self.interrupts[iid] = Interrupt(at, body, period)
        self.next_interrupts = insert_into_ordered_time_list(self.next_interrupts, at)
        return iid

    def earliest_interrupt(self) -> int | None:
        if not self.next_interrupts:
            return None
        t = self.next_interrupts[0]
        return min(i for i, intr in self.interrupts.items() if intr.at == t)

    def _pull(self):
        if self.in_head is None:
            pkt = next(self.in_tail, None)
            if pkt is not None and pkt.time < self.clock:
                err = NonMonotoneInput(
                    f"packet stamped {pkt.time} arrives after clock {self.clock}")
                err.clock = self.clock
                raise err
            self.in_head = pkt

    def select_next(self):
        """Decide what runs next: ``FireInterrupt(id)``, ``LOAD_PACKET`` or ``HALTED``."""
        if self.current is not None:
            raise RuntimeError("select_next called while a frame is running")
        self._pull()
        iid = self.earliest_interrupt()
        if self.in_head is not None:
            if iid is not None and self.interrupts[iid].at <= self.in_head.time:
                return FireInterrupt(iid)
            return LOAD_PACKET
        if (iid is not None and self.last_packet_time is not None
                and self.interrupts[iid].at <= self.last_packet_time):
            return FireInterrupt(iid)
        return HALTED

    def fire_interrupt(self, iid: int):
        intr = self.interrupts[iid]
        if not self.next_interrupts or self.next_interrupts[0] != intr.at:
            raise RuntimeError(f"interrupt {iid} is not due next")
        self.clock = intr.at
        self.next_interrupts = self.next_interrupts[1:]
        if intr.period is not None:
            again = intr.at + intr.period
            self.interrupts[iid] = replace(intr, at=again)
            self.next_interrupts = insert_into_ordered_time_list(self.next_interrupts, again)
        else:
            del self.interrupts[iid]
        self._start_frame(ExecFrame(deque([intr.body]), FrameKind.INTERRUPT, self.clock))

    def load_next_packet(self):
        self._pull()
        pkt = self.in_head
        if pkt is None:
            raise RuntimeError("no packet to load")
        self.in_head = None
        self.clock = pkt.time
        self.last_packet_time = pkt.time
        fields = MappingProxyType(dict(pkt.fields))
        self._start_frame(ExecFrame(deque([self.filter]), FrameKind.PACKET,
                                    pkt.time, pkt.port, fields))

    def _start_frame(self, frame: ExecFrame):
        self.current = frame
        packet = frame.kind is FrameKind.PACKET
        self._ctx = EvalContext(MappingProxyType(self.vars),
                                MappingProxyType(self.automata), packet,
                                frame.fields, frame.time if packet else None,
                                frame.port)

    # -- execution

    def eval(self, e: A.Expression) -> A.Value:
        return evaluate(e, self._ctx)

    def exec_step(self):
        """Reduce the head of the current continuation by one step."""
        frame = self.current
        item = frame.continuation.popleft()
        if self.max_steps is not None and self.steps >= self.max_steps:
            err = StepLimitExceeded(f"step limit {self.max_steps} reached")
            err.clock, err.loc = self.clock, item.loc
            raise err
        self.steps += 1
        frame.steps += 1
        if self.tracer is not None:
            self.tracer(self, item)
        try:
            self._reduce(item, frame)
        except FlangRuntimeError as err:
            if err.clock is None:
                err.clock = self.clock
            if err.loc is None:
                err.loc = item.loc
            raise
        if not frame.continuation:
            self.current = None
            self._ctx = None

    def _require_packet(self, frame: ExecFrame, what: str):
        if frame.kind is not FrameKind.PACKET:
            raise NoPacketContext(f"{what} outside packet filtering ({frame.kind.value} frame)")

    def _int_operand(self, e: A.Expression, what: str) -> int:
        v = self.eval(e)
        if not isinstance(v, A.Int):
            raise FlangTypeError(f"{what} must be an integer, got {A.sort_name(v)}")
        return v.value

    def _reduce(self, item, frame: ExecFrame):
        k = frame.continuation
        match item:
            case A.Seq(first, second):
                k.appendleft(second)
                k.appendleft(first)
            case A.Cond(guard, body):
                g = self.eval(guard)
                if not isinstance(g, A.Bool):
                    raise FlangTypeError(f"cond guard must be a boolean, got {A.sort_name(g)}")
                if g.value:
                    k.appendleft(body)
            case A.Iter(count, body):
                n = self._int_operand(count, "iter count")
                if n < 0:
                    raise NegativeIterationCount(f"iter count is {n}")
                k.appendleft(Repeat(n, body))
            case Repeat(n, body):
                if n > 0:
                    k.appendleft(Repeat(n - 1, body))
                    k.appendleft(body)
            case A.NewInterrupt(at, period, body):
                t = self._int_operand(at, "interrupt time")
                p = None if period is None else self._int_operand(period, "interrupt period")
                self.register_interrupt(t, body, p)
            case A.Nop():
                pass
            case A.Set(var, value):
                self.vars[var] = self.eval(value)
            case A.NewAutomaton(inst, kind):
                if inst in self.automata:
                    raise UnknownAutomaton(f"automaton #{inst} already exists")
                if kind not in self.kinds:
                    raise UnknownKind(f"no automaton kind named {kind}")
                self.automata[inst] = (kind, self.kinds[kind].initial)
            case A.Step(inst, event, on_fail):
                if inst not in self.automata:
                    raise UnknownAutomaton(f"automaton #{inst} does not exist")
                kind, state = self.automata[inst]
                target = self._tables[kind].get((state, event))
                if target is None:
                    k.appendleft(on_fail)
                else:
                    self.automata[inst] = (kind, target)
            case A.Alarm(message):
                self._emit_alarm(AlarmEvent(self.clock, _text_of(self.eval(message))))
            case A.Send(port, fields):
                record = {name: self.eval(e) for name, e in fields}
                self._emit(OutputPacket(self.clock, port, MappingProxyType(record)))
            case A.Accept():
                self._require_packet(frame, "accept")
                self._emit(OutputPacket(self.clock, frame.port.opposite, frame.fields))
                k.clear()
            case A.Drop():
                self._require_packet(frame, "drop")
                k.clear()
            case _:
                raise TypeError(f"cannot execute {item!r}")

    def _emit(self, pkt: OutputPacket):
        if self.keep:
            self.output.append(pkt)
        if self.on_output is not None:
            self.on_output(pkt)

    def _emit_alarm(self, alarm: AlarmEvent):
        if self.keep:
            self.alarms.append(alarm)
        if self.on_alarm is not None:
            self.on_alarm(alarm)

    # -- driver

    def run_frame(self):
        """One selection followed by the full execution of the selected frame."""
        decision = self.select_next()
        if decision is HALTED:
            return decision
        if isinstance(decision, FireInterrupt):
            self.fire_interrupt(decision.id)
        else:
            self.load_next_packet()
        while self.current is not None:
            self.exec_step()
        return decision

    def run(self):
        while self.run_frame() is not HALTED:
            pass
        return HALTED

    def describe(self) -> str:
        """Human-readable summary of the final configuration."""
        lines = [f"clock: {self.clock}", "vars:"]
        lines += [f"  {k} = {A.render_value(v)}" for k, v in sorted(self.vars.items())]
        lines.append("automata:")
        lines += [f"  #{k} : {kind} in '{st.name}"
                  for k, (kind, st) in sorted(self.automata.items())]
        lines.append("pending interrupts:")
        for iid, intr in sorted(self.interrupts.items(), key=lambda x: (x[1].at, x[0])):
            period = "" if intr.period is None else f", period {intr.period}"
            lines.append(f"  [{iid}] at {intr.at}{period}")
        return "\n".join(lines)


def init_machine(program: A.Program, packets: Iterable[TimedPacket] = (), **options) -> MachineState:
    """Build a machine for ``program`` and run its prologue in order."""
    m = MachineState(packets, **options)
    m.program = program
    m.filter = program.filter
    for item in program.prologue:
        if isinstance(item, A.AutomatonKindDef):
            m.install_kind(item)
        else:
            m.run_init(item.body)
    return m


def select_next(m: MachineState):
    return m.select_next()


def fire_interrupt(m: MachineState, iid: int) -> MachineState:
    m.fire_interrupt(iid)
    return m


def load_next_packet(m: MachineState) -> MachineState:
    m.load_next_packet()
    return m


def exec_step(m: MachineState) -> MachineState:
    m.exec_step()
    return m


def run_to_completion(m: MachineState):
    """Run until the machine halts; returns ``(m, HALTED)``."""
    return m, m.run()


def run_program(program: A.Program, packets: Iterable[TimedPacket] = (), **options) -> MachineState:
    m = init_machine(program, packets, **options)
    m.run()
    return m
