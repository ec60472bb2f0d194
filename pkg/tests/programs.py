"""Random well-typed FLang programs and packet traces for property tests."""

import random

from flangsim import ast as A
from flangsim.packet_io import TimedPacket

INT_VARS = ("x0", "x1", "x2")
BOOL_VARS = ("b0", "b1")
STATES = tuple(A.Symbol(f"S{i}") for i in range(3))
EVENTS = tuple(A.Symbol(f"e{i}") for i in range(3))
FIELDS = ("a", "b")


class ProgramGen:
    """Generates programs that never raise a runtime error on traces built
    by ``random_packets``: every variable is initialised, expressions are
    well-typed, and packet accesses only appear in filter code."""

    def __init__(self, rng, max_depth=5, max_count=8, interrupts=True, send=True):
        self.rng = rng
        self.max_depth = max_depth
        self.max_count = max_count
        self.interrupts = interrupts
        self.send = send

    # expressions

    def int_expr(self, d, packet):
        r = self.rng
        leaves = [lambda: A.Lit(A.Int(r.randint(-9, 9))), lambda: A.Var(r.choice(INT_VARS))]
        if packet:
            leaves += [lambda: A.PacketField(r.choice(FIELDS)), lambda: A.ArrivalTime()]
        if d <= 0 or r.random() < 0.5:
            return r.choice(leaves)()
        if r.random() < 0.2:
            return A.Unary("-", self.int_expr(d - 1, packet))
        return A.Binary(r.choice("+-"), self.int_expr(d - 1, packet),
                        self.int_expr(d - 1, packet))

    def bool_expr(self, d, packet):
        r = self.rng
        if d <= 0 or r.random() < 0.3:
            choice = r.randrange(4 if packet else 3)
            if choice == 0:
                return A.Lit(A.Bool(r.random() < 0.5))
            if choice == 1:
                return A.Var(r.choice(BOOL_VARS))
            if choice == 2:
                return A.Binary(r.choice(("==", "!=")), A.AutomatonState("A"),
                                A.Lit(r.choice(STATES)))
            return A.Binary("==", A.ArrivalPort(), A.Lit(r.choice(list(A.Port))))
        kind = r.randrange(4)
        if kind == 0:
            return A.Binary(r.choice(("<", "<=", ">", ">=", "==", "!=")),
                            self.int_expr(d - 1, packet), self.int_expr(d - 1, packet))
        if kind == 1:
            return A.Binary(r.choice(("&&", "||")), self.bool_expr(d - 1, packet),
                            self.bool_expr(d - 1, packet))
        if kind == 2:
            return A.Unary("!", self.bool_expr(d - 1, packet))
        return A.Binary(r.choice(("==", "!=")), self.bool_expr(d - 1, packet),
                        self.bool_expr(d - 1, packet))

    # statements

    def command(self, frame):
        r = self.rng
        packet = frame == "filter"
        options = ["nop", "set_int", "set_bool", "step", "alarm"]
        if packet:
            options += ["accept", "drop"]
            if self.interrupts:
                options.append("interrupt")
        if self.send:
            options.append("send")
        c = r.choice(options)
        if c == "nop":
            return A.Nop()
        if c == "set_int":
            # at most one variable on the right-hand side: values grow linearly
            leaf = A.Lit(A.Int(r.randint(-9, 9)))
            if packet and r.random() < 0.5:
                leaf = A.PacketField(r.choice(FIELDS))
            return A.Set(r.choice(INT_VARS),
                         A.Binary(r.choice("+-"), A.Var(r.choice(INT_VARS)), leaf))
        if c == "set_bool":
            return A.Set(r.choice(BOOL_VARS), self.bool_expr(2, packet))
        if c == "step":
            return A.Step("A", r.choice(EVENTS), self.statement(1, frame))
        if c == "alarm":
            msg = A.Lit(A.Text("alarm")) if r.random() < 0.5 else self.int_expr(1, packet)
            return A.Alarm(msg)
        if c == "accept":
            return A.Accept()
        if c == "drop":
            return A.Drop()
        if c == "send":
            names = r.sample(FIELDS, r.randint(1, len(FIELDS)))
            return A.Send(r.choice(list(A.Port)),
                          tuple((n, self.int_expr(1, packet)) for n in names))
        body = self.statement(1, "interrupt")
        return A.NewInterrupt(
            A.Binary("+", A.ArrivalTime(), A.Lit(A.Int(r.randint(1, 30)))), None, body)

    def statement(self, d, frame="filter"):
        r = self.rng
        if d <= 0 or r.random() < 0.35:
            return self.command(frame)
        kind = r.random()
        if kind < 0.45:
            return A.Seq(self.statement(d - 1, frame), self.statement(d - 1, frame))
        if kind < 0.75:
            return A.Cond(self.bool_expr(2, frame == "filter"), self.statement(d - 1, frame))
        return A.Iter(A.Lit(A.Int(r.randint(0, self.max_count))),
                      self.statement(d - 1, frame))

    def kind(self):
        r = self.rng
        transitions = []
        for s in STATES:
            for e in EVENTS:
                if r.random() < 0.5:
                    transitions.append(A.Transition(s, e, r.choice(STATES)))
        return A.AutomatonKindDef("K", STATES[0], tuple(transitions))

    def program(self):
        r = self.rng
        init = [A.NewAutomaton("A", "K")]
        init += [A.Set(v, A.Lit(A.Int(r.randint(-5, 5)))) for v in INT_VARS]
        init += [A.Set(v, A.Lit(A.Bool(r.random() < 0.5))) for v in BOOL_VARS]
        if self.interrupts:
            for _ in range(r.randint(0, 2)):
                period = A.Lit(A.Int(r.randint(5, 50))) if r.random() < 0.7 else None
                init.append(A.NewInterrupt(A.Lit(A.Int(r.randint(1, 60))), period,
                                           self.statement(2, "interrupt")))
        prologue = (self.kind(), A.InitBlock(A.seq(*init)))
        return A.Program(prologue, self.statement(self.max_depth))


def random_packets(rng, max_len=50, max_gap=10):
    t = rng.randint(0, 5)
    out = []
    for _ in range(rng.randint(0, max_len)):
        t += rng.randint(0, max_gap)
        out.append(TimedPacket(t, rng.choice(list(A.Port)),
                               {f: A.Int(rng.randint(-20, 20)) for f in FIELDS}))
    return out


def tree_size(s):
    return sum(1 for _ in A.walk(s))


def iter_product(s):
    p = 1
    for node in A.walk(s):
        if isinstance(node, A.Iter):
            p *= node.count.value.value + 1
    return p


def step_bound(s):
    """Upper bound on small steps for one frame running ``s``: tree size
    times the product of (iteration count + 1) over all iter nodes."""
    return tree_size(s) * iter_product(s)


def gen(seed, **kw):
    return ProgramGen(random.Random(seed), **kw).program()
