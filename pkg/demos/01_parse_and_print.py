"""Parsing FLang source, inspecting the tree and printing it back."""

# %%
from flangsim import ast as A
from flangsim import parse_expression, parse_program, pretty_print

# %% [markdown]
# A program is a prologue (automaton kinds and INIT blocks) followed by a
# single FILTER block.

# %%
src = """
AUTOMATON Door { init: 'closed; 'closed -'open-> 'opened; 'opened -'close-> 'closed; }
INIT { newAutomaton #D = Door; set knocks = 0; }
FILTER {
  cond (pkt.cmd == 'knock) { set knocks = knocks + 1; drop; }
  step #D : pkt.cmd == 'open && knocks > 2 else { drop; };
  accept;
}
"""
try:
    parse_program(src)
except Exception as exc:
    # step takes a literal event symbol, not an expression
    print("rejected:", exc)

# %%
src = src.replace("pkt.cmd == 'open && knocks > 2", "'open")
program = parse_program(src)
print(type(program.filter).__name__, len(program.prologue), "prologue items")

# %% [markdown]
# Expressions follow the usual precedence.  Locations are kept on every node
# but ignored by equality.

# %%
e = parse_expression("1 + 2 * 3 == 7 && #D != 'opened")
print(e.op, "|", e.left.op, "|", e.right.op)

# %%
text = pretty_print(program)
print(text)
assert parse_program(text) == program

# %%
print(pretty_print(A.Program((), A.Nop())))
