"""White-list versus black-list handling of undecodable input, via the CLI."""

# %%
import io
import tempfile
from pathlib import Path

from flangsim.cli import run_cli
from flangsim.packet_io import GateMode, gate

# %%
for line in ["3 ; left ; type = 'Disc, client = 3", "3 ; left ; type = Disc", "<binary junk>"]:
    print(f"{line!r:40} {gate(GateMode.WHITELIST, line)!r:.60}")
    print(f"{'':40} {gate(GateMode.BLACKLIST, line)!r:.60}")

# %%
program = Path(tempfile.mkdtemp()) / "pass.gpfpl"
program.write_text("FILTER { cond (pkt.size < 100) { accept; } drop; }")
trace = "1 ; left ; size = 10\n2 ; left ; size = 500\n?? not a packet ??\n3 ; right ; size = 7\n"

for mode in ("whitelist", "blacklist"):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(["run", str(program), "--mode", mode], io.StringIO(trace), out, err)
    print(f"--- {mode} (exit {code})")
    print(out.getvalue(), end="")
