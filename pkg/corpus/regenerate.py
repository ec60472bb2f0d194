"""Rewrite the golden corpus from the scenario definitions in flangsim.dhcp.

Expected outputs come from the plain-Python policy model, never from the
FLang machine, so the corpus stays an independent check of the simulator.
"""

from pathlib import Path

from flangsim import dhcp

HERE = Path(__file__).resolve().parent


def main():
    (HERE / "dhcp.gpfpl").write_text(dhcp.POLICY_SOURCE)
    for sc in dhcp.nominal_traces() + dhcp.adversarial_traces():
        (HERE / f"{sc.name}.in.txt").write_text("".join(l + "\n" for l in sc.input_lines()))
        (HERE / f"{sc.name}.out.txt").write_text("".join(l + "\n" for l in sc.expected_output))


if __name__ == "__main__":
    main()
