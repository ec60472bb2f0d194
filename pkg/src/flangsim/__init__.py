"""FLang packet-filter language: parser, abstract machine and simulator."""

from .ast import Program
from .errors import FlangError, FlangRuntimeError, ParseError
from .evaluator import EvalContext, apply_binary, evaluate
from .machine import (HALTED, LOAD_PACKET, FireInterrupt, MachineState, exec_step,
                      fire_interrupt, init_machine, insert_into_ordered_time_list,
                      load_next_packet, run_program, run_to_completion, select_next)
from .packet_io import (GateMode, TimedPacket, format_packet_line, gate,
                        parse_packet_line)
from .parser import parse_expression, parse_program
from .printer import pretty_print

__all__ = [
    "Program", "FlangError", "FlangRuntimeError", "ParseError", "EvalContext",
    "apply_binary", "evaluate", "HALTED", "LOAD_PACKET", "FireInterrupt",
    "MachineState", "exec_step", "fire_interrupt", "init_machine",
    "insert_into_ordered_time_list", "load_next_packet", "run_program",
    "run_to_completion", "select_next", "GateMode", "TimedPacket",
    "format_packet_line", "gate", "parse_packet_line", "parse_expression",
    "parse_program", "pretty_print",
]
