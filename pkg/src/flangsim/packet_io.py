"""Line codec for decoded packets, and the decoder gate in front of a filter.

Packet lines look like::

    10 ; left ; type = 'Disc, client = 3

i.e. ``<time> ; <port> ; <field> = <value>, ...`` where a value is an
integer, ``true``/``false``, a ``'Symbol``, a ``"text"`` or a port
(``left``/``right``).  Alarm lines are ``ALARM ; <time> ; <message>``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from . import ast as A

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_HEADER = re.compile(r"\s*([0-9]+)\s*;\s*(left|right)\s*;(.*)\Z", re.S)
_BINDING = re.compile(
    r"\s*(" + _NAME + r")\s*=\s*"
    r"(-?[0-9]+|true|false|left|right|'" + _NAME + r"|\"(?:[^\"\\\n]|\\[\\\"nt])*\")"
    r"\s*(,|\Z)", re.S)
_UNESCAPE = re.compile(r"\\([\\\"nt])")
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class TimedPacket:
    time: int
    port: A.Port
    fields: Mapping[str, A.Value] = field(default_factory=dict)


def _parse_value(text: str) -> A.Value:
    if text[0] == "'":
        return A.Symbol(text[1:])
    if text[0] == '"':
        return A.Text(_UNESCAPE.sub(lambda m: _UNESCAPES[m.group(1)], text[1:-1]))
    if text in ("true", "false"):
        return A.Bool(text == "true")
    if text in ("left", "right"):
        return A.Port(text)
    return A.Int(int(text))


def parse_packet_line(line: str) -> TimedPacket | None:
    """Decode one trace line; return None when the line is unparseable."""
    m = _HEADER.match(line)
    if not m:
        return None
    time, port, rest = int(m.group(1)), A.Port(m.group(2)), m.group(3)
    fields: dict[str, A.Value] = {}
    pos = 0
    if rest.strip():
        while True:
            b = _BINDING.match(rest, pos)
            if not b:
                return None
            name, raw, sep = b.groups()
            if name in fields:
                return None
            value = _parse_value(raw)
            if isinstance(value, A.Int) and not A.INT64_MIN <= value.value <= A.INT64_MAX:
                return None
            fields[name] = value
            pos = b.end()
            if sep != ",":
                break
    return TimedPacket(time, port, fields)


def format_fields(fields: Mapping[str, A.Value]) -> str:
    return ", ".join(f"{k} = {A.render_value(v)}" for k, v in fields.items())


def format_packet_line(time: int, port: A.Port, fields: Mapping[str, A.Value]) -> str:
    head = f"{time} ; {port.value} ;"
    return f"{head} {format_fields(fields)}" if fields else head


def format_alarm_line(time: int, message: str) -> str:
    return f"ALARM ; {time} ; {message.replace(chr(10), ' ')}"


class GateMode(enum.Enum):
    WHITELIST = "whitelist"
    BLACKLIST = "blacklist"


@dataclass(frozen=True)
class Deliver:
    packet: TimedPacket


@dataclass(frozen=True)
class Forwarded:
    line: str


@dataclass(frozen=True)
class Dropped:
    line: str


def gate(mode: GateMode, line: str) -> Deliver | Forwarded | Dropped:
    """Decoder gate: unparseable input is dropped (white list) or passed
    through untouched (black list); parseable input goes to the filter."""
    pkt = parse_packet_line(line)
    if pkt is not None:
        return Deliver(pkt)
    if mode is GateMode.BLACKLIST:
        return Forwarded(line)
    return Dropped(line)


def gated_packets(lines: Iterable[str], mode: GateMode,
                  forward: Callable[[str], None]) -> Iterator[TimedPacket]:
    """Lazily gate a stream of lines, yielding packets for the filter.

    Empty lines are skipped.  Forwarded lines are handed to ``forward`` at
    the moment the filter asks for its next packet.
    """
    for line in lines:
        line = line.rstrip("\r\n")
        if not line:
            continue
        match gate(mode, line):
            case Deliver(pkt):
                yield pkt
            case Forwarded(raw):
                forward(raw)
