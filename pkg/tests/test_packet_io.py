from hypothesis import given, settings
from hypothesis import strategies as st

from flangsim import ast as A
from flangsim.packet_io import (Deliver, Dropped, Forwarded, GateMode, TimedPacket,
                                format_alarm_line, format_packet_line, gate,
                                gated_packets, parse_packet_line)

I, S = A.Int, A.Symbol


def test_parse_examples():
    assert parse_packet_line("10 ; left ; type = 'Disc, client = 3") == TimedPacket(
        10, A.Port.LEFT, {"type": S("Disc"), "client": I(3)})
    pkt = parse_packet_line("0 ; right ; type='Ack, client=3")
    assert (pkt.time, pkt.port, len(pkt.fields)) == (0, A.Port.RIGHT, 2)
    assert parse_packet_line("garbage") is None


def test_parse_value_sorts():
    pkt = parse_packet_line('1 ; left ; a = -4, b = true, c = "x, y", d = right, e = \'Q')
    assert pkt.fields == {"a": I(-4), "b": A.Bool(True), "c": A.Text("x, y"),
                          "d": A.Port.RIGHT, "e": S("Q")}


def test_parse_rejects_malformed():
    for line in ("1 ; up ; a = 1", "-1 ; left ; a = 1", "1 ; left ; a = 1,",
                 "1 ; left ; a = 1 b = 2", "1 ; left ; a = 1, a = 2",
                 "1 ; left ; a = 99999999999999999999", "1 ; left ; a = S0",
                 "1 left ; a = 1", "   "):
        assert parse_packet_line(line) is None, line


def test_format_examples():
    assert format_packet_line(10, A.Port.RIGHT, {"type": S("Ack")}) == "10 ; right ; type = 'Ack"
    assert format_packet_line(5, A.Port.LEFT, {}) == "5 ; left ;"
    assert parse_packet_line("5 ; left ;") == TimedPacket(5, A.Port.LEFT, {})


def test_alarm_line():
    assert format_alarm_line(5, "too many") == "ALARM ; 5 ; too many"
    assert format_alarm_line(5, "a\nb") == "ALARM ; 5 ; a b"


def test_gate_examples():
    assert gate(GateMode.WHITELIST, "garbage") == Dropped("garbage")
    assert gate(GateMode.BLACKLIST, "garbage") == Forwarded("garbage")
    line = "3 ; left ; a = 1"
    assert gate(GateMode.WHITELIST, line) == Deliver(parse_packet_line(line))


def test_gated_packets_is_lazy_and_ordered():
    forwarded = []
    lines = iter(["1 ; left ; a = 1\n", "junk\n", "\n", "2 ; right ; a = 2\r\n"])
    gen = gated_packets(lines, GateMode.BLACKLIST, forwarded.append)
    first = next(gen)
    assert first.time == 1 and forwarded == []
    second = next(gen)
    assert second.port is A.Port.RIGHT and forwarded == ["junk"]


names = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,5}", fullmatch=True)
values = st.one_of(
    st.builds(I, st.integers(A.INT64_MIN, A.INT64_MAX)),
    st.builds(A.Bool, st.booleans()),
    st.builds(S, names),
    st.builds(A.Text, st.text(st.characters(blacklist_categories=("Cs",)), max_size=6)),
    st.sampled_from(list(A.Port)),
)


@settings(max_examples=300)
@given(st.integers(0, 10**12), st.sampled_from(list(A.Port)),
       st.dictionaries(names, values, max_size=4))
def test_codec_round_trip(t, port, fields):
    line = format_packet_line(t, port, fields)
    assert parse_packet_line(line) == TimedPacket(t, port, fields)
