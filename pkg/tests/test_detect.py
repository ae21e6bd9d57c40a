import json
import math

import pytest
from hypothesis import given, strategies as st

from v6covert.addr import UNSPECIFIED, parse_addr
from v6covert.channels import (STOCK_PAYLOAD, AaaaRecord, Channel, ChannelConfig, dns_encode,
                               echo_encode, fl_encode, ns_encode)
from v6covert.detect import (DetectionFinding, DetectorThresholds, detect_dns_covert,
                             detect_echo_covert, detect_flowlabel, detect_ns_covert,
                             detect_packets, estimate_scan, extract_neighbor_targets,
                             render_json, render_text)
from v6covert.detect.synthetic import benign_corpus
from v6covert.packet import Icmpv6Echo, Icmpv6NeighborMsg, Packet, RawBytes

SECRET = b"THISISASECRET"


def ns(target, src="fe80::aa", msg_type=135):
    return Packet.build(Icmpv6NeighborMsg(msg_type, 0, 0, parse_addr(target)), src=src,
                        dst="ff02::1", hop_limit=255)


def ping(seq, ident=1, data=STOCK_PAYLOAD):
    return Packet.build(Icmpv6Echo(128, 0, ident, seq, data), src="2001:db8::1",
                        dst="2001:db8::2")


def labelled(label, n=100):
    return [Packet.build(RawBytes(b"x"), src="2001:db8::1", dst="2001:db8::2",
                         flow_label=label) for _ in range(n)]


# -- discovery ------------------------------------------------------------

def test_neighbor_targets_dedup():
    stream = [ns("fe80::1"), ns("fe80::2", msg_type=136), ns("fe80::1")]
    assert extract_neighbor_targets(stream) == [parse_addr("fe80::1"), parse_addr("fe80::2")]


def test_neighbor_targets_none():
    assert extract_neighbor_targets(list(echo_encode(SECRET)) + labelled(0, 5)) == []


def test_neighbor_targets_from_ns_channel():
    targets = extract_neighbor_targets(ns_encode(b"THISISAS"))
    assert parse_addr("fe80::5448:4953:4953:4153") in targets


# -- flow label -------------------------------------------------------------

def test_fl_detector_flags_encoder_once():
    tx = fl_encode(SECRET)
    found = detect_flowlabel(tx)
    assert len(found) == 1
    assert found[0].channel_suspected is Channel.FLOW_LABEL
    assert found[0].packet_indices == tuple(range(len(tx)))
    assert "0xffffe" in found[0].evidence


def test_fl_detector_quiet_on_zero_and_constant():
    assert detect_flowlabel(labelled(0)) == []
    assert detect_flowlabel(labelled(7)) == []


def test_fl_detector_run_broken_by_long_zero_gap():
    th = DetectorThresholds()
    varied = [Packet.build(RawBytes(), flow_label=i + 1) for i in range(4)]
    gap = [Packet.build(RawBytes(), flow_label=0)] * (th.fl_max_zero_gap + 1)
    assert detect_flowlabel(varied + gap + varied) == []
    assert len(detect_flowlabel(varied + gap[:th.fl_max_zero_gap] + varied)) == 1


# -- echo -------------------------------------------------------------------

def test_echo_detector_flags_secret():
    found = detect_echo_covert(echo_encode(SECRET))
    assert len(found) == 1
    f = found[0]
    assert f.channel_suspected is Channel.ICMP_ECHO_SEQ
    assert len(f.packet_indices) == 7 and "0x1337" in f.evidence
    assert f.score == 0.9


def test_echo_detector_ignores_monotonic_ping():
    assert detect_echo_covert([ping(s) for s in range(1, 21)]) == []
    # wrap-around is still monotonic
    assert detect_echo_covert([ping(s & 0xFFFF) for s in range(65530, 65545)]) == []


def test_echo_detector_threshold():
    assert detect_echo_covert(echo_encode(b"ABCDEF")) == []          # 3 packets
    assert len(detect_echo_covert(echo_encode(b"ABCDEFG"))) == 1     # 4 packets


def test_echo_detector_partial_score_without_mimicry():
    found = detect_echo_covert([ping(s, data=b"hello") for s in (9, 3, 77, 12, 5)])
    assert len(found) == 1 and found[0].score == 0.6


# -- neighbor solicitation --------------------------------------------------------

def test_ns_detector_flags_channel(rng):
    tx = ns_encode(rng.randbytes(64))
    assert len(tx) == 9
    found = detect_ns_covert(tx)
    assert len(found) == 1
    assert found[0].packet_indices == tuple(range(9))


def test_ns_detector_dad_burst():
    assert detect_ns_covert([ns("fe80::1", src="::"), ns("fe80::2", src="::")]) == []


def test_ns_detector_groups_by_prefix():
    stream = [ns(f"fe80::{i + 1}") for i in range(4)] + [ns(f"fe80:0:0:1::{i + 1}")
                                                         for i in range(4)]
    assert detect_ns_covert(stream) == []


def test_ns_detector_answered_targets():
    stream = []
    for i in range(10):
        stream += [ns(f"fe80::{i + 1}"), ns(f"fe80::{i + 1}", src=f"fe80::{i + 1}", msg_type=136)]
    assert detect_ns_covert(stream) == []
    assert len(detect_ns_covert([p for p in stream if p.payload.msg_type == 135])) == 1


# -- DNS ----------------------------------------------------------------------

def test_dns_detector_flags_encoder():
    found = detect_dns_covert(dns_encode(SECRET, "z.example", "x"))
    assert len(found) == 1
    assert "d54:4849" in found[0].evidence
    assert found[0].src == UNSPECIFIED


def test_dns_detector_benign_record():
    assert detect_dns_covert([AaaaRecord("www.example.com", 300, "2001:db8::1")]) == []


def test_dns_detector_sibling_rule():
    recs = [AaaaRecord(f"{i}.x.zone.example", 60, f"2001:db8::{i + 1}") for i in range(5)]
    found = detect_dns_covert(recs)
    assert len(found) == 1 and "siblings" in found[0].evidence
    assert detect_dns_covert(recs[:3]) == []


# -- scan estimator ---------------------------------------------------------------

def test_estimate_ipv4_subnet():
    est = estimate_scan(8, 256 / 300)
    assert est.address_count == 256
    assert est.seconds == pytest.approx(300, rel=0.01)
    assert est.human_readable == "300 s (5.0 minutes)"


def test_estimate_trivial():
    est = estimate_scan(0, 1.0)
    assert (est.address_count, est.seconds) == (1, 1.0)


def test_estimate_ipv6_subnet():
    est = estimate_scan(64, 1.0)
    assert est.address_count == 2 ** 64
    assert est.seconds == 2 ** 64
    assert est.seconds / 31_557_600 == pytest.approx(5.85e11, rel=1e-3)
    assert "~5.85e11 years" in est.human_readable


def test_estimate_validation():
    with pytest.raises(ValueError):
        estimate_scan(129, 1)
    with pytest.raises(ValueError):
        estimate_scan(8, 0)


@given(st.integers(0, 127), st.floats(0.01, 1e6))
def test_estimate_monotonic(bits, rate):
    a = estimate_scan(bits, rate)
    assert estimate_scan(bits + 1, rate).seconds > a.seconds
    assert estimate_scan(bits, rate * 2).seconds < a.seconds
    assert a.seconds == pytest.approx(a.address_count / rate)


# -- properties ---------------------------------------------------------------

def test_self_adversarial_recall(rng):
    for _ in range(100):
        assert len(detect_flowlabel(fl_encode(rng.randbytes(rng.randrange(1, 2049))))) == 1
        assert len(detect_echo_covert(echo_encode(rng.randbytes(rng.randrange(7, 2049))))) == 1
        assert len(detect_ns_covert(ns_encode(rng.randbytes(rng.randrange(56, 2049))))) == 1
        recs = dns_encode(rng.randbytes(rng.randrange(1, 2049)), "z.example", "x")
        assert len(detect_dns_covert(recs)) == 1


def test_benign_corpus_specificity():
    corpus = benign_corpus(10_000, seed=1)
    assert len(corpus) == 10_000
    assert detect_packets(corpus) == []


def test_detection_in_mixed_traffic():
    corpus = benign_corpus(3000, seed=2)
    mixed = corpus[:1000] + list(fl_encode(SECRET)) + corpus[1000:2000] \
        + list(echo_encode(SECRET)) + corpus[2000:]
    kinds = [f.channel_suspected for f in detect_packets(mixed)]
    assert kinds == [Channel.FLOW_LABEL, Channel.ICMP_ECHO_SEQ]


def test_determinism():
    stream = benign_corpus(2000, seed=3) + list(fl_encode(SECRET)) + list(echo_encode(SECRET))
    assert detect_packets(stream) == detect_packets(list(stream))
    assert benign_corpus(500, seed=9) == benign_corpus(500, seed=9)


def test_window_expiry():
    th = DetectorThresholds(window=16)
    stream = list(echo_encode(SECRET)) + labelled(0, 64) + list(echo_encode(SECRET))
    assert len(detect_echo_covert(stream, th)) == 2
    assert len(detect_echo_covert(stream)) == 1


# -- reports --------------------------------------------------------------------

def test_reports():
    found = detect_packets(list(fl_encode(SECRET)) + list(echo_encode(SECRET)))
    doc = json.loads(render_json(found))
    assert [f["channel_suspected"] for f in doc["findings"]] == ["FlowLabel", "IcmpEchoSeq"]
    assert set(doc["findings"][0]) == {"channel_suspected", "src", "dst", "packet_indices",
                                       "evidence", "score"}
    lines = render_text(found).splitlines()
    assert len(lines) == 2 and lines[0].startswith("FlowLabel\t2001:db8::1 -> 2001:db8::2")


def test_finding_and_threshold_invariants():
    with pytest.raises(ValueError):
        DetectionFinding(Channel.FLOW_LABEL, UNSPECIFIED, UNSPECIFIED, (), "", 0.5)
    with pytest.raises(ValueError):
        DetectionFinding(Channel.FLOW_LABEL, UNSPECIFIED, UNSPECIFIED, (1,), "", 1.5)
    with pytest.raises(ValueError):
        DetectorThresholds(fl_min_run=0)
    with pytest.raises(ValueError):
        DetectorThresholds.from_mapping({"bogus": 1})
    assert DetectorThresholds.from_mapping({"window": 10}).window == 10
