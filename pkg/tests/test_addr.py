import ipaddress
import random

import pytest
from hypothesis import given, strategies as st

from v6covert.addr import AddressClass, Ipv6Addr, classify_addr, format_addr, parse_addr
from v6covert.errors import InvalidAddress

from conftest import random_addr


def test_compressed_equals_expanded():
    assert parse_addr("fe80::1") == parse_addr("fe80:0000:0000:0000:0000:0000:0000:0001")
    assert parse_addr("fe80::1") == parse_addr("fe80:0000::1")


def test_all_zero():
    assert parse_addr("::").value == 0
    assert format_addr(Ipv6Addr(0)) == "::"


def test_low_64_bits_hand_expanded():
    a = parse_addr("fe80::5448:4953:4953:4153")
    assert a.value & ((1 << 64) - 1) == 0x5448495349534153
    assert a.value >> 64 == 0xFE80 << 48


@pytest.mark.parametrize("groups, text", [
    ((0xFE80, 0, 0, 0, 0, 0, 0, 1), "fe80::1"),
    ((0xFE80, 0, 0, 0, 0, 0, 1, 0), "fe80::1:0"),
    ((1, 0, 0, 2, 0, 0, 0, 3), "1:0:0:2::3"),       # longest run wins
    ((1, 0, 0, 2, 0, 0, 3, 4), "1::2:0:0:3:4"),      # leftmost on a tie
    ((1, 0, 2, 3, 4, 5, 6, 7), "1:0:2:3:4:5:6:7"),   # single zero group stays
    ((0, 0, 0, 0, 0, 0, 0, 1), "::1"),
    ((1, 0, 0, 0, 0, 0, 0, 0), "1::"),
    ((0xABCD, 0x12, 0, 0, 0, 0, 0, 0xF), "abcd:12::f"),
])
def test_format_canonical(groups, text):
    assert format_addr(Ipv6Addr.from_groups(groups)) == text


@pytest.mark.parametrize("text", [
    "1:2:3:4:5:6:7", "1:2:3:4:5:6:7:8:9", "1::2::3", "12345::", "g::1", "fe80:::1",
    ":1:2:3:4:5:6:7", "1:2:3:4:5:6:7:", "", "fe80::1%eth0", "1:2:3:4:5:6:7::8",
    "::1.2.3", "::256.1.1.1",
])
def test_invalid(text):
    with pytest.raises(InvalidAddress):
        parse_addr(text)


def test_case_and_v4_tail():
    assert parse_addr("FE80::ABCD") == parse_addr("fe80::abcd")
    assert parse_addr("::ffff:1.2.3.4") == parse_addr("::ffff:102:304")


@pytest.mark.parametrize("text, klass", [
    ("fe80::1", AddressClass.LINK_LOCAL),
    ("febf:ffff::1", AddressClass.LINK_LOCAL),
    ("fec0::1", AddressClass.OTHER),
    ("2001:db8::1", AddressClass.GLOBAL_UNICAST),
    ("3fff::1", AddressClass.GLOBAL_UNICAST),
    ("ff02::1", AddressClass.MULTICAST),
    ("0100::1", AddressClass.OTHER),
    ("4242::1", AddressClass.OTHER),   # 0x42 -> top bits 010, outside 2000::/3
    ("d54:4849::", AddressClass.OTHER),
])
def test_classify(text, klass):
    assert classify_addr(parse_addr(text)) is klass


def test_predicates_mutually_exclusive(rng):
    for _ in range(2000):
        a = random_addr(rng)
        flags = [a.is_link_local, a.is_global_unicast, a.is_multicast, a.is_unallocated]
        assert sum(flags) == 1


def test_roundtrip_10000_against_stdlib(rng):
    for _ in range(10_000):
        a = random_addr(rng)
        text = format_addr(a)
        assert parse_addr(text) == a
        ref = ipaddress.IPv6Address(a.value)
        if ref.ipv4_mapped is None:
            assert text == ref.compressed
        assert parse_addr(ref.exploded) == a


@given(st.integers(min_value=0, max_value=(1 << 128) - 1))
def test_expanded_and_compressed_agree(value):
    a = Ipv6Addr(value)
    expanded = ":".join(f"{g:04x}" for g in a.groups)
    assert parse_addr(expanded) == parse_addr(format_addr(a)) == a


@given(st.integers(min_value=0, max_value=(1 << 128) - 1), st.data())
def test_noncanonical_spellings(value, data):
    a = Ipv6Addr(value)
    # random leading zeros and random letter case still parse to the same value
    parts = []
    for g in a.groups:
        width = data.draw(st.integers(min_value=len(f"{g:x}"), max_value=4))
        h = f"{g:0{width}x}"
        parts.append(h.upper() if data.draw(st.booleans()) else h)
    assert parse_addr(":".join(parts)) == a


def test_value_range():
    with pytest.raises(InvalidAddress):
        Ipv6Addr(1 << 128)
    with pytest.raises(InvalidAddress):
        Ipv6Addr(-1)


def test_prefix_helpers():
    a = parse_addr("fe80::5448:4953:4953:4153")
    assert a.prefix(64) == parse_addr("fe80::")
    assert a.in_prefix(parse_addr("fe80::"), 64)
    assert not a.in_prefix(parse_addr("fe80:0:0:1::"), 64)
    assert a.interface_id == 0x5448495349534153
