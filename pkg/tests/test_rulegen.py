import random
import re
from pathlib import Path

import pytest

from v6covert.addr import Ipv6Addr, format_addr
from v6covert.errors import EmptyPrefixSet, MalformedLine, UnsupportedRule
from v6covert.rulegen import (RuleText, ZonePrefixSet, compile_rule, generic_ipv6_rule,
                              irctelnet_rule, is_elf_exec, load_rules, load_zone_dir,
                              parse_zone, prefixes_to_rule, scan_binary, synthetic_elf,
                              write_rules)

GOLDEN = Path(__file__).parent / "golden"
ORIGINAL_REGEX = re.compile(rb"([a-f0-9:]+:+)+[a-f0-9]+", re.IGNORECASE)
ONE_MB = 1 << 20


# -- zones --------------------------------------------------------------------

@pytest.mark.parametrize("line, prefix", [
    ("2001:db8::/32", "2001:db8:"),
    ("2001:db8:1::/48", "2001:db8:1:"),
    ("2001:0db8:0000:0000:0000:0000:0000:0000/32", "2001:db8:"),
    ("2001:db8:0:0:0:0:0:0/33", "2001:db8:0:"),
    ("2001:db8:abcd:12:0:0:0:1/128", "2001:db8:abcd:12:0:0:0:1:"),
])
def test_prefix_rule(line, prefix):
    assert parse_zone("cz", line).prefixes == [prefix]


def test_comments_and_blanks():
    z = parse_zone("cz", "# header\n\n   \n#another\n2001:db8::/32\n")
    assert z.prefixes == ["2001:db8:"]
    assert parse_zone("cz", "# header\n").prefixes == []


@pytest.mark.parametrize("line", ["hello", "2001:db8::/129", "2001:db8:/32", "1.2.3.0/24",
                                  "2001:db8::/abc"])
def test_malformed(line):
    with pytest.raises(MalformedLine):
        parse_zone("cz", "# ok\n" + line)


def test_zone_dir(tmp_path):
    (tmp_path / "cz-ipv6.zone").write_text((GOLDEN / "cz-ipv6.zone").read_text())
    (tmp_path / "sk-ipv6.zone").write_text("2a01:390::/32\n")
    (tmp_path / "README").write_text("ignored")
    zs = load_zone_dir(tmp_path)
    assert [z.country_code for z in zs] == ["cz", "sk"]
    paths = write_rules(zs, tmp_path / "out")
    assert [p.name for p in paths] == ["cz.yar", "sk.yar"]
    assert (tmp_path / "out" / "cz.yar").read_text() == (GOLDEN / "cz.yar").read_text()


# -- rule text -----------------------------------------------------------------

def test_golden_template():
    z = parse_zone("cz", (GOLDEN / "cz-ipv6.zone").read_text())
    rule = prefixes_to_rule(z)
    assert rule.name == "ipv6_cz_range"
    assert rule.body == (GOLDEN / "cz.yar").read_text()


def test_template_lines():
    rule = prefixes_to_rule(ZonePrefixSet("cz", ["2001:db8:"]))
    assert '    $addr0 = "2001:db8:" ascii\n' in rule.body
    three = prefixes_to_rule(ZonePrefixSet("de", ["a:", "b:", "c:"]))
    assert re.findall(r"\$addr(\d) = \"(\w):\"", three.body) == [("0", "a"), ("1", "b"),
                                                                  ("2", "c")]
    with pytest.raises(EmptyPrefixSet):
        prefixes_to_rule(ZonePrefixSet("cz", []))


def test_static_rules():
    g = generic_ipv6_rule().body
    assert "/([a-f0-9:]+:+)+[a-f0-9]+/ fullword ascii nocase" in g
    assert "filesize < 1MB" in g
    irc = irctelnet_rule().body
    assert "3 of ($str*)" in irc and "any of ($attack*)" in irc
    assert '$attack0 = "fin.ack.psh"' in irc
    assert '$str1 = "/etc/firewall_stop"' in irc


def test_compile_shapes():
    g = compile_rule(generic_ipv6_rule())
    assert g.require_exec and g.max_size == ONE_MB and g.requirements == (("$ipv6", 1),)
    irc = compile_rule(irctelnet_rule())
    assert irc.require_elf and not irc.require_exec
    assert set(irc.requirements) == {("str*", 3), ("attack*", 1)}
    assert [s.name for s in irc.strings if s.name.startswith("str")] == ["str1", "str3", "str4"]
    cz = compile_rule(prefixes_to_rule(ZonePrefixSet("cz", ["2001:db8:"])))
    assert cz.require_exec and cz.max_size is None and cz.requirements == (("addr*", 1),)


def test_compile_rejects_other_shapes():
    with pytest.raises(UnsupportedRule):
        compile_rule(RuleText("x", 'rule x { strings: $a = /abc/ condition: $a }'))
    with pytest.raises(UnsupportedRule):
        compile_rule(RuleText("x", 'rule x { strings: $a = "a" condition: $a or $a }'))


# -- scanner ------------------------------------------------------------------

def test_elf_gate():
    assert is_elf_exec(synthetic_elf())
    assert is_elf_exec(synthetic_elf(little_endian=False))
    assert not is_elf_exec(synthetic_elf(e_type=3))
    assert not is_elf_exec(b"hello")
    # e_type must be read in the declared byte order
    le_as_be = bytearray(synthetic_elf())
    le_as_be[5] = 2
    assert not is_elf_exec(bytes(le_as_be))


def test_generic_rule_hit_offset():
    content = b"\x00\x00connect 2001:db8::1\x00"
    elf = synthetic_elf(content)
    (m,) = scan_binary(elf, [generic_ipv6_rule()])
    assert m.verdict
    assert m.matched_strings == [(64 + content.index(b"2001"), "2001:db8::1")]


def test_size_gate():
    elf = synthetic_elf(b"2001:db8::1\x00", size=ONE_MB)
    (m,) = scan_binary(elf, [generic_ipv6_rule()])
    assert not m.verdict and m.matched_strings == []
    (m,) = scan_binary(synthetic_elf(b"2001:db8::1\x00", size=ONE_MB - 1), [generic_ipv6_rule()])
    assert m.verdict


def test_magic_gate():
    (m,) = scan_binary(b"hello 2001:db8::1", [generic_ipv6_rule()])
    assert not m.verdict


def test_fullword_boundaries():
    rule = [compile_rule(generic_ipv6_rule())]
    hit = lambda s: scan_binary(synthetic_elf(b" " + s + b" "), rule)[0].verdict
    assert hit(b"fe80::1") and hit(b"FE80::ABCD") and hit(b"::1")
    assert not hit(b"x2001:db8::1")     # 'x' is a word character
    assert not hit(b"2001:db8::")       # must end in a hex digit
    assert not hit(b"deadbeef")         # needs a colon
    assert not hit(b":1")               # needs something before the last colon
    assert hit(b"(2001:db8::1)")


def test_irctelnet():
    strings = b"/etc/firewall_stop\x00rm -f /tmp/x\x00USER bot\x00fin.ack.psh\x00"
    rule = [irctelnet_rule()]
    assert scan_binary(synthetic_elf(strings, e_type=3), rule)[0].verdict   # magic only
    assert not scan_binary(synthetic_elf(strings.replace(b"USER", b"user")), rule)[0].verdict
    assert not scan_binary(synthetic_elf(strings.replace(b"fin.ack.psh", b"")), rule)[0].verdict
    assert not scan_binary(strings, rule)[0].verdict


def test_scanner_generator_coherence(rng):
    for _ in range(100):
        prefixes = []
        for _ in range(rng.randrange(1, 6)):
            groups = [rng.randrange(0x2000, 0x3FFF)] + [rng.getrandbits(16)
                                                       for _ in range(rng.randrange(1, 3))]
            prefixes.append(":".join(f"{g:x}" for g in groups) + ":")
        rule = prefixes_to_rule(ZonePrefixSet("zz", prefixes))
        embed = rng.choice(prefixes).encode() + b"1"
        assert scan_binary(synthetic_elf(b"\x00" + embed + b"\x00"), [rule])[0].verdict
        assert not scan_binary(synthetic_elf(b"\x00ffff:1\x00"), [rule])[0].verdict


def _random_literal(rng):
    a = Ipv6Addr((rng.getrandbits(112) << 16) | rng.randrange(1, 0x10000))
    groups = [f"{g:x}" for g in a.groups]
    form = rng.randrange(3)
    if form == 0:
        text = format_addr(a)
    elif form == 1:
        text = ":".join(f"{int(g, 16):04x}" for g in groups)
    else:
        text = ":".join(groups)
    return text.upper() if rng.random() < 0.3 else text


def _random_token(rng):
    alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    return "".join(rng.choice(alphabet) for _ in range(rng.randrange(1, 30)))


def test_regex_semantics_vs_original(rng):
    # literals ending in "::" are out of the regex's reach, so the last group is nonzero
    rule = [compile_rule(generic_ipv6_rule())]
    errors = 0
    for _ in range(200):
        lit = _random_literal(rng).encode()
        assert ORIGINAL_REGEX.fullmatch(lit)
        errors += not scan_binary(synthetic_elf(b"\x00" + lit + b"\x00"), rule)[0].verdict
        tok = _random_token(rng).encode()
        assert not ORIGINAL_REGEX.fullmatch(tok)
        errors += scan_binary(synthetic_elf(b"\x00" + tok + b"\x00"), rule)[0].verdict
    assert errors == 0


def test_token_matcher_equals_original_regex(rng):
    """Fullword hits agree with the original regex for every maximal word run."""
    from v6covert.rulegen.scanner import StringDef
    sd = StringDef("ipv6", ipv6_regex=True)
    chars = b"0123456789abcdefABCDEFxyz:: .\n"
    for _ in range(2000):
        data = bytes(rng.choice(chars) for _ in range(rng.randrange(0, 40)))
        expected = [(m.start(), m.group().decode()) for m in re.finditer(rb"[A-Za-z0-9:]+", data)
                    if ORIGINAL_REGEX.fullmatch(m.group())]
        assert sd.find(data) == expected


def test_load_rules_builtin_and_dir(tmp_path):
    assert [r.name for r in load_rules("builtin")] == ["linux_ipv6_catcher",
                                                      "linux_ddos_irctelnet"]
    (tmp_path / "cz.yar").write_text((GOLDEN / "cz.yar").read_text())
    assert [r.name for r in load_rules(tmp_path)] == ["ipv6_cz_range"]
