"""
Rules from country prefixes, and a scan
=======================================

Turn a zone file into a rule, then scan two synthetic ELF files and a
plain text file with it and with the built-in rules.
"""

from v6covert.rulegen import (builtin_rules, parse_zone, prefixes_to_rule, scan_binary,
                              synthetic_elf)

zone = """\
# cz
2001:67c:1220::/46
2a00:1028::/29
2001:0db8:0000:0000:0000:0000:0000:0000/32
"""
rule = prefixes_to_rule(parse_zone("cz", zone))
print(rule.body)

rules = [rule] + builtin_rules()
samples = {
    "bot.elf": synthetic_elf(b"\x00connect 2001:db8::1\x00/etc/firewall_stop\x00"),
    "big.elf": synthetic_elf(b"\x00connect 2001:db8::1\x00", size=1 << 20),
    "notes.txt": b"reach me on 2001:db8::1\n",
}
for name, data in samples.items():
    hits = [m for m in scan_binary(data, rules) if m.verdict]
    print(f"{name:10}", ", ".join(f"{m.rule_name} {m.matched_strings}" for m in hits) or "no match")
