"""Country-range rule generation and native binary scanning."""

from .rules import (RuleText, builtin_rules, generic_ipv6_rule, irctelnet_rule,
                    prefixes_to_rule, write_rules)
from .scanner import (BinaryMatch, CompiledRule, compile_rule, evaluate, is_elf_exec,
                      load_rules, scan_binary, synthetic_elf)
from .zones import ZonePrefixSet, load_zone_dir, load_zone_file, parse_zone, prefix_text

__all__ = [
    "RuleText", "builtin_rules", "generic_ipv6_rule", "irctelnet_rule", "prefixes_to_rule",
    "write_rules", "BinaryMatch", "CompiledRule", "compile_rule", "evaluate", "is_elf_exec",
    "load_rules", "scan_binary", "synthetic_elf", "ZonePrefixSet", "load_zone_dir",
    "load_zone_file", "parse_zone", "prefix_text",
]
