"""Rule source text: generated country-range rules and the two static rules."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import EmptyPrefixSet
from .zones import ZonePrefixSet


@dataclass(frozen=True)
class RuleText:
    name: str
    body: str


_HEADER = """\
// automatically generated rule
import "elf"

rule ipv6_{cc}_range {{
  strings:
"""

_FOOTER = """\
  condition:
    // uint32(0) == 0x7F454C46
    elf.type == elf.ET_EXEC
      and any of ($addr*)
}
"""


def _quote(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def prefixes_to_rule(z: ZonePrefixSet) -> RuleText:
    if not z.prefixes:
        raise EmptyPrefixSet(f"no prefixes for country {z.country_code!r}")
    lines = [_HEADER.format(cc=z.country_code)]
    lines += [f'    $addr{i} = "{_quote(a)}" ascii\n' for i, a in enumerate(z.prefixes)]
    lines.append(_FOOTER)
    return RuleText(f"ipv6_{z.country_code}_range", "".join(lines))


def _asset(name: str) -> str:
    return resources.files(__package__).joinpath("assets", name).read_text()


def generic_ipv6_rule() -> RuleText:
    return RuleText("linux_ipv6_catcher", _asset("linux_ipv6_catcher.yar"))


def irctelnet_rule() -> RuleText:
    """IRCTelnet / New Aidra rule.

    Two of the five "special" strings and the tails of two more are not
    recoverable; ``$str0``/``$str2`` are left as comments, so ``3 of
    ($str*)`` is evaluated over ``$str1``, ``$str3`` and ``$str4`` by any
    engine.
    """
    return RuleText("linux_ddos_irctelnet", _asset("linux_ddos_irctelnet.yar"))


def builtin_rules() -> list[RuleText]:
    return [generic_ipv6_rule(), irctelnet_rule()]


def write_rules(zonesets, out_dir) -> list[Path]:
    """Write one ``<cc>.yar`` per non-empty zone set; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for z in zonesets:
        if not z.prefixes:
            continue
        path = out / f"{z.country_code}.yar"
        path.write_text(prefixes_to_rule(z).body)
        written.append(path)
    return written
