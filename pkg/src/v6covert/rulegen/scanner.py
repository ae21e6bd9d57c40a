"""Native evaluator for the rule shapes this package emits.

Not a rule-language engine.  It understands text strings (``ascii``,
optional ``nocase``), the single IPv6 regex of ``linux_ipv6_catcher``, and
conditions that are conjunctions of:

* ``elf.type == elf.ET_EXEC`` (ELF magic plus ``e_type == 2``, read in the
  byte order given by ``EI_DATA``)
* ``uint32(0) == 0x464c457f`` (ELF magic)
* ``filesize < N[KB|MB]``
* ``$name``, ``any of ($p*)``, ``all of ($p*)``, ``N of ($p*)``
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import UnsupportedRule
from .rules import RuleText, builtin_rules

ELF_MAGIC = b"\x7fELF"
ET_EXEC = 2
ONE_MB = 1 << 20

IPV6_REGEX = "([a-f0-9:]+:+)+[a-f0-9]+"

# Rule-1 regex, fullword: a maximal run of [a-z0-9:] (case-insensitive) matches
# iff it is all hex/colon, contains a colon past its first character and ends in hex.
_WORD_RUN = re.compile(rb"[A-Za-z0-9:]+")
_IPV6_TOKEN = re.compile(rb"[A-Fa-f0-9:]+:[A-Fa-f0-9]+")

_STR_DEF = re.compile(r'^\s*\$(\w+)\s*=\s*"((?:[^"\\]|\\.)*)"\s*(.*)$')
_RE_DEF = re.compile(r"^\s*\$(\w+)\s*=\s*/(.*)/\s*(.*)$")
_SET_REF = re.compile(r"\b(any|all|\d+)\s+of\s+\(\s*\$(\w*)\*\s*\)")
_SINGLE_REF = re.compile(r"\$(\w+)\b(?!\*)")
_FILESIZE = re.compile(r"filesize\s*<\s*(\d+)\s*(KB|MB)?")


@dataclass(frozen=True)
class StringDef:
    name: str
    pattern: bytes | None = None    # literal
    ipv6_regex: bool = False
    nocase: bool = False

    def find(self, data: bytes) -> list[tuple[int, str]]:
        if self.ipv6_regex:
            return [(m.start(), m.group().decode("latin-1"))
                    for m in _WORD_RUN.finditer(data) if _IPV6_TOKEN.fullmatch(m.group())]
        hay, needle = (data.lower(), self.pattern.lower()) if self.nocase else (data, self.pattern)
        hits, pos = [], hay.find(needle)
        while pos != -1:
            hits.append((pos, data[pos:pos + len(needle)].decode("latin-1")))
            pos = hay.find(needle, pos + 1)
        return hits


@dataclass(frozen=True)
class CompiledRule:
    name: str
    strings: tuple[StringDef, ...]
    requirements: tuple[tuple[str, int], ...]   # (name prefix or exact "$name", min count)
    require_elf: bool = False
    require_exec: bool = False
    max_size: int | None = None


@dataclass
class BinaryMatch:
    rule_name: str
    matched_strings: list[tuple[int, str]] = field(default_factory=list)
    verdict: bool = False


def _unescape(s: str) -> bytes:
    out = bytearray()
    i = 0
    while i < len(s):
        c = s[i]
        if c == "\\" and i + 1 < len(s):
            n = s[i + 1]
            if n == "x":
                out.append(int(s[i + 2:i + 4], 16))
                i += 4
                continue
            out += {"n": b"\n", "t": b"\t", "r": b"\r"}.get(n, n.encode("latin-1"))
            i += 2
            continue
        out += c.encode("latin-1")
        i += 1
    return bytes(out)


def _section(body: str, name: str, until: str | None) -> str:
    start = body.find(f"{name}:")
    if start == -1:
        raise UnsupportedRule(f"rule has no {name}: section")
    end = body.find(f"{until}:", start) if until else body.rfind("}")
    return body[start + len(name) + 1:end if end != -1 else None]


def _strip_comments(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.strip().startswith("//"))


def compile_rule(rule: RuleText) -> CompiledRule:
    m = re.search(r"^\s*(?:private\s+|global\s+)*rule\s+(\w+)", _strip_comments(rule.body),
                  re.M)
    if not m:
        raise UnsupportedRule("no rule declaration")
    name = m.group(1)

    strings = []
    for line in _strip_comments(_section(rule.body, "strings", "condition")).splitlines():
        if not line.strip():
            continue
        if (sm := _STR_DEF.match(line)):
            mods = sm.group(3).split()
            strings.append(StringDef(sm.group(1), _unescape(sm.group(2)), nocase="nocase" in mods))
        elif (rm := _RE_DEF.match(line)):
            if rm.group(2) != IPV6_REGEX:
                raise UnsupportedRule(f"{name}: only the IPv6 catcher regex is supported")
            strings.append(StringDef(rm.group(1), ipv6_regex=True))
        else:
            raise UnsupportedRule(f"{name}: cannot read string line {line.strip()!r}")

    cond = " ".join(_strip_comments(_section(rule.body, "condition", None)).split())
    if re.search(r"\bor\b|\bnot\b", cond):
        raise UnsupportedRule(f"{name}: only conjunctive conditions are supported")
    reqs = []
    for qm in _SET_REF.finditer(cond):
        q, prefix = qm.group(1), qm.group(2)
        members = [s for s in strings if s.name.startswith(prefix)]
        need = {"any": 1, "all": len(members)}.get(q) or int(q)
        reqs.append((prefix + "*", need))
    for sm in _SINGLE_REF.finditer(_SET_REF.sub("", cond)):
        reqs.append(("$" + sm.group(1), 1))
    size = None
    if (fm := _FILESIZE.search(cond)):
        size = int(fm.group(1)) * {"KB": 1 << 10, "MB": ONE_MB}.get(fm.group(2) or "", 1)
    return CompiledRule(
        name=name, strings=tuple(strings), requirements=tuple(reqs),
        require_elf=bool(re.search(r"uint32\(0\)\s*==\s*0x464c457f", cond, re.I)),
        require_exec="elf.type == elf.ET_EXEC" in cond, max_size=size)


def is_elf_exec(data: bytes) -> bool:
    if len(data) < 18 or not data.startswith(ELF_MAGIC):
        return False
    order = {1: "<", 2: ">"}.get(data[5])
    if order is None:
        return False
    return struct.unpack_from(order + "H", data, 16)[0] == ET_EXEC


def evaluate(rule: CompiledRule, data: bytes) -> BinaryMatch:
    result = BinaryMatch(rule.name)
    if rule.max_size is not None and len(data) >= rule.max_size:
        return result
    if rule.require_elf and not data.startswith(ELF_MAGIC):
        return result
    if rule.require_exec and not is_elf_exec(data):
        return result
    hits = {s.name: s.find(data) for s in rule.strings}
    for ref, need in rule.requirements:
        if ref.startswith("$"):
            matched = 1 if hits.get(ref[1:]) else 0
        else:
            prefix = ref[:-1]
            matched = sum(1 for n, h in hits.items() if n.startswith(prefix) and h)
        if matched < need:
            return result
    result.matched_strings = sorted((off, txt) for h in hits.values() for off, txt in h)
    result.verdict = bool(result.matched_strings) or not rule.strings
    return result


def scan_binary(data: bytes, rules) -> list[BinaryMatch]:
    """Evaluate each rule (``CompiledRule`` or ``RuleText``) against ``data``."""
    compiled = [r if isinstance(r, CompiledRule) else compile_rule(r) for r in rules]
    return [evaluate(r, bytes(data)) for r in compiled]


def load_rules(source) -> list[CompiledRule]:
    """``"builtin"`` or a directory / file of ``.yar`` rule sources."""
    if source == "builtin":
        return [compile_rule(r) for r in builtin_rules()]
    path = Path(source)
    files = sorted(path.glob("*.yar")) if path.is_dir() else [path]
    rules = []
    for f in files:
        text = f.read_text()
        rules.append(compile_rule(RuleText(f.stem, text)))
    return rules


def synthetic_elf(content: bytes = b"", *, e_type: int = ET_EXEC,
                  little_endian: bool = True, size: int | None = None) -> bytes:
    """Minimal ELF64 header followed by ``content``, zero-padded to ``size``."""
    e = "<" if little_endian else ">"
    ident = ELF_MAGIC + bytes([2, 1 if little_endian else 2, 1]) + bytes(9)
    header = ident + struct.pack(e + "HHIQQQIHHHHHH", e_type, 62, 1, 0, 0, 0, 0,
                                 64, 0, 0, 0, 0, 0)
    data = header + bytes(content)
    if size is not None:
        if size < len(data):
            raise ValueError("size smaller than header + content")
        data += bytes(size - len(data))
    return data
