"""Command-line entry point.

Exit codes: 0 success, 1 operational error, 2 usage error, 3 findings present
(``detect``/``scan`` with ``--fail-on-hit``).  Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .addr import parse_addr
from .channels import (ChannelConfig, FlowLabelFraming, dns_decode, dns_encode, echo_decode,
                       echo_encode, emit_nsupdate, fl_decode, fl_encode, ns_decode, ns_encode,
                       parse_nsupdate)
from .channels.dns import DEFAULT_TTL
from .detect import (DetectorThresholds, detect_dns_covert, detect_packets, estimate_scan,
                     extract_neighbor_targets, render_json, render_text)
from .errors import InvalidAddress, V6CovertError
from .pcap import pcap_read, pcap_write
from .rulegen import load_rules, load_zone_dir, scan_binary, write_rules

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_HITS = 0, 1, 2, 3
CHANNELS = ("fl", "echo", "ns", "dns")


def _int_range(bits: int, what: str):
    def conv(text: str) -> int:
        try:
            v = int(text, 0)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{what}: not an integer: {text!r}") from None
        if not 0 <= v < (1 << bits):
            raise argparse.ArgumentTypeError(f"{what}: {text} does not fit in {bits} bits")
        return v
    return conv


def _addr(text: str):
    try:
        return parse_addr(text.split("/")[0])
    except InvalidAddress as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("rate must be positive")
    return v


def _channel_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("channel constants")
    g.add_argument("--xor-key", type=_int_range(8, "--xor-key"), default=0x17)
    g.add_argument("--icmp-id", type=_int_range(16, "--icmp-id"), default=0x1337)
    g.add_argument("--flow-start-magic", type=_int_range(20, "--flow-start-magic"),
                   default=0xFFFFE)
    g.add_argument("--flow-end-magic", type=_int_range(20, "--flow-end-magic"),
                   default=0xFFFFF)
    g.add_argument("--ns-prefix", type=_addr, default=parse_addr("fe80::"))
    g.add_argument("--src", type=_addr, default=parse_addr("2001:db8::1"))
    g.add_argument("--dst", type=_addr, default=parse_addr("2001:db8::2"))
    g.add_argument("--ttl", type=int, default=DEFAULT_TTL)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="v6covert", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exfil", help="encode a message into a pcap or nsupdate script")
    p.add_argument("channel", choices=CHANNELS)
    p.add_argument("--in", dest="inp", required=True, help="message file, '-' for stdin")
    p.add_argument("--out", required=True)
    p.add_argument("--zone", default="exfil.example")
    p.add_argument("--label", default="x")
    p.add_argument("--server", default="127.0.0.1")
    _channel_flags(p)

    p = sub.add_parser("recv", help="decode a message from a pcap or nsupdate script")
    p.add_argument("channel", choices=CHANNELS)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    _channel_flags(p)

    p = sub.add_parser("detect", help="run the covert-channel detectors")
    p.add_argument("--in", dest="inp", required=True, help="pcap file")
    p.add_argument("--records", help="nsupdate script to check with the DNS detector")
    p.add_argument("--thresholds", help="JSON file of DetectorThresholds fields")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--fail-on-hit", action="store_true")

    p = sub.add_parser("discover", help="list neighbor-discovery target addresses")
    p.add_argument("--in", dest="inp", required=True)

    p = sub.add_parser("rulegen", help="compile <cc>-ipv6.zone files into <cc>.yar rules")
    p.add_argument("--zones", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("scan", help="scan files with rules")
    p.add_argument("--rules", default="builtin", help="'builtin', a .yar file or a directory")
    p.add_argument("--fail-on-hit", action="store_true")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("estimate", help="brute-force scan time for a subnet")
    p.add_argument("--host-bits", type=int, required=True, choices=range(0, 129),
                   metavar="N")
    p.add_argument("--rate", type=_positive_float, default=1.0, help="probes per second")
    return ap


def _config(args) -> ChannelConfig:
    return ChannelConfig(xor_key=args.xor_key, icmp_id=args.icmp_id, src=args.src,
                         dst=args.dst, ns_prefix=args.ns_prefix)


def _framing(args) -> FlowLabelFraming:
    return FlowLabelFraming(start_magic=args.flow_start_magic, end_magic=args.flow_end_magic)


def _read_input(name: str) -> bytes:
    return sys.stdin.buffer.read() if name == "-" else Path(name).read_bytes()


def cmd_exfil(args) -> int:
    msg = _read_input(args.inp)
    cfg = _config(args)
    if args.channel == "dns":
        records = dns_encode(msg, args.zone, args.label, args.ttl)
        Path(args.out).write_text(emit_nsupdate(records, args.server, args.zone).text)
        print(f"{len(records)} records")
        return EXIT_OK
    encoders = {"fl": lambda m: fl_encode(m, cfg, _framing(args)),
                "echo": lambda m: echo_encode(m, cfg),
                "ns": lambda m: ns_encode(m, cfg)}
    tx = encoders[args.channel](msg)
    pcap_write(tx.packets, args.out)
    print(f"{len(tx)} packets")
    return EXIT_OK


def cmd_recv(args) -> int:
    cfg = _config(args)
    if args.channel == "dns":
        msg = dns_decode(parse_nsupdate(Path(args.inp).read_text()))
    else:
        packets = pcap_read(args.inp)
        msg = {"fl": lambda: fl_decode(packets, _framing(args)),
               "echo": lambda: echo_decode(packets, cfg),
               "ns": lambda: ns_decode(packets, cfg)}[args.channel]()
    if args.out == "-":
        sys.stdout.buffer.write(msg)
        sys.stdout.flush()
    else:
        Path(args.out).write_bytes(msg)
    return EXIT_OK


def cmd_detect(args) -> int:
    th = DetectorThresholds()
    if args.thresholds:
        th = DetectorThresholds.from_mapping(json.loads(Path(args.thresholds).read_text()))
    findings = detect_packets(pcap_read(args.inp), th)
    if args.records:
        findings += detect_dns_covert(parse_nsupdate(Path(args.records).read_text()))
    sys.stdout.write(render_json(findings) if args.format == "json" else render_text(findings))
    print(f"{len(findings)} finding(s)", file=sys.stderr)
    return EXIT_HITS if findings and args.fail_on_hit else EXIT_OK


def cmd_discover(args) -> int:
    for a in extract_neighbor_targets(pcap_read(args.inp)):
        print(a)
    return EXIT_OK


def cmd_rulegen(args) -> int:
    zonesets = load_zone_dir(args.zones)
    if not zonesets:
        print(f"error: no <cc>-ipv6.zone files in {args.zones}", file=sys.stderr)
        return EXIT_ERROR
    for path in write_rules(zonesets, args.out):
        print(path)
    return EXIT_OK


def cmd_scan(args) -> int:
    rules = load_rules(args.rules)
    hit_any = False
    for path in args.paths:
        data = Path(path).read_bytes()
        hits = [m for m in scan_binary(data, rules) if m.verdict]
        if not hits:
            print(f"{path}\t-\tno match")
        for m in hits:
            hit_any = True
            for off, text in m.matched_strings:
                print(f"{path}\t{m.rule_name}\t{off:#x}\t{text}")
    return EXIT_HITS if hit_any and args.fail_on_hit else EXIT_OK


def cmd_estimate(args) -> int:
    est = estimate_scan(args.host_bits, args.rate)
    print(f"addresses: {est.address_count}")
    print(f"seconds: {est.seconds:.6g}")
    print(est.human_readable)
    return EXIT_OK


COMMANDS = {"exfil": cmd_exfil, "recv": cmd_recv, "detect": cmd_detect,
            "discover": cmd_discover, "rulegen": cmd_rulegen, "scan": cmd_scan,
            "estimate": cmd_estimate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (V6CovertError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
