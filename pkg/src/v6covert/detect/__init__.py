"""Network-side analysis: covert-channel detectors, passive discovery, scan cost."""

from .covert import (EchoDetector, FlowLabelDetector, NsDetector, detect_dns_covert,
                     detect_echo_covert, detect_flowlabel, detect_ns_covert, detect_packets)
from .discovery import extract_neighbor_targets
from .findings import DetectionFinding, DetectorThresholds, render_json, render_text
from .scan import ScanEstimate, estimate_scan

__all__ = [
    "EchoDetector", "FlowLabelDetector", "NsDetector", "detect_dns_covert",
    "detect_echo_covert", "detect_flowlabel", "detect_ns_covert", "detect_packets",
    "extract_neighbor_targets", "DetectionFinding", "DetectorThresholds",
    "render_json", "render_text", "ScanEstimate", "estimate_scan",
]
