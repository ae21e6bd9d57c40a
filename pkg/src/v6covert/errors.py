"""Exception hierarchy shared by every module in the package."""


class V6CovertError(Exception):
    """Base class for all errors raised by v6covert."""


class InvalidAddress(V6CovertError, ValueError):
    pass


class PayloadTooLarge(V6CovertError, ValueError):
    pass


class Truncated(V6CovertError):
    pass


class NotIpv6(V6CovertError):
    pass


class BadMagic(V6CovertError):
    pass


# channel decode/encode errors

class ChannelError(V6CovertError):
    pass


class MessageTooLarge(ChannelError, ValueError):
    pass


class MissingStart(ChannelError):
    pass


class MissingEnd(ChannelError):
    pass


class CountMismatch(ChannelError):
    pass


class DecompressError(ChannelError):
    pass


class MissingLength(ChannelError):
    pass


class LengthMismatch(ChannelError):
    pass


class DuplicateIndex(ChannelError):
    pass


class BadLength(ChannelError):
    pass


class CapacityExceeded(V6CovertError):
    pass


# rule generation

class MalformedLine(V6CovertError, ValueError):
    def __init__(self, lineno, line):
        super().__init__(f"line {lineno}: cannot parse {line!r} as an IPv6 prefix")
        self.lineno = lineno
        self.line = line


class EmptyPrefixSet(V6CovertError, ValueError):
    pass


class UnsupportedRule(V6CovertError, ValueError):
    pass
