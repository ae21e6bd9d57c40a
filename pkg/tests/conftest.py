import random

import pytest

from v6covert.addr import Ipv6Addr
from v6covert.packet import (Icmpv6Echo, Icmpv6NeighborMsg, Packet, RawBytes)


@pytest.fixture
def rng():
    return random.Random(0x1337)


def random_addr(rng: random.Random) -> Ipv6Addr:
    # bias towards addresses with zero runs so compression paths get exercised
    groups = [rng.choice([0, 0, rng.getrandbits(16), rng.getrandbits(4)]) for _ in range(8)]
    if rng.random() < 0.3:
        return Ipv6Addr(rng.getrandbits(128))
    return Ipv6Addr.from_groups(groups)


def random_packet(rng: random.Random) -> Packet:
    kind = rng.randrange(4)
    if kind == 0:
        payload = RawBytes(rng.randbytes(rng.randrange(0, 200)))
        nh = rng.choice([59, 6, 17, 59])
    elif kind == 1:
        payload = Icmpv6Echo(rng.choice([128, 129]), rng.getrandbits(8), rng.getrandbits(16),
                             rng.getrandbits(16), rng.randbytes(rng.randrange(0, 120)))
        nh = None
    else:
        payload = Icmpv6NeighborMsg(rng.choice([135, 136]), 0, rng.getrandbits(32),
                                    random_addr(rng), rng.randbytes(8 * rng.randrange(0, 3)))
        nh = None
    return Packet.build(payload, src=random_addr(rng), dst=random_addr(rng),
                        hop_limit=rng.getrandbits(8), flow_label=rng.getrandbits(20),
                        traffic_class=rng.getrandbits(8), next_header=nh)
