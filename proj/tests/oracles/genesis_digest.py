#!/usr/bin/env python3
"""Independent oracle for genesis block digests.

Rebuilds the block hash input from the documented byte layout using only
hashlib and struct, then prints one hex digest per line for the golden file.
"""
import hashlib
import struct


def field(data: bytes) -> bytes:
    return struct.pack(">Q", len(data)) + data


def u64_field(value: int) -> bytes:
    return field(struct.pack(">Q", value))


def genesis_digest(network_id: str, created_at: int) -> str:
    chain_key = hashlib.sha256(network_id.encode()).digest()
    data = (field(chain_key) + u64_field(0) + field(bytes(32)) +
            u64_field(created_at) + u64_field(0))
    return hashlib.sha256(data).hexdigest()


CASES = [("demo", 0), ("demo", 1), ("acme-consortium", 0)]

if __name__ == "__main__":
    for network_id, tick in CASES:
        print(genesis_digest(network_id, tick))
