"""Pure-Python keccak-256 (original pad 0x01, not the NIST SHA-3 variant).

Function selectors on Ethereum are the first 4 bytes of this digest; the
stdlib's hashlib.sha3_256 uses the 0x06 domain padding and produces
different digests, so the permutation is implemented here directly.
"""

from __future__ import annotations

_ROUND_CONSTANTS = (
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
)

# Rotation offsets for the flat state layout state[x + 5*y].
_ROTATIONS = (
    0, 1, 62, 28, 27,
    36, 44, 6, 55, 20,
    3, 10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2, 61, 56, 14,
)

_MASK = (1 << 64) - 1
_RATE_BYTES = 136  # 1600-bit state minus 512-bit capacity


def _keccak_f(state: list[int]) -> None:
    for rc in _ROUND_CONSTANTS:
        # theta
        c = [state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20]
             for x in range(5)]
        for x in range(5):
            t = c[(x + 1) % 5]
            d = c[(x - 1) % 5] ^ (((t << 1) | (t >> 63)) & _MASK)
            for y in range(0, 25, 5):
                state[x + y] ^= d
        # rho + pi
        b = [0] * 25
        for x in range(5):
            for y in range(5):
                v = state[x + 5 * y]
                r = _ROTATIONS[x + 5 * y]
                b[y + 5 * ((2 * x + 3 * y) % 5)] = ((v << r) | (v >> (64 - r))) & _MASK if r else v
        # chi
        for y in range(0, 25, 5):
            row = b[y:y + 5]
            for x in range(5):
                state[x + y] = row[x] ^ ((~row[(x + 1) % 5]) & row[(x + 2) % 5] & _MASK)
        # iota
        state[0] ^= rc


def keccak_256(data: bytes) -> bytes:
    """Return the 32-byte keccak-256 digest of ``data``."""
    padded = bytearray(data)
    padded += b"\x00" * (_RATE_BYTES - (len(padded) % _RATE_BYTES))
    padded[len(data)] ^= 0x01
    padded[-1] ^= 0x80

    state = [0] * 25
    for start in range(0, len(padded), _RATE_BYTES):
        block = padded[start:start + _RATE_BYTES]
        for i in range(_RATE_BYTES // 8):
            state[i] ^= int.from_bytes(block[8 * i:8 * i + 8], "little")
        _keccak_f(state)
    return b"".join(state[i].to_bytes(8, "little") for i in range(4))
