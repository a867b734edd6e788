"""Vertex-set helpers.

Throughout the package a vertex set is a plain int used as a bitmask:
bit i set means vertex i is a member.  Masks are always non-negative;
complements are taken against an explicit universe mask.
"""

from collections.abc import Iterable, Iterator

_BYTE_BITS = tuple(
    tuple(i for i in range(8) if b >> i & 1) for b in range(256)
)


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in ascending order."""
    if mask <= 0:
        return
    data = mask.to_bytes((mask.bit_length() + 7) // 8, "little")
    for byte_index, byte in enumerate(data):
        if byte:
            base = byte_index * 8
            for offset in _BYTE_BITS[byte]:
                yield base + offset


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for v in members:
        m |= 1 << v
    return m


def lowest_bit(mask: int) -> int:
    """Position of the lowest set bit; mask must be nonzero."""
    return (mask & -mask).bit_length() - 1


def lowest_bits(mask: int, count: int) -> int:
    """Mask of the `count` lowest set bits of mask.

    Raises ValueError if mask has fewer than `count` set bits.
    """
    out = 0
    taken = 0
    m = mask
    while taken < count:
        if m == 0:
            raise ValueError(f"mask has only {taken} bits, wanted {count}")
        low = m & -m
        out |= low
        m ^= low
        taken += 1
    return out
