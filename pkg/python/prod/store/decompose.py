"""Hashing-trick decomposition used by the collision baseline.

An id is split into a remainder and a quotient against a power-of-two
modulus; the baseline embeds each part in its own small table and sums
the two vectors, ``E = E_r + E_q``.
"""

from typing import Tuple


def decompose_id(id: int, modulus: int) -> Tuple[int, int]:
    """
    :param id:
        Raw 64-bit id

    :param modulus:
        Power of two, e.g. ``2**24``

    :return:
        ``(id_q, id_r)`` with ``id_q = id // modulus`` and ``id_r = id % modulus``
    """
    assert modulus > 0 and modulus & (modulus - 1) == 0, f"Modulus must be a power of two, got {modulus}"
    shift = modulus.bit_length() - 1
    return id >> shift, id & (modulus - 1)
