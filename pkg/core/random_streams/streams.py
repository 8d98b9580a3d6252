import hashlib

import numpy as np

from core.errors import ParameterError


def label_key(label) -> int:
    """
    Map a stream label to a non-negative integer usable as a spawn key entry.

    Integers pass through unchanged, anything else is hashed with blake2b so the
    key is stable across interpreter runs.

    :param label: Stream label (int or str).
    :return: Integer key.
    :rtype: int
    """
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        if label < 0:
            raise ParameterError(f"Stream label {label} must be non-negative")
        return int(label)
    digest = hashlib.blake2b(str(label).encode(), digest_size=8).digest()
    return int.from_bytes(digest, 'big')


def stream(seed: int, *labels) -> np.random.Generator:
    """
    Return an independent random stream for ``(seed, *labels)``.

    The generator is a counter-based Philox keyed by a SeedSequence whose spawn key
    is the label path, so two different label paths never share draws and the same
    path always replays the same draws.

    :param seed: Base seed.
    :type seed: int
    :param labels: Sub-stream path, e.g. ``("edges",)`` or ``("trial", 12)``.
    :return: A seeded numpy Generator.
    :rtype: numpy.random.Generator
    """
    if seed is None or int(seed) < 0:
        raise ParameterError(f"Seed must be a non-negative integer, got {seed}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(label_key(label) for label in labels))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, *labels) -> int:
    """
    Derive a child seed from a base seed and a label path.

    :param seed: Base seed.
    :param labels: Label path.
    :return: A 63-bit child seed.
    :rtype: int
    """
    return int(stream(seed, 'derive', *labels).integers(0, 2 ** 63 - 1))
