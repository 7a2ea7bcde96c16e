"""Deterministic seed derivation.

All randomness in the library flows through numpy's ``default_rng`` (PCG64),
which is seedable and produces identical streams on every platform.  Where a
computation needs several independent streams (replicates of a sweep,
per-validator block draws), sub-seeds are derived from the base seed with the
splitmix64 finalizer chained over integer tags.  The rule is fixed: changing
one tag changes the sub-seed, and adding new tags never perturbs existing
ones.
"""

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base: int, *tags: int) -> int:
    """64-bit sub-seed from a base seed and a tuple of integer tags.

    Deterministic and portable: ``derive_seed(s, a, b)`` is a pure function
    of its arguments.
    """
    h = _splitmix64(base & _MASK64)
    for t in tags:
        h = _splitmix64(h ^ (t & _MASK64))
    return h
