"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from zariski import gallery


def effective_divisor(X, rng: random.Random, top: int = 3, ample_mult: int = 1):
    """``m A + sum c_i C_i`` with ``c_i`` in ``0..top``; always pseudo-effective."""
    D = [ample_mult * a for a in X.ample]
    for c in X.curves:
        k = rng.randint(0, top)
        if k:
            D = [x + k * y for x, y in zip(D, c.cls)]
    return tuple(D)


def random_divisor(X, rng: random.Random):
    """Mix of effective divisors, sparse curve sums and raw lattice vectors."""
    kind = rng.random()
    if kind < 0.5:
        return effective_divisor(X, rng, ample_mult=rng.randint(0, 2))
    if kind < 0.8:
        D = [0] * X.rank
        for c in rng.sample(X.curves, min(len(X.curves), rng.randint(1, 3))):
            k = rng.randint(1, 4)
            D = [x + k * y for x, y in zip(D, c.cls)]
        D = [x + rng.randint(0, 1) * a for x, a in zip(D, X.ample)]
        return tuple(D)
    return tuple(rng.randint(-4, 6) for _ in range(X.rank))


def small_gallery(max_curves: int = 16):
    out = []
    for spec in gallery.gallery_specs():
        X = gallery.build(spec)
        if len(X.curves) <= max_curves:
            out.append(X)
    return out
