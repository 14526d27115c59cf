"""Shared helpers: random balanced vectors and independent oracles.

The oracles here deliberately avoid the package's own summation paths:
``exact_block_oracle`` is a plain nested Fraction loop and
``float_block_oracle`` is literal vectorized float64 summation, so they
can referee the library's exact and floating routes.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from logser import CoefficientVector, make_vector


def random_balanced(rng: random.Random, modulus: int | None = None,
                    max_modulus: int = 12) -> CoefficientVector:
    """Random balanced vector with coefficients in [-9, 9]."""
    T = modulus if modulus is not None else rng.randint(2, max_modulus)
    if T == 1:
        return make_vector(1, [0])
    while True:
        head = [rng.randint(-9, 9) for _ in range(T - 1)]
        last = -sum(head)
        if abs(last) <= 9:
            return make_vector(T, head + [last])


def exact_block_oracle(v: CoefficientVector, blocks: int) -> Fraction:
    """Exact partial sum by a plain nested loop."""
    T = v.modulus
    total = Fraction(0)
    for k in range(blocks):
        for j, a in enumerate(v.coeffs, start=1):
            if a:
                total += a * Fraction(1, k * T + j)
    return total


def float_block_oracle(v: CoefficientVector, blocks: int) -> float:
    """Float64 partial sum by literal vectorized summation over blocks."""
    T = v.modulus
    ks = np.arange(blocks, dtype=np.float64) * T
    total = 0.0
    for j, a in enumerate(v.coeffs, start=1):
        if a:
            total += float(a) * float(np.sum(1.0 / (ks + j)))
    return total
