"""Seeded randomness: avalanche seed mixing, counter-based streams, Poisson counts.

Everything downstream of a 64-bit seed is deterministic and independent of
thread scheduling: streams are Philox (counter-based) and the Poisson count
sampler consumes uniforms from the stream one at a time.
"""

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix_seed(master_seed: int, stream: int) -> int:
    """64-bit avalanche mix (splitmix64 finalizer) of a master seed and a stream index."""
    z = (int(master_seed) + (int(stream) + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def stream(seed: int) -> np.random.Generator:
    """Counter-based generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


def poisson_count(rng: np.random.Generator, mean: float) -> int:
    """Draw one Poisson count from the stream.

    Inversion by sequential search below mean 10, Hormann's transformed
    rejection (PTRS) above; both consume only uniforms, so draws are exactly
    reproducible from the seed.
    """
    if mean < 0 or not math.isfinite(mean):
        raise ValueError(f"Poisson mean must be finite and nonnegative, got {mean}")
    if mean == 0.0:
        return 0
    if mean < 10.0:
        return _poisson_inversion(rng, mean)
    return _poisson_ptrs(rng, mean)


def _poisson_inversion(rng, mean):
    u = rng.random()
    p = math.exp(-mean)
    cum = p
    k = 0
    while u > cum:
        k += 1
        p *= mean / k
        cum += p
        if k > 10_000:  # unreachable for mean < 10; guards against float stalls
            break
    return k


def _poisson_ptrs(rng, mean):
    # Transformed rejection with squeeze (Hormann 1993), exact for mean >= 10.
    log_mean = math.log(mean)
    b = 0.931 + 2.53 * math.sqrt(mean)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = rng.random() - 0.5
        v = rng.random()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= v_r:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)
                <= k * log_mean - mean - math.lgamma(k + 1.0)):
            return int(k)


def pow_int(x, n: int):
    """x**n for integer n >= 0 by binary exponentiation.

    Used for tau = dist**d so the float result is bit-identical between the
    compiled kernel and the numpy fallback (same multiplication sequence).
    Works on scalars and numpy arrays.
    """
    if n < 0:
        raise ValueError("negative exponent")
    e = int(n)
    if e == 0:
        return np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    acc = None
    base = x
    while True:
        if e & 1:
            acc = base if acc is None else acc * base
        e >>= 1
        if e == 0:
            return acc
        base = base * base
