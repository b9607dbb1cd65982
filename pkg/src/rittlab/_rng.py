"""Counter-based random number streams.

Every stochastic routine in the package draws from a Philox generator
keyed by (seed, stream label, counter indices).  A stream is fully
determined by its key, so results are independent of execution order
and thread scheduling.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def _fold(parts):
    # 64-bit FNV-1a over the parts (ints or strings); stable across platforms
    h = 0xCBF29CE484222325
    for p in parts:
        if isinstance(p, str):
            data = p.encode("utf-8")
        else:
            data = (int(p) & _MASK64).to_bytes(8, "little")
        for byte in data:
            h ^= byte
            h = (h * 0x100000001B3) & _MASK64
    return h


def stream(seed, *ids):
    """Return a Generator for the (seed, *ids) stream.

    Identical arguments always produce an identical stream; distinct id
    tuples produce statistically independent streams.
    """
    key = ((int(seed) & _MASK64) << 64) | _fold(ids)
    return np.random.Generator(np.random.Philox(key=key))


def unit_pnorm_vector(rng, dim, p, complex_values=True):
    """Draw a vector of unit l^p norm with full-support direction.

    Independent standard Gaussian coordinates normalized in l^p; the
    direction distribution has full support on the sphere for every p.
    """
    if complex_values:
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    else:
        v = rng.standard_normal(dim).astype(complex)
    nrm = np.linalg.norm(v, p)
    if nrm == 0.0:
        v = np.ones(dim, dtype=complex)
        nrm = np.linalg.norm(v, p)
    return v / nrm


def sign_matrix(rng, shape, kind):
    """Random sign draws: kind is 'rademacher' or 'gaussian'."""
    if kind == "rademacher":
        return rng.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
    if kind == "gaussian":
        return rng.standard_normal(shape)
    raise ValueError(f"unknown sign kind: {kind!r}")
