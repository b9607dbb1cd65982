"""Named operator families used across experiments and tests."""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng, stolz
from .errors import BadParameters
from .numkernel import Operator


@dataclass(frozen=True)
class ZooSpec:
    """Declarative description of a generator; serializable as JSON.

    kinds and their params:
      diag_in_stolz: omega, n, seed    jordan: lam (complex), n, delta
      rotation: phi                    tangential_average: n
      conjugated: base (ZooSpec), cond_target, seed
    """

    kind: str
    params: dict = field(default_factory=dict)
    space_p: float = 2.0

    def to_json(self):
        return json.dumps(self._as_dict(), sort_keys=True)

    def _as_dict(self):
        out = {"kind": self.kind, "space_p": self.space_p}
        for key, val in self.params.items():
            if isinstance(val, ZooSpec):
                out[key] = val._as_dict()
            elif isinstance(val, complex):
                out[key] = {"re": val.real, "im": val.imag}
            else:
                out[key] = val
        return out

    @classmethod
    def from_json(cls, text):
        return cls._from_dict(json.loads(text))

    @classmethod
    def _from_dict(cls, obj):
        obj = dict(obj)
        kind = obj.pop("kind")
        p = float(obj.pop("space_p", 2.0))
        params = {}
        for key, val in obj.items():
            if isinstance(val, dict) and set(val) == {"re", "im"}:
                params[key] = complex(val["re"], val["im"])
            elif isinstance(val, dict):
                params[key] = cls._from_dict(val)
            else:
                params[key] = val
        return cls(kind, params, p)


def diag_in_stolz(omega, n, seed, space_p=2.0):
    return ZooSpec("diag_in_stolz", {"omega": omega, "n": n, "seed": seed}, space_p)


def jordan(lam, n, delta, space_p=2.0):
    return ZooSpec("jordan", {"lam": complex(lam), "n": n, "delta": delta}, space_p)


def rotation(phi, space_p=2.0):
    return ZooSpec("rotation", {"phi": phi}, space_p)


def tangential_average(n, space_p=2.0):
    return ZooSpec("tangential_average", {"n": n}, space_p)


def conjugated(base, cond_target, seed=0, space_p=None):
    return ZooSpec(
        "conjugated",
        {"base": base, "cond_target": cond_target, "seed": seed},
        base.space_p if space_p is None else space_p,
    )


# rejection sampling stays inside a patch strictly interior to the lens so
# generated spectra keep a margin from both the unit circle and the boundary
_RADIUS_CAP = 0.92
_QUOTIENT_MARGIN = 0.9


def generate(spec):
    """Materialize a ZooSpec as an Operator; BadParameters on bad input."""
    kind = spec.kind
    p = spec.space_p
    if kind == "diag_in_stolz":
        omega, n, seed = spec.params["omega"], int(spec.params["n"]), int(spec.params["seed"])
        if not (omega > 1.0 and n >= 1):
            raise BadParameters("diag_in_stolz needs omega > 1 and n >= 1")
        dom = stolz.StolzDomain(omega)
        rng = _rng.stream(seed, "zoo-diag", n)
        eigs = []
        while len(eigs) < n:
            z = complex(rng.uniform(-_RADIUS_CAP, _RADIUS_CAP),
                        rng.uniform(-_RADIUS_CAP, _RADIUS_CAP))
            if abs(z) <= _RADIUS_CAP and stolz.membership_quotient(z) < _QUOTIENT_MARGIN * omega:
                eigs.append(z)
        return Operator(np.diag(eigs), p)
    if kind == "jordan":
        lam, n, delta = spec.params["lam"], int(spec.params["n"]), spec.params["delta"]
        if not (abs(lam) < 1.0 and n >= 1):
            raise BadParameters("jordan needs |lam| < 1 and n >= 1")
        M = lam * np.eye(n, dtype=complex) + delta * np.eye(n, k=1, dtype=complex)
        return Operator(M, p)
    if kind == "rotation":
        phi = float(spec.params["phi"])
        M = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        return Operator(M, p)
    if kind == "tangential_average":
        n = int(spec.params["n"])
        if n < 2:
            raise BadParameters("tangential_average needs n >= 2")
        S = np.eye(n, k=-1, dtype=complex)
        S[0, -1] = 1.0  # cyclic shift, an isometry on every l^p
        return Operator(0.5 * (np.eye(n) + S), p)
    if kind == "conjugated":
        base = generate(spec.params["base"])
        cond_target = float(spec.params["cond_target"])
        seed = int(spec.params.get("seed", 0))
        if cond_target < 1.0:
            raise BadParameters("cond_target must be >= 1")
        n = base.dim
        rng = _rng.stream(seed, "zoo-conj", n)
        U = _haar_unitary(rng, n)
        W = _haar_unitary(rng, n)
        sing = np.geomspace(1.0, cond_target, n)
        V = U @ np.diag(sing) @ W.conj().T
        M = V @ base.entries @ np.linalg.inv(V)
        return Operator(M, spec.space_p)
    raise BadParameters(f"unknown zoo kind {kind!r}")


def _haar_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
