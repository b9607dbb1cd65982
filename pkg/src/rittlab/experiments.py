"""Orchestrated experiments: the equivalence table and the basis sweeps.

The equivalence table gathers, for each zoo operator, every estimate the
theory ties together: spectral Stolz type, resolvent constant, calculus
constant, square-function and dual square-function norms, and R-bound
estimates of the power and discrete-derivative families.  Rows never
abort the table; failures become flags.  Everything is seeded and
reduced in fixed order, so a config run twice (any thread count) yields
byte-identical JSON.
"""

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from . import basis, diagnostics, funcalc, squarefn, stolz, zoo
from .errors import RittLabError

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class EquivalenceRow:
    operator_id: str
    dim: int
    space_p: float
    stolz_type: float | str
    ritt_constant: float
    hinf_estimate: float | str
    phi1_norm: float | str
    phi1_dual_norm: float | str
    phi2_norm: float | str
    rbound_powers: float | str
    rbound_dd: float | str
    classification: str
    flags: tuple

    def to_dict(self):
        return asdict(self)


def _guard(fn, flags, flag_name):
    try:
        return fn()
    except RittLabError as exc:
        flags.append(f"{flag_name}:{type(exc).__name__}")
        return type(exc).__name__


def run_equivalence(specs, p=None, nu=3.0, seed=0, budgets=None, threads=1):
    """One EquivalenceRow per ZooSpec; estimate-level evidence only."""
    budgets = dict(budgets or {})
    N_pow = int(budgets.get("power_horizon", 96))
    K_dd = int(budgets.get("dd_horizon", 128))
    hinf_budget = int(budgets.get("hinf_budget", 8))
    rb_trials = int(budgets.get("rbound_trials", 36))
    fam_size = int(budgets.get("rbound_family", 12))
    rows = []
    for i, spec in enumerate(specs):
        if p is not None:
            spec = zoo.ZooSpec(spec.kind, spec.params, p)
        T = zoo.generate(spec)
        flags = []
        st = _guard(lambda: diagnostics.stolz_type_of_spectrum(T), flags, "stolz_type")
        if isinstance(st, float) and math.isinf(st):
            st = "inf"
        rc, growth = diagnostics.ritt_constant(T)
        if growth:
            flags.append("ritt_constant:growing")
        pb, ptrend = diagnostics.power_bound(T, N_pow)
        ddv, slope = diagnostics.dd_bound(T, K_dd)
        hinf = _guard(
            lambda: funcalc.hinf_constant_estimate(
                T, nu, budget=hinf_budget, seed=seed + i, threads=threads),
            flags, "hinf")
        phi1 = _guard(lambda: squarefn.phi_m_norm(T, 1, seed=seed + i), flags, "phi1")
        phi1d = _guard(lambda: squarefn.phi_m_dual_norm(T, 1, seed=seed + i), flags, "phi1_dual")
        phi2 = _guard(lambda: squarefn.phi_m_norm(T, 2, seed=seed + i), flags, "phi2")
        rb_pow = _guard(
            lambda: diagnostics.rbound_estimate(
                diagnostics._power_family(T, fam_size), trials=rb_trials,
                seed=seed + i, threads=threads).value,
            flags, "rbound_powers")
        rb_dd = _guard(
            lambda: diagnostics.rbound_estimate(
                diagnostics.dd_family(T, fam_size), trials=rb_trials,
                seed=seed + 17 * i + 1, threads=threads).value,
            flags, "rbound_dd")
        rows.append(EquivalenceRow(
            operator_id=f"{spec.kind}#{i}",
            dim=T.dim,
            space_p=T.space_p,
            stolz_type=st,
            ritt_constant=rc,
            hinf_estimate=hinf,
            phi1_norm=phi1,
            phi1_dual_norm=phi1d,
            phi2_norm=phi2,
            rbound_powers=rb_pow,
            rbound_dd=rb_dd,
            classification=diagnostics.classify(ptrend, slope, pb),
            flags=tuple(flags),
        ))
    return rows


@dataclass(frozen=True)
class BasisSweepSummary:
    omega: float
    m: int
    grid_points: int
    sup_l1_riesz: float
    sup_l1_canonical: float
    canonical_fit_exponent: float
    skipped: int

    def to_dict(self):
        return asdict(self)


def run_basis_sweep(omega, m, n_points=500, min_vertex_distance=1e-2, tail_rel=1e-3):
    """Sweep both bases over a Stolz grid and fit the canonical blow-up.

    The canonical fit regresses log l1 against log(1-z) along the real
    ray into the vertex; the expected exponent is -1/2 (reported as +0.5
    blow-up rate).
    """
    dom = stolz.StolzDomain(omega)
    grid = basis.make_stolz_grid(omega, n_points, min_vertex_distance)
    riesz_tables, skipped_r = basis.pairing_sweep(dom, m, "riesz", grid, tail_rel)
    canon_tables, skipped_c = basis.pairing_sweep(dom, m, "canonical", grid, tail_rel)
    sup_r = max(t.l1 for t in riesz_tables)
    sup_c = max(t.l1 for t in canon_tables)
    exponent = canonical_blowup_exponent(omega, m)
    return BasisSweepSummary(
        omega=omega,
        m=m,
        grid_points=len(grid),
        sup_l1_riesz=sup_r,
        sup_l1_canonical=sup_c,
        canonical_fit_exponent=exponent,
        skipped=len(skipped_r) + len(skipped_c),
    ), riesz_tables, canon_tables


def canonical_blowup_exponent(omega, m=1, d_range=(1e-3, 1e-1), points=24):
    """Fitted slope of log l1(canonical) vs -log(1-z) on the real ray."""
    ds = np.geomspace(d_range[0], d_range[1], points)
    l1s = []
    for d in ds:
        t = basis.pairing_table(1.0 - d, m, "canonical")
        l1s.append(t.l1)
    slope = np.polyfit(np.log(1.0 / ds), np.log(l1s), 1)[0]
    return float(slope)


def config_from_json(text):
    """Parse an experiment config {specs, p, nu, seed, budgets}."""
    obj = json.loads(text)
    allowed = {"specs", "p", "nu", "seed", "budgets"}
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    specs = [zoo.ZooSpec._from_dict(s) for s in obj.get("specs", [])]
    return {
        "specs": specs,
        "p": obj.get("p"),
        "nu": float(obj.get("nu", 3.0)),
        "seed": int(obj.get("seed", 0)),
        "budgets": obj.get("budgets", {}),
    }


def report_json(rows_or_summary, seed):
    """Deterministic JSON report with the schema version embedded."""
    if isinstance(rows_or_summary, list):
        payload = [r.to_dict() for r in rows_or_summary]
    else:
        payload = rows_or_summary.to_dict()
    return json.dumps(
        {"schema_version": SCHEMA_VERSION, "seed": seed, "results": payload},
        sort_keys=True,
        indent=2,
    ) + "\n"
