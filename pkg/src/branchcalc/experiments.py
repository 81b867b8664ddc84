"""Named experiments: each reproduces one worked identity at desk scale.

Every experiment writes ``results.json`` (all computed numbers plus
pass/fail per check), CSV tables, and static SVG plots into its output
directory.  Runs are deterministic for a fixed seed: the JSON is
byte-identical across repeats.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import blockmodel, dirac, funcalc, halfline, zeta
from .branches import SectorPair
from .contours import QuadratureConfig, Sectorial, build_contour, integrate, Circle
from .errors import (
    BranchCalcError,
    DiagonalDivergenceError,
    InvalidParametersError,
    UnknownExperimentError,
)
from .halfline import HalfLineGrid, TangentialCovariable
from .linalg import opnorm2

SCHEMA_VERSION = 1


@dataclass
class ExperimentSpec:
    """A named experiment run request."""

    name: str
    parameters: dict = field(default_factory=dict)
    out_dir: str | Path | None = None
    seed: int = 0


@dataclass(frozen=True)
class Check:
    value: float
    limit: float
    passed: bool

    @classmethod
    def at_most(cls, value, limit):
        value = float(value)
        return cls(value=value, limit=float(limit), passed=bool(value <= limit))

    @classmethod
    def at_least(cls, value, limit):
        value = float(value)
        return cls(value=value, limit=float(limit), passed=bool(value >= limit))

    @classmethod
    def boolean(cls, flag):
        return cls(value=float(bool(flag)), limit=1.0, passed=bool(flag))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _line_plot(path, xs, series, xlabel, ylabel, logx=False, logy=False):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in series.items():
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# ---------------------------------------------------------------------------
# experiment runners


def _acceptance_grid(n_panels=32, nodes=8, x_max=8.0):
    return HalfLineGrid(x_max, n_panels, nodes, grading=10 ** (-3.0 / (n_panels - 1)))


def _run_laplace_glog(params, rng, outdir):
    grid = _acceptance_grid(int(params["panels"]), int(params["nodes_per_panel"]))
    results, checks = {}, {}
    deviations = []
    for label, vec in (("0", [0.0]), ("e1", [1.0, 0.0, 0.0]), ("4e1", [4.0, 0.0, 0.0])):
        xi = TangentialCovariable(vec)
        closed = halfline.glog_kernel_closed(xi, grid)
        quad = halfline.glog_kernel_quad(xi, grid)
        dev = float(np.max(np.abs(closed.values - quad.values)))
        deviations.append(dev)
        checks[f"kernel_identity_xi_{label}"] = Check.at_most(dev, 1e-8)
        if label == "e1":
            sub = HalfLineGrid(grid.x_max, 8, 8, grading=10 ** (-3.0 / 7))
            halfline.kernel_to_csv(
                halfline.glog_kernel_closed(xi, sub), outdir / "glog_kernel_e1.csv"
            )
    results["max_deviation"] = max(deviations)

    depths = [2.0, 4.0, 6.0, 8.0]
    hilbert_norms, glog_norms = [], []
    for depth in depths:
        g = HalfLineGrid(8.0, 40, 8, grading=10 ** (-depth / 39))
        x = g.nodes
        hk = halfline.SymbolKernel(g, TangentialCovariable([0.0]),
                                   1.0 / (x[:, None] + x[None, :]))
        hilbert_norms.append(halfline.kernel_l2_opnorm(hk))
        glog_norms.append(
            halfline.kernel_l2_opnorm(
                halfline.glog_kernel_closed(TangentialCovariable([0.0]), g)
            )
        )
    results["hilbert_norms"] = hilbert_norms
    results["glog_norms"] = glog_norms
    checks["hilbert_monotone"] = Check.boolean(np.all(np.diff(hilbert_norms) > 0))
    checks["hilbert_below_pi"] = Check.at_most(max(hilbert_norms), np.pi + 1e-3)
    checks["glog_norm_below_pi"] = Check.at_most(max(glog_norms), np.pi + 1e-3)
    _line_plot(outdir / "l2_norms.svg", depths,
               {"1/(x+y)": hilbert_norms, "log-kernel": glog_norms,
                "pi": [np.pi] * len(depths)},
               "grading depth (decades)", "discretized L2 norm")
    return results, checks


def _run_gpm_even_split(params, rng, outdir):
    grid = _acceptance_grid()
    results, checks = {}, {}
    xi = TangentialCovariable([1.0, 0.0, 0.0])
    glog = halfline.glog_kernel_closed(xi, grid)
    gpm = halfline.gpm_log_kernel(xi, grid)
    gap = float(np.max(np.abs(gpm.values + glog.values)))
    checks["gpm_is_minus_glog"] = Check.at_most(gap, 1e-12)

    for label, vec in (("e1", [1.0, 0.0, 0.0]), ("2e1", [2.0, 0.0, 0.0])):
        xiv = TangentialCovariable(vec)
        kern = halfline.gpm_log_kernel(xiv, grid)
        residual = halfline.even_order_split_check(kern, 1)
        bound = abs(xiv.bracket - xiv.homogeneous_norm) + 1e-6
        results[f"split_residual_{label}"] = residual
        results[f"split_bound_{label}"] = bound
        checks[f"split_bounded_{label}"] = Check.at_most(residual, bound)

    wrong = halfline.even_order_split_check(glog, 1)
    results["wrong_sign_residual"] = wrong
    checks["wrong_sign_detected"] = Check.at_least(wrong, 100.0)

    r = np.geomspace(2e-4, 0.1, 60)
    variant = halfline.gpm_log_kernel(xi, grid).fn
    residual_profile = np.abs(variant(r / 2, r / 2) + (1.0 / r) * np.exp(-xi.homogeneous_norm * r))
    _write_csv(outdir / "split_residual.csv", ["r", "residual"],
               [(repr(float(a)), repr(float(b))) for a, b in zip(r, residual_profile)])
    _line_plot(outdir / "split_residual.svg", r, {"residual": residual_profile},
               "x+y", "split residual", logx=True)
    return results, checks


def _run_trn_symbol(params, rng, outdir):
    results, checks = {}, {}
    grid = HalfLineGrid(40.0, 40, 10, grading=10 ** (-3.0 / 39))
    xi = TangentialCovariable([1.0])
    radii = np.geomspace(0.5, 50.0, 20)
    rows, rel_errs = [], []
    for rho in radii:
        lam = rho * np.exp(3j * np.pi / 4)
        kern = halfline.resolvent_sg_kernel(xi, lam, grid)
        got = halfline.tr_n(kern)
        exact = -0.25 / (xi.bracket**2 - lam)
        rel_errs.append(abs(got - exact) / abs(exact))
        rows.append((repr(float(rho)), repr(complex(got).real), repr(complex(got).imag),
                     repr(exact.real), repr(exact.imag)))
    _write_csv(outdir / "normal_trace_sweep.csv",
               ["radius", "tr_re", "tr_im", "exact_re", "exact_im"], rows)
    results["normal_trace_max_rel_err"] = max(rel_errs)
    checks["normal_trace_sweep"] = Check.at_most(max(rel_errs), 1e-10)

    diverged = False
    try:
        halfline.tr_n(halfline.glog_kernel_closed(xi, grid))
    except DiagonalDivergenceError:
        diverged = True
    checks["glog_diagonal_divergence"] = Check.boolean(diverged)

    # log transforms with their independent residue-calculus oracles
    def residue_oracle(s_fn, pole, theta=np.pi, radius=0.5):
        circle = build_contour(Circle(pole, radius), QuadratureConfig(rel_tol=1e-12))
        from .branches import log_branch

        return complex(
            (1j / (2 * np.pi))
            * integrate(circle, lambda z: log_branch(z, theta) * s_fn(z),
                        QuadratureConfig(rel_tol=1e-12))
        )

    cases = {
        "resolvent_pole_4": (lambda z: 1.0 / (4.0 - z), np.log(4.0)),
        "double_pole_2": (lambda z: (2.0 - z) ** -2.0, residue_oracle(lambda z: (2.0 - z) ** -2.0, 2.0)),
        "principal_bracket_4": (lambda z: -0.25 / (4.0 - z), -0.25 * np.log(4.0)),
        "principal_bracket_1": (lambda z: -0.25 / (1.0 - z), 0.0),
    }
    for name, (fn, expected) in cases.items():
        got = halfline.log_transform_symbol(fn, np.pi)
        results[f"log_transform_{name}"] = got
        results[f"log_transform_{name}_expected"] = complex(expected)
        checks[f"log_transform_{name}"] = Check.at_most(abs(got - expected), 1e-8)
    results["note_double_pole"] = (
        "expected value for the double-pole family comes from the residue-"
        "calculus oracle (-1/2); see the decisions ledger for the sign"
    )

    # synthetic subprincipal term and the all-zero flat family
    bracket2 = 4.0
    synth = halfline.log_transform_symbol(lambda z: 2.0 / (bracket2 - z) ** 2, np.pi)
    checks["synthetic_subprincipal"] = Check.at_most(abs(synth - (-2.0 / bracket2)), 1e-8)
    flat = halfline.slog_sub([lambda z: 0.0 * z] * 3, np.pi)
    checks["flat_model_terms_vanish"] = Check.at_most(max(abs(v) for v in flat), 1e-14)
    return results, checks


def _run_zeta_interval(params, rng, outdir):
    results, checks = {}, {}
    model = zeta.interval_dirichlet_model()
    decades = float(params["decades"])
    radii = np.logspace(1.0, 1.0 + decades, int(params["samples"]))
    basic = {}
    for n_pow in (1, 2, 3):
        fit = zeta.fit_trace_expansion(model, n_pow, np.pi, radii)
        basic[n_pow] = fit.basic_coefficient
        with open(outdir / f"fit_N{n_pow}.json", "w") as fh:
            json.dump(zeta.fit_report(fit), fh, indent=2, sort_keys=True)
        if n_pow == 1:
            results["c0"] = fit.coefficients[0]
            results["c1"] = fit.coefficients[1]
            checks["c0_pi_over_2"] = Check.at_most(abs(fit.coefficients[0] - np.pi / 2), 1e-3)
            checks["c1_minus_half"] = Check.at_most(abs(fit.coefficients[1] + 0.5), 1e-3)
            z = zeta.basic_zeta_value(model, fit)
            checks["zeta_identity"] = Check.at_most(z.identity_gap, 1e-3)
            checks["residue_log"] = Check.at_most(abs(zeta.residue_log(model, fit) - 1.0), 2e-3)
            half_fit = zeta.fit_trace_expansion(model, 1, np.pi,
                                                np.logspace(1.0, 1.0 + decades / 2, 20))
            drift = abs(half_fit.basic_coefficient - fit.basic_coefficient)
            checks["fit_stability"] = Check.at_most(drift, 10 * max(fit.residual, half_fit.residual))
    spread = max(abs(basic[a] - basic[b]) for a in basic for b in basic)
    results["basic_by_N"] = {str(k): v for k, v in basic.items()}
    checks["n_independence"] = Check.at_most(spread, 1e-3)

    zero_model = zeta.ModelRealization(order_m=2, dim_n=1, nu0=1,
                                       power_law=(1.0, 2), zeta_at_zero=-0.5)
    zfit = zeta.fit_trace_expansion(zero_model, 1, np.pi, radii)
    zval = zeta.basic_zeta_value(zero_model, zfit)
    results["zero_mode_c0"] = zval.value
    checks["zero_mode_identity"] = Check.at_most(zval.identity_gap, 1e-3)

    uppers = np.linspace(2.0, 1.0 + decades, 7)
    c0s, c1s = [], []
    for hi in uppers:
        f = zeta.fit_trace_expansion(model, 1, np.pi, np.logspace(1.0, hi, 20))
        c0s.append(float(f.coefficients[0].real))
        c1s.append(float(f.coefficients[1].real))
    _write_csv(outdir / "fit_vs_range.csv", ["log10_upper", "c0", "c1"],
               [(repr(float(u)), repr(a), repr(b)) for u, a, b in zip(uppers, c0s, c1s)])
    _line_plot(outdir / "fit_vs_range.svg", uppers,
               {"c0": c0s, "c1": c1s}, "log10 of upper sample radius", "fitted coefficient")
    return results, checks


def _random_admissible_matrix(rng, sector: SectorPair, dim_cap=16, margin=0.1):
    dim = int(rng.integers(2, dim_cap + 1))
    lo1, hi1 = sector.theta + margin, sector.phi - margin
    lo2, hi2 = sector.phi + margin, sector.theta + 2 * np.pi - margin
    args = np.where(
        rng.random(dim) < 0.5,
        rng.uniform(lo1, hi1, dim),
        rng.uniform(lo2, hi2, dim),
    )
    moduli = rng.uniform(0.5, 3.0, dim)
    eigs = moduli * np.exp(1j * args)
    basis = np.eye(dim) + 0.35 * rng.standard_normal((dim, dim)) \
        + 0.15j * rng.standard_normal((dim, dim))
    return basis @ np.diag(eigs) @ np.linalg.inv(basis)


def _run_keyhole_identity(params, rng, outdir):
    results, checks = {}, {}
    sector = SectorPair(-np.pi / 2, np.pi / 2)
    count = int(params["count"])
    oracle_gaps, idem, comm, route_gaps = [], [], [], []
    for _ in range(count):
        a = _random_admissible_matrix(rng, sector)
        rep = funcalc.sectorial_projection(a, sector)
        oracle = funcalc.projection_eigoracle(a, sector)
        diff = funcalc.log_difference_projection(a, sector)
        p = rep.value
        oracle_gaps.append(opnorm2(p - oracle))
        idem.append(opnorm2(p @ p - p))
        comm.append(opnorm2(p @ a - a @ p))
        route_gaps.append(opnorm2(diff.value - p))
    results["oracle_gap_max"] = max(oracle_gaps)
    results["idempotency_max"] = max(idem)
    results["commutation_max"] = max(comm)
    results["log_route_gap_max"] = max(route_gaps)
    checks["projection_vs_eigoracle"] = Check.at_most(max(oracle_gaps), 1e-6)
    checks["idempotency"] = Check.at_most(max(idem), 1e-6)
    checks["commutation"] = Check.at_most(max(comm), 1e-6)
    checks["log_difference_route"] = Check.at_most(max(route_gaps), 1e-6)

    herm_gaps = []
    for _ in range(8):
        dim = int(rng.integers(2, 9))
        h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = h + h.conj().T + np.diag(rng.uniform(2.5, 4.0, dim))
        p = funcalc.sectorial_projection(h, sector).value
        herm_gaps.append(opnorm2(p - p.conj().T))
    checks["hermitian_projection"] = Check.at_most(max(herm_gaps), 1e-8)

    key_res = []
    for _ in range(5):
        a = _random_admissible_matrix(rng, sector, dim_cap=8)
        x = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])

        def f(lams):
            shifted = a[None] - lams[:, None, None] * np.eye(a.shape[0])[None]
            rhs = np.broadcast_to(x[:, None], (len(lams), len(x), 1))
            sol = np.linalg.solve(shifted, rhs)[..., 0]
            return (a @ sol.T).T / lams[:, None]

        key_res.append(funcalc.verify_keyhole(f, sector, vectorized=True, radius=1e4))
    results["keyhole_residuals"] = key_res
    checks["keyhole_resolvent_family"] = Check.at_most(max(key_res), 1e-8)

    _write_csv(outdir / "projection_gaps.csv",
               ["oracle_gap", "idempotency", "commutation", "route_gap"],
               [(repr(a), repr(b), repr(c), repr(d))
                for a, b, c, d in zip(oracle_gaps, idem, comm, route_gaps)])
    _line_plot(outdir / "projection_gaps.svg", np.arange(count),
               {"oracle gap": sorted(oracle_gaps), "route gap": sorted(route_gaps)},
               "matrix index (sorted)", "spectral-norm gap", logy=True)
    return results, checks


def _run_appendix_limits(params, rng, outdir):
    results, checks = {}, {}
    theta = np.pi
    rows = []
    worst = 0.0
    magnitudes = {}
    for s in (1.0, 0.5):
        mags = []
        for n in (10.0, 100.0, 1000.0):
            quad = funcalc.truncated_loop_limit_check(s, theta, [n])[0]
            closed = funcalc.loop_limit_closed_form(s, theta, n)
            worst = max(worst, abs(quad - closed))
            mags.append(abs(closed))
            rows.append((s, n, repr(quad.real), repr(quad.imag),
                         repr(closed.real), repr(closed.imag)))
        magnitudes[s] = mags
        checks[f"loop_decay_s_{s}"] = Check.boolean(np.all(np.diff(mags) < 0))
    results["loop_closed_form_gap"] = worst
    checks["loop_matches_closed_form"] = Check.at_most(worst, 1e-8)
    _write_csv(outdir / "loop_limits.csv",
               ["s", "N", "quad_re", "quad_im", "closed_re", "closed_im"], rows)
    _line_plot(outdir / "loop_limits.svg", [10.0, 100.0, 1000.0],
               {f"s={s}": m for s, m in magnitudes.items()},
               "truncation radius", "|loop integral|", logx=True, logy=True)

    gaps = []
    for th, ph in ((-np.pi / 2, np.pi / 2), (0.35, 2.8)):
        for radius in (50.0, 5000.0):
            contour = build_contour(Sectorial(th, ph, 0.25, radius))
            val = integrate(contour, lambda z: 1.0 / z, QuadratureConfig(rel_tol=1e-12))
            gaps.append(abs(val - 1j * (th - ph)))
    results["sector_log_gap"] = max(gaps)
    checks["sector_reciprocal_integral"] = Check.at_most(max(gaps), 1e-10)

    sector = SectorPair(-np.pi / 2, np.pi / 2)
    a0 = 1.5 * np.exp(0.4j)
    res_double = funcalc.verify_keyhole(lambda z: (a0 - z) ** -2.0, sector, vectorized=True)
    res_quad = funcalc.verify_keyhole(lambda z: z ** -2.0, sector, vectorized=True)
    results["keyhole_double_pole"] = res_double
    results["keyhole_inverse_square"] = res_quad
    checks["keyhole_double_pole"] = Check.at_most(res_double, 1e-10)
    checks["keyhole_inverse_square"] = Check.at_most(res_quad, 1e-10)
    return results, checks


def _run_dirac_projection(params, rng, outdir):
    results, checks = {}, {}
    expected = 0.5 * np.array(
        [[1, 0, 1, 0], [0, 1, 0, -1], [1, 0, 1, 0], [0, -1, 0, 1]], dtype=complex
    )
    sym = dirac.dirac_projection_symbol(np.array([1.0, 0.0, 0.0, 0.0]))
    checks["projection_matrix_e1"] = Check.at_most(
        float(np.max(np.abs(sym.closed - expected))), 1e-12
    )

    route_gaps, idem_gaps, trace_gaps, homo_gaps = [], [], [], []
    for _ in range(12):
        xi = rng.standard_normal(4)
        if np.linalg.norm(xi) < 0.3:
            continue
        ps = dirac.dirac_projection_symbol(xi)
        route_gaps.append(ps.route_gap)
        idem_gaps.append(float(np.max(np.abs(ps.closed @ ps.closed - ps.closed))))
        trace_gaps.append(abs(np.trace(ps.closed) - 2.0))
        scaled = dirac.dirac_projection_symbol(2.7 * xi)
        homo_gaps.append(float(np.max(np.abs(scaled.closed - ps.closed))))
    checks["closed_vs_quadrature"] = Check.at_most(max(route_gaps), 1e-8)
    checks["idempotent"] = Check.at_most(max(idem_gaps), 1e-12)
    checks["trace_two"] = Check.at_most(max(trace_gaps), 1e-12)
    checks["homogeneous_degree_zero"] = Check.at_most(max(homo_gaps), 1e-12)

    violation = halfline.transmission_parity_check(
        lambda xn: dirac.dirac_projection_symbol(np.array([0.0, 0.0, 0.0, xn])).closed, 0
    )
    results["transmission_violation"] = violation
    checks["transmission_violated"] = Check.at_least(violation, 0.5)

    probe = dirac.divergence_probe([1.0, 0.0, 0.0], [1e-1, 1e-2, 1e-3, 1e-4])
    results["probe"] = dirac.probe_report(probe)
    inc_gap = float(np.max(np.abs(probe.decade_increments - np.log(10.0)))) / np.log(10.0)
    checks["divergence_increments"] = Check.at_most(inc_gap, 0.05)
    checks["exp1_lower_bound"] = Check.boolean(probe.lower_bound_ok)

    rows = [(i, j, repr(sym.closed[i, j].real), repr(sym.closed[i, j].imag))
            for i in range(4) for j in range(4)]
    _write_csv(outdir / "projection_symbol_e1.csv", ["row", "col", "re", "im"], rows)
    _line_plot(outdir / "projection_gaps.svg", np.arange(len(route_gaps)),
               {"closed vs quadrature": sorted(route_gaps)}, "sample", "gap", logy=True)
    return results, checks


def _run_dirac_divergence(params, rng, outdir):
    results, checks = {}, {}
    r_list = np.geomspace(1e-1, 10.0 ** -float(params["decades"]),
                          int(params["decades"]))
    probe = dirac.divergence_probe([float(params["a"]), 0.0, 0.0], r_list)
    report = dirac.probe_report(probe)
    results["probe"] = report
    with open(outdir / "probe_summary.json", "w") as fh:
        json.dump(_jsonable(report), fh, indent=2, sort_keys=True)

    from scipy.special import exp1

    inc_gap = float(np.max(np.abs(probe.decade_increments - np.log(10.0)))) / np.log(10.0)
    checks["increments_near_log10"] = Check.at_most(inc_gap, 0.05)
    checks["exp1_lower_bound"] = Check.boolean(probe.lower_bound_ok)
    checks["not_standard_class"] = Check.boolean(probe.log_divergent)
    results["slope"] = probe.slope

    bound = exp1(probe.a * probe.r_list)
    _write_csv(outdir / "divergence.csv", ["r", "f", "exp1_bound"],
               [(repr(float(r)), repr(float(f)), repr(float(b)))
                for r, f, b in zip(probe.r_list, probe.f_values, bound)])
    _line_plot(outdir / "divergence.svg", np.log(1.0 / probe.r_list),
               {"f(r)": probe.f_values, "E1 bound": bound},
               "log(1/r)", "kernel entry integral")
    return results, checks


def _run_block_projection(params, rng, outdir):
    results, checks = {}, {}
    scalar = blockmodel.build_product_model(1, 1, np.sqrt(8.0 / 3.0))
    model = blockmodel.build_product_model(int(params["n_s"]), int(params["n_t"]),
                                           float(params["length"]))
    results["dim"] = model.dim

    gap_scalar = blockmodel.block_projection_crosscheck(scalar)
    gap_model = blockmodel.block_projection_crosscheck(model)
    checks["crosscheck_scalar"] = Check.at_most(gap_scalar, 1e-8)
    checks["crosscheck_model"] = Check.at_most(gap_model, 1e-6)

    pi = blockmodel.block_projection_formula(model)
    n = model.dim // 2
    diag_sum = float(np.max(np.abs(pi[:n, :n] + pi[n:, n:] - np.eye(n))))
    checks["diagonal_blocks_sum_identity"] = Check.at_most(diag_sum, 1e-14)
    checks["idempotent"] = Check.at_most(opnorm2(pi @ pi - pi), 1e-8)
    checks["hermitian"] = Check.at_most(opnorm2(pi - pi.conj().T), 1e-10)
    checks["commutes"] = Check.at_most(opnorm2(pi @ model.a - model.a @ pi), 1e-8)

    from .linalg import lu_solve

    res_gaps, identity_gaps = [], []
    lams = [7.0 * np.exp(1j * np.pi / 4), 3.0 * np.exp(-1j * np.pi / 4),
            5.0 * np.exp(3j * np.pi / 4), 2.0 * np.exp(-3j * np.pi / 4)]
    for lam in lams:
        closed = blockmodel.block_resolvent(model, lam)
        direct = lu_solve(model.a - lam * np.eye(model.dim), np.eye(model.dim, dtype=complex))
        res_gaps.append(opnorm2(closed - direct))
        identity_gaps.append(blockmodel.square_resolvent_identity_gap(model, lam))
    checks["resolvent_vs_lu"] = Check.at_most(max(res_gaps), 1e-10)
    checks["square_resolvent_identity"] = Check.at_most(max(identity_gaps), 1e-10)

    half = funcalc.sectorial_projection(model.b1, (-np.pi / 2, np.pi / 2)).value
    checks["projection_of_b1_is_identity"] = Check.at_most(
        opnorm2(half - np.eye(n)), 1e-8
    )
    other = funcalc.sectorial_projection(-model.b1, (-np.pi / 2, np.pi / 2)).value
    checks["projection_of_minus_b1_is_zero"] = Check.at_most(opnorm2(other), 1e-8)

    report = blockmodel.model_report(
        model,
        crosscheck=gap_model,
        resolvent_vs_lu=max(res_gaps),
        diagonal_sum=diag_sum,
    )
    with open(outdir / "model_report.json", "w") as fh:
        json.dump(_jsonable(report), fh, indent=2, sort_keys=True)
    _write_csv(outdir / "resolvent_gaps.csv", ["lam_re", "lam_im", "gap", "identity_gap"],
               [(repr(l.real), repr(l.imag), repr(g), repr(i))
                for l, g, i in zip(lams, res_gaps, identity_gaps)])
    _line_plot(outdir / "resolvent_gaps.svg", np.arange(len(lams)),
               {"closed vs LU": res_gaps, "factorization": identity_gaps},
               "sample ray index", "spectral-norm gap", logy=True)
    return results, checks


@dataclass(frozen=True)
class Experiment:
    name: str
    anchor: str
    runner: object
    defaults: dict


EXPERIMENTS = {
    e.name: e
    for e in [
        Experiment("laplace-glog", "Example 2.3 (2.17)-(2.18)", _run_laplace_glog,
                   {"panels": 32, "nodes_per_panel": 8}),
        Experiment("gpm-even-split", "Example 2.8 / Prop 2.9 (2.42)", _run_gpm_even_split, {}),
        Experiment("trn-symbol", "Sect. 3 normal traces and (3.5)", _run_trn_symbol, {}),
        Experiment("zeta-interval", "(3.7)-(3.9) and Def 3.3 (3.12)", _run_zeta_interval,
                   {"decades": 3.0, "samples": 40}),
        Experiment("keyhole-identity", "Prop 4.1/4.4, Lemma 4.3 (4.9)", _run_keyhole_identity,
                   {"count": 50}),
        Experiment("appendix-limits", "Appendix A (A.2), (A.9)", _run_appendix_limits, {}),
        Experiment("dirac-projection", "Example 4.8 (4.30)", _run_dirac_projection, {}),
        Experiment("dirac-divergence", "Example 4.8 (4.32)", _run_dirac_divergence,
                   {"a": 1.0, "decades": 4}),
        Experiment("block-projection", "Example 4.9 (4.40)", _run_block_projection,
                   {"n_s": 3, "n_t": 3, "length": 1.0}),
    ]
}


def catalog() -> list[str]:
    """Sorted one-line experiment descriptions (stable across runs)."""
    lines = []
    for name in sorted(EXPERIMENTS):
        exp = EXPERIMENTS[name]
        defaults = ", ".join(f"{k}={v}" for k, v in sorted(exp.defaults.items()))
        suffix = f" [{defaults}]" if defaults else ""
        lines.append(f"{name} -> {exp.anchor}{suffix}")
    return lines


def run(spec: ExperimentSpec) -> int:
    """Run one experiment; write artifacts; return the process exit status.

    Status 0 means every check passed; 1 means a check failed or a
    numerical error was serialized into ``results.json``; unknown names
    raise :class:`UnknownExperimentError` (the CLI maps this to status 2).
    """
    if spec.name not in EXPERIMENTS:
        raise UnknownExperimentError(
            f"unknown experiment {spec.name!r}; catalog: {sorted(EXPERIMENTS)}"
        )
    exp = EXPERIMENTS[spec.name]
    params = dict(exp.defaults)
    unknown = set(spec.parameters) - set(exp.defaults)
    if unknown:
        raise InvalidParametersError(
            f"unknown parameters {sorted(unknown)} for {spec.name}; "
            f"accepted: {sorted(exp.defaults)}"
        )
    params.update(spec.parameters)

    outdir = Path(spec.out_dir) if spec.out_dir else Path("branchcalc-results") / spec.name
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "experiment": spec.name,
        "anchor": exp.anchor,
        "parameters": _jsonable(params),
        "seed": spec.seed,
    }
    started = time.perf_counter()
    try:
        results, checks = exp.runner(params, rng, outdir)
        payload["results"] = _jsonable(results)
        payload["checks"] = {
            k: {"value": c.value, "limit": c.limit, "passed": c.passed}
            for k, c in sorted(checks.items())
        }
        payload["passed"] = all(c.passed for c in checks.values())
        status = 0 if payload["passed"] else 1
    except BranchCalcError as exc:
        payload["error"] = {"type": type(exc).__name__, "message": str(exc)}
        payload["passed"] = False
        status = 1

    # results.json is byte-stable for a fixed spec and seed; the wall time
    # goes to a side file outside the determinism contract
    with open(outdir / "results.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(outdir / "runtime.txt", "w") as fh:
        fh.write(f"{time.perf_counter() - started:.3f}\n")
    return status
