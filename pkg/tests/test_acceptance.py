"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see every line; the
randomized-population study (criterion 10) runs at the d1 + d2 = 100 scale.
"""

import numpy as np
import pytest

from gamedyn import experiments, games, linalg, lowerbounds, rates, solvers
from gamedyn.experiments import ExperimentSpec
from gamedyn.solvers import MethodKind, SolverConfig

from conftest import random_conjugate_spectrum, strongly_monotone_suite

EG_WEIGHT = 7.0 / 16.0


def report(num, name, ok, detail=""):
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def per_step_ratios(values):
    v = np.asarray(values, dtype=float)
    mask = v[:-1] > 0
    return v[1:][mask] / v[:-1][mask]


def test_criterion_01_bilinear_eg_rate():
    worst_excess = -np.inf
    for i in range(20):
        rng = np.random.default_rng(100 + i)
        a = rng.standard_normal((10, 10))
        p = games.bilinear_game(a)
        sv = linalg.singular_values(a)
        eta = 1.0 / (4.0 * sv[0])
        threshold = 1.0 - sv[-1] ** 2 / (64.0 * sv[0] ** 2)
        traj = solvers.run(
            MethodKind.K_EXTRAPOLATION, p, SolverConfig(eta=eta, max_steps=400), seed=i
        )
        ratios = per_step_ratios(traj.distances**2)
        worst_excess = max(worst_excess, float(np.max(ratios) - threshold))
    report(1, "bilinear-eg-rate", worst_excess <= 1e-9, f"worst excess {worst_excess:.3e}")


def test_criterion_02_gd_failure_on_bilinear():
    rng = np.random.default_rng(7)
    # strict increase on a generic nonsingular bilinear game
    p_gen = games.bilinear_game(rng.standard_normal((5, 5)))
    traj = solvers.run(MethodKind.GRADIENT, p_gen, SolverConfig(eta=0.25, max_steps=400), seed=0)
    increasing = bool(np.all(np.diff(traj.distances) > 0))
    # exact per-step factor on an orthogonal coupling (sigma = 1)
    o = games.haar_orthogonal(5, rng)
    p_orth = games.bilinear_game(o)
    eta = 0.25
    traj_o = solvers.run(MethodKind.GRADIENT, p_orth, SolverConfig(eta=eta, max_steps=200), seed=1)
    ratios = per_step_ratios(traj_o.distances**2)
    max_err = float(np.max(np.abs(ratios - (1.0 + eta**2))))
    report(
        2,
        "gd-failure-on-bilinear",
        increasing and max_err <= 1e-10,
        f"increasing={increasing} max factor error {max_err:.3e}",
    )


def test_criterion_03_gd_sandwich():
    rng = np.random.default_rng(33)
    violations = 0
    for _ in range(200):
        s = random_conjugate_spectrum(rng, positive_real=True)
        b = rates.gd_spectral_bounds(s)
        m = b.eta * rates.spectrum_stats(s).min_re
        exact = rates.gd_radius_sq(s, b.eta)
        if not (1.0 - 4.0 * m - 1e-12 <= exact <= 1.0 - m + 1e-12):
            violations += 1
    report(3, "gd-spectral-sandwich", violations == 0, f"{violations} violations in 200")


def test_criterion_04_keg_bound_soundness():
    rng = np.random.default_rng(44)
    violations = 0
    for _ in range(200):
        s = random_conjugate_spectrum(rng, positive_real=False, allow_zero=True)
        for k in (2, 3, 4):
            eta = rates.keg_eta_cap(s, k)
            if rates.keg_rate_bound(s, eta, k) < rates.keg_spectral_radius_sq(s, eta, k) - 1e-10:
                violations += 1
    # the in-between example: exact extragradient rate stays near 1 - 1/64
    # while a monotonicity-only certificate degrades to 1 - eps/4
    eps = 1e-3
    s = np.array([eps + 1j, eps - 1j])
    stats = rates.spectrum_stats(s)
    exact = rates.keg_spectral_radius_sq(s, 1.0 / (4.0 * stats.max_abs), 2)
    mu_only = 1.0 - stats.min_re / (4.0 * stats.max_abs)
    example_ok = exact <= 1.0 - 1.0 / 64.0 + 1e-3 and abs(mu_only - (1.0 - eps / 4.0)) <= 1e-6
    report(
        4,
        "keg-bound-soundness",
        violations == 0 and example_ok,
        f"{violations} violations; exact in-between rate {exact:.5f}",
    )


SUITE = strongly_monotone_suite(50, 20, seed0=7000)


def test_criterion_05_eg_per_step_certificate():
    worst_excess = -np.inf
    for i, p in enumerate(SUITE):
        c = games.constants(p)
        eta = 1.0 / (4.0 * c.lipschitz)
        factor = 1.0 - eta * c.mu - EG_WEIGHT * eta**2 * c.gamma**2
        traj = solvers.run(
            MethodKind.K_EXTRAPOLATION, p,
            SolverConfig(eta=eta, max_steps=250, stop_tol=1e-13), seed=i,
        )
        ratios = per_step_ratios(traj.distances**2)
        worst_excess = max(worst_excess, float(np.max(ratios) - factor))
    report(5, "eg-global-per-step", worst_excess <= 1e-9, f"worst excess {worst_excess:.3e}")


def test_criterion_06_og_envelope():
    problems = list(SUITE) + [games.bilinear_game(np.random.default_rng(5).standard_normal((10, 10)))]
    worst_excess = -np.inf
    for i, p in enumerate(problems):
        c = games.constants(p)
        eta = 1.0 / (4.0 * c.lipschitz)
        factor = 1.0 - eta * c.mu - eta**2 * c.gamma**2 / 8.0
        traj = solvers.run(
            MethodKind.OPTIMISTIC, p,
            SolverConfig(eta=eta, max_steps=300, stop_tol=1e-13), seed=i,
        )
        cert = rates.certify(traj, factor, mode="envelope")
        worst_excess = max(worst_excess, cert.observed - factor)
    report(6, "og-envelope", worst_excess <= 1e-9, f"worst excess {worst_excess:.3e}")


def test_criterion_07_co_certificate():
    worst_excess = -np.inf
    for i, p in enumerate(SUITE):
        c = games.constants(p)
        alpha, beta = solvers.default_co_steps(p)
        assert alpha == pytest.approx((c.mu + np.sqrt(c.mu**2 + 2 * c.gamma**2)) / (4 * c.l_h_sq))
        assert beta == pytest.approx(1.0 / (2.0 * c.l_h_sq))
        factor = rates.global_rate(c, MethodKind.CONSENSUS)
        traj = solvers.run(
            MethodKind.CONSENSUS, p,
            SolverConfig(alpha=alpha, beta=beta, max_steps=250, stop_tol=1e-13), seed=i,
        )
        ratios = per_step_ratios(traj.h_values)
        worst_excess = max(worst_excess, float(np.max(ratios) - factor))
    # Hamiltonian gradient descent: mu = 0 reproduces 1 - gamma^2/(2 L_H^2)
    rng = np.random.default_rng(77)
    p = games.bilinear_game(rng.standard_normal((5, 5)))
    c = games.constants(p)
    hgd_factor = rates.global_rate(c, MethodKind.CONSENSUS)
    hgd_ok = hgd_factor == pytest.approx(1.0 - c.gamma**2 / (2.0 * c.l_h_sq))
    traj = solvers.run(
        MethodKind.CONSENSUS, p,
        SolverConfig(alpha=0.0, beta=1.0 / (2.0 * c.l_h_sq), max_steps=200, stop_tol=1e-13),
        seed=3,
    )
    hgd_excess = float(np.max(per_step_ratios(traj.h_values)) - hgd_factor)
    report(
        7,
        "co-h-certificate",
        worst_excess <= 1e-9 and hgd_ok and hgd_excess <= 1e-9,
        f"worst excess {worst_excess:.3e}; HGD excess {hgd_excess:.3e}",
    )


def test_criterion_08_lower_bound_consistency():
    ok = True
    details = []
    for ml in (1e-3, 1e-4):
        rep = lowerbounds.verify_lower_bound(ml, 1.0, 3, "convex")
        ok &= rep.consistent
        ok &= rep.numeric_minimax_rho >= rep.theorem_floor - 1e-3
        ok &= rep.certified_half_rho_sq <= 0.5 * rep.numeric_minimax_rho**2 + 1e-8
        details.append(f"convex mu/L={ml}: rho={rep.numeric_minimax_rho:.5f} floor={rep.theorem_floor:.5f}")
    rep = lowerbounds.verify_lower_bound(1e-2, 1.0, 6, "bilinear")
    ok &= rep.consistent
    details.append(f"bilinear: rho={rep.numeric_minimax_rho:.5f} floor={rep.theorem_floor:.5f}")
    report(8, "lower-bound-consistency", ok, "; ".join(details))


def test_criterion_09_singular_bilinear_quotient():
    a = np.array([[1.0, 0.0]])
    p = games.bilinear_game(a)
    sv = linalg.singular_values(a)
    nonzero = sv[sv > 1e-12]
    threshold = 1.0 - nonzero[-1] ** 2 / (64.0 * sv[0] ** 2)
    eta = 1.0 / (4.0 * sv[0])
    j = p.field.jacobian
    # orthonormal basis of the solution set's directions (kernel of J)
    _, s_full, vt = np.linalg.svd(j)
    kernel = vt[s_full < 1e-12].T
    w = p.stationary_point + np.array([0.3, -0.2, 0.7])
    dist_sq, field_sq = [], []
    for _ in range(200):
        u = w - p.stationary_point
        u_quot = u - kernel @ (kernel.T @ u)
        dist_sq.append(float(u_quot @ u_quot))
        v = p.field(w)
        field_sq.append(float(v @ v))
        w = solvers.k_extrapolation_step(p.field, w, eta, 2)
    excess_d = float(np.max(per_step_ratios(dist_sq)) - threshold)
    excess_f = float(np.max(per_step_ratios(field_sq)) - threshold)
    effective = rates.effective_radius_sq(p.spectrum(), eta, 2)
    report(
        9,
        "singular-bilinear-quotient",
        excess_d <= 1e-9 and excess_f <= 1e-9 and effective <= threshold,
        f"distance excess {excess_d:.3e}, field excess {excess_f:.3e}",
    )


def test_criterion_10_improvement_ratio_study(tmp_path):
    pairs = list(experiments.CI_PAIRS)
    spec = ExperimentSpec("acceptance", pairs, trials=500, seed=2024, out_dir=tmp_path / "a")
    result = experiments.run_experiment(spec)
    again = experiments.run_experiment(
        ExperimentSpec("acceptance", pairs, trials=500, seed=2024, out_dir=tmp_path / "b")
    )
    deterministic = (
        result.csv_path.read_bytes() == again.csv_path.read_bytes()
        and result.manifest_path.read_bytes() == again.manifest_path.read_bytes()
    )
    header = result.csv_path.read_text().splitlines()[0]
    schema_ok = header == ",".join(f"{d1}vs{d2}" for d1, d2 in pairs)
    in_bounds = all(
        bool(np.all(v >= 0.0) and np.all(v <= 1.0)) for v in result.columns.values()
    )
    rows = len(result.csv_path.read_text().splitlines()) - 1
    import json

    direction = json.loads(result.manifest_path.read_text())["direction_report"]
    report(
        10,
        "improvement-ratio-study",
        deterministic and schema_ok and in_bounds and rows == 500,
        f"direction: balanced mean {direction['balanced_mean']:.4f} "
        f"vs skewed mean {direction['skewed_mean']:.4f}, "
        f"expected direction holds={direction['expected_direction_holds']}",
    )


def test_criterion_11_operator_equivalence():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        j = rng.standard_normal((d, d)) + 0.6 * np.eye(d)
        if linalg.reciprocal_condition(j) < 1e-8:
            j += 0.5 * np.eye(d)
        b = rng.standard_normal(d)
        field = games.AffineVectorField(j, b)
        wstar = np.linalg.solve(j, -b)
        c = games.constants(field)
        eta = float(rng.uniform(0.2, 1.0)) / (4.0 * c.lipschitz)
        k = int(rng.integers(1, 5))
        alpha = float(rng.uniform(0.0, 0.2)) / c.lipschitz
        beta = float(rng.uniform(0.1, 0.5)) / c.l_h_sq
        w = wstar + rng.standard_normal(d)
        w_prev = wstar + rng.standard_normal(d)

        m = solvers.operator_matrix(MethodKind.K_EXTRAPOLATION, field, eta=eta, k=k)
        err = np.max(np.abs(solvers.k_extrapolation_step(field, w, eta, k) - (wstar + m @ (w - wstar))))

        m = solvers.operator_matrix(MethodKind.GRADIENT, field, eta=eta)
        err = max(err, np.max(np.abs(solvers.gd_step(field, w, eta) - (wstar + m @ (w - wstar)))))

        m = solvers.operator_matrix(MethodKind.CONSENSUS, field, alpha=alpha, beta=beta)
        err = max(err, np.max(np.abs(solvers.co_step(field, w, alpha, beta) - (wstar + m @ (w - wstar)))))

        m = solvers.operator_matrix(MethodKind.PROXIMAL, field, eta=eta)
        err = max(err, np.max(np.abs(solvers.proximal_step(field, w, eta) - (wstar + m @ (w - wstar)))))

        m = solvers.operator_matrix(MethodKind.OPTIMISTIC, field, eta=eta)
        stacked = np.concatenate([w - wstar, w_prev - wstar])
        expected = wstar + (m @ stacked)[:d]
        stepped, _ = solvers.og_step(field, w, field(w_prev), eta)
        err = max(err, np.max(np.abs(stepped - expected)))

        worst = max(worst, float(err))
    report(11, "operator-equivalence", worst <= 1e-10, f"worst deviation {worst:.3e}")
