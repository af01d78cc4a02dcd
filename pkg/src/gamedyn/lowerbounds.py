"""Lower bounds for one-step linear iterative methods.

A method in the class under study updates w -> w + N(J) v(w) where N is a
real polynomial of degree at most k-1 in the Jacobian; this covers every
composition of at most k gradient evaluations that uses only the last
iterate (gradient steps, extrapolations with per-stage step sizes, cyclic
Richardson sweeps).  On an affine field the squared radius of the best
such method is

    min over coefficients  max over the spectrum  |1 + sum a_l l^(l+1)|^2,

a convex minimax in the coefficients.  Three tools are provided:

* :func:`minimax_radius` solves the minimax numerically (multi-start
  direct search; the objective is convex so local search is reliable);
* :func:`lagrange_lower_bound` certifies a floor on half the squared
  value through the dual problem, evaluated at an explicit feasible point
  built from Lagrange interpolation;
* :func:`chebyshev_instance` builds the hard instances (cosine-spaced
  eigenvalues) on which the certified floor matches the k^3-degraded
  conditioning of the theorem, for both the convex and the bilinear kind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.optimize

from . import linalg
from .errors import DomainError
from .games import AffineVectorField
from .solvers import MethodKind, operator_matrix  # noqa: F401  (re-export convenience)

MINIMAX_RANDOM_STARTS = 20
MINIMAX_FTOL = 1e-6


@dataclass(frozen=True)
class MethodPolynomial:
    """Real coefficients a_0..a_{k-1} of the coefficient mapping N."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if len(c) < 1:
            raise DomainError("a method polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def operator_eigenvalue(self, lam):
        """1 + sum_l a_l lam^(l+1): eigenvalue of I + N(J) J at lam."""
        lam = np.asarray(lam, dtype=complex)
        acc = np.zeros_like(lam)
        for a in self.coeffs[::-1]:
            acc = (acc + a) * lam
        return 1.0 + acc


def scli_operator(field: AffineVectorField, n: MethodPolynomial) -> np.ndarray:
    """Assemble I + N(J) J for an affine field."""
    j = field.jacobian
    n_of_j = linalg.matrix_polynomial(j, n.coeffs)
    return np.eye(field.dim) + n_of_j @ j


class MinimaxResult(NamedTuple):
    value: float
    argmin: MethodPolynomial
    converged: bool


def _power_table(spec: np.ndarray, degree: int) -> np.ndarray:
    return np.stack([spec ** (l + 1) for l in range(degree + 1)], axis=1)


def minimax_radius(s, degree: int, seed: int = 0) -> MinimaxResult:
    """Numerically minimize max |1 + sum a_l lam^(l+1)| over real a.

    Direct search (Nelder-Mead) from a least-squares-informed start, the
    warm start of the previous degree, and seeded random restarts; the
    best point found wins.  The objective is convex, so the returned value
    is reliable; any value below sqrt(2 * certified lower bound) would
    indicate optimizer failure and is reported via ``converged=False`` by
    :func:`verify_lower_bound`.
    """
    if degree < 0:
        raise DomainError("degree must be >= 0")
    spec = linalg.as_spectrum(s)
    rng = np.random.default_rng(seed)

    best_coeffs = None
    best_value = np.inf
    any_success = False
    warm = None
    for deg in range(degree + 1):
        table = _power_table(spec, deg)

        def objective(a, table=table):
            return float(np.max(np.abs(1.0 + table @ a)))

        # least-squares start: minimize ||1 + P a|| over real a
        stacked = np.vstack([table.real, table.imag])
        rhs = np.concatenate([-np.ones(spec.size), np.zeros(spec.size)])
        a_ls = np.linalg.lstsq(stacked, rhs, rcond=None)[0]
        starts = [np.zeros(deg + 1), a_ls]
        if warm is not None:
            starts.append(np.concatenate([warm, np.zeros(deg + 1 - warm.size)]))
        scale = np.abs(a_ls) + 1.0
        for _ in range(MINIMAX_RANDOM_STARTS):
            starts.append(a_ls + rng.standard_normal(deg + 1) * scale * rng.uniform(0.01, 1.0))

        deg_best, deg_val, deg_ok = None, np.inf, False
        for x0 in starts:
            res = scipy.optimize.minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options=dict(
                    xatol=1e-12,
                    fatol=MINIMAX_FTOL * 1e-4,
                    maxiter=4000 * (deg + 1),
                    maxfev=8000 * (deg + 1),
                ),
            )
            val = objective(res.x)
            if val < deg_val:
                deg_best, deg_val, deg_ok = res.x, val, bool(res.success)
        warm = deg_best
        if deg_val < best_value:
            best_value, best_coeffs, any_success = deg_val, deg_best, deg_ok
    return MinimaxResult(
        value=float(best_value),
        argmin=MethodPolynomial(tuple(best_coeffs)),
        converged=any_success,
    )


def chebyshev_points(lo: float, hi: float, k: int) -> np.ndarray:
    """Cosine-spaced points (lo + hi)/2 - (hi - lo)/2 * cos((j-1) pi / (k-1)),
    j = 1..k; the first point is lo and the last is hi."""
    if k < 2:
        raise DomainError("need at least two points")
    j = np.arange(1, k + 1)
    return (lo + hi) / 2.0 - (hi - lo) / 2.0 * np.cos((j - 1) / (k - 1) * np.pi)


@dataclass(frozen=True)
class HardInstance:
    """A worst-case instance for methods of polynomial degree <= k-1.

    ``points`` are the k+1 real interpolation eigenvalues; for the
    bilinear kind they are the squared singular values of the embedded
    coupling matrix and the field spectrum is {+-i sqrt(point)}.
    """

    points: np.ndarray
    mu: float
    lipschitz: float
    kind: str
    embedded_field: AffineVectorField

    def spectrum(self) -> np.ndarray:
        return linalg.eigenvalues(self.embedded_field.jacobian)


def chebyshev_instance(mu: float, lipschitz: float, k: int, kind: str = "convex") -> HardInstance:
    """Hard instance with cosine-spaced eigenvalues plus one interior point.

    convex kind (k >= 3): k points in [mu, L] plus the midpoint of the
    first gap; embedded as a symmetric PD diagonal field of dimension k+1.

    bilinear kind (k >= 6): the construction runs at k' = k // 2 on the
    interval [mu^2, L^2] (here ``mu`` plays the role of the singular-value
    floor gamma); the points are embedded as squared singular values of a
    diagonal coupling block, doubling the dimension.
    """
    if not 0.0 < mu < lipschitz:
        raise DomainError("need 0 < mu < L")
    if kind == "convex":
        if k < 3:
            raise DomainError("the convex construction needs k >= 3")
        base = chebyshev_points(mu, lipschitz, k)
        points = np.append(base, (base[0] + base[1]) / 2.0)
        field = AffineVectorField(np.diag(points), np.zeros(points.size))
        return HardInstance(points=points, mu=mu, lipschitz=lipschitz, kind=kind, embedded_field=field)
    if kind == "bilinear":
        if k < 6:
            raise DomainError("the bilinear construction needs k >= 6")
        k2 = k // 2
        base = chebyshev_points(mu**2, lipschitz**2, k2)
        points = np.append(base, (base[0] + base[1]) / 2.0)
        a = np.diag(np.sqrt(points))
        m = points.size
        top = np.hstack([np.zeros((m, m)), a])
        bot = np.hstack([-a.T, np.zeros((m, m))])
        field = AffineVectorField(np.vstack([top, bot]), np.zeros(2 * m))
        return HardInstance(points=points, mu=mu, lipschitz=lipschitz, kind=kind, embedded_field=field)
    raise DomainError(f"unknown instance kind {kind!r}")


def _lagrange_values(nodes: np.ndarray, x: float, chebyshev_weights: bool) -> np.ndarray:
    """L_j(x) for the Lagrange basis on ``nodes``.

    With ``chebyshev_weights`` the barycentric form with weights
    (-1)^(j-1), halved at the two endpoints, is used (exact for
    cosine-spaced nodes); otherwise the direct product formula.
    """
    k = nodes.size
    if chebyshev_weights and k >= 2:
        w = (-1.0) ** np.arange(k)
        w[0] *= 0.5
        w[-1] *= 0.5
        terms = w / (x - nodes)
        return terms / terms.sum()
    vals = np.empty(k)
    for j in range(k):
        others = np.delete(nodes, j)
        vals[j] = np.prod((x - others) / (nodes[j] - others))
    return vals


def lagrange_lower_bound(points, chebyshev_weights: bool = False) -> float:
    """Certified floor on min over degree-(k-1) methods of half the squared
    radius, for a real spectrum of k+1 distinct nonzero points:

        (1/2) ((1 - sum c_j) / (1 + sum |c_j|))^2,
        c_j = (x / node_j) L_j(x),

    where the nodes are the first k points, x is the last one, and L_j is
    the Lagrange basis on the nodes.  This is the dual objective at an
    explicit feasible point, hence a true lower bound by weak duality.
    """
    pts = np.asarray(points, dtype=float).reshape(-1)
    if pts.size < 2:
        raise DomainError("need at least two points")
    if np.any(pts == 0.0):
        raise DomainError("points must be nonzero")
    gaps = np.abs(pts[:, None] - pts[None, :]) + np.eye(pts.size)
    if np.min(gaps) <= 1e-14 * max(1.0, np.max(np.abs(pts))):
        raise DomainError("points must be distinct")
    nodes, x = pts[:-1], float(pts[-1])
    lj = _lagrange_values(nodes, x, chebyshev_weights)
    c = (x / nodes) * lj
    return float(0.5 * ((1.0 - c.sum()) / (1.0 + np.abs(c).sum())) ** 2)


@dataclass(frozen=True)
class LowerBoundReport:
    """Cross-checked lower-bound evidence for one hard instance."""

    certified_half_rho_sq: float
    numeric_minimax_rho: float
    theorem_floor: float
    consistent: bool
    kind: str
    k: int
    mu_or_gamma: float
    lipschitz: float
    points: tuple

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "mu_or_gamma": self.mu_or_gamma,
            "L": self.lipschitz,
            "points": list(self.points),
            "certified_half_rho_sq": self.certified_half_rho_sq,
            "numeric_minimax_rho": self.numeric_minimax_rho,
            "theorem_floor": self.theorem_floor,
            "consistent": self.consistent,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def theorem_floor(mu_or_gamma: float, lipschitz: float, k: int, kind: str) -> float:
    """The closed-form radius floor: 1 - (4 k^3 / pi) mu/L for the convex
    kind, 1 - (k^3 / (2 pi)) gamma^2 / L^2 for the bilinear kind."""
    if kind == "convex":
        return 1.0 - (4.0 * k**3 / np.pi) * (mu_or_gamma / lipschitz)
    if kind == "bilinear":
        return 1.0 - (k**3 / (2.0 * np.pi)) * (mu_or_gamma**2 / lipschitz**2)
    raise DomainError(f"unknown kind {kind!r}")


def verify_lower_bound(
    mu_or_gamma: float, lipschitz: float, k: int, kind: str = "convex", seed: int = 0
) -> LowerBoundReport:
    """Build the hard instance and cross-check floor, certificate, minimax.

    consistent means: the numeric minimax radius sits above the closed-form
    floor (within 1e-3 of solver tolerance) and the Lagrange certificate
    respects weak duality against it (within 1e-8).
    """
    floor = theorem_floor(mu_or_gamma, lipschitz, k, kind)
    if not 0.0 < floor < 1.0:
        raise DomainError(
            f"theorem floor {floor:.4g} is uninformative; need better conditioning"
        )
    inst = chebyshev_instance(mu_or_gamma, lipschitz, k, kind)
    cert = lagrange_lower_bound(inst.points, chebyshev_weights=True)
    spectrum = inst.points if kind == "convex" else inst.spectrum()
    numeric = minimax_radius(spectrum, degree=k - 1, seed=seed)
    consistent = (
        numeric.value >= floor - 1e-3
        and cert <= 0.5 * numeric.value**2 + 1e-8
        and numeric.value >= np.sqrt(2.0 * cert) - 1e-6
    )
    return LowerBoundReport(
        certified_half_rho_sq=float(cert),
        numeric_minimax_rho=float(numeric.value),
        theorem_floor=float(floor),
        consistent=bool(consistent),
        kind=kind,
        k=k,
        mu_or_gamma=float(mu_or_gamma),
        lipschitz=float(lipschitz),
        points=tuple(float(x) for x in inst.points),
    )
