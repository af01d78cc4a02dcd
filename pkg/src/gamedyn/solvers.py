"""Iterative methods for affine games: pure steps plus a trajectory driver.

Methods: gradient, k-extrapolation (extragradient is k=2), optimistic
gradient, consensus optimization (Hamiltonian gradient descent is the
alpha=0 edge) and the implicit proximal point step.  Every step maps the
stationary point to itself exactly, and on affine fields every step is the
action of an explicit matrix on ``w - w*`` (see :func:`operator_matrix`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from . import linalg
from .errors import ConfigurationError, DomainError, SingularMatrixError
from .games import AffineVectorField, GameProblem, constants

DIVERGENCE_THRESHOLD = 1e12


class MethodKind(enum.Enum):
    GRADIENT = "gradient"
    K_EXTRAPOLATION = "k_extrapolation"
    OPTIMISTIC = "optimistic"
    CONSENSUS = "consensus"
    PROXIMAL = "proximal"


@dataclass
class SolverConfig:
    """Step sizes and loop controls.

    ``eta=None`` selects the certified default for the method: the spectral
    step min Re(1/lambda) for gradient (falling back to 1/(4L) when some
    eigenvalue has nonpositive real part), 1/(4L) for extrapolation and
    optimistic, and 1.0 for proximal.  ``alpha``/``beta`` default to the
    consensus-rate choices (mu + sqrt(mu^2 + 2 gamma^2))/(4 L_H^2) and
    1/(2 L_H^2).
    """

    eta: Optional[float] = None
    k: int = 2
    alpha: Optional[float] = None
    beta: Optional[float] = None
    max_steps: int = 1000
    stop_tol: float = 0.0

    def __post_init__(self):
        if self.eta is not None and self.eta <= 0:
            raise ConfigurationError("eta must be positive")
        if self.max_steps < 1:
            raise ConfigurationError("max_steps must be >= 1")
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        if self.alpha is not None and self.alpha < 0:
            raise ConfigurationError("alpha must be nonnegative")
        if self.beta is not None and self.beta < 0:
            raise ConfigurationError("beta must be nonnegative")


@dataclass
class Trajectory:
    """Recorded iterates with per-step diagnostics.

    ``distances`` is None when the stationary point is unknown.  All
    recorded entries are finite; a run that blew past the divergence
    threshold stops recording and sets ``diverged``.
    """

    iterates: np.ndarray
    field_norms: np.ndarray
    h_values: np.ndarray
    distances: Optional[np.ndarray] = None
    diverged: bool = False

    def __len__(self) -> int:
        return self.iterates.shape[0]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write("t,distance,field_norm,h_value\n")
            for t in range(len(self)):
                d = "nan" if self.distances is None else f"{self.distances[t]:.17g}"
                fh.write(f"{t},{d},{self.field_norms[t]:.17g},{self.h_values[t]:.17g}\n")


def gd_step(field: AffineVectorField, w, eta: float) -> np.ndarray:
    """One explicit gradient step w - eta v(w)."""
    w = np.asarray(w, dtype=float)
    return w - eta * field(w)


def k_extrapolation_step(field: AffineVectorField, w, eta: float, k: int) -> np.ndarray:
    """k applications of z -> w - eta v(z) starting from z = w.

    k=1 is the gradient step; k=2 is extragradient
    w - eta v(w - eta v(w)).
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    w = np.asarray(w, dtype=float)
    z = w
    for _ in range(k):
        z = w - eta * field(z)
    return z


def og_step(field: AffineVectorField, w, w_prev_field, eta: float):
    """Optimistic step w - 2 eta v(w) + eta v_prev.

    ``w_prev_field`` must be the field value at the previous iterate; the
    first call passes v(w0), which matches starting the recursion with two
    equal iterates.  Returns (next iterate, v(w)) so the caller can thread
    the stored field value forward.
    """
    w = np.asarray(w, dtype=float)
    vw = field(w)
    return w - 2.0 * eta * vw + eta * np.asarray(w_prev_field, dtype=float), vw


def co_step(field: AffineVectorField, w, alpha: float, beta: float) -> np.ndarray:
    """Consensus step w - alpha v(w) - beta grad H(w); alpha=0 is HGD."""
    if alpha < 0 or beta < 0:
        raise DomainError("alpha and beta must be nonnegative")
    w = np.asarray(w, dtype=float)
    vw = field(w)
    return w - alpha * vw - beta * (field.jacobian.T @ vw)


def proximal_step(field: AffineVectorField, w, eta: float) -> np.ndarray:
    """Implicit step: solve (I + eta J) w' = w - eta * offset."""
    w = np.asarray(w, dtype=float)
    m = np.eye(field.dim) + eta * field.jacobian
    return linalg.solve_linear(m, w - eta * field.offset)


class _ProximalSolver:
    """Proximal step with the LU factorization cached per (field, eta)."""

    def __init__(self, field: AffineVectorField, eta: float):
        m = np.eye(field.dim) + eta * field.jacobian
        if linalg.reciprocal_condition(m) < linalg.RCOND_FLOOR:
            raise SingularMatrixError("I + eta J is singular for this step size")
        self._lu = scipy.linalg.lu_factor(m)
        self._shift = eta * field.offset

    def step(self, w: np.ndarray) -> np.ndarray:
        return scipy.linalg.lu_solve(self._lu, w - self._shift)


def default_eta(method: MethodKind, p: GameProblem) -> float:
    """The step size whose contraction certificate holds for this problem."""
    c = constants(p)
    if method in (MethodKind.K_EXTRAPOLATION, MethodKind.OPTIMISTIC):
        return 1.0 / (4.0 * c.lipschitz)
    if method is MethodKind.GRADIENT:
        lam = p.spectrum()
        if np.all(lam.real > 0):
            return float(np.min((1.0 / lam).real))
        return 1.0 / (4.0 * c.lipschitz)  # non-convergent regime; any eta > 0
    if method is MethodKind.PROXIMAL:
        return 1.0
    raise ConfigurationError(f"no eta default for method {method}")


def default_co_steps(p: GameProblem) -> tuple[float, float]:
    """Consensus (alpha, beta) from the certified-rate formulas."""
    c = constants(p)
    if c.l_h_sq <= 0:
        raise DomainError("consensus steps need a nonzero field")
    alpha = (c.mu + np.sqrt(c.mu**2 + 2.0 * c.gamma**2)) / (4.0 * c.l_h_sq)
    beta = 1.0 / (2.0 * c.l_h_sq)
    return float(alpha), float(beta)


def _resolve(method: MethodKind, p: GameProblem, cfg: SolverConfig):
    """Fill configuration defaults; validate per method."""
    eta = cfg.eta
    if method is not MethodKind.CONSENSUS and eta is None:
        eta = default_eta(method, p)
    alpha, beta = cfg.alpha, cfg.beta
    if method is MethodKind.CONSENSUS and (alpha is None or beta is None):
        a0, b0 = default_co_steps(p)
        alpha = a0 if alpha is None else alpha
        beta = b0 if beta is None else beta
    k = 1 if method is MethodKind.GRADIENT else cfg.k
    if method is MethodKind.K_EXTRAPOLATION and cfg.k < 1:
        raise ConfigurationError("k-extrapolation needs k >= 1")
    return eta, k, alpha, beta


def run(
    method: MethodKind,
    p: GameProblem,
    cfg: SolverConfig,
    w0=None,
    seed: int = 0,
) -> Trajectory:
    """Iterate the method, recording distance, field norm and H per step.

    Stops at ``max_steps``, when the monitored metric (distance to the
    stationary point when known, field norm otherwise) drops to
    ``stop_tol``, or when it exceeds the divergence threshold, in which
    case ``diverged`` is set.
    """
    eta, k, alpha, beta = _resolve(method, p, cfg)
    wstar = p.stationary_point
    if w0 is None:
        rng = np.random.default_rng(seed)
        direction = rng.standard_normal(p.dim)
        direction /= np.linalg.norm(direction)
        w0 = (wstar if wstar is not None else np.zeros(p.dim)) + direction
    w = np.asarray(w0, dtype=float).reshape(-1)
    if w.shape[0] != p.dim:
        raise ConfigurationError("initial point has wrong dimension")

    prox = _ProximalSolver(p.field, eta) if method is MethodKind.PROXIMAL else None
    og_state = p.field(w) if method is MethodKind.OPTIMISTIC else None

    iterates = [w.copy()]
    distances = [] if wstar is not None else None
    field_norms = []
    h_values = []
    diverged = False

    def record(u) -> float:
        v = p.field(u)
        fn = float(np.linalg.norm(v))
        field_norms.append(fn)
        h_values.append(0.5 * fn * fn)
        if distances is not None:
            dist = float(np.linalg.norm(u - wstar))
            distances.append(dist)
            return dist
        return fn

    metric = record(w)
    for _ in range(cfg.max_steps):
        if metric <= cfg.stop_tol:
            break
        if method is MethodKind.GRADIENT:
            w = gd_step(p.field, w, eta)
        elif method is MethodKind.K_EXTRAPOLATION:
            w = k_extrapolation_step(p.field, w, eta, k)
        elif method is MethodKind.OPTIMISTIC:
            w, og_state = og_step(p.field, w, og_state, eta)
        elif method is MethodKind.CONSENSUS:
            w = co_step(p.field, w, alpha, beta)
        elif method is MethodKind.PROXIMAL:
            w = prox.step(w)
        else:
            raise ConfigurationError(f"unknown method {method}")
        if not np.all(np.isfinite(w)):
            diverged = True
            break
        iterates.append(w.copy())
        metric = record(w)
        if metric > DIVERGENCE_THRESHOLD:
            diverged = True
            break

    return Trajectory(
        iterates=np.asarray(iterates),
        field_norms=np.asarray(field_norms),
        h_values=np.asarray(h_values),
        distances=None if distances is None else np.asarray(distances),
        diverged=diverged,
    )


def keg_polynomial_coeffs(eta: float, k: int) -> np.ndarray:
    """Coefficients a_0..a_{k-1} of the k-extrapolation coefficient mapping,
    N(X) = -eta * sum_{j<k} (-eta X)^j; k=2 gives extragradient's
    (-eta, eta^2)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    j = np.arange(k)
    return -eta * (-eta) ** j


def operator_matrix(
    method: MethodKind,
    field: AffineVectorField,
    eta: float = None,
    k: int = 2,
    alpha: float = None,
    beta: float = None,
) -> np.ndarray:
    """The matrix M with step(w) - w* = M (w - w*) on an affine field.

    For the optimistic method the state is doubled: M acts on the stacked
    [w_t - w*; w_{t-1} - w*].
    """
    j = field.jacobian
    d = field.dim
    eye = np.eye(d)
    if method in (MethodKind.GRADIENT, MethodKind.K_EXTRAPOLATION):
        kk = 1 if method is MethodKind.GRADIENT else k
        n_of_j = linalg.matrix_polynomial(j, keg_polynomial_coeffs(eta, kk))
        return eye + n_of_j @ j
    if method is MethodKind.CONSENSUS:
        return eye - alpha * j - beta * (j.T @ j)
    if method is MethodKind.PROXIMAL:
        m = eye + eta * j
        if linalg.reciprocal_condition(m) < linalg.RCOND_FLOOR:
            raise SingularMatrixError("I + eta J is singular")
        return np.linalg.inv(m)
    if method is MethodKind.OPTIMISTIC:
        top = np.hstack([eye - 2.0 * eta * j, eta * j])
        bot = np.hstack([eye, np.zeros((d, d))])
        return np.vstack([top, bot])
    raise ConfigurationError(f"unknown method {method}")
