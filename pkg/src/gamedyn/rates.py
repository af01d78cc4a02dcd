"""Predicted contraction rates, from spectra or from global constants.

Two routes are computed side by side and never collapsed into one:

* spectral route: exact squared spectral radii of the method operators,
  obtained by mapping polynomials over the Jacobian spectrum, plus the
  closed-form upper/lower bounds on them;
* global route: contraction certificates stated purely in terms of the
  strong monotonicity ``mu``, the singular-value floor ``gamma`` and the
  Lipschitz constant ``L`` (or ``L_H^2`` for consensus).

:func:`certify` compares either kind of prediction against an observed
trajectory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple, Optional

import numpy as np

from . import linalg
from .errors import (
    DegenerateFieldError,
    DomainError,
    InsufficientDataError,
    SingularMatrixError,
    StepSizeError,
)
from .games import GameConstants
from .solvers import MethodKind

SLACK_TOLERANCE = 1e-9
EG_FACTOR = 7.0 / 16.0  # extrapolation residual control for eta at the cap


class SpectrumStats(NamedTuple):
    min_re: float
    min_abs: float
    max_abs: float
    min_re_inv: float


def spectrum_stats(s) -> SpectrumStats:
    lam = linalg.as_spectrum(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        re_inv = np.where(np.abs(lam) > 0, (1.0 / lam).real, np.inf)
    return SpectrumStats(
        min_re=float(np.min(lam.real)),
        min_abs=float(np.min(np.abs(lam))),
        max_abs=float(np.max(np.abs(lam))),
        min_re_inv=float(np.min(re_inv)),
    )


@dataclass(frozen=True)
class SpectralRatePrediction:
    theorem: str
    eta: float
    rho_sq: float
    spectrum_stats: SpectrumStats

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "eta": self.eta,
            "rho_sq": self.rho_sq,
            "spectrum_stats": {
                "min_re": self.spectrum_stats.min_re,
                "min_abs": self.spectrum_stats.min_abs,
                "max_abs": self.spectrum_stats.max_abs,
                "min_re_inv": self.spectrum_stats.min_re_inv,
            },
        }


class GdSpectralBounds(NamedTuple):
    """Sandwich on the squared gradient-operator radius at eta = min Re(1/lambda).

    ``convergent`` is False when some eigenvalue has nonpositive real part
    (the bilinear regime, where the gradient method does not converge);
    the numeric bounds are still reported.
    """

    upper: float
    lower: float
    eta: float
    convergent: bool


def gd_spectral_bounds(s) -> GdSpectralBounds:
    """Upper and lower bounds 1 - m and 1 - 4m, m = min Re(1/l) * min Re(l)."""
    stats = spectrum_stats(s)
    m = stats.min_re_inv * stats.min_re
    return GdSpectralBounds(
        upper=1.0 - m,
        lower=1.0 - 4.0 * m,
        eta=stats.min_re_inv,
        convergent=stats.min_re > 0.0,
    )


def gd_radius_sq(s, eta: float) -> float:
    """Exact squared radius of the gradient operator: max |1 - eta l|^2."""
    lam = linalg.as_spectrum(s)
    return float(np.max(np.abs(1.0 - eta * lam) ** 2))


def _keg_operator_coeffs(eta: float, k: int) -> np.ndarray:
    # spectrum of the k-extrapolation operator is sum_{j=0}^k (-eta l)^j
    j = np.arange(k + 1)
    return (-eta) ** j


def keg_spectral_radius_sq(s, eta: float, k: int) -> float:
    """Exact squared radius of the k-extrapolation operator at a stationary
    point, via the spectral mapping of the geometric-sum polynomial."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if eta <= 0:
        raise DomainError("eta must be positive")
    mapped = linalg.spectral_map(s, _keg_operator_coeffs(eta, k))
    return float(np.max(np.abs(mapped) ** 2))


def keg_eta_cap(s, k: int) -> float:
    """Largest step size for which the k-extrapolation bound is certified:
    (1/4)^(1/(k-1)) / max |lambda|."""
    if k < 2:
        raise DomainError("the extrapolation rate needs k >= 2")
    stats = spectrum_stats(s)
    if stats.max_abs == 0:
        raise DegenerateFieldError("zero spectrum")
    return float(0.25 ** (1.0 / (k - 1)) / stats.max_abs)


def keg_rate_bound(s, eta: float, k: int) -> float:
    """Certified upper bound on the squared k-extrapolation radius:

        1 - min over the spectrum of
            (2 eta Re l + (7/16) eta^2 |l|^2) / |1 + eta l|^2,

    valid for k >= 2 and eta up to :func:`keg_eta_cap`.
    """
    lam = linalg.as_spectrum(s)
    cap = keg_eta_cap(s, k)
    if eta > cap * (1.0 + 1e-12):
        raise StepSizeError(f"eta={eta} exceeds the certified cap {cap} for k={k}")
    num = 2.0 * eta * lam.real + EG_FACTOR * eta**2 * np.abs(lam) ** 2
    den = np.abs(1.0 + eta * lam) ** 2
    return float(1.0 - np.min(num / den))


def keg_simplified_bound(s) -> float:
    """The bound at the reference step 1/(4 max|l|):

        1 - (1/4) (min Re l / max|l| + (1/16) min|l|^2 / max|l|^2).
    """
    stats = spectrum_stats(s)
    if stats.max_abs == 0:
        raise DegenerateFieldError("zero spectrum")
    return 1.0 - 0.25 * (
        stats.min_re / stats.max_abs + stats.min_abs**2 / (16.0 * stats.max_abs**2)
    )


def proximal_radius_sq(s, eta: float) -> float:
    """Exact squared radius of the proximal operator, max 1/|1 + eta l|^2."""
    lam = linalg.as_spectrum(s)
    den = np.abs(1.0 + eta * lam) ** 2
    if np.min(den) < 1e-28:
        raise SingularMatrixError("an eigenvalue equals -1/eta; proximal operator singular")
    return float(np.max(1.0 / den))


def effective_radius_sq(s, eta: float, k: int, zero_tol: float = 1e-9) -> float:
    """Squared k-extrapolation radius with near-zero eigenvalues excluded.

    Eigenvalues with |l| <= zero_tol * max|l| correspond to directions the
    field never moves; the method is the identity there and convergence
    holds toward the solution set, at the rate of the remaining spectrum.
    """
    if k < 2:
        raise DomainError("effective radius is defined for k >= 2")
    lam = linalg.as_spectrum(s)
    scale = float(np.max(np.abs(lam)))
    kept = lam[np.abs(lam) > zero_tol * scale] if scale > 0 else lam[:0]
    if kept.size == 0:
        raise DegenerateFieldError("all eigenvalues are (near) zero")
    return keg_spectral_radius_sq(kept, eta, k)


def global_rate(c: GameConstants, method: MethodKind, eta: Optional[float] = None) -> float:
    """Global contraction certificate from (mu, gamma, L, L_H^2).

    * extrapolation (k=2 and up): per-step squared-distance factor
      1 - eta mu - (7/16) eta^2 gamma^2 for eta <= 1/(4L); at eta = 1/(4L)
      the simplified headline 1 - (1/4)(mu/L + gamma^2/(16 L^2)) is
      returned.
    * optimistic: the envelope base 1 - eta mu - eta^2 gamma^2 / 8 (the
      guarantee carries a leading factor 2 and exponent t+1).
    * consensus: per-step factor on H with the certified alpha, beta:
      1 - mu^2/(2 L_H^2) - (1 + mu/gamma) gamma^2/(2 L_H^2); eta ignored.
    * proximal: 1 - (2 eta mu + eta^2 gamma^2)/(1 + 2 eta mu + eta^2 gamma^2),
      any eta > 0.

    There is no global certificate for the plain gradient method (it fails
    on bilinear games); use the spectral route instead.
    """
    if method is MethodKind.CONSENSUS:
        if c.gamma <= 0:
            raise DomainError("the consensus rate needs gamma > 0")
        if c.l_h_sq <= 0:
            raise DegenerateFieldError("zero field")
        return 1.0 - c.mu**2 / (2.0 * c.l_h_sq) - (1.0 + c.mu / c.gamma) * c.gamma**2 / (
            2.0 * c.l_h_sq
        )
    if eta is None or eta <= 0:
        raise DomainError("this method's rate needs an explicit eta > 0")
    if method is MethodKind.PROXIMAL:
        gain = 2.0 * eta * c.mu + eta**2 * c.gamma**2
        return 1.0 - gain / (1.0 + gain)
    if method in (MethodKind.K_EXTRAPOLATION, MethodKind.OPTIMISTIC):
        cap = 1.0 / (4.0 * c.lipschitz)
        if eta > cap * (1.0 + 1e-12):
            raise StepSizeError(f"eta={eta} exceeds 1/(4L)={cap}")
        if method is MethodKind.OPTIMISTIC:
            return 1.0 - eta * c.mu - eta**2 * c.gamma**2 / 8.0
        if abs(eta - cap) <= 1e-9 * cap:
            return 1.0 - 0.25 * (c.mu / c.lipschitz + c.gamma**2 / (16.0 * c.lipschitz**2))
        return 1.0 - eta * c.mu - EG_FACTOR * eta**2 * c.gamma**2
    raise DomainError(f"no global rate for method {method}")


@dataclass(frozen=True)
class CommutativeSaddleBounds:
    """Spectrum brackets for the commuting-block saddle construction.

    For coordinates whose quadratic has a negative discriminant (case a):
    Re l >= (mu1 + mu2)/2 and mu1 mu2 + mu12^2 <= |l|^2 <= L1 L2 + L12^2.
    Coordinates with real roots (case b) are flagged and bracketed by
    [max(min(mu1,mu2), det mu / tr L), max(L1, L2)].
    """

    re_lower: float
    abs_sq_lower: float
    abs_sq_upper: float
    gd_bound: float
    eg_bound: float
    case_b_indices: tuple = dc_field(default_factory=tuple)
    case_b_lower: float = np.nan
    case_b_upper: float = np.nan


def commutative_saddle_bounds(
    alphas, betas, sigmas, mu1, mu2, mu12, l1, l2, l12
) -> CommutativeSaddleBounds:
    al = np.asarray(alphas, dtype=float)
    be = np.asarray(betas, dtype=float)
    si = np.asarray(sigmas, dtype=float)
    if not (al.shape == be.shape == si.shape):
        raise DomainError("alphas, betas, sigmas must have equal lengths")
    det_mu = mu1 * mu2 + mu12**2
    det_l = l1 * l2 + l12**2
    case_b = tuple(int(i) for i in np.nonzero((al - be) ** 2 >= 4.0 * si**2)[0])
    gd_bound = 1.0 - 0.25 * (mu1 + mu2) ** 2 / det_l
    eg_bound = 1.0 - 0.25 * (
        0.5 * (mu1 + mu2) / np.sqrt(det_l) + (mu12**2 + mu1 * mu2) / (16.0 * det_l)
    )
    case_b_lower = case_b_upper = np.nan
    if case_b:
        tr_l = l1 + l2
        case_b_lower = float(max(min(mu1, mu2), det_mu / tr_l)) if tr_l > 0 else float(min(mu1, mu2))
        case_b_upper = float(max(l1, l2))
    return CommutativeSaddleBounds(
        re_lower=(mu1 + mu2) / 2.0,
        abs_sq_lower=det_mu,
        abs_sq_upper=det_l,
        gd_bound=float(gd_bound),
        eg_bound=float(eg_bound),
        case_b_indices=case_b,
        case_b_lower=case_b_lower,
        case_b_upper=case_b_upper,
    )


@dataclass(frozen=True)
class RateCertificate:
    """Outcome of checking a predicted factor against a trajectory."""

    theorem: str
    predicted: float
    observed: float
    satisfied: bool
    slack: float
    mode: str = "per_step"
    inputs: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "inputs": self.inputs,
            "predicted": self.predicted,
            "observed": self.observed,
            "satisfied": self.satisfied,
            "slack": self.slack,
            "mode": self.mode,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _series(traj, metric: str) -> np.ndarray:
    if metric == "distance_sq":
        if traj.distances is None:
            raise InsufficientDataError("trajectory has no recorded distances")
        return np.asarray(traj.distances, dtype=float) ** 2
    if metric == "h":
        return np.asarray(traj.h_values, dtype=float)
    raise DomainError(f"unknown metric {metric!r}")


def certify(
    traj,
    predicted_factor: float,
    window: int = 50,
    metric: str = "distance_sq",
    mode: str = "per_step",
    envelope_prefactor: float = 2.0,
    theorem: str = "",
    inputs: Optional[dict] = None,
) -> RateCertificate:
    """Compare a predicted contraction factor against a trajectory.

    per_step mode: observed = max consecutive ratio of the series over the
    final ``window`` steps; satisfied iff observed <= predicted + 1e-9.

    envelope mode (optimistic-gradient guarantees): the series must stay
    under prefactor * factor^(t+1) * series_0 for every t; observed is the
    tightest per-step factor that envelope would have needed.
    """
    s = _series(traj, metric)
    if mode == "per_step":
        if window < 1:
            raise InsufficientDataError("window must cover at least one step")
        if s.size < window + 1:
            raise InsufficientDataError(
                f"need at least {window + 1} recorded values, have {s.size}"
            )
        tail = s[-(window + 1):]
        ratios = [
            tail[i + 1] / tail[i] if tail[i] > 0 else 0.0 for i in range(len(tail) - 1)
        ]
        observed = float(max(ratios))
    elif mode == "envelope":
        if s.size < 2:
            raise InsufficientDataError("need at least two recorded values")
        if s[0] <= 0:
            raise InsufficientDataError("envelope needs a nonzero starting value")
        t = np.arange(s.size)
        implied = (s / (envelope_prefactor * s[0])) ** (1.0 / (t + 1))
        observed = float(np.max(implied))
    else:
        raise DomainError(f"unknown mode {mode!r}")
    satisfied = observed <= predicted_factor + SLACK_TOLERANCE
    return RateCertificate(
        theorem=theorem,
        predicted=float(predicted_factor),
        observed=observed,
        satisfied=bool(satisfied),
        slack=float(predicted_factor - observed),
        mode=mode,
        inputs=dict(inputs or {}),
    )
