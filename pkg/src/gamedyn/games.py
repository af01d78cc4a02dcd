"""Game instances as affine vector fields with known constants.

Every generator returns a :class:`GameProblem` whose vector field is
``v(w) = J w + b`` with constant Jacobian ``J``.  For these fields the
local and global theories coincide, so the stationary point, the strong
monotonicity ``mu``, the singular-value floor ``gamma`` and the Lipschitz
constant ``L`` are all exactly computable.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError

STATIONARY_TOL = 1e-8


@dataclass(frozen=True)
class AffineVectorField:
    """v(w) = jacobian @ w + offset, with constant Jacobian."""

    jacobian: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        j = linalg.as_square(self.jacobian)
        b = np.asarray(self.offset, dtype=float).reshape(-1)
        if b.shape[0] != j.shape[0]:
            raise DimensionError(
                f"offset length {b.shape[0]} does not match jacobian dimension {j.shape[0]}"
            )
        if not np.all(np.isfinite(b)):
            raise DimensionError("offset entries must be finite")
        j = j.copy()
        b = b.copy()
        j.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "jacobian", j)
        object.__setattr__(self, "offset", b)

    @property
    def dim(self) -> int:
        return self.jacobian.shape[0]

    def __call__(self, w) -> np.ndarray:
        return self.jacobian @ np.asarray(w, dtype=float) + self.offset

    def hamiltonian(self, w) -> float:
        """H(w) = 0.5 * ||v(w)||^2."""
        v = self(w)
        return 0.5 * float(v @ v)

    def hamiltonian_gradient(self, w) -> np.ndarray:
        """grad H(w) = J^T v(w) for an affine field."""
        return self.jacobian.T @ self(w)


@dataclass(frozen=True)
class GameProblem:
    field: AffineVectorField
    d1: int
    d2: int
    stationary_point: Optional[np.ndarray] = None
    provenance: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0 or self.d1 + self.d2 != self.field.dim:
            raise DimensionError(
                f"player split ({self.d1}, {self.d2}) does not sum to dimension {self.field.dim}"
            )
        if self.stationary_point is not None:
            w = np.asarray(self.stationary_point, dtype=float).reshape(-1)
            if w.shape[0] != self.field.dim:
                raise DimensionError("stationary point has wrong dimension")
            resid = np.linalg.norm(self.field(w))
            if resid > STATIONARY_TOL * (1.0 + np.linalg.norm(self.field.offset)):
                raise DomainError(f"claimed stationary point has residual {resid:.2e}")
            w = w.copy()
            w.flags.writeable = False
            object.__setattr__(self, "stationary_point", w)

    @property
    def dim(self) -> int:
        return self.field.dim

    def spectrum(self) -> np.ndarray:
        return linalg.eigenvalues(self.field.jacobian)

    def to_json_dict(self) -> dict:
        doc = {
            "d1": self.d1,
            "d2": self.d2,
            "jacobian": self.field.jacobian.ravel(order="C").tolist(),
            "offset": self.field.offset.tolist(),
            "provenance": self.provenance,
        }
        if self.stationary_point is not None:
            doc["stationary_point"] = self.stationary_point.tolist()
        return doc


def problem_from_json_dict(doc: dict) -> GameProblem:
    d1, d2 = int(doc["d1"]), int(doc["d2"])
    d = d1 + d2
    jac = np.asarray(doc["jacobian"], dtype=float).reshape(d, d)
    offset = np.asarray(doc["offset"], dtype=float)
    station = doc.get("stationary_point")
    return GameProblem(
        field=AffineVectorField(jac, offset),
        d1=d1,
        d2=d2,
        stationary_point=None if station is None else np.asarray(station, dtype=float),
        provenance=dict(doc.get("provenance", {})),
    )


@dataclass(frozen=True)
class GameConstants:
    """Global constants of an affine field.

    mu        strong monotonicity, min eigenvalue of the symmetric part
              (clamped at 0 against roundoff);
    gamma     least singular value of the Jacobian;
    lipschitz largest singular value of the Jacobian;
    l_h_sq    Lipschitz smoothness of H = 0.5||v||^2, equal to lipschitz^2.
    """

    mu: float
    gamma: float
    lipschitz: float
    l_h_sq: float


def constants(p: GameProblem | AffineVectorField) -> GameConstants:
    field = p.field if isinstance(p, GameProblem) else p
    j = field.jacobian
    sym = (j + j.T) / 2.0
    mu = max(0.0, float(np.linalg.eigvalsh(sym)[0]))
    sv = linalg.singular_values(j)
    return GameConstants(
        mu=mu,
        gamma=float(sv[-1]),
        lipschitz=float(sv[0]),
        l_h_sq=float(sv[0] ** 2),
    )


def _saddle_field(s1: np.ndarray, a: np.ndarray, s2: np.ndarray, b=None, c=None) -> AffineVectorField:
    """Field of min_x max_y with Jacobian [[S1, A], [-A^T, S2]]."""
    m, p = a.shape
    top = np.hstack([s1, a])
    bot = np.hstack([-a.T, s2])
    jac = np.vstack([top, bot])
    off = np.zeros(m + p)
    if b is not None:
        off[:m] = b
    if c is not None:
        off[m:] = -np.asarray(c, dtype=float)
    return AffineVectorField(jac, off)


def bilinear_game(a, b=None, c=None) -> GameProblem:
    """Saddle point of x^T A y + b^T x + c^T y.

    The Jacobian is [[0, A], [-A^T, 0]]; for square A its spectrum is
    {+-i sigma : sigma a singular value of A}.  Rectangular A is allowed
    (the spectrum then picks up zeros); the stationary point is computed
    when the linear systems A y = -b, A^T x = -c are solvable, and is the
    origin when both offsets vanish.
    """
    a = linalg.as_matrix(a)
    m, p = a.shape
    b_vec = np.zeros(m) if b is None else np.asarray(b, dtype=float).reshape(-1)
    c_vec = np.zeros(p) if c is None else np.asarray(c, dtype=float).reshape(-1)
    if b_vec.shape[0] != m or c_vec.shape[0] != p:
        raise DimensionError("offset vectors must match the shape of A")
    field = _saddle_field(np.zeros((m, m)), a, np.zeros((p, p)), b_vec, c_vec)

    station = None
    if not b_vec.any() and not c_vec.any():
        station = np.zeros(m + p)
    else:
        y, res_y = np.linalg.lstsq(a, -b_vec, rcond=None)[:2]
        x, res_x = np.linalg.lstsq(a.T, -c_vec, rcond=None)[:2]
        cand = np.concatenate([x, y])
        resid = np.linalg.norm(field(cand))
        if resid <= STATIONARY_TOL * (1.0 + np.linalg.norm(field.offset)):
            station = cand
    return GameProblem(
        field=field,
        d1=m,
        d2=p,
        stationary_point=station,
        provenance={"generator": "bilinear", "params": {"m": m, "p": p}},
    )


def in_between_game(epsilon: float) -> GameProblem:
    """min_x max_y (eps/2)(x^2 - y^2) + xy, for 0 < eps <= 1.

    Spectrum {eps +- i}: only eps-strongly monotone, yet with singular
    values sqrt(1 + eps^2) bounded away from zero.
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    field = _saddle_field(
        np.array([[epsilon]]), np.array([[1.0]]), np.array([[epsilon]])
    )
    return GameProblem(
        field=field,
        d1=1,
        d2=1,
        stationary_point=np.zeros(2),
        provenance={"generator": "in_between", "params": {"epsilon": epsilon}},
    )


def adversarial_separable_game(alphas, betas, sigmas) -> GameProblem:
    """Separable saddle point with diagonal blocks S1, S2, A.

    The commuting diagonal structure makes the spectrum the roots of
    X^2 - (alpha_i + beta_i) X + alpha_i beta_i + sigma_i^2, one quadratic
    per coordinate.
    """
    al = np.asarray(alphas, dtype=float).reshape(-1)
    be = np.asarray(betas, dtype=float).reshape(-1)
    si = np.asarray(sigmas, dtype=float).reshape(-1)
    if not (al.shape == be.shape == si.shape):
        raise DomainError("alphas, betas, sigmas must have equal lengths")
    if al.size == 0:
        raise DomainError("need at least one coordinate")
    if np.any(al < 0) or np.any(be < 0):
        raise DomainError("alphas and betas must be nonnegative")
    field = _saddle_field(np.diag(al), np.diag(si), np.diag(be))
    m = al.size
    return GameProblem(
        field=field,
        d1=m,
        d2=m,
        stationary_point=np.zeros(2 * m),
        provenance={
            "generator": "adversarial_separable",
            "params": {"alphas": al.tolist(), "betas": be.tolist(), "sigmas": si.tolist()},
        },
    )


def separable_spectrum(alphas, betas, sigmas) -> np.ndarray:
    """Closed-form spectrum of :func:`adversarial_separable_game`."""
    al = np.asarray(alphas, dtype=float)
    be = np.asarray(betas, dtype=float)
    si = np.asarray(sigmas, dtype=float)
    out = []
    for a, b, s in zip(al, be, si):
        disc = (a + b) ** 2 - 4.0 * (a * b + s * s)
        root = np.sqrt(complex(disc))
        out.append(((a + b) + root) / 2.0)
        out.append(((a + b) - root) / 2.0)
    return np.asarray(out, dtype=complex)


def quadratic_game(spectrum) -> GameProblem:
    """Pure minimization: symmetric PSD diagonal field with the given spectrum."""
    eigs = np.asarray(spectrum, dtype=float).reshape(-1)
    if np.any(eigs < 0):
        raise DomainError("quadratic game needs nonnegative eigenvalues")
    d = eigs.size
    field = AffineVectorField(np.diag(eigs), np.zeros(d))
    return GameProblem(
        field=field,
        d1=d,
        d2=0,
        stationary_point=np.zeros(d),
        provenance={"generator": "quadratic", "params": {"spectrum": eigs.tolist()}},
    )


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform orthogonal matrix: QR of an iid Gaussian matrix with the
    R-diagonal sign correction."""
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def _random_psd(n: int, rng: np.random.Generator) -> np.ndarray:
    # chi-squared(1) eigenvalues: squares of standard normals.
    lam = rng.standard_normal(n) ** 2
    o = haar_orthogonal(n, rng)
    s = o.T @ np.diag(lam) @ o
    return (s + s.T) / 2.0


def random_monotone_game(d1: int, d2: int, seed) -> GameProblem:
    """Two-player zero-sum random monotone matrix game.

    Jacobian [[S1, A], [-A^T, S2]] with S1, S2 symmetric PSD built as
    O^T diag(chi-squared draws) O for Haar-uniform O, and A with iid
    standard normal entries.  Deterministic given ``seed`` (numpy PCG64
    stream; ``seed`` may be an int or a sequence of ints for substreams).
    """
    if d1 < 1 or d2 < 1:
        raise DomainError("player dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    s1 = _random_psd(d1, rng)
    s2 = _random_psd(d2, rng)
    a = rng.standard_normal((d1, d2))
    field = _saddle_field(s1, a, s2)
    seed_repr = list(seed) if isinstance(seed, (list, tuple)) else seed
    return GameProblem(
        field=field,
        d1=d1,
        d2=d2,
        stationary_point=np.zeros(d1 + d2),
        provenance={
            "generator": "random_monotone",
            "params": {"d1": d1, "d2": d2, "chi_squared_dof": 1},
            "seed": seed_repr,
        },
    )


def random_strongly_monotone_field(
    d: int, seed, margin_range: Sequence[float] = (0.05, 0.5)
) -> GameProblem:
    """Random monotone game shifted to mu > 0 by adding delta * I.

    Used by the global-rate test suites, which need strong monotonicity.
    """
    if d < 2 or d % 2:
        raise DomainError("dimension must be even and >= 2")
    rng = np.random.default_rng(seed)
    base = random_monotone_game(d // 2, d // 2, seed=rng.integers(2**63))
    delta = float(rng.uniform(*margin_range))
    jac = base.field.jacobian + delta * np.eye(d)
    return GameProblem(
        field=AffineVectorField(jac, np.zeros(d)),
        d1=d // 2,
        d2=d // 2,
        stationary_point=np.zeros(d),
        provenance={
            "generator": "random_strongly_monotone",
            "params": {"d": d, "delta": delta},
            "seed": list(seed) if isinstance(seed, (list, tuple)) else seed,
        },
    )
