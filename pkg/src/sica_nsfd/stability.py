"""Schur-Cohn (Jury) root-location test and local stability of the DFE.

The characteristic polynomial is taken monic,
``p(z) = z^k + p_1 z^(k-1) + ... + p_k``, and stored as ``(p_1, ..., p_k)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParameters, NumericalFailure
from .model import DerivedConstants, ModelParams, derived_constants

# |root| within this of 1 counts as "on the circle"
BORDERLINE_TOL = 1e-9
# zero-threshold for the Schur-Cohn condition values and Eq.-(9) divisors
ZERO_TOL = 1e-12
MAX_DIM = 8


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if len(c) < 1:
            raise InvalidParameters("polynomial degree must be >= 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full(self) -> list[float]:
        """Coefficients highest power first, leading 1 included."""
        return [1.0, *self.coeffs]

    def __call__(self, z):
        out = 1.0
        for c in self.coeffs:
            out = out * z + c
        return out


def _as_poly(poly) -> Polynomial:
    return poly if isinstance(poly, Polynomial) else Polynomial(tuple(poly))


def det(m) -> float:
    """Determinant; cofactor expansion up to 4x4, LU beyond."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n):
        raise InvalidParameters(f"matrix must be square, got {m.shape}")
    if n == 0:
        return 1.0
    if n == 1:
        return float(m[0, 0])
    if n == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if n <= 4:
        total = 0.0
        for j in range(n):
            if m[0, j] != 0.0:
                minor = np.delete(m[1:], j, axis=1)
                total += (-1) ** j * m[0, j] * det(minor)
        return float(total)
    return float(np.linalg.det(m))


def inners(m) -> list[np.ndarray]:
    """The matrix and its successive central sub-blocks, down to size 1 or 2."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidParameters(f"matrix must be square, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise InvalidParameters(f"matrix dimension {m.shape[0]} exceeds {MAX_DIM}")
    out = [m]
    while out[-1].shape[0] > 2:
        out.append(out[-1][1:-1, 1:-1])
    return out


def jury_matrices(poly) -> tuple[np.ndarray, np.ndarray]:
    """The (k-1)x(k-1) matrices B+ and B- of the innerwise condition.

    B = T +/- H with T lower-triangular Toeplitz in (1, p_1, ..., p_{k-2})
    and H the anti-triangular Hankel block in (p_k, ..., p_2).
    """
    poly = _as_poly(poly)
    k = poly.degree
    P = poly.full()  # P[j] = p_j, P[0] = 1
    m = k - 1
    T = np.zeros((m, m))
    H = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            if i >= j:
                T[i, j] = P[i - j]
            if i + j >= m - 1:
                H[i, j] = P[2 * k - 2 - i - j]
    return T + H, T - H


class RootLocation(str, enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    INCONCLUSIVE = "inconclusive"


@dataclass
class SchurCohnResult:
    """Outcome of the Schur-Cohn test.

    ``inside`` is ``False`` as soon as one condition value is clearly negative,
    and ``None`` when none is negative but some lies within ``ZERO_TOL`` of
    zero, i.e. a root sits (numerically) on the unit circle.
    """

    inside: bool | None
    p_at_1: float
    p_at_minus1: float  # (-1)^k p(-1)
    plus_dets: list[float] = field(default_factory=list)
    minus_dets: list[float] = field(default_factory=list)

    @property
    def location(self) -> RootLocation:
        if self.inside is None:
            return RootLocation.INCONCLUSIVE
        return RootLocation.INSIDE if self.inside else RootLocation.OUTSIDE

    @property
    def margin(self) -> float:
        return min([self.p_at_1, self.p_at_minus1, *self.plus_dets, *self.minus_dets])


def schur_cohn(poly) -> SchurCohnResult:
    poly = _as_poly(poly)
    k = poly.degree
    p1 = poly(1.0)
    pm1 = (-1) ** k * poly(-1.0)
    plus, minus = [], []
    if k > 1:
        Bp, Bm = jury_matrices(poly)
        plus = [det(x) for x in inners(Bp)]
        minus = [det(x) for x in inners(Bm)]
    values = [p1, pm1, *plus, *minus]
    if any(v < -ZERO_TOL for v in values):
        inside = False
    elif any(abs(v) <= ZERO_TOL for v in values):
        inside = None
    else:
        inside = True
    return SchurCohnResult(inside, p1, pm1, plus, minus)


def polynomial_roots(poly) -> np.ndarray:
    """Eigenvalues of the companion matrix."""
    poly = _as_poly(poly)
    k = poly.degree
    comp = np.zeros((k, k))
    comp[0, :] = -np.asarray(poly.coeffs)
    if k > 1:
        comp[1:, :-1] = np.eye(k - 1)
    roots = np.linalg.eigvals(comp)
    if not np.all(np.isfinite(roots)):
        raise NumericalFailure("companion eigenvalues did not converge")
    return roots


def roots_inside_unit_disk_oracle(poly) -> bool | None:
    """Root-based check: ``True`` if every root has modulus < 1 - 1e-9.

    Returns ``None`` when some root lies within ``BORDERLINE_TOL`` of the circle.
    """
    poly = _as_poly(poly)
    if poly.degree > MAX_DIM:
        raise InvalidParameters(f"degree {poly.degree} exceeds {MAX_DIM}")
    r = np.abs(polynomial_roots(poly))
    if np.any(np.abs(r - 1.0) <= BORDERLINE_TOL):
        return None
    return bool(r.max() < 1.0 - BORDERLINE_TOL)


# -- the DFE of the SICA model --------------------------------------------------

def jacobian_dfe(p: ModelParams) -> np.ndarray:
    k = derived_constants(p)
    b = p.beta
    return np.array([
        [-p.mu, -b, -b * p.eta_C, -b * p.eta_A],
        [0.0, b - k.C1, b * p.eta_C + p.omega, b * p.eta_A + p.alpha],
        [0.0, p.phi, -k.C3, 0.0],
        [0.0, p.rho, 0.0, -k.C2],
    ])


@dataclass(frozen=True)
class CharPoly4:
    p1: float
    p2: float
    p3: float
    p4: float
    constants: DerivedConstants

    @property
    def coeffs(self) -> tuple[float, float, float, float]:
        return self.p1, self.p2, self.p3, self.p4

    def polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)


def char_poly_dfe(p: ModelParams) -> CharPoly4:
    """Closed-form coefficients of ``det(z I - J(E0))``."""
    k = derived_constants(p)
    C1, C2, C3, mu, b = k.C1, k.C2, k.C3, p.mu, p.beta
    r0 = k.r0
    cross = (b * p.eta_A + p.alpha) * p.rho + (b * p.eta_C + p.omega) * p.phi
    inner = (C1 - b) * (C2 + C3) + C2 * C3 - cross
    p1 = C1 + C2 + C3 + mu - b
    p2 = mu * (C1 + C2 + C3 - b) + inner
    p3 = mu * inner + k.D_script * (1 - r0)
    p4 = mu * k.D_script * (1 - r0)
    return CharPoly4(p1, p2, p3, p4, k)


def char_poly_numeric(p: ModelParams) -> np.ndarray:
    """``(p1..p4)`` from the eigenvalues of J(E0)."""
    return np.real(np.poly(jacobian_dfe(p))[1:])


class Verdict(str, enum.Enum):
    LOCALLY_STABLE = "LocallyStable"
    UNSTABLE = "Unstable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Condition:
    """``lhs < rhs`` style check. ``lhs``/``rhs`` are ``None`` when undefined."""

    holds: bool | None
    lhs: float | None
    rhs: float | None

    def to_dict(self) -> dict:
        def clean(v):
            return None if v is None or not math.isfinite(v) else float(v)
        return {"holds": self.holds, "lhs": clean(self.lhs), "rhs": clean(self.rhs)}


def _less(lhs: float, rhs: float) -> Condition:
    return Condition(bool(lhs < rhs), lhs, rhs)


def _safe_div(a: float, b: float) -> float:
    if b == 0.0:
        return math.copysign(math.inf, a) if a != 0 else math.nan
    return a / b


@dataclass
class StabilityReport:
    r0: float
    char_poly: CharPoly4
    conditions: dict[str, Condition]
    schur_cohn: SchurCohnResult
    verdict: Verdict

    # conditions entering the local-stability theorem
    THEOREM_KEYS = ("r0_below_one", "c2_below_one", "c3_below_one", "beta_bound",
                    "p2_bound", "mu_bound", "sandwich_lower", "sandwich_upper")

    def to_dict(self) -> dict:
        out = {"r0": self.r0, "verdict": self.verdict.value,
               "char_poly": dict(zip(("p1", "p2", "p3", "p4"), self.char_poly.coeffs))}
        out["conditions"] = {name: c.to_dict() for name, c in self.conditions.items()}
        return out


def dfe_local_stability(p: ModelParams) -> StabilityReport:
    cp = char_poly_dfe(p)
    k = cp.constants
    r0 = k.r0
    p1, p2, p3, p4 = cp.coeffs
    C2, C3, mu, b = k.C2, k.C3, p.mu, p.beta
    sc = schur_cohn(cp.polynomial())

    cond: dict[str, Condition] = {}
    cond["r0_below_one"] = _less(r0, 1.0)
    cond["p_at_1_positive"] = Condition(sc.p_at_1 > 0, sc.p_at_1, 0.0)
    cond["p_at_minus1_positive"] = Condition(sc.p_at_minus1 > 0, sc.p_at_minus1, 0.0)
    cond["b_plus_innerwise"] = Condition(min(sc.plus_dets) > 0, min(sc.plus_dets), 0.0)
    cond["b_minus_innerwise"] = Condition(min(sc.minus_dets) > 0, min(sc.minus_dets), 0.0)
    cond["schur_cohn"] = Condition(sc.inside, sc.margin, 0.0)
    cond["c2_below_one"] = _less(C2, 1.0)
    cond["c3_below_one"] = _less(C3, 1.0)
    beta_rhs = _safe_div(C2 * C3, (1 - C2) * (1 - C3))
    cond["beta_bound"] = Condition(bool(C2 < 1 and C3 < 1 and b < beta_rhs), b, beta_rhs)
    cond["p2_bound"] = _less(p2, 1 + p4)
    mu_rhs = _safe_div(1.0, k.D_script * (1 - r0))
    cond["mu_bound"] = Condition(bool(r0 < 1 and mu < mu_rhs), mu, mu_rhs)

    # sandwich: -(1-p4^2)(1+p2+p4)/(p1+p3) < p4 p1 - p3 < (1-p4)^2 (1+p4-p2)/(p1-p3)
    mid = p4 * p1 - p3
    if abs(p1 + p3) <= ZERO_TOL:
        det_plus = (1 - p4**2) * (1 + p2 + p4) + (p1 + p3) * mid
        cond["sandwich_lower"] = Condition(det_plus > 0, 0.0, det_plus)
    else:
        cond["sandwich_lower"] = _less(-(1 - p4**2) * (1 + p2 + p4) / (p1 + p3), mid)
    if abs(p1 - p3) <= ZERO_TOL:
        det_minus = (1 - p4) ** 2 * (1 + p4 - p2) - (p1 - p3) * mid
        cond["sandwich_upper"] = Condition(det_minus > 0, 0.0, det_minus)
    else:
        cond["sandwich_upper"] = _less(mid, (1 - p4) ** 2 * (1 + p4 - p2) / (p1 - p3))
    cond["lemma_beta"] = _less(b, k.C1)

    if r0 > 1 or sc.inside is False:
        verdict = Verdict.UNSTABLE
    elif all(cond[key].holds for key in StabilityReport.THEOREM_KEYS):
        verdict = Verdict.LOCALLY_STABLE
    else:
        verdict = Verdict.INCONCLUSIVE
    return StabilityReport(r0, cp, cond, sc, verdict)
