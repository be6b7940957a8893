"""Mickens nonstandard finite-difference (NSFD) discretization of the SICA model.

One step solves the implicit-looking scheme

    (S+ - S)/psi = Lambda - lam_n S+ - mu S+
    (I+ - I)/psi = lam_n S+ - C1 I+ + alpha A+ + omega C+
    (C+ - C)/psi = phi I+ - C3 C+
    (A+ - A)/psi = rho I+ - C2 A+

with ``lam_n`` evaluated at the old state. The system is linear in the new
values and is solved in closed form in the order S, I, then C and A.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from os import PathLike
from typing import IO

import numpy as np

from .exceptions import (
    InvalidParameters,
    NonpositiveCompartment,
    NonpositiveStep,
    TrajectoryTooShort,
    ZeroPopulation,
)
from .model import ModelParams, State, derived_constants, endemic_equilibrium

LYAPUNOV_SLACK = 1e-12
# Relative epsilon for the S_{n+1} < Lambda/mu + eps transient threshold.
DFE_EPSILON = 1e-6

CSV_HEADER = ("n", "t", "S", "I", "C", "A", "N")


class Denominator(str, enum.Enum):
    MICKENS = "mickens"
    IDENTITY = "identity"


def psi(fn: Denominator | str, mu: float, h: float) -> float:
    """Denominator function: ``(exp(mu h) - 1)/mu`` or plain ``h``."""
    fn = Denominator(fn)
    if not h > 0:
        raise NonpositiveStep(f"step size must be > 0, got {h!r}")
    if not mu > 0:
        raise InvalidParameters(f"mu must be > 0, got {mu!r}")
    if fn is Denominator.IDENTITY:
        return float(h)
    return math.expm1(mu * h) / mu


def i_update_denominator(p: ModelParams, psi_val: float) -> float:
    """Denominator of the explicit I-update, as the product form."""
    k = derived_constants(p)
    a2, a3 = 1 + k.C2 * psi_val, 1 + k.C3 * psi_val
    return ((1 + k.C1 * psi_val) * a2 * a3
            - p.alpha * p.rho * psi_val**2 * a3
            - p.omega * p.phi * psi_val**2 * a2)


def i_update_denominator_coeffs(p: ModelParams) -> tuple[float, float, float, float]:
    """Coefficients (1, c1, c2, c3) of the I-update denominator as a cubic in psi.

    Every coefficient is a sum of positive terms, which is what makes the
    scheme positivity preserving for any step size.
    """
    k = derived_constants(p)
    mu, phi, rho, omega, d = p.mu, p.phi, p.rho, p.omega, p.d
    c1 = k.C1 + k.C2 + k.C3
    c2 = k.C2 * (2 * mu + phi + omega) + k.C3 * (mu + rho) + mu * (phi + rho) + rho * d
    c3 = k.C3 * rho * (mu + d) + k.C2 * mu * (k.C3 + phi)
    return 1.0, c1, c2, c3


def _step_values(p: ModelParams, C1, C2, C3, S, I, C, A, psi_val):
    N = S + I + C + A
    if N == 0:
        raise ZeroPopulation("total population is zero")
    lam = p.beta * (I + p.eta_C * C + p.eta_A * A) / N
    S1 = (S + p.Lambda * psi_val) / (1 + p.mu * psi_val + psi_val * lam)
    a2 = 1 + C2 * psi_val
    a3 = 1 + C3 * psi_val
    num = ((I + psi_val * lam * S1) * a2 * a3
           + p.alpha * psi_val * A * a3
           + p.omega * psi_val * C * a2)
    den = ((1 + C1 * psi_val) * a2 * a3
           - p.alpha * p.rho * psi_val**2 * a3
           - p.omega * p.phi * psi_val**2 * a2)
    I1 = num / den
    C1_ = (p.phi * psi_val * I1 + C) / a3
    A1 = (p.rho * psi_val * I1 + A) / a2
    return S1, I1, C1_, A1, lam


def nsfd_step(p: ModelParams, s_n, psi_val: float) -> State:
    """Advance one NSFD step from ``s_n`` with denominator value ``psi_val``."""
    k = derived_constants(p)
    S, I, C, A = s_n
    S1, I1, C1, A1, _ = _step_values(p, k.C1, k.C2, k.C3, S, I, C, A, psi_val)
    return State(S1, I1, C1, A1)


@dataclass
class Trajectory:
    """Time-indexed states ``states[n] = (S_n, I_n, C_n, A_n)`` at ``t = n h``.

    ``lam`` holds the force of infection evaluated at each state (same length
    as ``states``); ``psi`` is ``None`` for the classical reference schemes.
    """

    params: ModelParams
    h: float
    states: np.ndarray
    psi: float | None = None
    denominator: Denominator | None = Denominator.MICKENS
    scheme: str = "nsfd"
    lam: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.states)) * self.h

    @property
    def S(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def I(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def C(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def A(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def N(self) -> np.ndarray:
        return self.states.sum(axis=1)

    def state(self, n: int) -> State:
        return State.from_array(self.states[n])

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def force_of_infection(self) -> np.ndarray:
        if self.lam is None:
            p = self.params
            S, I, C, A = self.states.T
            self.lam = p.beta * (I + p.eta_C * C + p.eta_A * A) / (S + I + C + A)
        return self.lam


def simulate(p: ModelParams, s0, h: float, n_steps: int,
             fn: Denominator | str = Denominator.MICKENS) -> Trajectory:
    """Iterate :func:`nsfd_step` ``n_steps`` times from ``s0``."""
    fn = Denominator(fn)
    if n_steps < 0:
        raise InvalidParameters(f"n_steps must be >= 0, got {n_steps}")
    s0 = s0 if isinstance(s0, State) else State.from_array(s0)
    psi_val = psi(fn, p.mu, h)
    k = derived_constants(p)

    out = np.empty((n_steps + 1, 4))
    lam = np.empty(n_steps + 1)
    S, I, C, A = s0
    out[0] = S, I, C, A
    for n in range(n_steps):
        S, I, C, A, lam[n] = _step_values(p, k.C1, k.C2, k.C3, S, I, C, A, psi_val)
        out[n + 1] = S, I, C, A
    S, I, C, A = out[-1]
    lam[-1] = p.beta * (I + p.eta_C * C + p.eta_A * A) / (S + I + C + A)
    return Trajectory(p, float(h), out, psi_val, fn, "nsfd", lam)


def gronwall_bound(p: ModelParams, N0: float, psi_val: float, n) -> float | np.ndarray:
    """Upper bound ``Lambda/mu + (N0 - Lambda/mu) (1 + mu psi)^-n`` on ``N_n``."""
    K = p.Lambda / p.mu
    n = np.asarray(n, dtype=float)
    out = K + (N0 - K) * (1.0 + p.mu * psi_val) ** (-n)
    return float(out) if out.ndim == 0 else out


def conservation_violations(traj: Trajectory, atol_frac: float = 1e-9) -> np.ndarray:
    """Indices where ``N_n`` exceeds the discrete Gronwall bound."""
    p = traj.params
    psi_val = traj.psi if traj.psi is not None else traj.h
    n = np.arange(len(traj))
    bound = gronwall_bound(p, traj.N[0], psi_val, n)
    return np.flatnonzero(traj.N > bound + atol_frac * p.Lambda / p.mu)


def g(x):
    """``x - 1 - ln x``; nonnegative with its only zero at ``x = 1``."""
    u = np.asarray(x, dtype=float) - 1.0
    return u - np.log1p(u)


class LyapunovKind(str, enum.Enum):
    DFE = "dfe"
    EE = "ee"


@dataclass
class LyapunovSeries:
    """Values of a Lyapunov sequence along a trajectory.

    ``index[i]`` is the trajectory step at which ``values[i]`` is evaluated.
    ``checked[i]`` says whether ``differences[i] = values[i+1] - values[i]``
    falls in the range where monotonicity is claimed.
    """

    kind: LyapunovKind
    values: np.ndarray
    index: np.ndarray
    checked: np.ndarray

    @property
    def differences(self) -> np.ndarray:
        return np.diff(self.values)

    def violations(self, slack: float = LYAPUNOV_SLACK) -> np.ndarray:
        return self.index[:-1][self.checked & (self.differences > slack)]

    def is_monotone(self, slack: float = LYAPUNOV_SLACK) -> bool:
        return len(self.violations(slack)) == 0


def _psi_of(traj: Trajectory) -> float:
    return traj.psi if traj.psi is not None else traj.h


def lyapunov_dfe(p: ModelParams, traj: Trajectory,
                 epsilon: float = DFE_EPSILON) -> LyapunovSeries:
    """``V(n) = I_n + (omega/C3) C_n + (alpha/C2) A_n + psi lam_n S_{n+1}``.

    Needs ``S_{n+1}``, so the series is one shorter than the trajectory.
    Differences are flagged as checked once ``S_{n+1} < (1 + epsilon) Lambda/mu``
    holds for that index and every later one.
    """
    if len(traj) < 2:
        raise TrajectoryTooShort("V(n) needs at least two states")
    k = derived_constants(p)
    psi_val = _psi_of(traj)
    x = traj.states
    S, I, C, A = x[:-1].T
    lam = p.beta * (I + p.eta_C * C + p.eta_A * A) / (S + I + C + A)
    S_next = x[1:, 0]
    V = I + (p.omega / k.C3) * C + (p.alpha / k.C2) * A + psi_val * lam * S_next

    below = S_next < (1.0 + epsilon) * p.Lambda / p.mu
    # past the transient: the threshold holds from this index onward
    settled = np.flip(np.logical_and.accumulate(np.flip(below)))
    return LyapunovSeries(LyapunovKind.DFE, V, np.arange(len(V)), settled[:-1].copy())


def lyapunov_ee(p: ModelParams, traj: Trajectory, start: int = 0) -> LyapunovSeries:
    """Volterra-type sequence centred at the endemic point, from step ``start``.

    ``V~(n) = g(S/S*)/(psi I*) + g(I/I*)/(psi S*)
    + omega C*/(psi C3 S* I*) g(C/C*) + alpha A*/(psi C2 S* I*) g(A/A*)``.
    """
    eq = endemic_equilibrium(p)  # raises NoEndemicEquilibrium
    if len(traj) - start < 1:
        raise TrajectoryTooShort("no states past start index")
    x = traj.states[start:]
    if np.any(x <= 0):
        n_bad = start + int(np.flatnonzero((x <= 0).any(axis=1))[0])
        raise NonpositiveCompartment(f"state {n_bad} has a nonpositive compartment; ln undefined")
    k = derived_constants(p)
    psi_val = _psi_of(traj)
    Ss, Is, Cs, As = eq.state
    S, I, C, A = x.T
    V = (g(S / Ss) / (psi_val * Is)
         + g(I / Is) / (psi_val * Ss)
         + p.omega * Cs / (psi_val * k.C3 * Ss * Is) * g(C / Cs)
         + p.alpha * As / (psi_val * k.C2 * Ss * Is) * g(A / As))
    idx = np.arange(start, start + len(V))
    return LyapunovSeries(LyapunovKind.EE, V, idx, np.ones(max(len(V) - 1, 0), dtype=bool))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(traj: Trajectory, dest: str | PathLike | IO[str]) -> None:
    """Write ``n,t,S,I,C,A,N`` rows with 17 significant digits."""
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        N = traj.N
        for n, row in enumerate(traj.states):
            w.writerow([n, _fmt(n * traj.h), *(_fmt(v) for v in row), _fmt(N[n])])

    if hasattr(dest, "write"):
        _write(dest)
    else:
        with open(dest, "w", newline="") as fh:
            _write(fh)


def read_trajectory_csv(src: str | PathLike | IO[str]) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(t, states)`` from a trajectory CSV."""
    if hasattr(src, "read"):
        rows = list(csv.reader(src))
    else:
        with open(src, newline="") as fh:
            rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise InvalidParameters(f"not a trajectory CSV (header {rows[:1]})")
    data = np.array([[float(v) for v in r] for r in rows[1:]]).reshape(-1, 7)
    return data[:, 1], data[:, 2:6]
