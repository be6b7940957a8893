"""Continuous SICA model: parameters, right-hand side, R0 and equilibria.

All rates are per year and populations are head counts.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import asdict, dataclass, fields, replace
from os import PathLike
from typing import Iterator, Mapping

import numpy as np

from .exceptions import InvalidParameters, NoEndemicEquilibrium, ZeroPopulation

PARAM_NAMES = ("Lambda", "mu", "beta", "phi", "rho", "alpha", "omega", "d", "eta_C", "eta_A")

# R0 within this distance of 1 is treated as the threshold itself.
R0_THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """The ten epidemiological rates of the SICA model.

    Parameters
    ----------
    Lambda : float
        Recruitment rate (individuals / year).
    mu : float
        Natural death rate.
    beta : float
        HIV transmission rate.
    phi : float
        Treatment rate moving I into the chronic class C.
    rho : float
        Progression rate from I to AIDS.
    alpha : float
        AIDS treatment rate (A back to I).
    omega : float
        Treatment default rate (C back to I).
    d : float
        AIDS-induced death rate.
    eta_C, eta_A : float
        Relative infectiousness of C and A compared to I.
    """

    Lambda: float
    mu: float
    beta: float
    phi: float
    rho: float
    alpha: float
    omega: float
    d: float
    eta_C: float
    eta_A: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidParameters(f"{f.name} must be a number, got {value!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidParameters(f"{f.name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, f.name, value)
        if self.eta_C > 1.0:
            warnings.warn(f"eta_C={self.eta_C} > 1: chronic individuals more infectious than I",
                          UserWarning, stacklevel=3)
        if self.eta_A < 1.0:
            warnings.warn(f"eta_A={self.eta_A} < 1: AIDS individuals less infectious than I",
                          UserWarning, stacklevel=3)

    @classmethod
    def from_mapping(cls, data: Mapping[str, float]) -> "ModelParams":
        missing = [k for k in PARAM_NAMES if k not in data]
        extra = [k for k in data if k not in PARAM_NAMES]
        if missing or extra:
            raise InvalidParameters(f"bad parameter keys: missing={missing} unexpected={extra}")
        return cls(**{k: data[k] for k in PARAM_NAMES})

    @classmethod
    def from_json(cls, path: str | PathLike) -> "ModelParams":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameters(f"cannot read parameters from {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidParameters("parameter JSON must be a flat object")
        return cls.from_mapping(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedConstants:
    C1: float
    C2: float
    C3: float
    N_script: float
    D_script: float

    @property
    def r0(self) -> float:
        return self.N_script / self.D_script


@dataclass(frozen=True)
class State:
    """One (S, I, C, A) compartment vector; components must be >= 0."""

    S: float
    I: float
    C: float
    A: float

    def __post_init__(self):
        for name in ("S", "I", "C", "A"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0.0):
                raise InvalidParameters(f"compartment {name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, x) -> "State":
        S, I, C, A = (float(v) for v in x)
        return cls(S, I, C, A)

    @property
    def N(self) -> float:
        return self.S + self.I + self.C + self.A

    def as_array(self) -> np.ndarray:
        return np.array([self.S, self.I, self.C, self.A])

    def __iter__(self) -> Iterator[float]:
        return iter((self.S, self.I, self.C, self.A))


class EquilibriumKind(str, enum.Enum):
    DFE = "DFE"
    ENDEMIC = "Endemic"


@dataclass(frozen=True)
class Equilibrium:
    kind: EquilibriumKind
    state: State
    lambda_star: float


def derived_constants(p: ModelParams) -> DerivedConstants:
    C1 = p.rho + p.phi + p.mu
    C2 = p.alpha + p.mu + p.d
    C3 = p.omega + p.mu
    N_script = p.beta * (C2 * C3 + C3 * p.eta_A * p.rho + C2 * p.eta_C * p.phi)
    D_script = C1 * C2 * C3 - C3 * p.alpha * p.rho - C2 * p.omega * p.phi
    return DerivedConstants(C1, C2, C3, N_script, D_script)


def basic_reproduction_number(p: ModelParams) -> float:
    return derived_constants(p).r0


def _infectious_load(p: ModelParams, I, C, A):
    return I + p.eta_C * C + p.eta_A * A


def force_of_infection(p: ModelParams, s) -> float:
    """beta * (I + eta_C C + eta_A A) / N."""
    S, I, C, A = s
    N = S + I + C + A
    if N == 0:
        raise ZeroPopulation("force of infection undefined for N = 0")
    return p.beta * _infectious_load(p, I, C, A) / N


def rhs(p: ModelParams, s) -> np.ndarray:
    """Time derivative (dS, dI, dC, dA) of the continuous model.

    Accepts a :class:`State` or any length-4 sequence, including states
    with negative entries produced by the reference integrators.
    """
    S, I, C, A = (float(v) for v in s)
    lam = force_of_infection(p, (S, I, C, A))
    C1 = p.rho + p.phi + p.mu
    return np.array([
        p.Lambda - lam * S - p.mu * S,
        lam * S - C1 * I + p.alpha * A + p.omega * C,
        p.phi * I - (p.omega + p.mu) * C,
        p.rho * I - (p.alpha + p.mu + p.d) * A,
    ])


def dfe(p: ModelParams) -> Equilibrium:
    return Equilibrium(EquilibriumKind.DFE, State(p.Lambda / p.mu, 0.0, 0.0, 0.0), 0.0)


def endemic_equilibrium(p: ModelParams) -> Equilibrium:
    """Closed-form endemic point; requires R0 > 1.

    The force of infection at equilibrium is
    ``lambda* = D (R0 - 1) / (C2 C3 + phi C2 + rho C3)`` and the compartments
    follow from ``S* = Lambda / (lambda* + mu)`` and
    ``I* : C* : A* = C2 C3 : phi C2 : rho C3`` scaled by ``S* lambda* / D``.
    """
    k = derived_constants(p)
    r0 = k.r0
    if r0 - 1.0 <= R0_THRESHOLD_TOL:
        raise NoEndemicEquilibrium(f"R0 = {r0:.6g} <= 1: only the disease-free equilibrium exists")
    lam = k.D_script * (r0 - 1.0) / (k.C2 * k.C3 + p.phi * k.C2 + p.rho * k.C3)
    S = p.Lambda / (lam + p.mu)
    scale = S * lam / k.D_script
    I = scale * k.C2 * k.C3
    C = scale * p.phi * k.C2
    A = scale * p.rho * k.C3

    # second closed form for S*, independent of lambda*
    rdc = p.rho * p.d * k.C3
    S_alt = p.Lambda * (k.D_script - rdc) / (p.mu * (k.N_script - rdc))
    if not math.isclose(S, S_alt, rel_tol=1e-10):
        raise NoEndemicEquilibrium(f"inconsistent endemic point: S*={S!r} vs {S_alt!r}")
    return Equilibrium(EquilibriumKind.ENDEMIC, State(S, I, C, A), lam)


def equilibria(p: ModelParams) -> list[Equilibrium]:
    """DFE, followed by the endemic point when it exists."""
    out = [dfe(p)]
    try:
        out.append(endemic_equilibrium(p))
    except NoEndemicEquilibrium:
        pass
    return out


def equilibrium_residual(p: ModelParams, eq: Equilibrium) -> float:
    """Max |rhs| relative to the equilibrium's total population."""
    return float(np.max(np.abs(rhs(p, eq.state)))) / eq.state.N
