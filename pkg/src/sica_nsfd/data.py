"""Cape Verde HIV/AIDS series (1987-2014) and model-vs-data fit metrics."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .exceptions import HorizonTooShort, LengthMismatch
from .nsfd import Trajectory

FIRST_YEAR = 1987

# (year, cumulative HIV/AIDS cases, total population)
_CAPE_VERDE = (
    (1987, 61, 323972), (1988, 107, 328861), (1989, 160, 334473),
    (1990, 211, 341256), (1991, 244, 349326), (1992, 303, 358473),
    (1993, 337, 368423), (1994, 358, 378763), (1995, 395, 389156),
    (1996, 432, 399508), (1997, 471, 409805), (1998, 560, 419884),
    (1999, 660, 429576), (2000, 779, 438737), (2001, 913, 447357),
    (2002, 1064, 455396), (2003, 1233, 462675), (2004, 1493, 468985),
    (2005, 1716, 474224), (2006, 2015, 478265), (2007, 2334, 481278),
    (2008, 2610, 483824), (2009, 2929, 486673), (2010, 3340, 490379),
    (2011, 3739, 495159), (2012, 4090, 500870), (2013, 4537, 507258),
    (2014, 4946, 513906),
)


@dataclass(frozen=True)
class ObservedSeries:
    years: tuple[int, ...]
    cases: tuple[int, ...]
    population: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.years)

    def record(self, year: int) -> tuple[int, int]:
        i = self.years.index(year)
        return self.cases[i], self.population[i]

    def to_csv(self) -> str:
        lines = ["year,cases,population"]
        lines += [f"{y},{c},{n}" for y, c, n in zip(self.years, self.cases, self.population)]
        return "\n".join(lines) + "\n"


def load_cape_verde() -> ObservedSeries:
    years, cases, pop = zip(*_CAPE_VERDE)
    return ObservedSeries(years, cases, pop)


def golden_csv_text() -> str:
    """Contents of the CSV copy of the dataset shipped with the package."""
    return resources.files("sica_nsfd").joinpath("resources/cape_verde.csv").read_text()


def read_observed_csv(text: str) -> ObservedSeries:
    rows = list(csv.DictReader(text.splitlines()))
    return ObservedSeries(
        tuple(int(r["year"]) for r in rows),
        tuple(int(r["cases"]) for r in rows),
        tuple(int(r["population"]) for r in rows),
    )


def cumulative_cases(traj: Trajectory, n_years: int | None = None) -> np.ndarray:
    """Accumulated incidence sampled at whole years.

    ``K_0 = I_0 + C_0 + A_0`` and ``K_{n+1} = K_n + psi lam_n S_{n+1}``, the
    new-infection inflow of each step. ``n_years`` defaults to the whole
    trajectory horizon; the result has ``n_years + 1`` entries.
    """
    steps_per_year = 1.0 / traj.h
    spy = int(round(steps_per_year))
    if spy < 1 or abs(spy - steps_per_year) > 1e-9 * steps_per_year:
        raise HorizonTooShort(f"step h={traj.h} does not divide one year")
    available = (len(traj) - 1) // spy
    if n_years is None:
        n_years = available
    if n_years > available:
        raise HorizonTooShort(f"trajectory covers {available} years, {n_years} requested")
    psi_val = traj.psi if traj.psi is not None else traj.h
    lam = traj.force_of_infection()
    x = traj.states
    inflow = psi_val * lam[:-1] * x[1:, 0]
    K = x[0, 1] + x[0, 2] + x[0, 3] + np.concatenate([[0.0], np.cumsum(inflow)])
    return K[: n_years * spy + 1: spy]


@dataclass
class FitReport:
    years: np.ndarray
    model: np.ndarray
    observed: np.ndarray
    residuals: np.ndarray
    rmse: float
    max_abs_error: float

    def to_dict(self) -> dict:
        return {
            "years": [int(y) for y in self.years],
            "model": [float(v) for v in self.model],
            "observed": [float(v) for v in self.observed],
            "residuals": [float(v) for v in self.residuals],
            "rmse": self.rmse,
            "max_abs_error": self.max_abs_error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        lines = ["year,observed,model,residual"]
        for y, o, m, r in zip(self.years, self.observed, self.model, self.residuals):
            lines.append(f"{int(y)},{o:.17g},{m:.17g},{r:.17g}")
        return "\n".join(lines) + "\n"


def fit_metrics(model, obs) -> FitReport:
    """Residuals ``model - observed``, RMSE and max absolute error.

    ``obs`` is an :class:`ObservedSeries` or a plain array aligned with ``model``.
    """
    model = np.asarray(model, dtype=float)
    if isinstance(obs, ObservedSeries):
        observed = np.asarray(obs.cases, dtype=float)
        years = np.asarray(obs.years)
    else:
        observed = np.asarray(obs, dtype=float)
        years = FIRST_YEAR + np.arange(observed.size)
    if model.shape != observed.shape:
        raise LengthMismatch(f"model has {model.size} points, observations {observed.size}")
    res = model - observed
    rmse = math.sqrt(float(np.mean(res**2)))
    return FitReport(years, model, observed, res, rmse, float(np.max(np.abs(res))))
