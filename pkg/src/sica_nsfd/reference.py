"""Classical fixed-step integrators for the continuous model.

These are the baseline the NSFD scheme is compared against. States are plain
arrays and are allowed to go negative: clamping would hide exactly the
failure being demonstrated.
"""

from __future__ import annotations

import enum
from typing import Iterable

import numpy as np

from .exceptions import InvalidParameters, NonpositiveStep, SICAError
from .model import ModelParams, State, rhs
from .nsfd import Denominator, Trajectory, simulate


class Scheme(str, enum.Enum):
    EULER = "euler"
    RK4 = "rk4"
    NSFD = "nsfd"


def reference_step(scheme: Scheme | str, p: ModelParams, s, h: float) -> np.ndarray:
    scheme = Scheme(scheme)
    if not h > 0:
        raise NonpositiveStep(f"step size must be > 0, got {h!r}")
    s = np.asarray(tuple(s), dtype=float)
    if scheme is Scheme.EULER:
        return s + h * rhs(p, s)
    if scheme is Scheme.RK4:
        k1 = rhs(p, s)
        k2 = rhs(p, s + 0.5 * h * k1)
        k3 = rhs(p, s + 0.5 * h * k2)
        k4 = rhs(p, s + h * k3)
        return s + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    raise InvalidParameters("use nsfd.nsfd_step for the NSFD scheme")


def integrate(scheme: Scheme | str, p: ModelParams, s0, h: float, n_steps: int,
              stop_on_failure: bool = False) -> Trajectory:
    """Run ``n_steps`` steps of a classical scheme.

    With ``stop_on_failure`` the run ends early at the first state with a
    negative or non-finite component.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.NSFD:
        return simulate(p, s0, h, n_steps)
    if n_steps < 0:
        raise InvalidParameters(f"n_steps must be >= 0, got {n_steps}")
    states = [np.asarray(tuple(s0), dtype=float)]
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_steps):
            nxt = reference_step(scheme, p, states[-1], h)
            states.append(nxt)
            if stop_on_failure and (np.any(nxt < 0) or not np.all(np.isfinite(nxt))):
                break
    return Trajectory(p, float(h), np.array(states), None, None, scheme.value)


def _violates_positivity(scheme: Scheme, p: ModelParams, s0, h: float, n_steps: int) -> bool:
    if scheme is Scheme.NSFD:
        try:
            traj = simulate(p, s0, h, n_steps, Denominator.MICKENS)
        except SICAError:
            return True
        return bool(np.any(traj.states < 0) or not np.all(np.isfinite(traj.states)))
    try:
        traj = integrate(scheme, p, s0, h, n_steps, stop_on_failure=True)
    except SICAError:
        # N hit zero mid-step, only reachable after leaving the positive orthant
        return True
    last = traj.states[-1]
    return bool(np.any(last < 0) or not np.all(np.isfinite(last)))


def positivity_scan(p: ModelParams, s0, scheme: Scheme | str,
                    h_grid: Iterable[float], n_steps: int = 1000) -> float | None:
    """Smallest step in ``h_grid`` at which the scheme leaves the positive orthant.

    A non-finite state also counts as a failure. Returns ``None`` when every
    step size keeps all compartments nonnegative over ``n_steps`` steps.
    """
    scheme = Scheme(scheme)
    s0 = s0 if isinstance(s0, State) else State.from_array(s0)
    grid = [float(h) for h in h_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameters("h_grid must be strictly ascending")
    for h in grid:
        if not h > 0:
            raise NonpositiveStep(f"step size must be > 0, got {h!r}")
        if _violates_positivity(scheme, p, s0, h, n_steps):
            return h
    return None
