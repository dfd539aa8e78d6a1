"""Energy landscape over (theta, n0): grids, fixed points, orbit topology.

The functional itself lives in dynamics.energy_functional (the pendulum flow
derives from it); this module evaluates it on grids, locates fixed points on
the sin(theta) = 0 lines, and classifies trajectories as open (phase winds)
or closed (bounded, periodic) following the actual flow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .dynamics import (IntegratorConfig, PendulumState, energy_functional,
                       energy_gradient_n0, integrate)
from .core import CouplingSummary, SystemParams
from .errors import DomainError, InvalidInputError


@dataclass(frozen=True)
class LandscapeParams:
    """Functional coefficients: combined coupling, collisions, Zeeman, shifts."""

    c_eff: float
    c2n: float
    q: float
    m_mag: float = 0.0
    lightshift_delta: float = 0.0
    lightshift_p: float = 0.0

    def __post_init__(self):
        if abs(self.m_mag) > 1.0:
            raise InvalidInputError("|m_mag| must be <= 1")

    def _system(self) -> tuple[SystemParams, CouplingSummary]:
        params = SystemParams(c2n=self.c2n, q=self.q)
        coupling = CouplingSummary(
            omega_eff=self.c_eff - self.c2n, c_eff=self.c_eff,
            lightshift_delta=self.lightshift_delta,
            lightshift_p=self.lightshift_p)
        return params, coupling


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (theta, n0) sampling for energy surfaces."""

    theta_range: tuple[float, float] = (-math.pi, math.pi)
    n0_range: tuple[float, float] = (0.0, 1.0)
    resolution: tuple[int, int] = (181, 101)  # (n_theta, n_n0)

    def __post_init__(self):
        if self.theta_range[0] >= self.theta_range[1]:
            raise InvalidInputError("theta_range must be increasing")
        if not (0.0 <= self.n0_range[0] < self.n0_range[1] <= 1.0):
            raise InvalidInputError("n0_range must be increasing within [0, 1]")
        if self.resolution[0] < 2 or self.resolution[1] < 2:
            raise InvalidInputError("resolution must be at least 2x2")


class Stability(enum.Enum):
    CENTER = "center"
    SADDLE = "saddle"
    BOUNDARY_EXTREMUM = "boundary-extremum"


@dataclass(frozen=True)
class FixedPoint:
    theta: float
    n_zero: float
    energy: float
    stability: Stability


class Verdict(enum.Enum):
    OPEN = "Open"
    CLOSED = "Closed"
    BOUNDARY = "Boundary"
    INDETERMINATE = "Indeterminate"


def energy(theta, n_zero, lp: LandscapeParams):
    """Evaluate the functional; raises DomainError outside (1-n0)^2 >= m^2."""
    s2 = (1.0 - np.asarray(n_zero)) ** 2 - lp.m_mag ** 2
    if np.any(s2 < 0.0):
        raise DomainError("(1-n0)^2 < m^2: outside the landscape domain")
    return energy_functional(theta, n_zero, lp.m_mag, lp.c_eff, lp.c2n, lp.q,
                             lp.lightshift_delta, lp.lightshift_p)


class EnergyGrid(NamedTuple):
    theta: np.ndarray        # (n_theta,)
    n_zero: np.ndarray       # (n_n0,)
    values: np.ndarray       # (n_n0, n_theta), NaN where masked
    mask: np.ndarray         # True where the domain precondition fails


def energy_grid(lp: LandscapeParams, grid: GridSpec) -> EnergyGrid:
    """Row-major energy matrix with a domain mask for excluded cells."""
    th = np.linspace(*grid.theta_range, grid.resolution[0])
    n0 = np.linspace(*grid.n0_range, grid.resolution[1])
    TH, N0 = np.meshgrid(th, n0)
    s2 = (1.0 - N0) ** 2 - lp.m_mag ** 2
    mask = s2 < 0.0
    vals = energy_functional(TH, N0, lp.m_mag, lp.c_eff, lp.c2n, lp.q,
                             lp.lightshift_delta, lp.lightshift_p)
    vals = np.where(mask, np.nan, vals)
    return EnergyGrid(th, n0, vals, mask)


def find_fixed_points(lp: LandscapeParams,
                      include_boundary: bool = True,
                      scan_points: int = 4001) -> list[FixedPoint]:
    """Roots of dE/dn0 on the theta in {0, pi} lines, plus domain endpoints.

    dE/dtheta vanishes identically on those lines, so interior fixed points
    are 1-D bracketing roots there. Stability comes from the sign pattern of
    the Hessian: center when d2E/dn0^2 and d2E/dtheta^2 agree in sign, saddle
    otherwise.
    """
    n0_max = 1.0 - abs(lp.m_mag)
    out: list[FixedPoint] = []
    args = (lp.m_mag, lp.c_eff, lp.c2n, lp.q, lp.lightshift_delta, lp.lightshift_p)
    for th in (0.0, math.pi):
        def grad(x, _th=th):
            return float(energy_gradient_n0(_th, x, *args))
        xs = np.linspace(1e-9, n0_max - 1e-9, scan_points)
        vals = energy_gradient_n0(th, xs, *args)
        sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in sign_change:
            root = brentq(grad, xs[i], xs[i + 1], xtol=1e-13)
            h = 1e-6
            d2n = (grad(root + h) - grad(root - h)) / (2.0 * h)
            s = math.sqrt(max((1.0 - root) ** 2 - lp.m_mag ** 2, 0.0))
            d2t = -lp.c_eff * root * s * math.cos(th)
            stab = Stability.CENTER if d2n * d2t > 0 else Stability.SADDLE
            out.append(FixedPoint(th, float(root),
                                  float(energy(th, root, lp)), stab))
    if include_boundary:
        # E is theta-independent at both endpoints (the C term carries n0*S)
        for n0 in (0.0, n0_max):
            out.append(FixedPoint(0.0, n0, float(energy(0.0, n0, lp)),
                                  Stability.BOUNDARY_EXTREMUM))
    return out


def classify_trajectory(lp: LandscapeParams, initial: PendulumState,
                        tau_max: float = 500.0,
                        eps_return: float = 1e-4,
                        config: Optional[IntegratorConfig] = None) -> Verdict:
    """Follow the pendulum flow and call the orbit open or closed.

    Open: unwrapped |theta - theta(0)| reaches 2 pi (terminal event).
    Closed: theta band width stays under 2 pi and the orbit re-enters an
    eps_return ball around the start (wrapped-theta Euclidean metric) after
    first leaving a 10*eps_return ball; a start that never leaves that ball
    counts as closed (libration around a nearby fixed point). Boundary: the
    (1-n0)^2 = m^2 event fires. Anything unresolved by tau_max is
    Indeterminate. Returns are detected on the dense output (0.02 tau grid):
    ball transits are much shorter than adaptive solver steps, so terminal
    return events would be unreliable.
    """
    if initial.m_mag != lp.m_mag:
        raise InvalidInputError("initial.m_mag must match lp.m_mag")
    theta0, n00 = initial.theta, initial.n_zero
    params, coupling = lp._system()

    def wind_up(tau, y, *a):
        return (y[0] - theta0) - 2.0 * math.pi

    def wind_down(tau, y, *a):
        return (y[0] - theta0) + 2.0 * math.pi

    wind_up.terminal = True
    wind_down.terminal = True
    try:
        traj = integrate("pendulum", initial, params, (0.0, tau_max),
                         coupling=coupling, config=config, sampling=2,
                         events=[wind_up, wind_down], dense_output=True)
    except DomainError:
        return Verdict.BOUNDARY
    sol = traj.solver
    if len(sol.t_events[1]) or len(sol.t_events[2]):
        return Verdict.OPEN

    ts = np.arange(0.0, sol.t[-1], 0.02)
    ys = sol.sol(ts)
    band = float(ys[0].max() - ys[0].min())
    dth = np.angle(np.exp(1j * (ys[0] - theta0)))
    dist = np.hypot(dth, ys[1] - n00)
    outside = np.nonzero(dist > 10.0 * eps_return)[0]
    if len(outside) == 0:
        return Verdict.CLOSED
    if band < 2.0 * math.pi and float(dist[outside[0]:].min()) < eps_return:
        return Verdict.CLOSED
    return Verdict.INDETERMINATE


def default_start_grid(n_theta: int = 10, n_n0: int = 10,
                       n0_lo: float = 0.05, n0_hi: float = 0.95,
                       m_mag: float = 0.0) -> list[PendulumState]:
    """Uniform grid of starts used by the portrait scenarios."""
    thetas = np.linspace(-math.pi, math.pi, n_theta)
    n0s = np.linspace(n0_lo, n0_hi, n_n0)
    return [PendulumState(float(t), float(n), m_mag)
            for t in thetas for n in n0s]


@dataclass
class PortraitSummary:
    """Aggregate of a start-grid classification plus landscape structure."""

    counts: dict
    fixed_points: list
    masked_fraction: float
    verdicts: list  # (theta0, n0, verdict) per start
    tau_max: float
    eps_return: float

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "fixed_points": [
                {"theta": fp.theta, "n_zero": fp.n_zero, "energy": fp.energy,
                 "stability": fp.stability.value}
                for fp in self.fixed_points],
            "masked_fraction": self.masked_fraction,
            "verdicts": [
                {"theta": t, "n_zero": n, "verdict": v.value}
                for t, n, v in self.verdicts],
            "tau_max": self.tau_max,
            "eps_return": self.eps_return,
        }


def contour_portrait(lp: LandscapeParams, grid: GridSpec,
                     starts: Optional[Sequence[PendulumState]] = None,
                     tau_max: float = 500.0,
                     eps_return: float = 1e-4,
                     config: Optional[IntegratorConfig] = None) -> PortraitSummary:
    """Classify every start and aggregate counts, fixed points, mask fraction."""
    if starts is None:
        starts = default_start_grid(m_mag=lp.m_mag)
    eg = energy_grid(lp, grid)
    counts = {v.value: 0 for v in Verdict}
    verdicts = []
    for st in starts:
        v = classify_trajectory(lp, st, tau_max=tau_max,
                                eps_return=eps_return, config=config)
        counts[v.value] += 1
        verdicts.append((st.theta, st.n_zero, v))
    return PortraitSummary(
        counts=counts,
        fixed_points=find_fixed_points(lp),
        masked_fraction=float(eg.mask.mean()),
        verdicts=verdicts,
        tau_max=tau_max,
        eps_return=eps_return,
    )
